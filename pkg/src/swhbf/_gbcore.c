/*
 * Reduction kernel for left Groebner bases in D<s,dt>.
 *
 * Elements are integer polynomials kept as arrays of terms sorted by
 * decreasing monomial order.  Monomials carry their exponent vector in the
 * layout (x_1..x_n, d_1..d_n, s, dt) and an order key made of 16-bit fields,
 * each field a 0/1 linear form in the exponents, most significant first.
 * Integer comparison of the key words is the monomial order.
 *
 * The engine owns the basis; callers drive pair selection from Python.
 */
#define PY_SSIZE_T_CLEAN
#include <Python.h>
#include <gmp.h>
#include <stdint.h>
#include <stdlib.h>
#include <string.h>
#include <time.h>

#define WMAX 24
#define KWMAX 8
#define FMAX (4 * KWMAX)
#define DEGMAX 60000

typedef struct {
    uint64_t k[KWMAX];
    uint16_t e[WMAX];
    mpz_t c;
} Term;

typedef struct {
    Term *t;
    Py_ssize_t len, ninit, cap;
} Poly;

typedef struct {
    Poly p;
    uint32_t sev;
    int maxdeg;
} Elem;

typedef struct {
    PyObject_HEAD
    int n, W, F, KW, maxw;
    uint64_t unit[WMAX][KWMAX];
    Elem *elems;
    Py_ssize_t nelems, cap;
    double deadline;
    Py_ssize_t max_terms;
    long long steps, peak, produced, scaled;
    Poly h, tmp, prod, prod2;
    mpz_t a, b, g;
    char *use;
    Py_ssize_t usecap;
} Engine;

static PyObject *LimitExceeded;

/* ---------------------------------------------------------------- polys */

static void poly_init(Poly *p) { p->t = NULL; p->len = p->ninit = p->cap = 0; }

static void poly_free(Poly *p)
{
    for (Py_ssize_t i = 0; i < p->ninit; i++) mpz_clear(p->t[i].c);
    free(p->t);
    poly_init(p);
}

static int poly_reserve(Poly *p, Py_ssize_t cap)
{
    if (cap <= p->cap) return 0;
    Py_ssize_t nc = p->cap ? p->cap : 16;
    while (nc < cap) nc *= 2;
    Term *t = realloc(p->t, nc * sizeof(Term));
    if (!t) { PyErr_NoMemory(); return -1; }
    /* mpz_t holds a pointer to its limbs, so moving the struct is safe */
    p->t = t;
    p->cap = nc;
    return 0;
}

/* slot p->len, initialised and ready to be written */
static Term *poly_push(Poly *p)
{
    if (p->len == p->cap && poly_reserve(p, p->len + 1) < 0) return NULL;
    if (p->len == p->ninit) { mpz_init(p->t[p->len].c); p->ninit++; }
    return &p->t[p->len++];
}

static void poly_swap(Poly *a, Poly *b) { Poly t = *a; *a = *b; *b = t; }

static inline int key_cmp(const Term *a, const Term *b, int KW)
{
    for (int w = 0; w < KW; w++) {
        if (a->k[w] != b->k[w]) return a->k[w] > b->k[w] ? 1 : -1;
    }
    return 0;
}

static void set_key(const Engine *E, Term *t)
{
    for (int w = 0; w < E->KW; w++) t->k[w] = 0;
    for (int v = 0; v < E->W; v++) {
        uint64_t e = t->e[v];
        if (e)
            for (int w = 0; w < E->KW; w++) t->k[w] += e * E->unit[v][w];
    }
}

static int g_KW;  /* qsort has no context argument */

static int term_cmp_desc(const void *x, const void *y)
{
    return -key_cmp((const Term *)x, (const Term *)y, g_KW);
}

/* sort decreasing and add up equal monomials */
static void poly_normalize(Poly *p, int KW)
{
    if (p->len < 2) {
        if (p->len == 1 && mpz_sgn(p->t[0].c) == 0) p->len = 0;
        return;
    }
    g_KW = KW;
    qsort(p->t, p->len, sizeof(Term), term_cmp_desc);
    Py_ssize_t out = 0;
    for (Py_ssize_t i = 0; i < p->len; i++) {
        if (out > 0 && key_cmp(&p->t[out - 1], &p->t[i], KW) == 0) {
            mpz_add(p->t[out - 1].c, p->t[out - 1].c, p->t[i].c);
            continue;
        }
        if (out > 0 && mpz_sgn(p->t[out - 1].c) == 0) out--;
        if (out != i) {
            /* swap structs to keep every initialised mpz owned exactly once */
            Term tmp = p->t[out];
            p->t[out] = p->t[i];
            p->t[i] = tmp;
        }
        out++;
    }
    if (out > 0 && mpz_sgn(p->t[out - 1].c) == 0) out--;
    p->len = out;
}

static void poly_content_reduce(Poly *p, mpz_t g)
{
    mpz_set_ui(g, 0);
    for (Py_ssize_t i = 0; i < p->len; i++) {
        mpz_gcd(g, g, p->t[i].c);
        if (mpz_cmp_ui(g, 1) == 0) return;
    }
    if (mpz_cmp_ui(g, 1) > 0)
        for (Py_ssize_t i = 0; i < p->len; i++) mpz_divexact(p->t[i].c, p->t[i].c, g);
}

static void copy_term_meta(Term *dst, const Term *src)
{
    memcpy(dst->k, src->k, sizeof(dst->k));
    memcpy(dst->e, src->e, sizeof(dst->e));
}

/* ------------------------------------------------------ coefficient tables */

#define CMAX 48
static mpz_t *leib_tab[CMAX][CMAX];   /* d^b x^a: C(b,v) a!/(a-v)! for v = 0..min */
static mpz_t *shift_tab[CMAX][CMAX];  /* (s-k)^J: C(J,l) (-k)^(J-l) for l = 0..J */

static mpz_t *leibniz(int b, int a)
{
    if (b >= CMAX || a >= CMAX) return NULL;
    if (!leib_tab[b][a]) {
        int m = a < b ? a : b;
        mpz_t *row = malloc((m + 1) * sizeof(mpz_t));
        if (!row) return NULL;
        mpz_t ff, bin;
        mpz_init_set_ui(ff, 1);
        mpz_init(bin);
        for (int v = 0; v <= m; v++) {
            if (v) mpz_mul_ui(ff, ff, (unsigned long)(a - v + 1));
            mpz_bin_uiui(bin, (unsigned long)b, (unsigned long)v);
            mpz_init(row[v]);
            mpz_mul(row[v], bin, ff);
        }
        mpz_clear(ff);
        mpz_clear(bin);
        leib_tab[b][a] = row;
    }
    return leib_tab[b][a];
}

static mpz_t *shift_coeffs(int k, int J)
{
    if (k >= CMAX || J >= CMAX) return NULL;
    if (!shift_tab[k][J]) {
        mpz_t *row = malloc((J + 1) * sizeof(mpz_t));
        if (!row) return NULL;
        mpz_t pw, bin;
        mpz_init(pw);
        mpz_init(bin);
        for (int l = 0; l <= J; l++) {
            mpz_bin_uiui(bin, (unsigned long)J, (unsigned long)l);
            mpz_ui_pow_ui(pw, (unsigned long)k, (unsigned long)(J - l));
            if ((J - l) % 2) mpz_neg(pw, pw);
            mpz_init(row[l]);
            mpz_mul(row[l], bin, pw);
        }
        mpz_clear(pw);
        mpz_clear(bin);
        shift_tab[k][J] = row;
    }
    return shift_tab[k][J];
}

/* -------------------------------------------------------------- products */

/*
 * out := coef * (mu . g), sorted.  mu is an exponent vector.  Returns -1 with
 * a Python exception set on failure.
 */
static int left_mul(Engine *E, const uint16_t *mu, const Poly *g, int gdeg, const mpz_t coef, Poly *out)
{
    int n = E->n, S = 2 * n, DT = 2 * n + 1, W = E->W;
    out->len = 0;
    int dpart[WMAX], nd = 0, mudeg = 0;
    for (int i = 0; i < n; i++)
        if (mu[n + i]) dpart[nd++] = i;
    for (int v = 0; v < W; v++) mudeg += mu[v];
    if ((long)(mudeg + gdeg) * E->maxw > 65535) {
        PyErr_SetString(PyExc_OverflowError, "monomial degree too large for the order key");
        return -1;
    }
    int k = mu[DT];
    if (poly_reserve(out, g->len) < 0) return -1;

    if (!nd && !k) {
        /* commutative case: multiplying by mu keeps the order */
        for (Py_ssize_t q = 0; q < g->len; q++) {
            const Term *t = &g->t[q];
            Term *o = poly_push(out);
            if (!o) return -1;
            for (int v = 0; v < W; v++) o->e[v] = t->e[v] + mu[v];
            for (int w = 0; w < E->KW; w++) o->k[w] = t->k[w];
            for (int v = 0; v < W; v++) {
                uint64_t e = mu[v];
                if (e)
                    for (int w = 0; w < E->KW; w++) o->k[w] += e * E->unit[v][w];
            }
            mpz_mul(o->c, t->c, coef);
        }
        return 0;
    }

    int lim[WMAX + 1];
    mpz_t *tab[WMAX + 1];
    int cnt[WMAX + 1];
    for (Py_ssize_t q = 0; q < g->len; q++) {
        const Term *t = &g->t[q];
        int nf = 0;
        int fidx[WMAX + 1];
        for (int r = 0; r < nd; r++) {
            int i = dpart[r];
            int b = mu[n + i], a = t->e[i];
            if (!a) continue;
            mpz_t *row = leibniz(b, a);
            if (!row) { PyErr_SetString(PyExc_OverflowError, "exponent too large for Leibniz table"); return -1; }
            tab[nf] = row;
            lim[nf] = a < b ? a : b;
            fidx[nf] = i;
            nf++;
        }
        int shift_slot = -1;
        if (k && t->e[S]) {
            mpz_t *row = shift_coeffs(k, t->e[S]);
            if (!row) { PyErr_SetString(PyExc_OverflowError, "exponent too large for shift table"); return -1; }
            tab[nf] = row;
            lim[nf] = t->e[S];
            fidx[nf] = -1;
            shift_slot = nf;
            nf++;
        }
        for (int r = 0; r < nf; r++) cnt[r] = 0;
        for (;;) {
            Term *o = poly_push(out);
            if (!o) return -1;
            for (int v = 0; v < W; v++) o->e[v] = t->e[v] + mu[v];
            mpz_mul(o->c, t->c, coef);
            for (int r = 0; r < nf; r++) {
                if (r == shift_slot) {
                    /* s^J becomes s^l */
                    o->e[S] = (uint16_t)(o->e[S] - t->e[S] + cnt[r]);
                } else {
                    int i = fidx[r];
                    o->e[i] = (uint16_t)(o->e[i] - cnt[r]);
                    o->e[n + i] = (uint16_t)(o->e[n + i] - cnt[r]);
                }
                mpz_mul(o->c, o->c, tab[r][cnt[r]]);
            }
            if (mpz_sgn(o->c) == 0) out->len--;
            else set_key(E, o);
            int r = 0;
            while (r < nf) {
                if (++cnt[r] <= lim[r]) break;
                cnt[r] = 0;
                r++;
            }
            if (r == nf) break;
        }
    }
    poly_normalize(out, E->KW);
    return 0;
}

/* ------------------------------------------------------------ reduction */

static int check_limits(Engine *E, const Poly *h)
{
    if (E->max_terms >= 0 && h->len > E->max_terms) {
        PyErr_Format(LimitExceeded, "operator support exceeded %zd terms", E->max_terms);
        return -1;
    }
    if (E->deadline >= 0) {
        struct timespec ts;
        clock_gettime(CLOCK_MONOTONIC, &ts);
        double now = ts.tv_sec + 1e-9 * ts.tv_nsec;
        if (now > E->deadline) {
            PyErr_SetString(LimitExceeded, "time budget exhausted");
            return -1;
        }
    }
    if (PyErr_CheckSignals() < 0) return -1;
    return 0;
}

static uint32_t sev_of(const uint16_t *e, int W)
{
    uint32_t s = 0;
    for (int v = 0; v < W; v++)
        if (e[v]) s |= 1u << v;
    return s;
}

static Py_ssize_t find_divisor(Engine *E, const Term *t, const char *use, Py_ssize_t skip)
{
    uint32_t s = sev_of(t->e, E->W);
    Py_ssize_t best = -1, bestlen = 0;
    for (Py_ssize_t i = 0; i < E->nelems; i++) {
        if (i == skip || (use && !use[i])) continue;
        Elem *el = &E->elems[i];
        if (!el->p.len || (el->sev & ~s)) continue;
        const uint16_t *le = el->p.t[0].e;
        int ok = 1;
        for (int v = 0; v < E->W; v++)
            if (le[v] > t->e[v]) { ok = 0; break; }
        if (!ok) continue;
        if (best < 0 || el->p.len < bestlen) {
            best = i;
            bestlen = el->p.len;
            if (bestlen <= 2) break;
        }
    }
    return best;
}

/*
 * Geobuckets: bucket i holds at most 4^(i+1) terms, sorted decreasingly from
 * index `start`.  Adding a product costs about its own length times the
 * number of buckets instead of the length of the whole polynomial.
 */
#define NB 12

typedef struct {
    Poly p;
    Py_ssize_t start;
} Bucket;

static Bucket buckets[NB];
static Poly bucket_tmp;

static Py_ssize_t bucket_cap(int i) { return (Py_ssize_t)4 << (2 * i); }

/* out := A[sa..] + B[sb..]; coefficients are moved out of A and B */
static int merge_move(Poly *out, Poly *A, Py_ssize_t sa, Poly *B, Py_ssize_t sb, int KW)
{
    out->len = 0;
    if (poly_reserve(out, (A->len - sa) + (B->len - sb)) < 0) return -1;
    Py_ssize_t i = sa, j = sb;
    while (i < A->len || j < B->len) {
        int c;
        if (i >= A->len) c = -1;
        else if (j >= B->len) c = 1;
        else c = key_cmp(&A->t[i], &B->t[j], KW);
        Term *x = poly_push(out);
        if (c > 0) {
            copy_term_meta(x, &A->t[i]);
            mpz_swap(x->c, A->t[i].c);
            i++;
        } else if (c < 0) {
            copy_term_meta(x, &B->t[j]);
            mpz_swap(x->c, B->t[j].c);
            j++;
        } else {
            copy_term_meta(x, &A->t[i]);
            mpz_add(x->c, A->t[i].c, B->t[j].c);
            if (mpz_sgn(x->c) == 0) out->len--;
            i++;
            j++;
        }
    }
    return 0;
}

static Py_ssize_t buckets_len(void)
{
    Py_ssize_t n = 0;
    for (int i = 0; i < NB; i++) n += buckets[i].p.len - buckets[i].start;
    return n;
}

static void buckets_reset(void)
{
    for (int i = 0; i < NB; i++) buckets[i].p.len = buckets[i].start = 0;
}

/* add P[from..] to the buckets; P is consumed */
static int buckets_add(Poly *P, Py_ssize_t from, int KW)
{
    Py_ssize_t m = P->len - from;
    if (m <= 0) return 0;
    int i = 0;
    while (i < NB - 1 && bucket_cap(i) < m) i++;
    Bucket *b = &buckets[i];
    if (merge_move(&bucket_tmp, &b->p, b->start, P, from, KW) < 0) return -1;
    poly_swap(&b->p, &bucket_tmp);
    b->start = 0;
    while (i < NB - 1 && b->p.len > bucket_cap(i)) {
        Bucket *nb = &buckets[i + 1];
        if (merge_move(&bucket_tmp, &nb->p, nb->start, &b->p, b->start, KW) < 0) return -1;
        poly_swap(&nb->p, &bucket_tmp);
        nb->start = 0;
        b->p.len = b->start = 0;
        b = nb;
        i++;
    }
    return 0;
}

/*
 * Remove the leading term of the bucket sum into *out.  Returns 1 when a term
 * was produced, 0 when the sum is zero.
 */
static int buckets_pop(Term *out, int KW)
{
    for (;;) {
        int best = -1;
        for (int i = 0; i < NB; i++) {
            Bucket *b = &buckets[i];
            if (b->start >= b->p.len) continue;
            if (best < 0 || key_cmp(&b->p.t[b->start], &buckets[best].p.t[buckets[best].start], KW) > 0)
                best = i;
        }
        if (best < 0) return 0;
        Bucket *bb = &buckets[best];
        copy_term_meta(out, &bb->p.t[bb->start]);
        mpz_swap(out->c, bb->p.t[bb->start].c);
        bb->start++;
        for (int i = 0; i < NB; i++) {
            Bucket *b = &buckets[i];
            if (i == best || b->start >= b->p.len) continue;
            if (key_cmp(&b->p.t[b->start], out, KW) == 0) {
                mpz_add(out->c, out->c, b->p.t[b->start].c);
                b->start++;
            }
        }
        if (mpz_sgn(out->c) != 0) return 1;
    }
}

static void buckets_scale(const mpz_t a)
{
    for (int i = 0; i < NB; i++)
        for (Py_ssize_t q = buckets[i].start; q < buckets[i].p.len; q++)
            mpz_mul(buckets[i].p.t[q].c, buckets[i].p.t[q].c, a);
}

/* divide remainder and buckets by their common content */
static void content_reduce_all(Poly *rem, mpz_t g)
{
    mpz_set_ui(g, 0);
    for (Py_ssize_t q = 0; q < rem->len && mpz_cmp_ui(g, 1) != 0; q++) mpz_gcd(g, g, rem->t[q].c);
    for (int i = 0; i < NB && mpz_cmp_ui(g, 1) != 0; i++)
        for (Py_ssize_t q = buckets[i].start; q < buckets[i].p.len; q++) {
            mpz_gcd(g, g, buckets[i].p.t[q].c);
            if (mpz_cmp_ui(g, 1) == 0) break;
        }
    if (mpz_cmp_ui(g, 1) <= 0) return;
    for (Py_ssize_t q = 0; q < rem->len; q++) mpz_divexact(rem->t[q].c, rem->t[q].c, g);
    for (int i = 0; i < NB; i++)
        for (Py_ssize_t q = buckets[i].start; q < buckets[i].p.len; q++)
            mpz_divexact(buckets[i].p.t[q].c, buckets[i].p.t[q].c, g);
}

/*
 * Normal form of E->h, written back to E->h.  full = 0 stops at the first
 * irreducible term, which is enough to decide whether the result is zero.
 */
static int normal_form(Engine *E, const char *use, Py_ssize_t skip, int full)
{
    int KW = E->KW;
    uint16_t mu[WMAX];
    long long local = 0;
    Poly *rem = &E->tmp;
    rem->len = 0;
    buckets_reset();
    if (buckets_add(&E->h, 0, KW) < 0) return -1;
    E->h.len = 0;
    for (;;) {
        /* the popped term lives in the slot just past the remainder */
        Term *lead = poly_push(rem);
        if (!lead) return -1;
        if (!buckets_pop(lead, KW)) { rem->len--; break; }
        Py_ssize_t d = find_divisor(E, lead, use, skip);
        if (d < 0) {
            if (!full) break;
            continue;  /* the term stays in the remainder */
        }
        rem->len--;
        Elem *el = &E->elems[d];
        const Term *lt = &el->p.t[0];
        for (int v = 0; v < E->W; v++) mu[v] = (uint16_t)(lead->e[v] - lt->e[v]);
        mpz_gcd(E->g, lead->c, lt->c);
        mpz_divexact(E->a, lt->c, E->g);
        mpz_divexact(E->b, lead->c, E->g);
        mpz_neg(E->b, E->b);
        if (mpz_cmp_ui(E->a, 1) != 0) {
            E->scaled++;
            buckets_scale(E->a);
            for (Py_ssize_t q = 0; q < rem->len; q++) mpz_mul(rem->t[q].c, rem->t[q].c, E->a);
        }
        if (left_mul(E, mu, &el->p, el->maxdeg, E->b, &E->prod) < 0) return -1;
        E->produced += E->prod.len;
        /* the leading term of the product cancels the popped term */
        if (buckets_add(&E->prod, 1, KW) < 0) return -1;
        E->steps++;
        if (++local % 64 == 0) {
            content_reduce_all(rem, E->g);
            Py_ssize_t tot = rem->len + buckets_len();
            if (tot > E->peak) E->peak = tot;
            if (E->max_terms >= 0 && tot > E->max_terms) {
                PyErr_Format(LimitExceeded, "operator support exceeded %zd terms", E->max_terms);
                return -1;
            }
            if (check_limits(E, rem) < 0) return -1;
        }
    }
    /* with full = 0 a nonzero result is just its leading term */
    poly_swap(&E->h, rem);
    return 0;
}

/* make h primitive with positive leading coefficient */
static void finish_poly(Engine *E, Poly *h)
{
    poly_content_reduce(h, E->g);
    if (h->len && mpz_sgn(h->t[0].c) < 0)
        for (Py_ssize_t i = 0; i < h->len; i++) mpz_neg(h->t[i].c, h->t[i].c);
}

static Py_ssize_t store(Engine *E)
{
    if (E->nelems == E->cap) {
        Py_ssize_t nc = E->cap ? 2 * E->cap : 16;
        Elem *ne = realloc(E->elems, nc * sizeof(Elem));
        if (!ne) { PyErr_NoMemory(); return -1; }
        E->elems = ne;
        E->cap = nc;
    }
    Elem *el = &E->elems[E->nelems];
    poly_init(&el->p);
    poly_swap(&el->p, &E->h);
    el->sev = sev_of(el->p.t[0].e, E->W);
    int md = 0;
    for (Py_ssize_t q = 0; q < el->p.len; q++) {
        int d = 0;
        for (int v = 0; v < E->W; v++) d += el->p.t[q].e[v];
        if (d > md) md = d;
    }
    el->maxdeg = md;
    return E->nelems++;
}

/* E->h := S-polynomial of elements i and j */
static int spoly(Engine *E, Py_ssize_t i, Py_ssize_t j)
{
    Elem *a = &E->elems[i], *b = &E->elems[j];
    uint16_t mu1[WMAX], mu2[WMAX];
    for (int v = 0; v < E->W; v++) {
        uint16_t x = a->p.t[0].e[v], y = b->p.t[0].e[v];
        uint16_t L = x > y ? x : y;
        mu1[v] = L - x;
        mu2[v] = L - y;
    }
    mpz_gcd(E->g, a->p.t[0].c, b->p.t[0].c);
    mpz_divexact(E->a, b->p.t[0].c, E->g);
    mpz_divexact(E->b, a->p.t[0].c, E->g);
    mpz_neg(E->b, E->b);
    if (left_mul(E, mu1, &a->p, a->maxdeg, E->a, &E->prod) < 0) return -1;
    if (left_mul(E, mu2, &b->p, b->maxdeg, E->b, &E->prod2) < 0) return -1;
    Poly *h = &E->h;
    h->len = 0;
    if (poly_reserve(h, E->prod.len + E->prod2.len) < 0) return -1;
    Py_ssize_t x = 0, y = 0;
    const Poly *P = &E->prod, *Q = &E->prod2;
    while (x < P->len || y < Q->len) {
        int c;
        if (x >= P->len) c = -1;
        else if (y >= Q->len) c = 1;
        else c = key_cmp(&P->t[x], &Q->t[y], E->KW);
        Term *o = poly_push(h);
        if (c > 0) { copy_term_meta(o, &P->t[x]); mpz_set(o->c, P->t[x].c); x++; }
        else if (c < 0) { copy_term_meta(o, &Q->t[y]); mpz_set(o->c, Q->t[y].c); y++; }
        else {
            copy_term_meta(o, &P->t[x]);
            mpz_add(o->c, P->t[x].c, Q->t[y].c);
            if (mpz_sgn(o->c) == 0) h->len--;
            x++;
            y++;
        }
    }
    return 0;
}

/* ------------------------------------------------------ Python interface */

static int int_to_mpz(PyObject *o, mpz_t z)
{
    int overflow = 0;
    long long v = PyLong_AsLongLongAndOverflow(o, &overflow);
    if (v == -1 && PyErr_Occurred()) return -1;
    if (!overflow) {
        if (v >= LONG_MIN && v <= LONG_MAX) { mpz_set_si(z, (long)v); return 0; }
    }
    PyObject *s = PyNumber_ToBase(o, 16);
    if (!s) return -1;
    const char *txt = PyUnicode_AsUTF8(s);
    if (!txt) { Py_DECREF(s); return -1; }
    /* strip the 0x prefix */
    int neg = txt[0] == '-';
    const char *digits = txt + (neg ? 3 : 2);
    int rc = mpz_set_str(z, digits, 16);
    if (neg) mpz_neg(z, z);
    Py_DECREF(s);
    if (rc != 0) { PyErr_SetString(PyExc_ValueError, "bad integer"); return -1; }
    return 0;
}

static PyObject *mpz_to_int(const mpz_t z)
{
    if (mpz_fits_slong_p(z)) return PyLong_FromLong(mpz_get_si(z));
    char *buf = mpz_get_str(NULL, 16, z);
    if (!buf) return PyErr_NoMemory();
    PyObject *r = PyLong_FromString(buf, NULL, 16);
    void (*freefunc)(void *, size_t);
    mp_get_memory_functions(NULL, NULL, &freefunc);
    freefunc(buf, strlen(buf) + 1);
    return r;
}

/* read a sequence of (exponent tuple, int) pairs into E->h */
static int load_poly(Engine *E, PyObject *seq)
{
    PyObject *fast = PySequence_Fast(seq, "expected a sequence of (exponents, coefficient)");
    if (!fast) return -1;
    Py_ssize_t m = PySequence_Fast_GET_SIZE(fast);
    Poly *h = &E->h;
    h->len = 0;
    for (Py_ssize_t q = 0; q < m; q++) {
        PyObject *item = PySequence_Fast_GET_ITEM(fast, q);
        PyObject *ex, *co;
        if (!PyArg_ParseTuple(item, "OO", &ex, &co)) goto fail;
        PyObject *exf = PySequence_Fast(ex, "exponents must be a sequence");
        if (!exf) goto fail;
        if (PySequence_Fast_GET_SIZE(exf) != E->W) {
            Py_DECREF(exf);
            PyErr_SetString(PyExc_ValueError, "exponent vector has the wrong width");
            goto fail;
        }
        Term *t = poly_push(h);
        if (!t) { Py_DECREF(exf); goto fail; }
        long deg = 0;
        for (int v = 0; v < E->W; v++) {
            long e = PyLong_AsLong(PySequence_Fast_GET_ITEM(exf, v));
            if (e == -1 && PyErr_Occurred()) { Py_DECREF(exf); goto fail; }
            if (e < 0 || e > DEGMAX) {
                Py_DECREF(exf);
                PyErr_SetString(PyExc_OverflowError, "exponent out of range");
                goto fail;
            }
            t->e[v] = (uint16_t)e;
            deg += e;
        }
        for (int v = E->W; v < WMAX; v++) t->e[v] = 0;
        Py_DECREF(exf);
        if (deg * E->maxw > 65535) { PyErr_SetString(PyExc_OverflowError, "degree out of range"); goto fail; }
        set_key(E, t);
        if (int_to_mpz(co, t->c) < 0) goto fail;
    }
    Py_DECREF(fast);
    poly_normalize(h, E->KW);
    return 0;
fail:
    Py_DECREF(fast);
    return -1;
}

static PyObject *export_poly(Engine *E, const Poly *p)
{
    PyObject *out = PyList_New(p->len);
    if (!out) return NULL;
    for (Py_ssize_t q = 0; q < p->len; q++) {
        PyObject *ex = PyTuple_New(E->W);
        if (!ex) { Py_DECREF(out); return NULL; }
        for (int v = 0; v < E->W; v++) PyTuple_SET_ITEM(ex, v, PyLong_FromLong(p->t[q].e[v]));
        PyObject *c = mpz_to_int(p->t[q].c);
        if (!c) { Py_DECREF(ex); Py_DECREF(out); return NULL; }
        PyObject *pair = PyTuple_Pack(2, ex, c);
        Py_DECREF(ex);
        Py_DECREF(c);
        if (!pair) { Py_DECREF(out); return NULL; }
        PyList_SET_ITEM(out, q, pair);
    }
    return out;
}

static int check_index(Engine *E, Py_ssize_t i)
{
    if (i < 0 || i >= E->nelems) {
        PyErr_SetString(PyExc_IndexError, "element index out of range");
        return -1;
    }
    return 0;
}

static int Engine_init(Engine *E, PyObject *args, PyObject *kw)
{
    int n;
    PyObject *forms;
    if (!PyArg_ParseTuple(args, "iO", &n, &forms)) return -1;
    int W = 2 * n + 2;
    if (n < 1 || W > WMAX) {
        PyErr_SetString(PyExc_ValueError, "unsupported number of variables");
        return -1;
    }
    PyObject *ff = PySequence_Fast(forms, "forms must be a sequence");
    if (!ff) return -1;
    Py_ssize_t F = PySequence_Fast_GET_SIZE(ff);
    if (F < 1 || F > FMAX) {
        Py_DECREF(ff);
        PyErr_SetString(PyExc_ValueError, "too many order fields");
        return -1;
    }
    E->n = n;
    E->W = W;
    E->F = (int)F;
    E->KW = (int)((F + 3) / 4);
    E->maxw = 1;
    memset(E->unit, 0, sizeof(E->unit));
    for (Py_ssize_t f = 0; f < F; f++) {
        PyObject *vs = PySequence_Fast(PySequence_Fast_GET_ITEM(ff, f), "field must list variables");
        if (!vs) { Py_DECREF(ff); return -1; }
        int word = (int)(f / 4), shift = 16 * (3 - (int)(f % 4));
        for (Py_ssize_t q = 0; q < PySequence_Fast_GET_SIZE(vs); q++) {
            long v, c;
            if (!PyArg_ParseTuple(PySequence_Fast_GET_ITEM(vs, q), "ll", &v, &c)) {
                Py_DECREF(vs);
                Py_DECREF(ff);
                return -1;
            }
            if (v < 0 || v >= W || c < 1 || c > 255) {
                Py_DECREF(vs);
                Py_DECREF(ff);
                PyErr_SetString(PyExc_ValueError, "bad (variable, weight) pair in order field");
                return -1;
            }
            E->unit[v][word] += (uint64_t)c << shift;
            if (c > E->maxw) E->maxw = c;
        }
        Py_DECREF(vs);
    }
    Py_DECREF(ff);
    E->deadline = -1;
    E->max_terms = -1;
    return 0;
}

static PyObject *Engine_new(PyTypeObject *type, PyObject *args, PyObject *kw)
{
    Engine *E = (Engine *)type->tp_alloc(type, 0);
    if (!E) return NULL;
    E->elems = NULL;
    E->nelems = E->cap = 0;
    poly_init(&E->h);
    poly_init(&E->tmp);
    poly_init(&E->prod);
    poly_init(&E->prod2);
    mpz_init(E->a);
    mpz_init(E->b);
    mpz_init(E->g);
    E->use = NULL;
    E->usecap = 0;

    E->steps = E->peak = E->produced = E->scaled = 0;
    return (PyObject *)E;
}

static void clear_elems(Engine *E)
{
    for (Py_ssize_t i = 0; i < E->nelems; i++) poly_free(&E->elems[i].p);
    E->nelems = 0;
}

static void Engine_dealloc(Engine *E)
{
    clear_elems(E);
    free(E->elems);
    poly_free(&E->h);
    poly_free(&E->tmp);
    poly_free(&E->prod);
    poly_free(&E->prod2);
    mpz_clear(E->a);
    mpz_clear(E->b);
    mpz_clear(E->g);
    free(E->use);
    Py_TYPE(E)->tp_free((PyObject *)E);
}

static PyObject *Engine_set_limits(Engine *E, PyObject *args)
{
    PyObject *dl, *mt;
    if (!PyArg_ParseTuple(args, "OO", &dl, &mt)) return NULL;
    E->deadline = dl == Py_None ? -1 : PyFloat_AsDouble(dl);
    E->max_terms = mt == Py_None ? -1 : PyLong_AsSsize_t(mt);
    if (PyErr_Occurred()) return NULL;
    Py_RETURN_NONE;
}

static PyObject *stored_or_none(Engine *E)
{
    if (!E->h.len) Py_RETURN_NONE;
    finish_poly(E, &E->h);
    Py_ssize_t idx = store(E);
    if (idx < 0) return NULL;
    return PyLong_FromSsize_t(idx);
}

/* add(terms, reduce=True) -> index or None */
static PyObject *Engine_add(Engine *E, PyObject *args)
{
    PyObject *seq;
    int reduce = 1;
    if (!PyArg_ParseTuple(args, "O|p", &seq, &reduce)) return NULL;
    if (load_poly(E, seq) < 0) return NULL;
    if (reduce && normal_form(E, NULL, -1, 1) < 0) return NULL;
    return stored_or_none(E);
}

/* spair(i, j) -> index of the new element or None */
static PyObject *Engine_spair(Engine *E, PyObject *args)
{
    Py_ssize_t i, j;
    if (!PyArg_ParseTuple(args, "nn", &i, &j)) return NULL;
    if (check_index(E, i) < 0 || check_index(E, j) < 0) return NULL;
    if (spoly(E, i, j) < 0) return NULL;
    if (normal_form(E, NULL, -1, 1) < 0) return NULL;
    if (E->max_terms >= 0 && E->h.len > E->max_terms) {
        PyErr_Format(LimitExceeded, "operator support exceeded %zd terms", E->max_terms);
        return NULL;
    }
    return stored_or_none(E);
}

/* spair_reduces(i, j) -> True when the S-polynomial has normal form zero */
static PyObject *Engine_spair_reduces(Engine *E, PyObject *args)
{
    Py_ssize_t i, j;
    if (!PyArg_ParseTuple(args, "nn", &i, &j)) return NULL;
    if (check_index(E, i) < 0 || check_index(E, j) < 0) return NULL;
    if (spoly(E, i, j) < 0) return NULL;
    if (normal_form(E, NULL, -1, 0) < 0) return NULL;
    return PyBool_FromLong(E->h.len == 0);
}

/* reduce_against(i, indices) -> terms of the normal form of element i modulo the others */
static PyObject *Engine_reduce_against(Engine *E, PyObject *args)
{
    Py_ssize_t i;
    PyObject *idx;
    if (!PyArg_ParseTuple(args, "nO", &i, &idx)) return NULL;
    if (check_index(E, i) < 0) return NULL;
    if (E->usecap < E->nelems) {
        char *u = realloc(E->use, E->nelems);
        if (!u) return PyErr_NoMemory();
        E->use = u;
        E->usecap = E->nelems;
    }
    memset(E->use, 0, E->nelems);
    PyObject *fast = PySequence_Fast(idx, "indices must be a sequence");
    if (!fast) return NULL;
    for (Py_ssize_t q = 0; q < PySequence_Fast_GET_SIZE(fast); q++) {
        Py_ssize_t k = PyLong_AsSsize_t(PySequence_Fast_GET_ITEM(fast, q));
        if (k == -1 && PyErr_Occurred()) { Py_DECREF(fast); return NULL; }
        if (check_index(E, k) < 0) { Py_DECREF(fast); return NULL; }
        E->use[k] = 1;
    }
    Py_DECREF(fast);
    /* copy element i into h */
    const Poly *src = &E->elems[i].p;
    E->h.len = 0;
    if (poly_reserve(&E->h, src->len) < 0) return NULL;
    for (Py_ssize_t q = 0; q < src->len; q++) {
        Term *t = poly_push(&E->h);
        copy_term_meta(t, &src->t[q]);
        mpz_set(t->c, src->t[q].c);
    }
    if (normal_form(E, E->use, i, 1) < 0) return NULL;
    finish_poly(E, &E->h);
    return export_poly(E, &E->h);
}

static PyObject *Engine_lm(Engine *E, PyObject *arg)
{
    Py_ssize_t i = PyLong_AsSsize_t(arg);
    if (i == -1 && PyErr_Occurred()) return NULL;
    if (check_index(E, i) < 0) return NULL;
    PyObject *ex = PyTuple_New(E->W);
    if (!ex) return NULL;
    for (int v = 0; v < E->W; v++) PyTuple_SET_ITEM(ex, v, PyLong_FromLong(E->elems[i].p.t[0].e[v]));
    return ex;
}

static PyObject *Engine_info(Engine *E, PyObject *arg)
{
    Py_ssize_t i = PyLong_AsSsize_t(arg);
    if (i == -1 && PyErr_Occurred()) return NULL;
    if (check_index(E, i) < 0) return NULL;
    return Py_BuildValue("(ni)", E->elems[i].p.len, E->elems[i].maxdeg);
}

static PyObject *Engine_export(Engine *E, PyObject *arg)
{
    Py_ssize_t i = PyLong_AsSsize_t(arg);
    if (i == -1 && PyErr_Occurred()) return NULL;
    if (check_index(E, i) < 0) return NULL;
    return export_poly(E, &E->elems[i].p);
}

static PyObject *Engine_clear(Engine *E, PyObject *unused)
{
    clear_elems(E);
    Py_RETURN_NONE;
}

static PyObject *Engine_len(Engine *E, PyObject *unused) { return PyLong_FromSsize_t(E->nelems); }

static PyObject *Engine_stats(Engine *E, PyObject *unused)
{
    return Py_BuildValue("{s:L,s:L,s:L,s:L}", "steps", E->steps, "scaled", E->scaled,
                         "peak_terms", E->peak, "produced", E->produced);
}

static PyMethodDef Engine_methods[] = {
    {"set_limits", (PyCFunction)Engine_set_limits, METH_VARARGS, "set_limits(deadline, max_terms)"},
    {"add", (PyCFunction)Engine_add, METH_VARARGS, "add(terms, reduce=True) -> index or None"},
    {"spair", (PyCFunction)Engine_spair, METH_VARARGS, "spair(i, j) -> index or None"},
    {"spair_reduces", (PyCFunction)Engine_spair_reduces, METH_VARARGS, "spair_reduces(i, j) -> bool"},
    {"reduce_against", (PyCFunction)Engine_reduce_against, METH_VARARGS,
     "reduce_against(i, indices) -> terms"},
    {"lm", (PyCFunction)Engine_lm, METH_O, "leading exponent vector of element i"},
    {"info", (PyCFunction)Engine_info, METH_O, "(number of terms, max total degree) of element i"},
    {"export", (PyCFunction)Engine_export, METH_O, "terms of element i"},
    {"clear", (PyCFunction)Engine_clear, METH_NOARGS, "drop every element"},
    {"size", (PyCFunction)Engine_len, METH_NOARGS, "number of stored elements"},
    {"stats", (PyCFunction)Engine_stats, METH_NOARGS, "reduction counters"},
    {NULL, NULL, 0, NULL},
};

static PyTypeObject EngineType = {
    PyVarObject_HEAD_INIT(NULL, 0)
    .tp_name = "swhbf._gbcore.Engine",
    .tp_basicsize = sizeof(Engine),
    .tp_flags = Py_TPFLAGS_DEFAULT,
    .tp_doc = "Basis store and reducer for left Groebner bases in D<s,dt>.",
    .tp_new = Engine_new,
    .tp_init = (initproc)Engine_init,
    .tp_dealloc = (destructor)Engine_dealloc,
    .tp_methods = Engine_methods,
};

static struct PyModuleDef moddef = {
    PyModuleDef_HEAD_INIT, "_gbcore", "Compiled reduction kernel.", -1, NULL,
};

PyMODINIT_FUNC PyInit__gbcore(void)
{
    if (PyType_Ready(&EngineType) < 0) return NULL;
    PyObject *m = PyModule_Create(&moddef);
    if (!m) return NULL;
    LimitExceeded = PyErr_NewException("swhbf._gbcore.LimitExceeded", PyExc_RuntimeError, NULL);
    if (!LimitExceeded) return NULL;
    Py_INCREF(LimitExceeded);
    PyModule_AddObject(m, "LimitExceeded", LimitExceeded);
    Py_INCREF(&EngineType);
    PyModule_AddObject(m, "Engine", (PyObject *)&EngineType);
    PyModule_AddIntConstant(m, "MAX_WIDTH", WMAX);
    return m;
}
