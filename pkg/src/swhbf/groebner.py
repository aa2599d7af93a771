"""Left Gröbner bases in D<s, dt> and its subrings.

Buchberger's algorithm with left reduction.  Internally polynomials are
``{monomial: int}`` dicts kept primitive (content removed after each
reduction); the public surface hands out monic ``PBWOperator`` values.

Pairs are pruned with the Gebauer-Moeller chain criteria only.  The
coprime-leading-monomial (product) criterion is unsound for left ideals in
these algebras and is never applied.
"""

from __future__ import annotations

import heapq
import logging
import math
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, List, Optional, Sequence

from .core import MonomialOrder
from .errors import PreconditionError, ResourceError
from .pbw import PBWOperator, PBWRing, _leibniz, _shift_power, mono_mul

log = logging.getLogger(__name__)


@dataclass
class Limits:
    """Resource caps for one Gröbner computation (``None`` = unbounded)."""

    max_pairs: Optional[int] = None
    max_terms: Optional[int] = None
    deadline: Optional[float] = None  # time.monotonic() value

    @classmethod
    def with_budget(cls, seconds: Optional[float], **kw) -> "Limits":
        deadline = None if seconds is None else time.monotonic() + seconds
        return cls(deadline=deadline, **kw)

    def check_time(self, partial_fn):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise ResourceError("time budget exhausted", partial_fn())


# ---------------------------------------------------------------------------
# Integer-coefficient helpers
# ---------------------------------------------------------------------------


def _to_int_poly(op: PBWOperator, pk) -> dict:
    den = reduce(math.lcm, (c.denominator for c in op.terms.values()), 1)
    return _primitive({pk.key(m): int(c * den) for m, c in op.terms.items()})


def _primitive(p: dict) -> dict:
    if not p:
        return p
    g = 0
    for c in p.values():
        g = math.gcd(g, c)
        if g == 1:
            break
    if g > 1:
        p = {m: c // g for m, c in p.items()}
    return p


def _mask(m: tuple) -> int:
    r = 0
    for i, e in enumerate(m):
        if e:
            r |= 1 << i
    return r


def _divides(a: tuple, b: tuple) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a: tuple, b: tuple) -> tuple:
    return tuple(x if x > y else y for x, y in zip(a, b))


class _Packing:
    """Order-preserving integer encoding of exponent vectors.

    Each block contributes a few bit fields that are nonnegative linear forms
    in the exponents (degrevlex uses partial sums instead of negated
    exponents).  The key is therefore additive, ``key(a + b) = key(a) +
    key(b)``, and integer comparison of keys is the monomial order.
    """

    BITS = 24

    def __init__(self, order: MonomialOrder):
        self.order = order
        width = order.nvars
        forms = []  # one coefficient vector per field, most significant first
        recipes = []
        for b in order.blocks:
            vs = b.variables
            if b.weights:
                forms.append(dict(zip(vs, b.weights)))
            start = len(forms)
            if b.base == "lex":
                for v in vs:
                    forms.append({v: 1})
            elif b.base == "deglex":
                forms.append({v: 1 for v in vs})
                for v in vs[:-1]:
                    forms.append({v: 1})
            else:
                for j in range(len(vs)):
                    forms.append({v: 1 for v in vs[: len(vs) - j]})
            recipes.append((b.base, vs, start))
        nf = len(forms)
        self.nfields = nf
        self.shifts = [self.BITS * (nf - 1 - j) for j in range(nf)]
        self.weights = [0] * width
        for j, form in enumerate(forms):
            for v, c in form.items():
                self.weights[v] += c << self.shifts[j]
        self.recipes = recipes
        self.forms = [sorted(f.items()) for f in forms]
        self.mask = (1 << self.BITS) - 1
        self._dec: dict = {}
        self.width = width

    def key(self, m: tuple) -> int:
        return sum(e * w for e, w in zip(m, self.weights) if e)

    def decode(self, k: int) -> tuple:
        m = self._dec.get(k)
        if m is not None:
            return m
        fields = [(k >> s) & self.mask for s in self.shifts]
        out = [0] * self.width
        for base, vs, start in self.recipes:
            if base == "lex":
                for i, v in enumerate(vs):
                    out[v] = fields[start + i]
            elif base == "deglex":
                rest = fields[start]
                for i, v in enumerate(vs[:-1]):
                    out[v] = fields[start + 1 + i]
                    rest -= out[v]
                out[vs[-1]] = rest
            else:
                # partial sums e_1+..+e_{k-j}
                sums = fields[start: start + len(vs)] + [0]
                for i, v in enumerate(vs):
                    j = len(vs) - 1 - i
                    out[v] = sums[j] - sums[j + 1]
        m = tuple(out)
        if len(self._dec) > 4_000_000:
            self._dec.clear()
        self._dec[k] = m
        return m


class _Elem:
    __slots__ = ("poly", "lm", "lk", "lc", "mask", "sugar", "size", "terms")

    def __init__(self, poly: dict, pk: _Packing, sugar: int | None = None):
        lk = max(poly)
        lc = poly[lk]
        if lc < 0:
            poly = {m: -c for m, c in poly.items()}
            lc = -lc
        self.poly = poly
        self.lk = lk
        self.lm = pk.decode(lk)
        self.lc = lc
        self.mask = _mask(self.lm)
        # (key, coefficient, exponents) for the non-commutative product
        self.terms = [(k, c, pk.decode(k)) for k, c in poly.items()]
        self.sugar = sugar if sugar is not None else max(sum(t[2]) for t in self.terms)
        self.size = len(poly)


class _Mul:
    """Left multiplication by monomials in packed form."""

    def __init__(self, n: int, pk: _Packing):
        self.n = n
        self.pk = pk
        w = pk.weights
        self.delta = [w[i] + w[n + i] for i in range(n)]
        self.ws = w[2 * n]

    def left_mul(self, mu: tuple, e: _Elem, coef, out: dict, new: list | None = None) -> None:
        """out -= coef * (mu . e), in place; keys created in ``out`` go to ``new``."""
        n = self.n
        S = 2 * n
        mk = self.pk.key(mu)
        dpart = [(i, mu[n + i]) for i in range(n) if mu[n + i]]
        k = mu[S + 1]
        get = out.get
        if not dpart and not k:
            for k2, c2 in e.poly.items():
                t = mk + k2
                old = get(t)
                if old is None:
                    out[t] = -coef * c2
                    if new is not None:
                        new.append(t)
                else:
                    v = old - coef * c2
                    if v:
                        out[t] = v
                    else:
                        del out[t]
            return
        delta = self.delta
        ws = self.ws
        for k2, c2, ex in e.terms:
            base = mk + k2
            prods = [(base, coef * c2)]
            for i, b in dpart:
                a = ex[i]
                if a:
                    di = delta[i]
                    prods = [(t - v * di, cc * c) for v, c in _leibniz(b, a) for t, cc in prods]
            if k:
                J = ex[S]
                if J:
                    prods = [(t + (l - J) * ws, cc * c) for l, c in _shift_power(k, J) if c
                             for t, cc in prods]
            for t, cc in prods:
                old = get(t)
                if old is None:
                    out[t] = -cc
                    if new is not None:
                        new.append(t)
                else:
                    v = old - cc
                    if v:
                        out[t] = v
                    else:
                        del out[t]


class _Reducer:
    """Left normal forms modulo a growing list of elements."""

    def __init__(self, n: int, pk: _Packing, limits: Limits | None = None):
        self.n = n
        self.pk = pk
        self.mul = _Mul(n, pk)
        self.elems: List[_Elem] = []
        self.limits = limits or Limits()

    def add(self, e: _Elem):
        self.elems.append(e)

    def find_divisor(self, m: tuple, skip=None) -> Optional[_Elem]:
        mm = _mask(m)
        best = None
        for e in self.elems:
            if e is skip or e.mask & ~mm:
                continue
            if _divides(e.lm, m) and (best is None or e.size < best.size):
                best = e
                if e.size <= 2:
                    break
        return best

    def normal_form(self, h: dict, full: bool = True, skip=None) -> dict:
        if not h:
            return h
        decode = self.pk.decode
        left_mul = self.mul.left_mul
        h = dict(h)
        rem: dict = {}
        heap = [-k for k in h]
        heapq.heapify(heap)
        steps = 0
        max_terms = self.limits.max_terms
        pop = heapq.heappop
        push = heapq.heappush
        while heap:
            k = -pop(heap)
            c = h.get(k)
            if not c:
                continue
            while heap and heap[0] == -k:
                pop(heap)
            m = decode(k)
            e = self.find_divisor(m, skip)
            if e is None:
                if not full:
                    rem[k] = c
                    del h[k]
                    rem.update(h)
                    return _primitive(rem)
                rem[k] = c
                del h[k]
                continue
            g = math.gcd(c, e.lc)
            a = e.lc // g
            b = c // g
            if a != 1:
                for t in h:
                    h[t] *= a
                for t in rem:
                    rem[t] *= a
            mu = tuple(x - y for x, y in zip(m, e.lm))
            created: list = []
            left_mul(mu, e, b, h, created)
            h.pop(k, None)
            for t in created:
                push(heap, -t)
            steps += 1
            if steps % 64 == 0:
                self._shrink(h, rem)
                if max_terms is not None and len(h) + len(rem) > max_terms:
                    raise ResourceError(f"operator support exceeded {max_terms} terms")
                self.limits.check_time(lambda: None)
        return _primitive(rem)

    @staticmethod
    def _shrink(h: dict, rem: dict):
        g = 0
        for d in (h, rem):
            for c in d.values():
                g = math.gcd(g, c)
                if g == 1:
                    return
        if g > 1:
            for d in (h, rem):
                for k in d:
                    d[k] //= g


def _spoly(mul: _Mul, e1: _Elem, e2: _Elem) -> dict:
    L = _lcm(e1.lm, e2.lm)
    mu1 = tuple(x - y for x, y in zip(L, e1.lm))
    mu2 = tuple(x - y for x, y in zip(L, e2.lm))
    g = math.gcd(e1.lc, e2.lc)
    out: dict = {}
    mul.left_mul(mu1, e1, -(e2.lc // g), out)
    mul.left_mul(mu2, e2, e1.lc // g, out)
    out.pop(mul.pk.key(L), None)
    return out


def _left_mul(n: int, mu: tuple, g: dict, coef, out: dict) -> None:
    """Tuple-keyed out -= coef * (mu . g); used by the rational helpers."""
    for m2, c2 in g.items():
        cc = coef * c2
        for m, c in mono_mul(n, mu, m2):
            v = out.get(m, 0) - cc * c
            if v:
                out[m] = v
            else:
                out.pop(m, None)


# ---------------------------------------------------------------------------
# Public surface
# ---------------------------------------------------------------------------


class PartialState:
    """What a Buchberger run had reached when it was stopped.

    Converting the intermediate basis to operators can take far longer than
    the run's budget, so it happens only when ``operators()`` is called.
    """

    def __init__(self, eng, lms, stats):
        self._eng = eng
        self.leading_monomials = list(lms)
        self.stats = dict(stats)

    def __len__(self):
        return len(self.leading_monomials)

    def operators(self) -> List[PBWOperator]:
        return [self._eng.operator(i) for i in range(len(self.leading_monomials))]

    def __repr__(self):
        return f"PartialState({len(self)} elements, {self.stats.get('pairs_processed', 0)} pairs)"


@dataclass
class GroebnerBasis:
    generators: List[PBWOperator]
    order: MonomialOrder
    reduced: bool = True
    stats: dict = field(default_factory=dict)

    @property
    def ring(self) -> PBWRing:
        return self.generators[0].ring

    def is_unit(self) -> bool:
        return len(self.generators) == 1 and self.generators[0].terms.keys() == {
            (0,) * self.ring.width
        }

    def leading_monomials(self):
        return [g.leading(self.order)[0] for g in self.generators]

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)


def _from_int(ring: PBWRing, p: dict, pk: _Packing) -> PBWOperator:
    lc = p[max(p)]
    return PBWOperator(ring, {pk.decode(k): Fraction(c, lc) for k, c in p.items()})


def left_reduce(h: PBWOperator, G: Sequence[PBWOperator], order: MonomialOrder) -> PBWOperator:
    """Left normal form r of h modulo G.

    ``h - r`` lies in the left ideal generated by G and no monomial of r is
    divisible by a leading monomial of G.  Exact rational arithmetic.
    """
    if h.is_zero():
        return h
    return _rational_normal_form(h, [g for g in G if not g.is_zero()], order)


def _rational_normal_form(h: PBWOperator, G: Sequence[PBWOperator], order: MonomialOrder):
    ring = h.ring
    n = ring.n
    monic = [(g.leading(order)[0], g.monic(order)) for g in G]
    cur = dict(h.terms)
    rem = {}
    while cur:
        m = max(cur, key=order.key)
        c = cur[m]
        for lm, g in monic:
            if _divides(lm, m):
                mu = tuple(x - y for x, y in zip(m, lm))
                _left_mul(n, mu, g.terms, c, cur)
                cur.pop(m, None)
                break
        else:
            rem[m] = c
            del cur[m]
    return PBWOperator(ring, rem)


# ---------------------------------------------------------------------------
# Engines.  Both hold the basis as integer polynomials and expose the same
# small interface to the driver; the compiled one is used when available.
# ---------------------------------------------------------------------------


def _int_terms(op: PBWOperator) -> list:
    den = reduce(math.lcm, (c.denominator for c in op.terms.values()), 1)
    return [(m, int(c * den)) for m, c in op.terms.items()]


class _PyEngine:
    name = "python"

    def __init__(self, ring: PBWRing, order: MonomialOrder, limits: Limits | None = None):
        self.ring = ring
        self.pk = _Packing(order)
        self.red = _Reducer(ring.n, self.pk, limits)

    def _store(self, p: dict) -> Optional[int]:
        if not p:
            return None
        self.red.add(_Elem(p, self.pk))
        return len(self.red.elems) - 1

    def add(self, op: PBWOperator, reduce_first: bool = True) -> Optional[int]:
        p = _to_int_poly(op, self.pk)
        if reduce_first:
            p = self.red.normal_form(p)
        return self._store(p)

    def spair(self, i: int, j: int) -> Optional[int]:
        E = self.red.elems
        return self._store(self.red.normal_form(_spoly(self.red.mul, E[i], E[j]), full=True))

    def spair_reduces(self, i: int, j: int) -> bool:
        E = self.red.elems
        return not self.red.normal_form(_spoly(self.red.mul, E[i], E[j]), full=False)

    def lm(self, i: int) -> tuple:
        return self.red.elems[i].lm

    def info(self, i: int):
        e = self.red.elems[i]
        return e.size, max(sum(t[2]) for t in e.terms)

    def operator(self, i: int) -> PBWOperator:
        return _from_int(self.ring, self.red.elems[i].poly, self.pk)

    def reduce_against(self, i: int, idx: Sequence[int]) -> PBWOperator:
        E = self.red.elems
        sub = _Reducer(self.ring.n, self.pk)
        for k in idx:
            sub.add(E[k])
        return _from_int(self.ring, sub.normal_form(E[i].poly, full=True, skip=E[i]), self.pk)

    def clear(self):
        self.red.elems.clear()

    def counters(self) -> dict:
        return {}


class _CEngine:
    name = "c"

    def __init__(self, ring: PBWRing, order: MonomialOrder, limits: Limits | None = None):
        self.ring = ring
        pk = _Packing(order)
        self.eng = _gbcore.Engine(ring.n, pk.forms)
        lim = limits or Limits()
        self.eng.set_limits(lim.deadline, lim.max_terms)

    def _call(self, fn, *args):
        try:
            return fn(*args)
        except _gbcore.LimitExceeded as exc:
            raise ResourceError(str(exc)) from None

    def _op(self, terms) -> PBWOperator:
        lc = terms[0][1]
        return PBWOperator(self.ring, {m: Fraction(c, lc) for m, c in terms})

    def add(self, op: PBWOperator, reduce_first: bool = True) -> Optional[int]:
        return self._call(self.eng.add, _int_terms(op), reduce_first)

    def spair(self, i: int, j: int) -> Optional[int]:
        return self._call(self.eng.spair, i, j)

    def spair_reduces(self, i: int, j: int) -> bool:
        return self._call(self.eng.spair_reduces, i, j)

    def lm(self, i: int) -> tuple:
        return self.eng.lm(i)

    def info(self, i: int):
        return self.eng.info(i)

    def operator(self, i: int) -> PBWOperator:
        return self._op(self.eng.export(i))

    def reduce_against(self, i: int, idx: Sequence[int]) -> PBWOperator:
        return self._op(self._call(self.eng.reduce_against, i, list(idx)))

    def clear(self):
        self.eng.clear()

    def counters(self) -> dict:
        return self.eng.stats()


try:
    from . import _gbcore
except ImportError:  # pragma: no cover - depends on the build
    _gbcore = None

ENGINES = {"python": _PyEngine}
if _gbcore is not None:
    ENGINES["c"] = _CEngine


def default_engine() -> str:
    """Engine name picked when none is requested (``SWHBF_ENGINE`` overrides)."""
    want = os.environ.get("SWHBF_ENGINE")
    if want:
        if want not in ENGINES:
            raise PreconditionError(f"engine {want!r} is not available")
        return want
    return "c" if "c" in ENGINES else "python"


def _engine(ring, order, limits, engine):
    name = engine or default_engine()
    if name not in ENGINES:
        raise PreconditionError(f"engine {name!r} is not available")
    return ENGINES[name](ring, order, limits)


def buchberger(
    F: Iterable[PBWOperator],
    order: MonomialOrder,
    *,
    strategy: str = "sugar",
    limits: Limits | None = None,
    engine: Optional[str] = None,
) -> GroebnerBasis:
    """Reduced left Gröbner basis of the left ideal generated by F.

    ``strategy`` is ``"normal"`` (smallest lcm first) or ``"sugar"`` (smallest
    sugar degree first, ties broken by the normal strategy).  ``engine``
    selects the reduction backend, see :data:`ENGINES`.
    """
    F = [f for f in F]
    if not F:
        raise PreconditionError("empty generating set")
    ring = F[0].ring
    if any(f.ring != ring for f in F):
        raise PreconditionError("generators live in different rings")
    if strategy not in ("normal", "sugar"):
        raise PreconditionError(f"unknown strategy {strategy!r}")
    limits = limits or Limits()
    t0 = time.monotonic()
    pk = _Packing(order)
    eng = _engine(ring, order, limits, engine)
    lms: List[tuple] = []
    sugars: List[int] = []
    pairs: list = []  # heap of (priority, counter, i, j)
    live: dict = {}  # (i, j) -> lcm for pairs still queued
    counter = 0
    stats = {"pairs_processed": 0, "zero_reductions": 0, "chain_discarded": 0, "engine": eng.name}

    def partial():
        return PartialState(eng, lms, stats)

    def priority(i, j, L):
        if strategy == "sugar":
            sug = max(sugars[i] + sum(L) - sum(lms[i]), sugars[j] + sum(L) - sum(lms[j]))
            return (sug, pk.key(L))
        return (pk.key(L),)

    def insert(idx: int, sugar=None) -> bool:
        nonlocal counter
        lm = eng.lm(idx)
        t = len(lms)
        assert idx == t
        sugars.append(eng.info(idx)[1] if sugar is None else sugar)
        if not any(lm):
            lms.append(lm)
            return True
        # criterion B on queued pairs
        for key in list(live):
            i, j = key
            L = live[key]
            if _divides(lm, L) and _lcm(lms[i], lm) != L and _lcm(lms[j], lm) != L:
                del live[key]
                stats["chain_discarded"] += 1
        # new pairs with criteria M and F
        cand = [(i, _lcm(lms[i], lm)) for i in range(t)]
        seen = set()
        for i, L in cand:
            if any(L2 != L and _divides(L2, L) for _, L2 in cand) or L in seen:
                stats["chain_discarded"] += 1
                continue
            seen.add(L)
            live[(i, t)] = L
        lms.append(lm)
        for (i, j), L in list(live.items()):
            if j == t:
                counter += 1
                heapq.heappush(pairs, (priority(i, j, L), counter, i, j))
        return False

    def unit():
        return GroebnerBasis([PBWOperator(ring, {(0,) * ring.width: Fraction(1)})], order, True,
                             dict(stats, seconds=time.monotonic() - t0))

    for f in F:
        if f.is_zero():
            continue
        try:
            idx = eng.add(f)
        except ResourceError as exc:
            raise ResourceError(str(exc), partial()) from None
        if idx is not None and insert(idx):
            return unit()
    while pairs:
        _, _, i, j = heapq.heappop(pairs)
        if (i, j) not in live:
            continue
        del live[(i, j)]
        stats["pairs_processed"] += 1
        if limits.max_pairs is not None and stats["pairs_processed"] > limits.max_pairs:
            raise ResourceError(f"pair cap {limits.max_pairs} exceeded", partial())
        limits.check_time(partial)
        try:
            idx = eng.spair(i, j)
        except ResourceError as exc:
            raise ResourceError(str(exc), partial()) from None
        if idx is None:
            stats["zero_reductions"] += 1
            continue
        size, maxdeg = eng.info(idx)
        if limits.max_terms is not None and size > limits.max_terms:
            raise ResourceError(f"operator support exceeded {limits.max_terms} terms", partial())
        L = _lcm(lms[i], lms[j])
        sug = max(sugars[i] + sum(L) - sum(lms[i]), sugars[j] + sum(L) - sum(lms[j]), maxdeg)
        if insert(idx, sug):
            return unit()
        log.debug("basis size %d, queue %d", len(lms), len(live))
    return _finish(eng, lms, order, pk, stats, t0)


def _finish(eng, lms, order, pk, stats, t0) -> GroebnerBasis:
    # minimalise: drop elements whose leading monomial is divisible by another's
    keep: List[int] = []
    for i in sorted(range(len(lms)), key=lambda i: (pk.key(lms[i]), eng.info(i)[0])):
        if any(_divides(lms[k], lms[i]) for k in keep):
            continue
        keep.append(i)
    # interreduce tails; leading monomials are irreducible by the others
    out = [eng.reduce_against(i, keep) for i in keep]
    stats.update(eng.counters())
    stats["seconds"] = time.monotonic() - t0
    return GroebnerBasis(out, order, True, stats)


def spoly(a: PBWOperator, b: PBWOperator, order: MonomialOrder) -> PBWOperator:
    """Left S-polynomial of two operators (rational normalisation)."""
    ring = a.ring
    la, ca = a.leading(order)
    lb, cb = b.leading(order)
    L = _lcm(la, lb)
    out: dict = {}
    _left_mul(ring.n, tuple(x - y for x, y in zip(L, la)), a.terms, -1 / ca, out)
    _left_mul(ring.n, tuple(x - y for x, y in zip(L, lb)), b.terms, 1 / cb, out)
    out.pop(L, None)
    return PBWOperator(ring, out)


def is_groebner(
    G: Sequence[PBWOperator],
    order: MonomialOrder,
    limits: Limits | None = None,
    engine: Optional[str] = None,
) -> bool:
    """Post-hoc Buchberger criterion: every S-polynomial reduces to zero.

    All pairs are checked (no pair criteria), with integer arithmetic.
    """
    G = [g for g in G if not g.is_zero()]
    if not G:
        return True
    eng = _engine(G[0].ring, order, limits, engine)
    idx = [eng.add(g, False) for g in G]
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            if not eng.spair_reduces(idx[a], idx[b]):
                return False
    return True


def is_groebner_rational(G: Sequence[PBWOperator], order: MonomialOrder) -> bool:
    """Reference version of :func:`is_groebner` in rational arithmetic."""
    G = [g for g in G if not g.is_zero()]
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            if not _rational_normal_form(spoly(G[i], G[j], order), G, order).is_zero():
                return False
    return True


def extract_subring(G: GroebnerBasis, keep: Iterable) -> List[PBWOperator]:
    """Elements of G involving only the ``keep`` variables.

    ``keep`` holds variable names or indices.  Variables that occur in no
    element of G are ignored; every other non-kept variable must sit in a
    strictly higher block than every kept variable, otherwise the result would
    not generate the intersection ideal.
    """
    ring = G.ring
    idx = {ring.index(k) if isinstance(k, str) else int(k) for k in keep}
    used = set()
    for g in G.generators:
        used |= g.variables_used()
    eliminated = used - idx
    kept_used = used & idx
    order = G.order
    if eliminated and kept_used:
        top_kept = min(order.block_index(v) for v in kept_used)
        if any(order.block_index(v) >= top_kept for v in eliminated):
            raise PreconditionError(
                "order is not an elimination order for the requested variables"
            )
    return [g for g in G.generators if g.variables_used() <= idx]
