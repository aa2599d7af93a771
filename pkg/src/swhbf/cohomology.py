"""Algebraic local cohomology classes supported at the origin.

A class sum c_l [1/x^(l+1)] is stored as the polynomial sum c_l xi^l in dual
variables xi_1..xi_n.  Polynomials act by lowering exponents and d_i acts by
xi^l -> -(l_i + 1) xi^(l + e_i).
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .core import Block, MonomialOrder, MultiPoly, as_rational, format_terms
from .errors import PreconditionError, ResourceError
from .linalg import kernel, solve
from .pbw import PBWOperator

log = logging.getLogger(__name__)

Exp = Tuple[int, ...]

DEFAULT_DEGREE_CAP = 64


def dual_names(variables: Sequence[str]) -> Tuple[str, ...]:
    greek = {"x": "xi", "y": "eta", "z": "zeta"}
    if all(v in greek for v in variables):
        return tuple(greek[v] for v in variables)
    return tuple("xi_" + v for v in variables)


def default_order(n: int) -> MonomialOrder:
    """Total-degree lexicographic order with xi_1 > xi_2 > ... > xi_n."""
    return MonomialOrder([Block(tuple(range(n)), "deglex")], n)


class CohomClass:
    """Finite sum of xi-monomials with rational coefficients."""

    __slots__ = ("n", "terms")

    def __init__(self, terms: Dict[Exp, object], n: Optional[int] = None):
        clean = {}
        for lam, c in terms.items():
            c = as_rational(c)
            if c:
                lam = tuple(lam)
                if min(lam, default=0) < 0:
                    raise PreconditionError(f"negative exponent in {lam}")
                clean[lam] = clean.get(lam, 0) + c
        self.terms = {k: v for k, v in clean.items() if v}
        if n is None:
            if not clean:
                raise PreconditionError("cannot infer the number of variables of a zero class")
            n = len(next(iter(clean)))
        self.n = n

    @classmethod
    def monomial(cls, lam: Exp, c=1) -> "CohomClass":
        return cls({tuple(lam): c}, len(lam))

    @classmethod
    def zero(cls, n: int) -> "CohomClass":
        return cls({}, n)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "CohomClass") -> "CohomClass":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return CohomClass(out, self.n)

    def __sub__(self, other: "CohomClass") -> "CohomClass":
        return self + other.scale(-1)

    def scale(self, c) -> "CohomClass":
        c = as_rational(c)
        return CohomClass({k: v * c for k, v in self.terms.items()}, self.n)

    def __eq__(self, other):
        return isinstance(other, CohomClass) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def head(self, order: MonomialOrder) -> Exp:
        return max(self.terms, key=order.key)

    def degree(self) -> int:
        return max((sum(k) for k in self.terms), default=-1)

    def to_string(self, names: Sequence[str] | None = None, order: MonomialOrder | None = None):
        names = names or tuple(f"xi{i + 1}" for i in range(self.n))
        order = order or default_order(self.n)
        items = sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)
        return format_terms(items, names)

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"CohomClass({self.terms!r})"


def _lower(terms: Dict[Exp, Fraction], alpha: Exp, c, out: Dict[Exp, Fraction]):
    for lam, v in terms.items():
        if all(l >= a for l, a in zip(lam, alpha)):
            key = tuple(l - a for l, a in zip(lam, alpha))
            out[key] = out.get(key, 0) + c * v


def _raise(terms: Dict[Exp, Fraction], beta: Exp) -> Dict[Exp, Fraction]:
    """Apply d^beta: d_i^b xi^l = (-1)^b (l_i+1)...(l_i+b) xi^(l + b e_i)."""
    if not any(beta):
        return terms
    out = {}
    sign = -1 if sum(beta) % 2 else 1
    for lam, v in terms.items():
        factor = sign
        for l, b in zip(lam, beta):
            if b:
                factor *= prod(range(l + 1, l + b + 1))
        key = tuple(l + b for l, b in zip(lam, beta))
        out[key] = out.get(key, 0) + factor * v
    return out


def act_polynomial(p: MultiPoly, psi: CohomClass) -> CohomClass:
    if p.nvars != psi.n:
        raise PreconditionError("polynomial and class have different numbers of variables")
    out: Dict[Exp, Fraction] = {}
    for alpha, c in p.terms.items():
        _lower(psi.terms, alpha, c, out)
    return CohomClass(out, psi.n)


def act_operator(p, psi: CohomClass) -> CohomClass:
    """Action of an operator in D (no s, no dt) on a class."""
    if isinstance(p, MultiPoly):
        return act_polynomial(p, psi)
    ring = p.ring
    n = ring.n
    if n != psi.n:
        raise PreconditionError("operator and class have different numbers of variables")
    if not p.in_D():
        raise PreconditionError("substitute s = gamma before acting; s and dt are not allowed")
    out: Dict[Exp, Fraction] = {}
    raised: Dict[Exp, Dict[Exp, Fraction]] = {}
    for mono, c in p.terms.items():
        alpha, beta = mono[:n], mono[n:2 * n]
        r = raised.get(beta)
        if r is None:
            r = raised[beta] = _raise(psi.terms, beta)
        _lower(r, alpha, c, out)
    return CohomClass(out, n)


@dataclass
class EchelonBasis:
    """Classes with strictly increasing head monomials, each head absent elsewhere."""

    classes: List[CohomClass]
    order: MonomialOrder
    names: Tuple[str, ...] = field(default=())

    def __len__(self):
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    @property
    def dimension(self) -> int:
        return len(self.classes)

    def heads(self) -> List[Exp]:
        return [c.head(self.order) for c in self.classes]

    def contains(self, psi: CohomClass) -> bool:
        """Span membership by head reduction."""
        heads = {h: c for h, c in zip(self.heads(), self.classes)}
        cur = psi
        while not cur.is_zero():
            h = cur.head(self.order)
            b = heads.get(h)
            if b is None:
                return False
            cur = cur - b.scale(cur.terms[h] / b.terms[h])
        return True

    def is_echelon(self) -> bool:
        hs = self.heads()
        if any(self.order.key(a) >= self.order.key(b) for a, b in zip(hs, hs[1:])):
            return False
        for i, h in enumerate(hs):
            if any(h in c.terms for j, c in enumerate(self.classes) if j != i):
                return False
        return True

    @classmethod
    def from_classes(cls, classes: Iterable[CohomClass], order: MonomialOrder,
                     names: Sequence[str] = ()) -> "EchelonBasis":
        """Reduced echelon form of the span of ``classes``."""
        rows: Dict[Exp, CohomClass] = {}
        for c in classes:
            cur = c
            while not cur.is_zero():
                h = cur.head(order)
                b = rows.get(h)
                if b is None:
                    break
                cur = cur - b.scale(cur.terms[h])
            if cur.is_zero():
                continue
            h = cur.head(order)
            cur = cur.scale(1 / cur.terms[h])
            for k in list(rows):
                if h in rows[k].terms:
                    rows[k] = rows[k] - cur.scale(rows[k].terms[h])
            rows[h] = cur
        # back-substitute so no head occurs in another class
        ordered = sorted(rows, key=order.key)
        for i, h in enumerate(ordered):
            for k in ordered:
                if k != h and h in rows[k].terms:
                    rows[k] = rows[k] - rows[h].scale(rows[k].terms[h])
        return cls([rows[h] for h in ordered], order, tuple(names))


def _monomials_upto(n: int, d: int) -> List[Exp]:
    out = []
    for total in range(d + 1):
        for combo in itertools.combinations_with_replacement(range(n), total):
            e = [0] * n
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


def solve_H_F0(
    F0: Sequence[MultiPoly],
    order: MonomialOrder | None = None,
    degree_cap: int = DEFAULT_DEGREE_CAP,
) -> EchelonBasis:
    """Echelon basis of the classes annihilated by every element of F0.

    Degree by degree: the kernel of psi -> (h * psi)_h on all xi-monomials of
    total degree <= d, stopping at the first d whose dimension equals that of
    d - 1.  A new solution of minimal degree D > d would have all its
    x_i-lowerings in V_(D-1) = V_d; its degree-D part is then killed by every
    x_i, which forces it to vanish.
    """
    F0 = [p for p in F0 if not p.is_zero()]
    if not F0:
        raise PreconditionError("F0 must contain a nonzero polynomial")
    n = F0[0].nvars
    if any(p.nvars != n for p in F0):
        raise PreconditionError("polynomials in F0 use different variable lists")
    zero = (0,) * n
    if any(zero in p.terms for p in F0):
        raise PreconditionError("every element of F0 must vanish at the origin")
    order = order or default_order(n)
    prev = -1
    for d in range(degree_cap + 1):
        basis = _kernel_upto(F0, n, d, order)
        log.debug("H_F0 degree %d: dim %d", d, len(basis))
        if len(basis) == prev:
            return EchelonBasis(basis, order, dual_names(F0[0].vars))
        prev = len(basis)
    raise ResourceError(
        f"solution space did not stabilise by degree {degree_cap}"
        " (the singularity may not be isolated)",
        prev,
    )


def _kernel_upto(F0, n, d, order) -> List[CohomClass]:
    monos = sorted(_monomials_upto(n, d), key=order.key)
    col = {m: i for i, m in enumerate(monos)}
    rows: Dict[Tuple[int, Exp], Dict[int, Fraction]] = {}
    for hi, h in enumerate(F0):
        for alpha, c in h.terms.items():
            for lam, j in col.items():
                if all(l >= a for l, a in zip(lam, alpha)):
                    tgt = tuple(l - a for l, a in zip(lam, alpha))
                    row = rows.setdefault((hi, tgt), {})
                    row[j] = row.get(j, 0) + c
    vecs = kernel(list(rows.values()), len(monos))
    return [CohomClass({monos[j]: v for j, v in vec.items()}, n) for vec in vecs]


def milnor_number(f: MultiPoly, degree_cap: int = DEFAULT_DEGREE_CAP) -> int:
    """Dimension of the local dual of the Jacobian ideal at the origin."""
    grad = f.gradient()
    zero = (0,) * f.nvars
    if any(zero in g.terms for g in grad):
        raise PreconditionError("the origin is not a critical point of f")
    if all(g.is_zero() for g in grad):
        raise PreconditionError("f has no nonzero partial derivative")
    return solve_H_F0(grad, degree_cap=degree_cap).dimension


def split_gamma_basis(cert) -> Tuple[List[MultiPoly], List[PBWOperator]]:
    """P0 (polynomials) and P1 (operators) of G_(gamma,f) with s = gamma."""
    gamma = cert.gamma
    P0, P1 = [], []
    for g in cert.basis.generators:
        g = g.substitute_s(gamma)
        if g.is_zero():
            continue  # s - gamma itself
        if g.is_polynomial():
            P0.append(g.to_multipoly())
        else:
            P1.append(g)
    return P0, P1


def cohomology_solution_space(
    f: MultiPoly,
    gamma,
    cert,
    order: MonomialOrder | None = None,
    degree_cap: int = DEFAULT_DEGREE_CAP,
) -> EchelonBasis:
    """Solutions in H_F0 of every operator of G_(gamma,f).

    G0 is scanned by increasing head; each element is completed with a
    combination of the earlier failures, solving the linear conditions
    imposed by the operators that are not polynomials.
    """
    gamma = as_rational(gamma)
    if not cert.is_factor:
        raise PreconditionError(f"{gamma} is not certified as a root")
    if cert.gamma != gamma:
        raise PreconditionError("certificate was computed for a different gamma")
    n = f.nvars
    order = order or default_order(n)
    P0, P1 = split_gamma_basis(cert)
    P0 = [p.embed(f.vars) if p.vars != f.vars else p for p in P0]
    F0 = P0 + [f] + f.gradient()
    G0 = solve_H_F0(F0, order, degree_cap)
    Psi: List[CohomClass] = []
    L: List[CohomClass] = []
    for psi in G0.classes:
        phi = _complete(psi, L, P1, n)
        if phi is None:
            L.append(psi)
        else:
            Psi.append(phi)
    return EchelonBasis.from_classes(Psi, order, G0.names)


def _complete(psi: CohomClass, L: List[CohomClass], P1, n) -> Optional[CohomClass]:
    """psi + sum c_i L_i killed by every operator of P1, or None."""
    base = [act_operator(p, psi) for p in P1]
    images = [[act_operator(p, s) for p in P1] for s in L]
    rows: Dict[Tuple[int, Exp], Dict[int, Fraction]] = {}
    rhs: Dict[Tuple[int, Exp], Fraction] = {}
    for k in range(len(P1)):
        for lam, v in base[k].terms.items():
            rows.setdefault((k, lam), {})
            rhs[(k, lam)] = -v
        for i, img in enumerate(images):
            for lam, v in img[k].terms.items():
                rows.setdefault((k, lam), {})[i] = v
    keys = list(rows)
    if not keys:
        return psi
    sol = solve([rows[k] for k in keys], [rhs.get(k, 0) for k in keys], len(L))
    if sol is None:
        return None
    phi = psi
    for i, c in sol.items():
        phi = phi + L[i].scale(c)
    return phi
