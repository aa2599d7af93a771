"""Canonical-form arithmetic in D<s, dt> = Weyl algebra extended by s and dt.

Monomials are exponent tuples of length 2n+2 laid out as
``(x_1..x_n, d_1..d_n, s, dt)`` and stand for ``x^a d^b s^j dt^k`` in that
factor order.  The only non-commuting pairs are ``d_i x_i = x_i d_i + 1`` and
``dt s = s dt - dt``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, Mapping, Sequence

from .core import Block, MonomialOrder, MultiPoly, as_rational, format_terms, parse_order
from .errors import PreconditionError, StructuralError


class PBWRing:
    """Names and index layout for D<s, dt> over the variables ``names``."""

    def __init__(self, names: Sequence[str]):
        names = tuple(names)
        if not names or len(set(names)) != len(names):
            raise PreconditionError("variables must be nonempty and distinct")
        self.names = names
        self.n = len(names)
        self.dnames = tuple("d" + v for v in names)
        self.all_names = names + self.dnames + ("s", "dt")
        if len(set(self.all_names)) != len(self.all_names):
            raise PreconditionError(
                f"variable names {names} clash with derived names {self.dnames + ('s', 'dt')}"
            )
        self.S = 2 * self.n
        self.DT = 2 * self.n + 1
        self.width = 2 * self.n + 2

    def __eq__(self, other):
        return isinstance(other, PBWRing) and other.names == self.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"PBWRing({','.join(self.names)})"

    # index helpers
    def x_index(self, i: int) -> int:
        return i

    def d_index(self, i: int) -> int:
        return self.n + i

    def index(self, name: str) -> int:
        return self.all_names.index(name)

    # element constructors
    def one(self) -> "PBWOperator":
        return PBWOperator(self, {(0,) * self.width: 1})

    def gen(self, name: str) -> "PBWOperator":
        m = [0] * self.width
        m[self.index(name)] = 1
        return PBWOperator(self, {tuple(m): 1})

    def from_poly(self, f: MultiPoly) -> "PBWOperator":
        """Embed a polynomial in the ring's x variables (and optionally s)."""
        pos = []
        for v in f.vars:
            if v in self.names or v == "s":
                pos.append(self.index(v))
            else:
                raise StructuralError(f"variable {v!r} is not in {self}")
        out = {}
        for m, c in f.terms.items():
            mm = [0] * self.width
            for p, e in zip(pos, m):
                mm[p] += e
            out[tuple(mm)] = c
        return PBWOperator(self, out)

    # standard orders
    def order(self, spec: str) -> MonomialOrder:
        return parse_order(spec, self.all_names)

    def elimination_order_dt(self) -> MonomialOrder:
        """dt above one degrevlex block holding d, x and s."""
        lower = tuple(range(self.n, 2 * self.n)) + tuple(range(self.n)) + (self.S,)
        return MonomialOrder([Block((self.DT,), "lex"), Block(lower, "degrevlex")],
                             self.width, self.all_names)

    def weighted_elimination_order_dt(self, ws) -> MonomialOrder:
        """dt above a weighted degrevlex block in which f_0 of type ``ws`` is homogeneous.

        x_i weighs w_i, d_i weighs d - w_i + e and s weighs d + e, where e >= 0
        is the smallest shift keeping every weight positive.  The
        Briançon-Maisonobe generators of a weighted homogeneous f are then
        homogeneous, which keeps elimination cheap for semi-weighted inputs.
        """
        d, w = ws.d, tuple(ws.w)
        if len(w) != self.n:
            raise PreconditionError("weight vector does not match the number of variables")
        e = max(0, max(w) - d + 1)
        names = self.all_names
        lower = [f"{names[self.n + i]}:{d - w[i] + e}" for i in range(self.n)]
        lower += [f"{names[i]}:{w[i]}" for i in range(self.n)]
        lower.append(f"s:{d + e}")
        return self.order("lex(dt) >> degrevlex(" + ",".join(lower) + ")")

    def weighted_bfunction_order(self, ws) -> MonomialOrder:
        """bfunction_order with the x-block graded by the weights of ``ws``."""
        w = tuple(ws.w)
        if len(w) != self.n:
            raise PreconditionError("weight vector does not match the number of variables")
        names = self.all_names
        dpart = ",".join(names[self.n + i] for i in range(self.n))
        xpart = ",".join(f"{names[i]}:{w[i]}" for i in range(self.n))
        return self.order(f"lex(dt) >> deglex({dpart}) >> degrevlex({xpart}) >> lex(s)")

    def bfunction_order(self) -> MonomialOrder:
        """The block order {d} >> {x} >> s used for b-function work.

        d-block deglex with d_1 > ... > d_n, x-block deglex with x_n > ... > x_1;
        dt (absent from D[s] inputs) sits on top so the order stays total.
        """
        dblock = tuple(range(self.n, 2 * self.n))
        xblock = tuple(reversed(range(self.n)))
        return MonomialOrder(
            [Block((self.DT,), "lex"), Block(dblock, "deglex"), Block(xblock, "deglex"),
             Block((self.S,), "lex")],
            self.width, self.all_names,
        )


@lru_cache(maxsize=4096)
def _leibniz(b: int, a: int):
    """Expansion of d^b x^a = sum_v C(b,v) a!/(a-v)! x^(a-v) d^(b-v) as (v, coef) pairs."""
    out = []
    ff = 1
    for v in range(min(a, b) + 1):
        if v:
            ff *= a - v + 1
        out.append((v, comb(b, v) * ff))
    return tuple(out)


@lru_cache(maxsize=4096)
def _shift_power(k: int, J: int):
    """(s - k)^J = sum_l C(J,l) (-k)^(J-l) s^l as (l, coef) pairs."""
    return tuple((l, comb(J, l) * (-k) ** (J - l)) for l in range(J + 1))


def mono_mul(n: int, m1: tuple, m2: tuple):
    """Product of two canonical monomials as a list of (monomial, int) terms."""
    S = 2 * n
    overlap = [i for i in range(n) if m1[n + i] and m2[i]]
    k, J = m1[S + 1], m2[S]
    if not overlap and not (k and J):
        return [(tuple(a + b for a, b in zip(m1, m2)), 1)]
    base = [a + b for a, b in zip(m1, m2)]
    terms = [(base, 1)]
    for i in overlap:
        new = []
        for v, c in _leibniz(m1[n + i], m2[i]):
            for mm, cc in terms:
                t = list(mm)
                t[i] -= v
                t[n + i] -= v
                new.append((t, cc * c))
        terms = new
    if k and J:
        new = []
        for l, c in _shift_power(k, J):
            if not c:
                continue
            for mm, cc in terms:
                t = list(mm)
                t[S] += l - J
                new.append((t, cc * c))
        terms = new
    return [(tuple(t), c) for t, c in terms]


def mul_terms(n: int, A: Mapping, B: Mapping) -> dict:
    out: dict = {}
    for m1, c1 in A.items():
        for m2, c2 in B.items():
            for m, c in mono_mul(n, m1, m2):
                out[m] = out.get(m, 0) + c1 * c2 * c
    return {m: c for m, c in out.items() if c}


class PBWOperator:
    """Element of D<s,dt> stored as {canonical monomial: Fraction}."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PBWRing, terms: Mapping):
        self.ring = ring
        clean = {}
        for m, c in terms.items():
            c = as_rational(c)
            if c:
                m = tuple(m)
                if len(m) != ring.width:
                    raise StructuralError("monomial width does not match the ring")
                clean[m] = c
        self.terms = clean

    def _coerce(self, other):
        if isinstance(other, PBWOperator):
            if other.ring != self.ring:
                raise StructuralError("operators live in different rings")
            return other
        if isinstance(other, MultiPoly):
            return self.ring.from_poly(other)
        return PBWOperator(self.ring, {(0,) * self.ring.width: other})

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return PBWOperator(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return PBWOperator(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        return pbw_multiply(self, self._coerce(other))

    def __rmul__(self, other):
        return pbw_multiply(self._coerce(other), self)

    def __pow__(self, k: int):
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, PBWOperator):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self._coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def scale(self, c) -> "PBWOperator":
        c = as_rational(c)
        return PBWOperator(self.ring, {m: v * c for m, v in self.terms.items()})

    def variables_used(self) -> set:
        return {i for m in self.terms for i, e in enumerate(m) if e}

    # subring predicates
    def in_Ds(self) -> bool:
        return all(m[self.ring.DT] == 0 for m in self.terms)

    def in_D(self) -> bool:
        return all(m[self.ring.DT] == 0 and m[self.ring.S] == 0 for m in self.terms)

    def is_polynomial(self) -> bool:
        n = self.ring.n
        return all(not any(m[n:]) for m in self.terms)

    def is_in_s(self) -> bool:
        return all(not any(m[: self.ring.S]) and m[self.ring.DT] == 0 for m in self.terms)

    def leading(self, order: MonomialOrder):
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    def monic(self, order: MonomialOrder) -> "PBWOperator":
        _, c = self.leading(order)
        return self.scale(1 / c)

    def substitute_s(self, gamma) -> "PBWOperator":
        g = as_rational(gamma)
        S = self.ring.S
        out: Dict[tuple, Fraction] = {}
        for m, c in self.terms.items():
            if m[S]:
                c = c * g ** m[S]
                m = m[:S] + (0,) + m[S + 1:]
            out[m] = out.get(m, 0) + c
        return PBWOperator(self.ring, out)

    def to_multipoly(self) -> MultiPoly:
        if not self.is_polynomial():
            raise PreconditionError("operator involves d, s or dt")
        n = self.ring.n
        return MultiPoly({m[:n]: c for m, c in self.terms.items()}, self.ring.names)

    def to_s_unipoly(self):
        from .core import UniPoly

        if not self.is_in_s():
            raise PreconditionError("operator is not a polynomial in s alone")
        deg = max(m[self.ring.S] for m in self.terms)
        coeffs = [Fraction(0)] * (deg + 1)
        for m, c in self.terms.items():
            coeffs[m[self.ring.S]] = c
        return UniPoly(coeffs)

    def sorted_terms(self, order: MonomialOrder | None = None):
        keyf = order.key if order is not None else (lambda m: (sum(m), m))
        return sorted(self.terms.items(), key=lambda t: keyf(t[0]), reverse=True)

    def to_string(self, order: MonomialOrder | None = None) -> str:
        return format_terms(self.sorted_terms(order), self.ring.all_names)

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"PBWOperator({str(self)!r})"


def pbw_multiply(a: PBWOperator, b: PBWOperator) -> PBWOperator:
    if a.ring != b.ring:
        raise StructuralError("operators live in different rings")
    return PBWOperator(a.ring, mul_terms(a.ring.n, a.terms, b.terms))


# ---------------------------------------------------------------------------
# Formal action on f^s
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FsImage:
    """numerator * f^(s - shift)."""

    numerator: MultiPoly
    shift: int

    @property
    def is_zero(self) -> bool:
        return self.numerator.is_zero()


def apply_to_fs(p: PBWOperator, f: MultiPoly) -> FsImage:
    """Apply an operator of D[s] to the formal power f^s."""
    ring = p.ring
    if not p.in_Ds():
        raise PreconditionError("operator contains dt")
    if f.is_zero():
        raise PreconditionError("f is zero")
    if f.vars != ring.names:
        f = f.embed(ring.names) if set(f.vars) <= set(ring.names) else None
        if f is None:
            raise StructuralError("f is not a polynomial in the ring variables")
    n = ring.n
    vs = ring.names + ("s",)
    F = f.embed(vs)
    dF = [F.derivative(i) for i in range(n)]
    s = MultiPoly.variable("s", vs)
    one = MultiPoly.constant(1, vs)

    cache: Dict[tuple, tuple] = {(0,) * n: (one, 0)}

    def d_power(beta):
        if beta in cache:
            return cache[beta]
        i = next(k for k in range(n) if beta[k])
        prev = list(beta)
        prev[i] -= 1
        h, m = d_power(tuple(prev))
        out = (F * h.derivative(i) + (s - m) * h * dF[i], m + 1)
        cache[beta] = out
        return out

    pieces = []
    for mono, c in p.terms.items():
        alpha, beta, j = mono[:n], mono[n:2 * n], mono[2 * n]
        h, m = d_power(beta)
        mult = MultiPoly({tuple(alpha) + (j,): c}, vs)
        pieces.append((h * mult, m))
    N = max((m for _, m in pieces), default=0)
    num = MultiPoly.zero(vs)
    powers = {0: one}
    for h, m in pieces:
        k = N - m
        if k not in powers:
            powers[k] = F ** k
        num = num + h * powers[k]
    return FsImage(num, N)
