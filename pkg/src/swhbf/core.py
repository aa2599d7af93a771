"""Exact rational polynomials, monomial orders and weighted homogeneity."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

import mpmath

from .errors import (
    InconsistencyError,
    InexactDivisionError,
    PreconditionError,
    StructuralError,
)

Rational = Fraction
Monomial = Tuple[int, ...]


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'p/q' string")
    return Fraction(value)


def format_rational(q: Fraction) -> str:
    q = as_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# Monomial orders
# ---------------------------------------------------------------------------

BASE_ORDERS = ("deglex", "degrevlex", "lex")


@dataclass(frozen=True)
class Block:
    """A group of variable indices, listed from highest to lowest priority.

    Optional positive ``weights`` (degree orders only) make the block compare
    weighted degree first, then fall back to the base order.
    """

    variables: Tuple[int, ...]
    base: str = "deglex"
    weights: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if self.base not in BASE_ORDERS:
            raise PreconditionError(f"unknown base order {self.base!r}")
        if not self.variables:
            raise PreconditionError("empty block")
        if self.weights is not None:
            if self.base == "lex":
                raise PreconditionError("weights need a degree order")
            if len(self.weights) != len(self.variables) or min(self.weights) < 1:
                raise PreconditionError("one positive weight per variable is required")


class MonomialOrder:
    """Block monomial order on exponent vectors of a fixed length.

    Earlier blocks dominate later ones.  Inside a block the exponents are
    compared by ``base`` using the block's variable priority.  Sort keys are
    cached, so an instance should be shared across a computation.
    """

    def __init__(self, blocks: Sequence[Block], nvars: int, names: Sequence[str] | None = None):
        seen = [i for b in blocks for i in b.variables]
        if sorted(seen) != list(range(nvars)):
            raise PreconditionError("every variable must occur in exactly one block")
        self.blocks = tuple(blocks)
        self.nvars = nvars
        self.names = tuple(names) if names is not None else tuple(f"v{i}" for i in range(nvars))
        self._block_of = {}
        for bi, b in enumerate(self.blocks):
            for v in b.variables:
                self._block_of[v] = bi
        self._cache: Dict[Monomial, tuple] = {}

    def key(self, m: Monomial) -> tuple:
        k = self._cache.get(m)
        if k is None:
            parts = []
            for b in self.blocks:
                exps = [m[i] for i in b.variables]
                if b.weights:
                    parts.append(sum(w * e for w, e in zip(b.weights, exps)))
                if b.base == "lex":
                    parts.extend(exps)
                elif b.base == "deglex":
                    parts.append(sum(exps))
                    parts.extend(exps)
                else:
                    parts.append(sum(exps))
                    parts.extend(-e for e in reversed(exps))
            k = tuple(parts)
            if len(self._cache) > 2_000_000:
                self._cache.clear()
            self._cache[m] = k
        return k

    def compare(self, m1: Monomial, m2: Monomial) -> int:
        if len(m1) != self.nvars or len(m2) != self.nvars:
            raise StructuralError("monomial length does not match the order")
        k1, k2 = self.key(m1), self.key(m2)
        return (k1 > k2) - (k1 < k2)

    def block_index(self, var: int) -> int:
        return self._block_of[var]

    def describe(self) -> str:
        out = []
        for b in self.blocks:
            ws = b.weights or (None,) * len(b.variables)
            vs = [self.names[i] + (f":{w}" if w else "") for i, w in zip(b.variables, ws)]
            out.append(f"{b.base}({','.join(vs)})")
        return " >> ".join(out)

    def __repr__(self):
        return f"MonomialOrder({self.describe()!r})"


def compare(m1: Monomial, m2: Monomial, order: MonomialOrder) -> int:
    """Return 1, 0 or -1 as ``m1`` is greater than, equal to or less than ``m2``."""
    return order.compare(m1, m2)


def parse_order(text: str, names: Sequence[str]) -> MonomialOrder:
    """Parse ``"deglex(dx,dy) >> deglex(y,x) >> lex(s)"``.

    Blocks are separated by ``>>``; each block is ``base(v1,v2,...)`` with
    variables listed from highest priority down.  ``v:w`` attaches a weight;
    either every variable of a block carries one or none does.
    """
    index = {name: i for i, name in enumerate(names)}
    blocks = []
    for raw in text.split(">>"):
        raw = raw.strip()
        if not raw.endswith(")") or "(" not in raw:
            raise PreconditionError(f"bad order block {raw!r}")
        base, inner = raw[:-1].split("(", 1)
        base = base.strip()
        vs = [v.strip() for v in inner.split(",") if v.strip()]
        ws = []
        for i, v in enumerate(vs):
            if ":" in v:
                v, w = (t.strip() for t in v.split(":", 1))
                try:
                    ws.append(int(w))
                except ValueError:
                    raise PreconditionError(f"bad weight {w!r} in order spec") from None
                vs[i] = v
        if ws and len(ws) != len(vs):
            raise PreconditionError(f"block {raw!r} mixes weighted and unweighted variables")
        try:
            idx = tuple(index[v] for v in vs)
        except KeyError as exc:
            raise PreconditionError(f"unknown variable {exc.args[0]!r} in order spec") from None
        blocks.append(Block(idx, base, tuple(ws) if ws else None))
    return MonomialOrder(blocks, len(names), names)


# ---------------------------------------------------------------------------
# Multivariate polynomials
# ---------------------------------------------------------------------------


def _clean(terms: Mapping[Monomial, Fraction]) -> Dict[Monomial, Fraction]:
    return {m: c for m, c in terms.items() if c}


class MultiPoly:
    """Polynomial with exact rational coefficients in named variables."""

    __slots__ = ("vars", "terms")

    def __init__(self, terms: Mapping[Monomial, object], variables: Sequence[str]):
        self.vars = tuple(variables)
        n = len(self.vars)
        clean = {}
        for m, c in terms.items():
            m = tuple(m)
            if len(m) != n:
                raise StructuralError(f"monomial {m} has wrong length for variables {self.vars}")
            c = as_rational(c)
            if c:
                clean[m] = clean.get(m, Fraction(0)) + c
        self.terms = _clean(clean)

    # constructors
    @classmethod
    def zero(cls, variables):
        return cls({}, variables)

    @classmethod
    def constant(cls, c, variables):
        return cls({(0,) * len(variables): c}, variables)

    @classmethod
    def variable(cls, name, variables):
        variables = tuple(variables)
        i = variables.index(name)
        m = [0] * len(variables)
        m[i] = 1
        return cls({tuple(m): 1}, variables)

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.vars != self.vars:
                raise StructuralError(f"variable mismatch {self.vars} vs {other.vars}")
            return other
        return MultiPoly.constant(other, self.vars)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return MultiPoly(out, self.vars)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({m: -c for m, c in self.terms.items()}, self.vars)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return MultiPoly(out, self.vars)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise PreconditionError("negative power")
        result = MultiPoly.constant(1, self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == MultiPoly.constant(other, self.vars)
        return NotImplemented

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def derivative(self, name_or_index) -> "MultiPoly":
        i = name_or_index if isinstance(name_or_index, int) else self.vars.index(name_or_index)
        out = {}
        for m, c in self.terms.items():
            if m[i]:
                mm = list(m)
                mm[i] -= 1
                out[tuple(mm)] = c * m[i]
        return MultiPoly(out, self.vars)

    def gradient(self):
        return [self.derivative(i) for i in range(self.nvars)]

    def evaluate(self, point: Sequence) -> Fraction:
        return evaluate(self, point)

    def substitute(self, assignment: Mapping[str, object]) -> "MultiPoly":
        """Substitute rationals for some variables and drop them from the ring."""
        keep = [i for i, v in enumerate(self.vars) if v not in assignment]
        vals = {self.vars.index(k): as_rational(v) for k, v in assignment.items()}
        out: Dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            for i, v in vals.items():
                if m[i]:
                    c = c * v ** m[i]
            if c:
                mm = tuple(m[i] for i in keep)
                out[mm] = out.get(mm, 0) + c
        return MultiPoly(out, [self.vars[i] for i in keep])

    def embed(self, variables: Sequence[str]) -> "MultiPoly":
        """Re-express in a ring whose variables include ours."""
        variables = tuple(variables)
        pos = [variables.index(v) for v in self.vars]
        out = {}
        for m, c in self.terms.items():
            mm = [0] * len(variables)
            for i, e in zip(pos, m):
                mm[i] = e
            out[tuple(mm)] = c
        return MultiPoly(out, variables)

    def leading_monomial(self, order: MonomialOrder) -> Monomial:
        return max(self.terms, key=order.key)

    def content_normalized(self) -> "MultiPoly":
        """Scale to a primitive integer polynomial with positive leading coefficient (lex)."""
        if not self.terms:
            return self
        den = reduce(math.lcm, (c.denominator for c in self.terms.values()), 1)
        ints = {m: int(c * den) for m, c in self.terms.items()}
        g = reduce(math.gcd, ints.values())
        lead = ints[max(ints)]
        if lead < 0:
            g = -g
        return MultiPoly({m: Fraction(c, g) for m, c in ints.items()}, self.vars)

    def sorted_terms(self, order: MonomialOrder | None = None):
        if order is None:
            keyf = lambda m: (sum(m), m)
        else:
            keyf = order.key
        return sorted(self.terms.items(), key=lambda t: keyf(t[0]), reverse=True)

    def __str__(self):
        return format_terms(self.sorted_terms(), self.vars)

    def __repr__(self):
        return f"MultiPoly({str(self)!r}, vars={self.vars})"


def _monomial_str(m: Monomial, names: Sequence[str]) -> str:
    parts = []
    for e, name in zip(m, names):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_terms(terms: Iterable[Tuple[Monomial, Fraction]], names: Sequence[str]) -> str:
    """Render terms in the CLI polynomial grammar (re-parseable)."""
    out = []
    for m, c in terms:
        mon = _monomial_str(m, names)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not mon:
            body = format_rational(a)
        elif a == 1:
            body = mon
        else:
            body = f"{format_rational(a)}*{mon}"
        if not out:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f" {sign} {body}")
    return "".join(out) if out else "0"


def evaluate(f: MultiPoly, point: Sequence) -> Fraction:
    if len(point) != f.nvars:
        raise StructuralError(f"point has {len(point)} coordinates, polynomial has {f.nvars} variables")
    pt = [as_rational(p) for p in point]
    total = Fraction(0)
    for m, c in f.terms.items():
        t = c
        for v, e in zip(pt, m):
            if e:
                t *= v ** e
        total += t
    return total


# ---------------------------------------------------------------------------
# Weighted homogeneity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightSystem:
    """Weight type (d; w1..wn)."""

    d: int
    w: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "w", tuple(int(x) for x in self.w))
        if not self.w or any(x < 1 for x in self.w):
            raise PreconditionError("weights must be positive integers")
        if self.d < max(self.w):
            raise PreconditionError("weighted degree d must be at least max(w)")

    @property
    def n(self) -> int:
        return len(self.w)

    def __str__(self):
        return f"({self.d};{','.join(map(str, self.w))})"


def weighted_degree(m: Monomial, ws: WeightSystem) -> int:
    if len(m) != len(ws.w):
        raise StructuralError(f"monomial length {len(m)} != number of weights {len(ws.w)}")
    return sum(a * w for a, w in zip(m, ws.w))


@dataclass(frozen=True)
class SWHSplit:
    f0: MultiPoly
    g: MultiPoly
    ok: bool


def classify_swh(f: MultiPoly, ws: WeightSystem) -> SWHSplit:
    """Split f into its weighted-degree-d part f0 and the rest g.

    ``ok`` is true when f0 is nonzero and every term of g lies strictly above
    degree d.  Whether f0 has an isolated singularity is not checked here.
    """
    if f.is_zero():
        raise PreconditionError("f is zero")
    if f.nvars != ws.n:
        raise StructuralError("weight vector length does not match the variables")
    if evaluate(f, [0] * f.nvars) != 0:
        raise PreconditionError("f does not vanish at the origin")
    f0 = {m: c for m, c in f.terms.items() if weighted_degree(m, ws) == ws.d}
    g = {m: c for m, c in f.terms.items() if weighted_degree(m, ws) != ws.d}
    ok = bool(f0) and all(weighted_degree(m, ws) > ws.d for m in g)
    return SWHSplit(MultiPoly(f0, f.vars), MultiPoly(g, f.vars), ok)


# ---------------------------------------------------------------------------
# Univariate polynomials
# ---------------------------------------------------------------------------


class UniPoly:
    """Univariate polynomial, coefficients in ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def monomial(cls, k: int, c=1):
        return cls([0] * k + [c])

    @classmethod
    def from_roots(cls, roots: Iterable, lead=1):
        p = cls([lead])
        for r in roots:
            p = p * cls([-as_rational(r), 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __add__(self, other):
        other = other if isinstance(other, UniPoly) else UniPoly([other])
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return UniPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = other if isinstance(other, UniPoly) else UniPoly([other])
        return self + (-other)

    def __mul__(self, other):
        other = other if isinstance(other, UniPoly) else UniPoly([other])
        if self.is_zero() or other.is_zero():
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, t):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def divmod(self, other: "UniPoly"):
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - other.degree, 1)
        lead = other.lead
        for k in range(len(rem) - len(other.coeffs), -1, -1):
            c = rem[k + other.degree] / lead
            q[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return UniPoly(q), UniPoly(rem[: other.degree] if other.degree > 0 else [])

    def derivative(self):
        return UniPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self):
        if self.is_zero():
            return self
        return UniPoly(c / self.lead for c in self.coeffs)

    def exponents(self):
        return [i for i, c in enumerate(self.coeffs) if c]

    def __str__(self):
        terms = [((k,), c) for k, c in enumerate(self.coeffs) if c]
        return format_terms(reversed(terms), ["t"])

    def __repr__(self):
        return f"UniPoly({str(self)!r})"


def exact_divide_unipoly(a: UniPoly, b: UniPoly) -> UniPoly:
    q, r = a.divmod(b)
    if not r.is_zero():
        raise InexactDivisionError(f"{a} is not divisible by {b}")
    return q


def unipoly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic()


def _primitive_int(p: UniPoly):
    den = reduce(math.lcm, (c.denominator for c in p.coeffs), 1)
    ints = [int(c * den) for c in p.coeffs]
    g = reduce(math.gcd, ints)
    if ints[-1] < 0:
        g = -g
    return [c // g for c in ints]


def rational_roots(b: UniPoly) -> list:
    """All rational roots of b, with multiplicity, in increasing order.

    Candidates p/q are located numerically on the square-free part and then
    accepted only if q divides the leading and p the trailing coefficient of
    the primitive integer form and the exact evaluation vanishes.  Raises
    InconsistencyError if a nonconstant factor without rational roots remains.
    """
    if b.is_zero():
        raise PreconditionError("zero polynomial has no finite root list")
    roots: list = []
    rest = b
    while rest.degree > 0 and rest.coeffs[0] == 0:
        roots.append(Fraction(0))
        rest = UniPoly(rest.coeffs[1:])
    if rest.degree <= 0:
        return sorted(roots)
    sqfree = rest.divmod(unipoly_gcd(rest, rest.derivative()))[0]
    ints = _primitive_int(sqfree)
    lead, trail = abs(ints[-1]), abs(ints[0])
    candidates = set()
    if sqfree.degree == 1:
        candidates.add(Fraction(-ints[0], ints[1]))
    else:
        with mpmath.workdps(60):
            approx = mpmath.polyroots(list(reversed(ints)), maxsteps=400, extraprec=400)
        for z in approx:
            if abs(mpmath.im(z)) > mpmath.mpf("1e-20") * max(1, abs(z)):
                continue
            candidates.add(Fraction(str(mpmath.nstr(mpmath.re(z), 50))).limit_denominator(lead))
    for r in sorted(candidates):
        if lead % r.denominator or (r.numerator and trail % abs(r.numerator)):
            continue
        lin = UniPoly([-r, 1])
        while rest.degree > 0:
            q, rem = rest.divmod(lin)
            if not rem.is_zero():
                break
            roots.append(r)
            rest = q
    if rest.degree > 0:
        raise InconsistencyError(
            "polynomial has a factor without rational roots",
            {"residual": str(rest), "roots": [format_rational(r) for r in roots]},
        )
    return sorted(roots)
