from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swhbf.core import MultiPoly
from swhbf.errors import PreconditionError, StructuralError
from swhbf.grammar import parse_operator, parse_poly
from swhbf.pbw import PBWOperator, PBWRing, apply_to_fs

R = PBWRing(("x", "y"))
W = R.width


def op(text, ring=R):
    return parse_operator(text, ring)


def test_layout_and_generators():
    assert R.all_names == ("x", "y", "dx", "dy", "s", "dt")
    assert R.S == 4 and R.DT == 5
    with pytest.raises(PreconditionError):
        PBWRing(("x", "x"))
    with pytest.raises(PreconditionError):
        PBWRing(("x", "dx"))


def test_defining_relations():
    x, dx, y, dy, s, dt = (R.gen(v) for v in ("x", "dx", "y", "dy", "s", "dt"))
    assert dx * x - x * dx == 1
    assert dy * x == x * dy
    assert dt * s - s * dt == -dt
    assert s * x == x * s and dt * dx == dx * dt
    assert (dx ** 3) * (x ** 2) == op("x^2*dx^3 + 6*x*dx^2 + 6*dx")
    assert (dt ** 2) * (s ** 2) == op("s^2*dt^2 - 4*s*dt^2 + 4*dt^2")


def test_subring_predicates_and_conversions():
    a = op("x*dx + s^2 - 1")
    assert a.in_Ds() and not a.in_D() and not a.is_polynomial()
    assert a.substitute_s(Q(1, 2)) == op("x*dx - 3/4")
    assert op("s^2 - 1").to_s_unipoly().coeffs == (-1, 0, 1)
    assert op("x^2 - y").to_multipoly() == parse_poly("x^2 - y", ("x", "y"))
    with pytest.raises(PreconditionError):
        a.to_multipoly()
    with pytest.raises(StructuralError):
        a + PBWRing(("x",)).gen("x")


# --- random operators --------------------------------------------------------

mono = st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2), st.integers(0, 2),
                 st.integers(0, 2), st.integers(0, 2))
coef = st.integers(-3, 3).filter(bool)
operators = st.dictionaries(mono, coef, max_size=3).map(lambda t: PBWOperator(R, t))


@settings(max_examples=1000, deadline=None)
@given(operators, operators, operators)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c
    assert a * R.one() == a == R.one() * a
    assert a - a == 0


# --- independent oracle: the action on C[x, y, t] ----------------------------
# x acts by multiplication, dx by d/dx, dt by d/dt and s by -(d/dt) t.

TV = ("x", "y", "t")


def _act(p: PBWOperator, h: MultiPoly) -> MultiPoly:
    t = MultiPoly.variable("t", TV)
    total = MultiPoly.zero(TV)
    for m, c in p.terms.items():
        g = h
        for _ in range(m[5]):
            g = g.derivative("t")
        for _ in range(m[4]):
            g = -(t * g).derivative("t")
        for i, v in enumerate(("x", "y")):
            for _ in range(m[2 + i]):
                g = g.derivative(v)
        for i, v in enumerate(("x", "y")):
            g = g * MultiPoly.variable(v, TV) ** m[i]
        total = total + g * c
    return total


polys = st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)),
                        coef, min_size=1, max_size=4).map(lambda t: MultiPoly(t, TV))


@settings(max_examples=200, deadline=None)
@given(operators, operators, polys)
def test_product_matches_composition(a, b, h):
    assert _act(a * b, h) == _act(a, _act(b, h))


def test_apply_to_fs_known_values():
    f = parse_poly("x^2 + y^2", ("x", "y"))
    # (x dx + y dy - 2 s) f^s = 0
    assert apply_to_fs(op("x*dx + y*dy - 2*s"), f).is_zero
    # dx f^s = 2 s x f^(s-1)
    img = apply_to_fs(op("dx"), f)
    assert img.shift == 1
    assert img.numerator == parse_poly("2*s*x", ("x", "y", "s"))
    with pytest.raises(PreconditionError):
        apply_to_fs(op("dt"), f)


def test_weighted_bfunction_order():
    from swhbf.core import WeightSystem, compare
    o = R.weighted_bfunction_order(WeightSystem(6, (2, 3)))
    assert o.describe() == "lex(dt) >> deglex(dx,dy) >> degrevlex(x:2,y:3) >> lex(s)"
    # any d beats any x, and x^3 (weight 6) beats y (weight 3)
    assert compare((0, 0, 1, 0, 0, 0), (9, 9, 0, 0, 9, 0), o) == 1
    assert compare((3, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0), o) == 1
    with pytest.raises(PreconditionError):
        R.weighted_bfunction_order(WeightSystem(6, (2, 3, 1)))
