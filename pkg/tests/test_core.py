from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swhbf.core import (
    Block,
    MonomialOrder,
    MultiPoly,
    UniPoly,
    WeightSystem,
    as_rational,
    classify_swh,
    compare,
    exact_divide_unipoly,
    format_rational,
    parse_order,
    rational_roots,
)
from swhbf.errors import (
    InconsistencyError,
    InexactDivisionError,
    PreconditionError,
    StructuralError,
)
from swhbf.grammar import parse_poly

XY = ("x", "y")


def P(text, names=XY):
    return parse_poly(text, names)


def test_rational_helpers():
    assert as_rational("3/6") == Q(1, 2)
    assert as_rational(2) == Q(2)
    assert format_rational(Q(-13, 30)) == "-13/30"
    assert format_rational(Q(4)) == "4"


def test_multipoly_arithmetic():
    f = P("x^3 + y^2")
    g = P("x - y")
    assert f + g == P("x^3+y^2+x-y")
    assert (f * g) == P("x^4 - x^3*y + x*y^2 - y^3")
    assert g ** 3 == P("(x-y)^3")
    assert f.derivative("x") == P("3*x^2")
    assert f.gradient() == [P("3*x^2"), P("2*y")]
    assert f.evaluate((1, 2)) == 5
    assert (f - f).is_zero()
    assert P("7").is_constant()


def test_multipoly_substitute_and_embed():
    f = parse_poly("x^3 + u1*y^2*x + u2", ("x", "y", "u1", "u2"))
    g = f.substitute({"u1": 2, "u2": 0})
    assert g.vars == XY
    assert g == P("x^3 + 2*x*y^2")
    h = P("x*y").embed(("x", "y", "z"))
    assert h.vars == ("x", "y", "z") and h.terms == {(1, 1, 0): 1}


def test_multipoly_var_mismatch():
    with pytest.raises(StructuralError):
        P("x") + parse_poly("x", ("x", "z"))
    with pytest.raises(StructuralError):
        MultiPoly({(1,): 1}, XY)


def test_parse_order_and_describe():
    names = ("x", "y", "dx", "dy", "s", "dt")
    o = parse_order("lex(dt) >> deglex(dx,dy) >> degrevlex(x,y) >> lex(s)", names)
    assert o.describe() == "lex(dt) >> deglex(dx,dy) >> degrevlex(x,y) >> lex(s)"
    assert o.block_index(5) == 0 and o.block_index(4) == 3
    # dt beats any amount of lower-block material
    assert compare((0, 0, 0, 0, 0, 1), (9, 9, 9, 9, 9, 0), o) == 1
    with pytest.raises(PreconditionError):
        parse_order("lex(dt) >> deglex(dx)", names)
    with pytest.raises(PreconditionError):
        parse_order("foo(x,y,dx,dy,s,dt)", names)
    with pytest.raises(PreconditionError):
        parse_order("lex(q,y,dx,dy,s,dt)", names)


def test_base_orders_small_cases():
    lex = MonomialOrder([Block((0, 1, 2), "lex")], 3)
    dl = MonomialOrder([Block((0, 1, 2), "deglex")], 3)
    drl = MonomialOrder([Block((0, 1, 2), "degrevlex")], 3)
    a, b = (1, 0, 2), (0, 3, 0)
    assert compare(a, b, lex) == 1
    assert compare(a, b, dl) == 1
    # x z^2 vs y^3 under degrevlex: last variable z penalises a
    assert compare(a, b, drl) == -1
    assert compare((2, 0, 0), (1, 1, 0), drl) == 1
    assert compare((1, 1, 0), (1, 0, 1), drl) == 1
    with pytest.raises(StructuralError):
        lex.compare((1, 0), (0, 1, 0))


# --- order axioms on random block orders -----------------------------------

N = 5


@st.composite
def block_orders(draw):
    perm = draw(st.permutations(range(N)))
    cuts = sorted(draw(st.sets(st.integers(1, N - 1), max_size=N - 1)))
    bounds = [0] + cuts + [N]
    blocks = [Block(tuple(perm[a:b]), draw(st.sampled_from(["lex", "deglex", "degrevlex"])))
              for a, b in zip(bounds, bounds[1:])]
    return MonomialOrder(blocks, N)


monos = st.tuples(*[st.integers(0, 6)] * N)


@settings(max_examples=1000, deadline=None)
@given(block_orders(), monos, monos, monos)
def test_order_axioms(o, a, b, c):
    # total, antisymmetric
    ab = compare(a, b, o)
    assert ab == -compare(b, a, o)
    assert (ab == 0) == (a == b)
    # transitive
    if ab >= 0 and compare(b, c, o) >= 0:
        assert compare(a, c, o) >= 0
    # multiplicative
    add = lambda u, v: tuple(x + y for x, y in zip(u, v))
    assert compare(add(a, c), add(b, c), o) == ab
    # well-order: 1 is the smallest monomial
    assert compare(a, (0,) * N, o) >= 0


def test_weight_system_and_split():
    ws = WeightSystem(6, (2, 3))
    assert ws.n == 2 and str(ws) == "(6;2,3)"
    sp = classify_swh(P("x^3 + y^2 + x^2*y^2"), ws)
    assert sp.ok and sp.f0 == P("x^3+y^2") and sp.g == P("x^2*y^2")
    assert not classify_swh(P("x^3 + y^2 + x*y"), ws).ok
    with pytest.raises(PreconditionError):
        classify_swh(P("x^3 + y^2 + 1"), ws)
    with pytest.raises(PreconditionError):
        WeightSystem(3, (0, 1))
    with pytest.raises(StructuralError):
        classify_swh(P("x^3"), WeightSystem(6, (2, 3, 1)))


def test_unipoly_division_and_roots():
    p = UniPoly.from_roots([Q(-5, 6), Q(-7, 6), -1, -1])
    assert p.degree == 4
    assert rational_roots(p) == [Q(-7, 6), -1, -1, Q(-5, 6)]
    q = exact_divide_unipoly(p, UniPoly([1, 1]))
    assert rational_roots(q) == [Q(-7, 6), -1, Q(-5, 6)]
    with pytest.raises(InexactDivisionError):
        exact_divide_unipoly(p, UniPoly([3, 1]))
    with pytest.raises(InconsistencyError):
        rational_roots(UniPoly([-2, 0, 1]))
    assert rational_roots(UniPoly([0, 0, 1])) == [0, 0]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.fractions(min_value=-3, max_value=0, max_denominator=40), min_size=1, max_size=6))
def test_rational_roots_recovers_products(roots):
    p = UniPoly.from_roots(roots, lead=7)
    assert rational_roots(p) == sorted(roots)


def test_weighted_block_parse_and_compare():
    names = ("x", "y", "dx", "dy", "s", "dt")
    o = parse_order("lex(dt) >> degrevlex(dx:4,dy:3,x:2,y:3,s:6)", names)
    assert o.describe() == "lex(dt) >> degrevlex(dx:4,dy:3,x:2,y:3,s:6)"
    # weighted degree first: y^3 (9) above x (2)
    assert compare((0, 3, 0, 0, 0, 0), (1, 0, 0, 0, 0, 0), o) == 1
    # x^3, y^2 and s all weigh 6; reverse lex breaks the ties
    assert compare((3, 0, 0, 0, 0, 0), (0, 2, 0, 0, 0, 0), o) == 1
    assert compare((0, 0, 0, 0, 1, 0), (3, 0, 0, 0, 0, 0), o) == -1
    assert o.key((3, 0, 0, 0, 0, 0))[:2] == (0, 6)
    with pytest.raises(PreconditionError):
        parse_order("lex(dt) >> degrevlex(dx:4,dy,x,y,s)", names)
    with pytest.raises(PreconditionError):
        parse_order("lex(dt:2) >> degrevlex(dx,dy,x,y,s)", names)
    with pytest.raises(PreconditionError):
        parse_order("lex(dt) >> degrevlex(dx:0,dy:1,x:1,y:1,s:1)", names)


@st.composite
def weighted_orders(draw):
    perm = draw(st.permutations(range(N)))
    cut = draw(st.integers(1, N - 1))
    ws = tuple(draw(st.integers(1, 9)) for _ in range(N - cut))
    kind = draw(st.sampled_from(["deglex", "degrevlex"]))
    return MonomialOrder([Block(tuple(perm[:cut]), "lex"),
                          Block(tuple(perm[cut:]), kind, ws)], N)


@settings(max_examples=300, deadline=None)
@given(weighted_orders(), monos, monos, monos)
def test_weighted_order_axioms(o, a, b, c):
    test_order_axioms.hypothesis.inner_test(o, a, b, c)
