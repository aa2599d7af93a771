"""Acceptance suite.

Each test carries a ``criterion`` marker; conftest.py folds the outcomes into
one PASS/FAIL line per criterion.  Oracle values below are frozen literals:
root rows transcribed from the reference tables, and values derived by hand
(Milnor numbers from the singularity names, cohomology constants from the
printed linear system).
"""

import functools
import os
import time
from fractions import Fraction as Q

import pytest

from swhbf.annihilator import ann_fs, ann_fs_basis
from swhbf.bfunction import (
    certify_root,
    global_bfunction,
    global_reduced_bfunction,
    local_bfunction_swh,
    local_bfunction_via_support,
    poincare_polynomial,
    wh_bfunction_roots,
)
from swhbf.catalog import get_entry, load_catalog, specialize, verify_entry
from swhbf.cohomology import CohomClass, cohomology_solution_space, dual_names, solve_H_F0
from swhbf.core import WeightSystem
from swhbf.grammar import parse_poly
from swhbf.groebner import is_groebner
from swhbf.pbw import apply_to_fs

from test_core import test_order_axioms as _order_axioms
from test_core import test_weighted_order_axioms as _weighted_order_axioms
from test_pbw import test_ring_axioms as _ring_axioms

crit = pytest.mark.criterion


def over(den, *nums):
    return sorted(Q(-n, den) for n in nums)


NAMES = ["E18", "E19", "E20", "W17", "W18", "Z17", "Z18", "Z19", "Q16", "Q17", "Q18", "S16",
         "S17", "U16", "J16", "W15", "Z15", "Q14", "S14", "U14"]

# ---------------------------------------------------------------------------
# cached computations shared by the criteria and the property suite
# ---------------------------------------------------------------------------

_swh_cache = {}   # (label) -> (f, ws, LocalBFResult)
_gb_cache = []    # GroebnerBasis objects produced along the way
# Full Ann(f^s) bases in three variables take minutes to re-check pair by
# pair; the property suite re-checks these two and skips the other samples.
_FULL_ANN_CHECK = {("U16", (Q(1), Q(1))), ("Q16", (Q(1), Q(1)))}


@functools.lru_cache(maxsize=None)
def _ann(name, point):
    e = get_entry(name)
    f = specialize(e, point)
    G = ann_fs_basis(f, weights=e.weights)
    if f.nvars < 3 or (name, point) in _FULL_ANN_CHECK:
        _gb_cache.append(G)
    return f, G.generators


def _ann_gens(G):
    return [g for g in G if g.in_Ds()]


def swh(name, point):
    key = (name, point)
    if key not in _swh_cache:
        e = get_entry(name)
        f, gens = _ann(name, point)
        res = local_bfunction_swh(f, e.weights, ann=_ann_gens(gens))
        _gb_cache.extend(c.basis for c in res.certificates.values())
        _swh_cache[key] = (f, e.weights, res)
    return _swh_cache[key][2]


def toy_swh(text, names, d, w):
    key = (text, (d,) + tuple(w))
    if key not in _swh_cache:
        f = parse_poly(text, names)
        ws = WeightSystem(d, tuple(w))
        G = ann_fs_basis(f, weights=ws)
        _gb_cache.append(G)
        res = local_bfunction_swh(f, ws, ann=_ann_gens(G.generators))
        _gb_cache.extend(c.basis for c in res.certificates.values())
        _swh_cache[key] = (f, ws, res)
    return _swh_cache[key][2]


TOYS = [
    ("x^3 + y^2", ("x", "y"), 6, (2, 3)),
    ("x^2 + y^2", ("x", "y"), 2, (1, 1)),
    ("x^3 + y^4 + x^2*y^2", ("x", "y"), 12, (4, 3)),
    ("x^3 + y^5 + x*y^4", ("x", "y"), 15, (5, 3)),
    ("x^2*y + y^4", ("x", "y"), 8, (3, 2)),
    ("x^2 + y^3 + z^2", ("x", "y", "z"), 6, (3, 2, 3)),
]

# ---------------------------------------------------------------------------
# Tier 1
# ---------------------------------------------------------------------------

E18_F0_ROW = over(30, 13, 16, 19, 22, 23, 25, 26, 28, 29, 31, 32, 34, 35, 37, 38, 41, 44, 47)
U16_BST = over(15, 13, 16, 18, 19, 21, 22, 23, 24, 26, 27)
U16_ROWS = [U16_BST + over(15, 14, 17), U16_BST + over(15, 17, 29), U16_BST + over(15, 29, 32)]


@crit("1")
@pytest.mark.parametrize("name", NAMES)
def test_c1_weight_type_roots_match_f0_row(name):
    e = get_entry(name)
    row = e.strata[e.f0_stratum()].expected_roots
    assert set(wh_bfunction_roots(e.weights)) == set(row)


@crit("1")
def test_c1_printed_rows():
    assert len(E18_F0_ROW) == 18 and Q(-44, 30) in E18_F0_ROW and Q(-47, 30) in E18_F0_ROW
    assert wh_bfunction_roots(get_entry("E18").weights) == E18_F0_ROW
    assert wh_bfunction_roots(get_entry("U16").weights) == sorted(U16_ROWS[2])
    assert sorted(n for n in (e.name for e in load_catalog())) == sorted(NAMES)


MILNOR = {n: int(n[1:]) for n in NAMES}


@crit("2")
@pytest.mark.parametrize("name", NAMES)
def test_c2_poincare_at_one_is_milnor(name):
    assert poincare_polynomial(get_entry(name).weights)(1) == MILNOR[name]


@crit("3")
def test_c3_toy_pipeline():
    t0 = time.monotonic()
    cusp = parse_poly("x^3 + y^2", ("x", "y"))
    want = [Q(-7, 6), Q(-5, 6)]
    assert local_bfunction_via_support(cusp) == want
    assert toy_swh(*TOYS[0]).roots == want
    circle = parse_poly("x^2 + y^2", ("x", "y"))
    assert global_reduced_bfunction(circle) == [-1]
    assert global_bfunction(circle) == [-1, -1]
    assert global_bfunction(parse_poly("x", ("x",))) == [-1]
    assert time.monotonic() - t0 < 10


@crit("4")
@pytest.mark.parametrize("text,names", [
    ("x", ("x",)), ("x*y", ("x", "y")), ("x^2 + y^2", ("x", "y")),
    ("x^3 + y^2", ("x", "y")), ("x^3 + y^4", ("x", "y")),
])
def test_c4_annihilators_kill_f_s(text, names):
    f = parse_poly(text, names)
    gens = ann_fs(f)
    assert gens
    for a in gens:
        assert apply_to_fs(a, f).is_zero, a


@crit("4")
def test_c4_ring_axioms_1000():
    _ring_axioms()


@crit("4")
def test_c4_order_axioms_1000():
    _order_axioms()
    _weighted_order_axioms()


# cohomology regression: f = x^3 + y z^2 + y^7 + x y^5 + x z^2, i.e. Q16 at (1, 1)
XYZ = ("x", "y", "z")
DUAL = dual_names(XYZ)


def cls(text):
    """Parse a class written in xi, eta, zeta."""
    p = parse_poly(text, DUAL)
    return CohomClass(dict(p.terms), 3)


@functools.lru_cache(maxsize=None)
def _q16_cohomology():
    f, gens = _ann("Q16", (Q(1), Q(1)))
    ann = _ann_gens(gens)
    out = {}
    for g in (Q(-19, 21), Q(-4, 3)):
        cert = certify_root(ann, f, g)
        _gb_cache.append(cert.basis)
        out[g] = (cert, cohomology_solution_space(f, g, cert))
    return f, out


@crit("5")
def test_c5_H_F0_basis():
    f, out = _q16_cohomology()
    cert, _ = out[Q(-4, 3)]
    assert {str(p) for p in cert.polynomial_part} == {
        "x^2", "x*y", "x*z", "y*z", "z^2", "y^3 - 12*x"}
    G0 = solve_H_F0(cert.polynomial_part + [f] + f.gradient())
    assert [c.to_string(DUAL) for c in G0.classes] == [
        "1", "zeta", "eta", "eta^2", "eta^3 + 1/12*xi"]


@crit("5")
def test_c5_dimensions():
    _, out = _q16_cohomology()
    cert, B = out[Q(-19, 21)]
    assert {str(p) for p in cert.polynomial_part} == {"x", "y", "z"}
    assert B.dimension == 1 and B.contains(cls("1"))
    assert out[Q(-4, 3)][1].dimension == 2


# the constant c3 solves all three printed equations that involve it
C3 = Q(-20237, 165888)


@crit("5")
def test_c5_corrected_class_in_span():
    eqs = [(1064, 576, 41472, Q(20501, 4)), (184509, 75744, -62208, Q(17689, 6)),
           (75744, -20736, 1492992, 184509)]
    c1, c2 = Q(-1, 24), Q(-65, 1728)
    assert {-(a * c1 + b * c2 + k) / c for a, b, c, k in eqs} == {C3}
    B = _q16_cohomology()[1][Q(-4, 3)][1]
    assert B.contains(cls("zeta"))
    assert B.contains(cls(f"eta^3 + 1/12*xi - 1/24*eta^2 - 65/1728*eta + ({C3})"))


@crit("5")
@pytest.mark.xfail(strict=True, reason="the printed class takes c3 = 0, but the printed "
                   "linear system forces c3 = -20237/165888")
def test_c5_printed_class_in_span():
    B = _q16_cohomology()[1][Q(-4, 3)][1]
    assert B.contains(cls("eta^3 + 1/12*xi - 1/24*eta^2 - 65/1728*eta"))


# ---------------------------------------------------------------------------
# Tier 2
# ---------------------------------------------------------------------------

HOUR = 3600


@crit("6")
@pytest.mark.parametrize("point,row", [
    ((1, 1), 0), ((0, 1), 1), ((0, 0), 2), ((1, Q(-27, 256)), 0),
])
def test_c6_u16_local_rows(point, row):
    t0 = time.monotonic()
    res = swh("U16", tuple(Q(v) for v in point))
    assert res.roots == sorted(U16_ROWS[row])
    assert sum(res.dims.values()) == 16
    assert time.monotonic() - t0 < HOUR


@crit("6")
def test_c6_u16_off_origin_root():
    f, gens = _ann("U16", (Q(1), Q(-27, 256)))
    cert = certify_root(_ann_gens(gens), f, Q(-3, 2))
    _gb_cache.append(cert.basis)
    # s + 3/2 divides the global reduced b-function ...
    assert cert.is_factor
    # ... but its module lives at (-1024/243, 64/27, z^2 = -1048576/19683)
    assert not cert.origin_in_support
    assert {str(p) for p in cert.polynomial_part} == {
        "x + 1024/243", "y - 64/27", "z^2 + 1048576/19683"}
    assert Q(-3, 2) not in swh("U16", (Q(1), Q(-27, 256))).roots


S16_STRATA = [
    # sample, reduced basis is {1}, expected leading monomials of the polynomial part
    ((1, 1), False, {"x", "z", "y^2"}),
    ((1, Q(-27, 4)), False, {"x", "z", "y^2"}),
    ((0, 0), True, None),
    ((1, Q(6, 17)), False, {"x", "z", "y^2"}),
    ((1, -3), False, {"x", "z", "y^2"}),
    ((0, 1), False, {"x", "y", "z"}),
    ((1, 0), False, {"x", "z", "y^2"}),
]


def _leading_monomial(p):
    m = max(p.terms, key=lambda e: (sum(e), e))
    return str(parse_poly("*".join(f"{v}^{k}" for v, k in zip(p.vars, m) if k) or "1", p.vars))


@crit("7")
@pytest.mark.parametrize("point,unit,lms", S16_STRATA)
def test_c7_s16_certificates(point, unit, lms):
    f, gens = _ann("S16", tuple(Q(v) for v in point))
    cert = certify_root(_ann_gens(gens), f, Q(-19, 17))
    _gb_cache.append(cert.basis)
    assert cert.is_factor is not unit
    if unit:
        assert cert.basis.is_unit()
        return
    assert {_leading_monomial(p) for p in cert.polynomial_part} == lms
    assert cert.origin_in_support


Q16_GENERIC = over(21, 19, 22, 25, 26, 28, 29, 31, 32, 34, 35, 37, 38, 20, 23)


@crit("8")
def test_c8_q16_generic_row():
    res = swh("Q16", (Q(1), Q(1)))
    assert res.roots == Q16_GENERIC
    assert sum(res.dims.values()) == 16 == res.milnor
    assert res.dims[Q(-4, 3)] == 2 and res.dims[Q(-5, 3)] == 2


# ---------------------------------------------------------------------------
# Tier 3 (skip with SWHBF_TIER3=0)
# ---------------------------------------------------------------------------

TIER3_BUDGET = float(os.environ.get("SWHBF_TIER3_BUDGET", HOUR))


@crit("9")
@pytest.mark.tier3
@pytest.mark.parametrize("name", NAMES)
def test_c9_verify_entry(name):
    rep = verify_entry(name, budget=TIER3_BUDGET)
    bad = [(o.stratum, o.status, o.message) for o in rep.outcomes if o.status != "pass"]
    assert rep.f0_check and not bad, bad
    if name == "E19":
        assert [d["printed"] for d in rep.discrepancies] == ["-18/26"]
        assert [Q(r) for d in rep.discrepancies for r in d["recomputed"]] == [Q(-18, 21)]
    else:
        assert rep.discrepancies == []


# ---------------------------------------------------------------------------
# Property suite (always on); runs over everything cached above
# ---------------------------------------------------------------------------


def _all_swh():
    for t in TOYS:
        toy_swh(*t)
    swh("U16", (Q(1), Q(1)))
    swh("Q16", (Q(1), Q(1)))
    return list(_swh_cache.values())


@crit("P")
def test_p_local_results_are_square_free():
    for f, ws, res in _all_swh():
        assert len(set(res.roots)) == len(res.roots)
        assert set(res.dims) == set(res.roots) and min(res.dims.values()) >= 1
    # the origin is the only singular point here, so global reduced = local
    for text, names, d, w in TOYS:
        glob = global_reduced_bfunction(parse_poly(text, names))
        assert len(set(glob)) == len(glob)


@crit("P")
def test_p_local_inside_global_reduced():
    for text, names, d, w in TOYS:
        f = parse_poly(text, names)
        loc = toy_swh(text, names, d, w).roots
        assert set(loc) <= set(global_reduced_bfunction(f))
        assert local_bfunction_via_support(f) == loc


@crit("P")
def test_p_dims_add_up_to_milnor():
    for f, ws, res in _all_swh():
        assert sum(res.dims.values()) == res.milnor == poincare_polynomial(ws)(1)


def _lowering_closed(B, n):
    for c in B.classes:
        for i in range(n):
            low = {}
            for lam, v in c.terms.items():
                if lam[i]:
                    mm = list(lam)
                    mm[i] -= 1
                    low[tuple(mm)] = low.get(tuple(mm), 0) + v
            if not B.contains(CohomClass(low, n)):
                return False
    return True


@crit("P")
def test_p_H_F0_bases_are_lowering_closed():
    seen = 0
    for f, ws, res in _all_swh():
        for cert in res.certificates.values():
            if cert.origin_in_support:
                B = solve_H_F0(cert.polynomial_part + [f] + f.gradient())
                assert B.is_echelon() and _lowering_closed(B, f.nvars)
                seen += 1
    assert seen >= 30


@crit("P")
def test_p_every_basis_passes_buchberger_criterion():
    _all_swh()
    _q16_cohomology()
    assert len(_gb_cache) >= 60
    for G in _gb_cache:
        assert is_groebner(G.generators, G.order)
