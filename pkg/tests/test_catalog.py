from fractions import Fraction as Q

import pytest

from swhbf import catalog
from swhbf.bfunction import poincare_polynomial, wh_bfunction_roots
from swhbf.catalog import (
    compare_result,
    get_entry,
    load_catalog,
    parse_catalog,
    specialize,
    stratum_member,
    verify_entry,
)
from swhbf.core import classify_swh
from swhbf.errors import PreconditionError, StructuralError
from swhbf.grammar import parse_poly

NAMES = ["E18", "E19", "E20", "W17", "W18", "Z17", "Z18", "Z19", "Q16", "Q17", "Q18",
         "S16", "S17", "U16", "J16", "W15", "Z15", "Q14", "S14", "U14"]

TOY = """
[catalog]
format = swhbf-catalog
version = 1

[A2]
vars = x,y
template = x^3+y^2+u1*x^2*y+u2*x^4
weights = 6;2,3
constraint =
bst = -5/6 -7/6
strata = 2

[A2.1]
label = C^2 \\ V(u1)
excluded = u1
dims = -5/6:1 -7/6:1
samples = 1,1; 2,0

[A2.2]
label = V(u1)
vanishing = u1
samples = 0,0; 0,3
"""


def test_packaged_catalog_has_twenty_entries():
    names = [e.name for e in load_catalog()]
    assert sorted(names) == sorted(NAMES)


@pytest.mark.parametrize("name", NAMES)
def test_entry_invariants(name):
    e = get_entry(name)
    assert poincare_polynomial(e.weights)(1) == e.milnor
    f0 = e.strata[e.f0_stratum()]
    assert set(wh_bfunction_roots(e.weights)) == set(f0.expected_roots)
    for st in e.strata:
        for pt in st.sample_points:
            assert stratum_member(pt, st, e.constraint)
            assert classify_swh(specialize(e, pt), e.weights).ok


def test_only_e19_has_a_printed_discrepancy():
    found = {e.name: e.discrepancies() for e in load_catalog() if e.discrepancies()}
    assert list(found) == ["E19"]
    (d,) = found["E19"]
    assert d["printed"] == "-18/26"
    assert get_entry("E19").corrections == {Q(-18, 26): Q(-18, 21)}
    assert Q(-18, 21) in get_entry("E19").bst


def test_stratum_membership_semantics():
    e = get_entry("U16")
    generic, line, origin = e.strata
    assert stratum_member((1, 1), generic)
    assert not stratum_member((0, 1), generic)
    assert stratum_member((0, 1), line) and not stratum_member((0, 0), line)
    assert stratum_member((0, 0), origin)
    assert e.f0_stratum() == 2


def test_modulus_constraint_is_excluded():
    e = get_entry("J16")
    assert e.constraint is not None
    bad = [p for p in [(Q(a), Q(b)) for a in range(-3, 4) for b in range(-3, 4)]
           if e.constraint.evaluate(p) == 0]
    for p in bad:
        assert not any(stratum_member(p, st, e.constraint) for st in e.strata)


def test_parse_catalog_rejects_bad_input():
    with pytest.raises(StructuralError):
        parse_catalog(TOY.replace("version = 1", "version = 9"))
    with pytest.raises(StructuralError):
        parse_catalog(TOY.replace("samples = 0,0; 0,3", "samples = 1,1"))
    with pytest.raises(StructuralError):
        parse_catalog(TOY.replace("u2*x^4", "u2*x*y"))


def test_compare_result_statuses():
    (e,) = parse_catalog(TOY)
    st = e.strata[0]
    ok = compare_result(st, [Q(-7, 6), Q(-5, 6)], {Q(-7, 6): 1, Q(-5, 6): 1})
    assert ok[0] == "pass"
    assert compare_result(st, [Q(-7, 6)], {Q(-7, 6): 1})[0] == "root-mismatch"
    assert compare_result(st, [Q(-7, 6), Q(-5, 6)], {Q(-7, 6): 2, Q(-5, 6): 1})[0] == "dim-mismatch"


@pytest.fixture
def toy_catalog(monkeypatch):
    monkeypatch.setitem(catalog._CACHE, "<packaged>", parse_catalog(TOY))


def test_verify_entry_on_toy_family(toy_catalog):
    rep = verify_entry("A2")
    assert rep.passed and rep.f0_check and not rep.discrepancies
    assert len(rep.outcomes) == 4
    assert rep.to_dict()["samples"][0]["roots"] == [{"num": -7, "den": 6}, {"num": -5, "den": 6}]
    rep = verify_entry("A2", strata=[2], samples=[(0, 5)])
    assert [o.point for o in rep.outcomes] == [(0, 5)]
    with pytest.raises(PreconditionError):
        verify_entry("A2", strata=[3])
    with pytest.raises(PreconditionError):
        verify_entry("A2", strata=[1], samples=[(0, 1)])
    with pytest.raises(PreconditionError):
        verify_entry("B7")


def test_verify_records_resource_errors(toy_catalog):
    rep = verify_entry("A2", strata=[1], budget=1e-9)
    assert {o.status for o in rep.outcomes} == {"resource-error"}
    assert not rep.passed


def test_specialize():
    f = specialize(get_entry("U16"), (1, Q(-27, 256)))
    assert f == parse_poly("x^3+x*z^2+y^5+y^2*z^2-27/256*y^3*z^2", ("x", "y", "z"))
    with pytest.raises(PreconditionError):
        specialize(get_entry("U16"), (1,))
