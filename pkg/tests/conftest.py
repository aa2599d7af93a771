"""Shared pytest hooks.

Tests tagged ``@pytest.mark.criterion("N")`` are grouped, and the terminal
summary prints one PASS/FAIL line per criterion.  The slow tier 3 sweep
can be skipped with SWHBF_TIER3=0.
"""

import os
from collections import OrderedDict

import pytest

TIER3 = os.environ.get("SWHBF_TIER3", "1") != "0"

# criterion id -> (description, tolerance)
CRITERIA = OrderedDict([
    ("1", ("weight-type roots equal the f0-stratum row for all 20 entries", "exact set equality")),
    ("2", ("P(1) equals the Milnor number for all 20 entries", "exact")),
    ("3", ("toy pipeline: cusp, x^2+y^2, x", "exact; < 10 s")),
    ("4", ("annihilator zero test, ring and order axioms (1000 cases each)", "exact")),
    ("5", ("local cohomology regressions for x^3+yz^2+y^7+xy^5+xz^2", "exact span comparison")),
    ("6", ("U16 pipeline at (1,1), (0,1), (0,0), (1,-27/256)", "exact; <= 1 h per case")),
    ("7", ("S16 certification of -19/17 on all seven strata", "exact; <= 1 h per case")),
    ("8", ("Q16 at (1,1): roots and sum of dims", "exact; <= 1 h per case")),
    ("9", ("verify_entry over every entry and stratum", "exact; per-sample budget")),
    ("P", ("property suite", "exact")),
])

_outcomes = {}


def pytest_collection_modifyitems(config, items):
    skip3 = pytest.mark.skip(reason="tier 3 disabled by SWHBF_TIER3=0")
    for item in items:
        if "tier3" in item.keywords and not TIER3:
            item.add_marker(skip3)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    rep = (yield).get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    cid = str(mark.args[0])
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        if hasattr(rep, "wasxfail"):
            state = "xfail"
        elif rep.skipped:
            state = "skip"
        else:
            state = "pass" if rep.passed else "fail"
        _outcomes.setdefault(cid, []).append((item.name, state))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for cid, (desc, tol) in CRITERIA.items():
        got = _outcomes.get(cid)
        if not got:
            continue
        states = {s for _, s in got}
        if states == {"skip"}:
            verdict = "SKIP"
        elif states <= {"pass", "skip"}:
            verdict = "PASS"
        else:
            verdict = "FAIL"
        tr.write_line(f"criterion {cid}: {verdict}  {desc}  [tolerance: {tol}]")
        for name, s in got:
            if s in ("fail", "xfail"):
                note = " (known, see xfail reason)" if s == "xfail" else ""
                tr.write_line(f"    {s}: {name}{note}")
