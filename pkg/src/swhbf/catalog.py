"""Catalog of inner modality 2 singularities with expected local b-functions.

The data lives in ``data/catalog.ini``.  Each entry carries a two-parameter
template, its weight type, the parameter strata and the expected roots of
the local reduced b-function on every stratum.
"""

from __future__ import annotations

import configparser
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Dict, List, Optional, Sequence, Tuple

from .bfunction import local_bfunction_swh, wh_bfunction_roots
from .core import MultiPoly, WeightSystem, as_rational, classify_swh, format_rational
from .errors import (
    InconsistencyError,
    PreconditionError,
    ResourceError,
    StructuralError,
    SwhbfError,
)
from .grammar import parse_poly, parse_rational
from .groebner import Limits

log = logging.getLogger(__name__)

PARAMS = ("u1", "u2")
CATALOG_FORMAT = "swhbf-catalog"
CATALOG_VERSION = 1


@dataclass
class StratumSpec:
    label: str
    vanishing: List[MultiPoly]
    excluded: List[MultiPoly]
    expected_roots: List[Fraction]
    sample_points: List[Tuple[Fraction, ...]]
    expected_dims: Dict[Fraction, int] = field(default_factory=dict)
    extra: List[Fraction] = field(default_factory=list)


@dataclass
class CatalogEntry:
    name: str
    template: MultiPoly  # in variables + (u1, u2)
    variables: Tuple[str, ...]
    weights: WeightSystem
    constraint: Optional[MultiPoly]
    strata: List[StratumSpec]
    bst: List[Fraction]
    bst_printed: List[str]  # verbatim tokens
    corrections: Dict[Fraction, Fraction] = field(default_factory=dict)

    @property
    def milnor(self) -> int:
        return int(self.name[1:])

    def f0_stratum(self) -> int:
        """Index of the stratum on which f equals its weighted homogeneous part."""
        for i, st in enumerate(self.strata):
            if stratum_member((0, 0), st, self.constraint):
                return i
        raise InconsistencyError(f"{self.name}: no stratum through u = (0, 0)")

    def discrepancies(self) -> List[dict]:
        """Printed b_st values that differ from the weight-type recomputation."""
        i = self.f0_stratum()
        recomputed = sorted(set(wh_bfunction_roots(self.weights)) - set(self.strata[i].extra))
        printed = [parse_rational(tok) for tok in self.bst_printed]
        out = []
        for tok, r in zip(self.bst_printed, printed):
            if r not in recomputed:
                fix = [c for c in recomputed if c not in printed]
                out.append({"entry": self.name, "printed": tok,
                            "recomputed": [format_rational(c) for c in fix]})
        return out


def _roots(text: str) -> List[Fraction]:
    return [parse_rational(tok) for tok in text.split()]


def _poly_list(text: str, names) -> List[MultiPoly]:
    return [parse_poly(p, names) for p in text.split(";") if p.strip()]


def _points(text: str) -> List[Tuple[Fraction, ...]]:
    pts = []
    for chunk in text.split(";"):
        if chunk.strip():
            pts.append(tuple(parse_rational(v) for v in chunk.split(",")))
    return pts


def _dims(text: str) -> Dict[Fraction, int]:
    out = {}
    for tok in text.split():
        r, _, d = tok.rpartition(":")
        out[parse_rational(r)] = int(d)
    return out


def _weights(text: str) -> WeightSystem:
    d, _, w = text.partition(";")
    return WeightSystem(int(d), tuple(int(x) for x in w.split(",")))


def parse_catalog(text: str) -> List[CatalogEntry]:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    cp.read_string(text)
    meta = cp["catalog"]
    if meta.get("format") != CATALOG_FORMAT or int(meta.get("version", 0)) != CATALOG_VERSION:
        raise StructuralError("unsupported catalog format or version")
    entries = []
    for name in cp.sections():
        if name == "catalog" or "." in name:
            continue
        sec = cp[name]
        variables = tuple(v.strip() for v in sec["vars"].split(","))
        template = parse_poly(sec["template"], variables + PARAMS)
        ws = _weights(sec["weights"])
        cons_text = sec.get("constraint", "").strip()
        constraint = parse_poly(cons_text, PARAMS) if cons_text else None
        printed = sec["bst"].split()
        corrections = {}
        for item in sec.get("corrections", "").split(";"):
            if item.strip():
                a, _, b = item.partition("->")
                corrections[parse_rational(a)] = parse_rational(b)
        bst = sorted({corrections.get(r, r) for r in map(parse_rational, printed)})
        strata = []
        for i in range(1, int(sec["strata"]) + 1):
            st = cp[f"{name}.{i}"]
            extra = _roots(st.get("extra", ""))
            strata.append(StratumSpec(
                label=st["label"],
                vanishing=_poly_list(st.get("vanishing", ""), PARAMS),
                excluded=_poly_list(st.get("excluded", ""), PARAMS),
                expected_roots=sorted(set(bst) | set(extra)),
                sample_points=_points(st["samples"]),
                expected_dims=_dims(st.get("dims", "")),
                extra=extra,
            ))
        entries.append(CatalogEntry(name, template, variables, ws, constraint, strata, bst,
                                    printed, corrections))
    for e in entries:
        validate_entry(e)
    return entries


_CACHE: Dict[str, List[CatalogEntry]] = {}


def load_catalog(path: str | None = None) -> List[CatalogEntry]:
    """All catalog entries (the packaged file unless ``path`` is given)."""
    key = path or "<packaged>"
    if key not in _CACHE:
        if path is None:
            text = resources.files("swhbf").joinpath("data/catalog.ini").read_text()
        else:
            with open(path) as fh:
                text = fh.read()
        _CACHE[key] = parse_catalog(text)
    return list(_CACHE[key])


def get_entry(name: str) -> CatalogEntry:
    for e in load_catalog():
        if e.name == name:
            return e
    raise PreconditionError(f"no catalog entry named {name!r}")


def specialize(entry: CatalogEntry, point: Sequence) -> MultiPoly:
    if len(point) != len(PARAMS):
        raise PreconditionError(f"expected {len(PARAMS)} parameter values")
    sub = {p: as_rational(v) for p, v in zip(PARAMS, point)}
    return entry.template.substitute(sub).embed(entry.variables)


def _in_variety(point, polys) -> bool:
    return all(p.evaluate(point) == 0 for p in polys)


def stratum_member(point: Sequence, stratum: StratumSpec, constraint: MultiPoly | None = None) -> bool:
    """V(vanishing) minus V(excluded), avoiding the modality constraint's zero set.

    A point leaves the stratum only when every excluded polynomial vanishes
    there (it lies in V(excluded)).
    """
    point = tuple(as_rational(v) for v in point)
    if not _in_variety(point, stratum.vanishing):
        return False
    if stratum.excluded and _in_variety(point, stratum.excluded):
        return False
    if constraint is not None and constraint.evaluate(point) == 0:
        return False
    return True


def validate_entry(e: CatalogEntry) -> None:
    """Load-time invariants: weight type, specialisations and sample membership."""
    if len(e.weights.w) != len(e.variables):
        raise StructuralError(f"{e.name}: weight vector length differs from the variables")
    for i, st in enumerate(e.strata):
        if not st.sample_points:
            raise StructuralError(f"{e.name} stratum {i + 1} has no sample point")
        for pt in st.sample_points:
            if not stratum_member(pt, st, e.constraint):
                raise StructuralError(f"{e.name}: sample {pt} is not in stratum {st.label}")
            f = specialize(e, pt)
            if not classify_swh(f, e.weights).ok:
                raise StructuralError(f"{e.name}: sample {pt} is not semi-weighted homogeneous")


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


@dataclass
class SampleOutcome:
    stratum: int
    label: str
    point: Tuple[Fraction, ...]
    status: str  # pass | root-mismatch | dim-mismatch | resource-error | error
    roots: List[Fraction] = field(default_factory=list)
    dims: Dict[Fraction, int] = field(default_factory=dict)
    missing: List[Fraction] = field(default_factory=list)
    unexpected: List[Fraction] = field(default_factory=list)
    dim_diffs: Dict[Fraction, Tuple[int, Optional[int]]] = field(default_factory=dict)
    milnor: Optional[int] = None
    seconds: float = 0.0
    message: str = ""

    def to_dict(self) -> dict:
        fr = format_rational
        return {
            "stratum": self.stratum,
            "label": self.label,
            "point": [fr(v) for v in self.point],
            "status": self.status,
            "roots": [{"num": r.numerator, "den": r.denominator} for r in self.roots],
            "dims": {fr(k): v for k, v in self.dims.items()},
            "missing": [fr(r) for r in self.missing],
            "unexpected": [fr(r) for r in self.unexpected],
            "dim_diffs": {fr(k): list(v) for k, v in self.dim_diffs.items()},
            "milnor": self.milnor,
            "seconds": round(self.seconds, 3),
            "message": self.message,
        }


@dataclass
class VerificationReport:
    entry: str
    outcomes: List[SampleOutcome]
    f0_check: bool
    discrepancies: List[dict]
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.f0_check and all(o.status == "pass" for o in self.outcomes)

    def to_dict(self) -> dict:
        return {
            "entry": self.entry,
            "passed": self.passed,
            "f0_check": self.f0_check,
            "discrepancies": self.discrepancies,
            "samples": [o.to_dict() for o in self.outcomes],
            "seconds": round(self.seconds, 3),
        }


def compare_result(st: StratumSpec, roots: Sequence[Fraction], dims: Dict[Fraction, int]):
    expected = set(st.expected_roots)
    got = set(roots)
    missing = sorted(expected - got)
    unexpected = sorted(got - expected)
    dim_diffs = {}
    for r, d in st.expected_dims.items():
        if dims.get(r) != d:
            dim_diffs[r] = (d, dims.get(r))
    if missing or unexpected:
        status = "root-mismatch"
    elif dim_diffs:
        status = "dim-mismatch"
    else:
        status = "pass"
    return status, missing, unexpected, dim_diffs


def verify_sample(name: str, stratum: int, point, budget: float | None = None,
                  kmax: int = 2) -> SampleOutcome:
    entry = get_entry(name)
    st = entry.strata[stratum]
    t0 = time.monotonic()
    out = SampleOutcome(stratum + 1, st.label, tuple(point), "error")
    try:
        f = specialize(entry, point)
        res = local_bfunction_swh(f, entry.weights, kmax, limits=Limits.with_budget(budget))
        out.roots, out.dims, out.milnor = res.roots, res.dims, res.milnor
        out.status, out.missing, out.unexpected, out.dim_diffs = compare_result(
            st, res.roots, res.dims)
    except ResourceError as exc:
        out.status = "resource-error"
        out.message = str(exc)
    except SwhbfError as exc:
        out.status = "error"
        out.message = f"{type(exc).__name__}: {exc}"
    out.seconds = time.monotonic() - t0
    log.info("%s stratum %d at %s: %s (%.1fs)", name, stratum + 1,
             ",".join(map(format_rational, point)), out.status, out.seconds)
    return out


def _verify_task(args):
    return verify_sample(*args)


def verify_entry(
    name: str,
    strata: Sequence[int] | None = None,
    budget: float | None = None,
    *,
    jobs: int = 1,
    kmax: int = 2,
    samples: Sequence | None = None,
) -> VerificationReport:
    """Run the local b-function algorithm at each selected sample and compare.

    ``strata`` holds 1-based stratum indices; ``budget`` is a per-sample time
    limit in seconds.  Resource errors are recorded per sample.
    """
    t0 = time.monotonic()
    entry = get_entry(name)
    chosen = list(strata) if strata else list(range(1, len(entry.strata) + 1))
    tasks = []
    for i in chosen:
        if not 1 <= i <= len(entry.strata):
            raise PreconditionError(f"{name} has strata 1..{len(entry.strata)}")
        st = entry.strata[i - 1]
        pts = st.sample_points if samples is None else [
            tuple(as_rational(v) for v in p) for p in samples]
        for p in pts:
            if not stratum_member(p, st, entry.constraint):
                raise PreconditionError(f"{p} is not in stratum {st.label}")
            tasks.append((name, i - 1, p, budget, kmax))
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_verify_task, tasks))
    else:
        outcomes = [_verify_task(t) for t in tasks]
    f0 = entry.strata[entry.f0_stratum()]
    f0_check = set(wh_bfunction_roots(entry.weights)) == set(f0.expected_roots)
    return VerificationReport(name, outcomes, f0_check, entry.discrepancies(),
                              time.monotonic() - t0)
