"""Global and local b-functions.

Global b-functions come from elimination: the monic generator of
``(Ann(f^s) + I) ∩ Q[s]`` for I = (f) or I = (f, df/dx_1, ..., df/dx_n).
Local b-functions of semi-weighted-homogeneous germs are assembled from
candidate roots predicted by the weight type, each candidate being certified
by one Gröbner basis in D and weighed by the dimension of its space of
local cohomology solutions.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence

from .annihilator import ann_fs, ring_for
from .cohomology import DEFAULT_DEGREE_CAP, cohomology_solution_space, milnor_number
from .core import (
    MonomialOrder,
    MultiPoly,
    UniPoly,
    WeightSystem,
    as_rational,
    classify_swh,
    exact_divide_unipoly,
    format_rational,
    rational_roots,
)
from .errors import InconsistencyError, PreconditionError, ResourceError
from .groebner import GroebnerBasis, Limits, buchberger
from .pbw import PBWOperator, PBWRing

log = logging.getLogger(__name__)


def _check_ring(f: MultiPoly, ann: Sequence[PBWOperator] | None):
    ring = ann[0].ring if ann else ring_for(f)
    if ring.names != f.vars:
        raise PreconditionError("annihilator basis and f use different variables")
    return ring


def elimination_order_s(ring: PBWRing) -> MonomialOrder:
    """dt on top, one degrevlex block in d and x, then s."""
    body = tuple(range(ring.n, 2 * ring.n)) + tuple(range(ring.n))
    return ring.order(
        "lex(dt) >> degrevlex(" + ",".join(ring.all_names[i] for i in body) + ") >> lex(s)"
    )


def _bfunction_poly(f, extra, ann, order, limits, weights=None) -> UniPoly:
    if f.is_constant():
        raise PreconditionError("f must be nonconstant")
    if ann is None:
        ann = ann_fs(f, weights=weights, limits=limits)
    ring = _check_ring(f, ann)
    order = order or elimination_order_s(ring)
    gens = list(ann) + [ring.from_poly(p) for p in extra]
    G = buchberger(gens, order, limits=limits)
    univariate = [g for g in G.generators if g.is_in_s()]
    if not univariate:
        raise InconsistencyError("no polynomial in s alone in the eliminating basis",
                                 {"basis_size": len(G)})
    b = min((g.to_s_unipoly() for g in univariate), key=lambda p: p.degree)
    return b.monic()


def global_bfunction_poly(f: MultiPoly, *, ann=None, order=None, limits=None,
                          weights=None) -> UniPoly:
    return _bfunction_poly(f, [f], ann, order, limits, weights)


def global_bfunction(f: MultiPoly, *, ann=None, order=None, limits=None,
                     weights=None) -> List[Fraction]:
    """Roots of b_f with multiplicity, increasing."""
    b = global_bfunction_poly(f, ann=ann, order=order, limits=limits, weights=weights)
    return rational_roots(b)


def global_reduced_bfunction(f: MultiPoly, *, ann=None, order=None, limits=None,
                             weights=None) -> List[Fraction]:
    """Roots of b_f / (s + 1), computed from Ann(f^s) + (f, grad f)."""
    grad = f.gradient()
    b = _bfunction_poly(f, [f] + [g for g in grad if not g.is_zero()], ann, order, limits,
                        weights)
    if b.degree == 0:
        raise PreconditionError("f has an empty singular locus")
    return rational_roots(b)


# ---------------------------------------------------------------------------
# Weight-type machinery
# ---------------------------------------------------------------------------


def _t_power_minus_one(k: int) -> UniPoly:
    return UniPoly([-1] + [0] * (k - 1) + [1])


def poincare_polynomial(ws: WeightSystem) -> UniPoly:
    """prod (t^(d-w_i) - 1) / (t^(w_i) - 1).

    The quotient is taken of the two full products; it is a polynomial
    exactly when the type admits an isolated singularity.
    """
    num = UniPoly([1])
    den = UniPoly([1])
    for w in ws.w:
        if ws.d - w < 1:
            raise PreconditionError(f"weight {w} is not below d = {ws.d}")
        num = num * _t_power_minus_one(ws.d - w)
        den = den * _t_power_minus_one(w)
    return exact_divide_unipoly(num, den)


def wh_bfunction_roots(ws: WeightSystem) -> List[Fraction]:
    """The set {-(alpha + w0)/d} over exponents alpha of the Poincaré polynomial."""
    P = poincare_polynomial(ws)
    w0 = sum(ws.w)
    return sorted({Fraction(-(a + w0), ws.d) for a in P.exponents()})


def candidate_roots(E0: Iterable, n: int, kmax: int = 2) -> List[Fraction]:
    E0 = [as_rational(g) for g in E0]
    if not E0:
        raise PreconditionError("E0 is empty")
    if n < 1:
        raise PreconditionError("n must be positive")
    return sorted({g + k for g in E0 for k in range(kmax + 1) if -n < g + k < 0})


# ---------------------------------------------------------------------------
# Root certificates
# ---------------------------------------------------------------------------


@dataclass
class RootCertificate:
    gamma: Fraction
    is_factor: bool
    basis: GroebnerBasis
    polynomial_part: List[MultiPoly]
    origin_in_support: bool

    def summary(self) -> dict:
        return {
            "gamma": format_rational(self.gamma),
            "is_factor": self.is_factor,
            "origin_in_support": self.origin_in_support,
            "basis_size": len(self.basis),
            "polynomial_part": [str(p) for p in self.polynomial_part],
        }


def certify_root(
    ann: Sequence[PBWOperator],
    f: MultiPoly,
    gamma,
    *,
    order: MonomialOrder | None = None,
    limits: Limits | None = None,
) -> RootCertificate:
    """Reduced basis of Ann(f^s) + (f, grad f) + (s - gamma) and its support data.

    s is central in D[s], so the ideal equals (A_gamma) + (s - gamma) with
    A_gamma the generators after substituting s = gamma.  Its reduced basis
    is the reduced basis of A_gamma in D together with s - gamma (or {1}).
    """
    gamma = as_rational(gamma)
    ann = list(ann)
    if not ann:
        raise PreconditionError("empty annihilator basis")
    ring = _check_ring(f, ann)
    order = order or ring.bfunction_order()
    gens = [a.substitute_s(gamma) for a in ann]
    gens += [ring.from_poly(p) for p in [f] + f.gradient() if not p.is_zero()]
    G = buchberger([g for g in gens if not g.is_zero()], order, limits=limits)
    if G.is_unit():
        basis = G
        is_factor = False
        poly_part: List[MultiPoly] = []
    else:
        s_gamma = ring.gen("s") - gamma
        gens_full = sorted(G.generators + [s_gamma], key=lambda g: order.key(g.leading(order)[0]))
        basis = GroebnerBasis(gens_full, order, True, dict(G.stats))
        is_factor = True
        poly_part = [g.to_multipoly() for g in G.generators if g.is_polynomial()]
    origin = (0,) * f.nvars
    in_support = is_factor and all(p.evaluate(origin) == 0 for p in poly_part)
    return RootCertificate(gamma, is_factor, basis, poly_part, in_support)


def _certify_any_order(ann, f, gamma, orders, limits: Optional[Limits]) -> RootCertificate:
    """certify_root under whichever of ``orders`` finishes first.

    The orders are tried in turn with a per-attempt time slice that triples
    each round, all inside the caller's own deadline.  Verdicts do not depend
    on the order, so the first basis that completes is used.
    """
    outer = limits or Limits()
    slice_ = 2.0
    while True:
        for order in orders:
            deadline = time.monotonic() + slice_
            if outer.deadline is not None:
                deadline = min(deadline, outer.deadline)
            lim = Limits(max_pairs=outer.max_pairs, max_terms=outer.max_terms, deadline=deadline)
            try:
                return certify_root(ann, f, gamma, order=order, limits=lim)
            except ResourceError:
                now = time.monotonic()
                if now < deadline or (outer.deadline is not None and now >= outer.deadline):
                    raise
        slice_ *= 3


def local_bfunction_via_support(
    f: MultiPoly,
    *,
    ann=None,
    degree_cap: int = DEFAULT_DEGREE_CAP,
    limits=None,
    weights: Optional[WeightSystem] = None,
) -> List[Fraction]:
    """Roots of the global reduced b-function whose module is supported at the origin."""
    milnor_number(f, degree_cap)  # isolatedness guard
    if ann is None:
        ann = ann_fs(f, weights=weights, limits=limits)
    roots = sorted(set(global_reduced_bfunction(f, ann=ann, limits=limits)))
    ring = _check_ring(f, ann)
    orders = [ring.weighted_bfunction_order(weights), ring.bfunction_order()] if weights else [None]
    keep = []
    for g in roots:
        if _certify_any_order(ann, f, g, orders, limits).origin_in_support:
            keep.append(g)
    return keep


# ---------------------------------------------------------------------------
# Local b-function of a semi-weighted-homogeneous germ
# ---------------------------------------------------------------------------


@dataclass
class LocalBFResult:
    roots: List[Fraction]
    dims: Dict[Fraction, int]
    milnor: int
    certificates: Dict[Fraction, RootCertificate] = field(default_factory=dict, repr=False)
    tested: List[Fraction] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "roots": [{"num": r.numerator, "den": r.denominator} for r in self.roots],
            "dims": {format_rational(r): self.dims[r] for r in self.roots},
            "milnor": self.milnor,
        }


def _evaluate_candidate(args):
    ann, f, gamma, degree_cap, limits, orders = args
    cert = _certify_any_order(ann, f, gamma, orders, limits)
    dim = 0
    if cert.origin_in_support:
        dim = cohomology_solution_space(f, gamma, cert, degree_cap=degree_cap).dimension
    return gamma, cert, dim


def local_bfunction_swh(
    f: MultiPoly,
    ws: WeightSystem,
    kmax: int = 2,
    *,
    ann=None,
    degree_cap: int = DEFAULT_DEGREE_CAP,
    limits: Optional[Limits] = None,
    jobs: int = 1,
) -> LocalBFResult:
    """Local b-function roots at the origin and their cohomology dimensions.

    Candidates gamma + k (k = 0, 1, ..., kmax) are tested level by level.
    Values already tested at a lower level are not retested, and the scan
    stops once the dimensions add up to the Milnor number P(1).
    """
    split = classify_swh(f, ws)
    if not split.ok:
        raise PreconditionError(f"f is not semi-weighted-homogeneous of type {ws}")
    mu = poincare_polynomial(ws)(1)
    mu = int(mu)
    E0 = wh_bfunction_roots(ws)
    if ann is None:
        ann = ann_fs(f, weights=ws, limits=limits)
    # which order makes a root check cheap varies from germ to germ
    ring = _check_ring(f, ann)
    order = [ring.weighted_bfunction_order(ws), ring.bfunction_order()]
    n = f.nvars
    dims: Dict[Fraction, int] = {}
    certs: Dict[Fraction, RootCertificate] = {}
    tested: List[Fraction] = []
    total = 0
    for k in range(kmax + 1):
        level = sorted({g + k for g in E0 if -n < g + k < 0} - set(tested))
        if not level:
            continue
        log.info("level k=%d: %d candidates", k, len(level))
        if jobs > 1 and len(level) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(
                    _evaluate_candidate, [(ann, f, g, degree_cap, limits, order) for g in level]))
        else:
            results = []
            running = total
            for g in level:
                results.append(_evaluate_candidate((ann, f, g, degree_cap, limits, order)))
                running += results[-1][2]
                if running >= mu:
                    break
        for gamma, cert, dim in results:
            if gamma not in tested:
                tested.append(gamma)
            certs[gamma] = cert
            if dim:
                dims[gamma] = dim
                total += dim
        log.info("after level %d: sum of dims %d of %d", k, total, mu)
        if total > mu:
            raise InconsistencyError(
                "dimensions exceed the Milnor number",
                {"mu": mu, "dims": {format_rational(g): d for g, d in dims.items()}},
            )
        if total == mu:
            roots = sorted(dims)
            return LocalBFResult(roots, {g: dims[g] for g in roots}, mu, certs, tested)
    raise InconsistencyError(
        f"candidate shifts up to k={kmax} do not account for the Milnor number",
        {"mu": mu, "sum": total, "dims": {format_rational(g): d for g, d in dims.items()}},
    )
