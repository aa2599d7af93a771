"""Ann(f^s) via the Briançon-Maisonobe ideal and elimination of dt."""

from __future__ import annotations

from typing import List, Optional

from .core import MonomialOrder, MultiPoly, WeightSystem
from .errors import PreconditionError
from .groebner import GroebnerBasis, Limits, buchberger, extract_subring
from .pbw import PBWOperator, PBWRing


def ring_for(f: MultiPoly) -> PBWRing:
    return PBWRing(f.vars)


def bm_ideal(f: MultiPoly, ring: PBWRing | None = None) -> List[PBWOperator]:
    """Generators f*dt + s and d_i + (df/dx_i)*dt of the Briançon-Maisonobe ideal."""
    if f.is_constant():
        raise PreconditionError("f must be nonconstant")
    ring = ring or ring_for(f)
    F = ring.from_poly(f)
    dt = ring.gen("dt")
    gens = [F * dt + ring.gen("s")]
    for i, v in enumerate(f.vars):
        gens.append(ring.gen("d" + v) + ring.from_poly(f.derivative(i)) * dt)
    return gens


def default_ann_order(ring: PBWRing, weights: Optional[WeightSystem] = None) -> MonomialOrder:
    """Weighted elimination order when a weight type is known, plain otherwise."""
    if weights is None:
        return ring.elimination_order_dt()
    return ring.weighted_elimination_order_dt(weights)


def ann_fs_basis(
    f: MultiPoly,
    order: MonomialOrder | None = None,
    *,
    weights: Optional[WeightSystem] = None,
    strategy: str = "sugar",
    limits: Limits | None = None,
) -> GroebnerBasis:
    """The full Gröbner basis of the Briançon-Maisonobe ideal (dt eliminated on top).

    Without an explicit order, ``weights`` (a weight type of the leading part
    of f) selects the weighted elimination order.
    """
    ring = ring_for(f)
    order = order or default_ann_order(ring, weights)
    return buchberger(bm_ideal(f, ring), order, strategy=strategy, limits=limits)


def ann_fs(
    f: MultiPoly,
    order: MonomialOrder | None = None,
    *,
    weights: Optional[WeightSystem] = None,
    strategy: str = "sugar",
    limits: Limits | None = None,
) -> List[PBWOperator]:
    """A basis of Ann(f^s) in D[s]."""
    G = ann_fs_basis(f, order, weights=weights, strategy=strategy, limits=limits)
    ring = G.ring
    keep = [i for i in range(ring.width) if i != ring.DT]
    return extract_subring(G, keep)
