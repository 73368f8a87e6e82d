"""Sort a maximal coclique into the three structural categories.

A: equals one of the extremal constructions.  Recovered by reconstruction:
   the red n-spaces pin down the hyperplane H (or the red (n-1)-spaces the
   point P), the remaining flags pin down X, and the rebuilt family is
   compared member for member.
B: not A, but contains every flag with B inside some hyperplane, or every
   flag with A through some point.
C: everything else.

At small q these categories need not be exclusive in the asymptotic sense;
the report carries the data, not a proof.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cocliques import ColorMap, ConstructionSpec, FlagFamily, build_example, color_map, is_maximal_coclique
from .errors import NotMaximal
from .geometry import FlagGeometry
from .linalg import Subspace, matmul
from .qcount import category_b_bound, example_family_size, gauss


@dataclass
class TrichotomyReport:
    category: str
    witness: dict = field(default_factory=dict)
    size: int = 0
    bounds: dict = field(default_factory=dict)
    red_counts: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"category": self.category, "witness": self.witness, "size": str(self.size),
                "bounds": {k: (str(v) if v is not None else None) for k, v in self.bounds.items()},
                "red_counts": {k: str(v) for k, v in self.red_counts.items()}}


def _span_of_points(geom: FlagGeometry, mask: np.ndarray) -> Subspace:
    rows = geom.points.points[np.flatnonzero(mask)]
    return Subspace.span(rows.reshape(-1, geom.d), geom.field, geom.d)


def _same(F: FlagFamily, spec: ConstructionSpec) -> bool:
    try:
        G = build_example(F.geom, spec)
    except ValueError:
        return False
    return len(G) == len(F) and np.array_equal(G.members, F.members)


def _try_hyperplane_side(F: FlagFamily, cmap: ColorMap) -> ConstructionSpec | None:
    geom, n, q = F.geom, F.geom.n, F.geom.q
    if len(cmap.red_B) != gauss(2 * n, n + 1, q):
        return None
    H = _span_of_points(geom, geom.B_inc[cmap.red_B].any(axis=0))
    if H.k != 2 * n:
        return None
    outside = ~geom.B_inside(H)[F.B_idx]
    if not outside.any():
        return None
    a_inc = geom.A_inc[F.A_idx[outside]]
    X = _span_of_points(geom, a_inc.all(axis=0))
    if X.k == 1:
        spec = ConstructionSpec("a_i", H, X)
        if _same(F, spec):
            return spec
    X = _span_of_points(geom, a_inc.any(axis=0))
    if X.k == 2 * n - 1:
        spec = ConstructionSpec("a_ii", H, X)
        if _same(F, spec):
            return spec
    return None


def _try_point_side(F: FlagFamily, cmap: ColorMap) -> ConstructionSpec | None:
    geom, n, q = F.geom, F.geom.n, F.geom.q
    if len(cmap.red_A) != gauss(2 * n, n - 1, q):
        return None
    P = _span_of_points(geom, geom.A_inc[cmap.red_A].all(axis=0))
    if P.k != 1:
        return None
    outside = ~geom.A_containing(P)[F.A_idx]
    if not outside.any():
        return None
    b_inc = geom.B_inc[F.B_idx[outside]]
    X = _span_of_points(geom, b_inc.any(axis=0))
    if X.k == 2 * n:
        spec = ConstructionSpec("b_i", P, X)
        if _same(F, spec):
            return spec
    X = _span_of_points(geom, b_inc.all(axis=0))
    if X.k == 2:
        spec = ConstructionSpec("b_ii", P, X)
        if _same(F, spec):
            return spec
    return None


def full_pencils(F: FlagFamily, cmap: ColorMap) -> tuple[list[int], list[int]]:
    """Point indices j with every n-space of the hyperplane j^perp red, and
    point indices j with every (n-1)-space through point j red."""
    geom, n, q = F.geom, F.geom.n, F.geom.q
    pts = geom.points.points
    # hyperplane j^perp contains point i iff <p_i, p_j> = 0
    hyper_inc = matmul(pts, pts.T, geom.field) == 0
    red_b = geom.B_inc[cmap.red_B].astype(np.float32)
    inside = np.rint(red_b @ hyper_inc.T.astype(np.float32)) == geom.npts_B
    hyper = np.flatnonzero(inside.sum(axis=0) == gauss(2 * n, n + 1, q))
    through = np.flatnonzero(geom.A_inc[cmap.red_A].sum(axis=0) == gauss(2 * n, n - 1, q))
    return hyper.tolist(), through.tolist()


def classify_maximal_coclique(F: FlagFamily) -> TrichotomyReport:
    geom, n, q = F.geom, F.geom.n, F.geom.q
    m = is_maximal_coclique(F)
    if not m:
        raise NotMaximal(f"flag {m.witness} can be added", m.witness)
    cmap = color_map(F)
    bounds = {
        "example_family_size": example_family_size(n, q),
        "category_b_bound": category_b_bound(n, q),
        "category_c_scale": q ** (n * n + n - 2),
    }
    reds = {"red_n_spaces": len(cmap.red_B), "red_n_minus_1_spaces": len(cmap.red_A)}
    for attempt in (_try_hyperplane_side, _try_point_side):
        spec = attempt(F, cmap)
        if spec is not None:
            return TrichotomyReport("A", spec.to_json(), len(F), bounds, reds)
    hyper, through = full_pencils(F, cmap)
    if hyper:
        P = Subspace.span(geom.points.points[hyper[0]], geom.field, geom.d)
        return TrichotomyReport("B", {"hyperplane": P.complement().serialize()}, len(F), bounds, reds)
    if through:
        P = Subspace.span(geom.points.points[through[0]], geom.field, geom.d)
        return TrichotomyReport("B", {"point": P.serialize()}, len(F), bounds, reds)
    return TrichotomyReport("C", {}, len(F), bounds, reds)
