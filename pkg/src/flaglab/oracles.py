"""Checkable data for the intersecting-family and matching arguments, and the
exhaustive counting oracles.

These work on plain lists of :class:`Subspace` (any ambient), using point
incidence vectors for the pairwise tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import MixedDimensions, NotIntersecting, NotPairwiseSkew, UndefinedBranch, WrongDimension
from .geometry import FlagGeometry, PointIndex
from .linalg import Subspace
from .qcount import f_bound, gauss, hilton_milner_threshold
from .search import max_clique_bitsets


@lru_cache(maxsize=16)
def _points(d: int, q: int) -> PointIndex:
    return PointIndex(d, q)


def _incidence(C: list[Subspace]) -> tuple[PointIndex, np.ndarray]:
    s0 = C[0]
    if any(s.ambient != s0.ambient or s.field.q != s0.field.q for s in C):
        raise MixedDimensions("members live in different spaces")
    pi = _points(s0.ambient, s0.field.q)
    return pi, np.stack([pi.mask(s) for s in C])


def _overlaps(inc: np.ndarray) -> np.ndarray:
    x = inc.astype(np.float32)
    return np.rint(x @ x.T).astype(np.int64)


def _span(pi: PointIndex, pts, d: int, q: int) -> Subspace:
    rows = pi.points[np.asarray(pts, dtype=np.int64)].reshape(-1, d)
    return Subspace.span(rows, q, d)


@dataclass
class IntersectingReport:
    anchor: Subspace | None
    anchor_kind: str | None  # "point" | "hyperplane" | None
    size: int
    threshold: int | None

    def to_json(self) -> dict:
        return {"anchor": self.anchor.serialize() if self.anchor is not None else None,
                "anchor_kind": self.anchor_kind, "size": str(self.size),
                "threshold": str(self.threshold) if self.threshold is not None else None}


def analyze_intersecting_family(C: list[Subspace], mode: str = "point-pencil") -> IntersectingReport:
    """Look for a common point (or, in ``point-or-hyperplane`` mode, a common hyperplane).

    The threshold reported is the non-pencil ceiling that applies to the
    setting: (n-1)-spaces of PG(2n, q) for the pencil mode, (n-1)-spaces
    of PG(2n-1, q) for the point-or-hyperplane mode; None outside it.
    """
    if mode not in ("point-pencil", "point-or-hyperplane"):
        raise ValueError(f"unknown mode {mode!r}")
    if not C:
        return IntersectingReport(None, None, 0, None)
    pi, inc = _incidence(C)
    if len({s.k for s in C}) > 1:
        raise MixedDimensions("members have different dimensions")
    ov = _overlaps(inc)
    bad = np.argwhere(ov == 0)
    if bad.size:
        i, j = (int(x) for x in bad[0])
        raise NotIntersecting(f"members {i} and {j} are skew", (i, j))

    d, q, k = C[0].ambient, C[0].field.q, C[0].k
    threshold = None
    if mode == "point-pencil" and d == 2 * k + 1:
        threshold = hilton_milner_threshold(k, q)
    elif mode == "point-or-hyperplane" and d == 2 * k:
        try:
            threshold = f_bound(k, q)
        except UndefinedBranch:
            threshold = None

    common = np.flatnonzero(inc.all(axis=0))
    if common.size:
        return IntersectingReport(_span(pi, common, d, q), "point", len(C), threshold)
    if mode == "point-or-hyperplane":
        join = _span(pi, np.flatnonzero(inc.any(axis=0)), d, q)
        if join.k < d:
            # smallest-index hyperplane through the join
            perp = join.complement()
            first = int(np.flatnonzero(pi.mask(perp))[0])
            H = _span(pi, [first], d, q).complement()
            return IntersectingReport(H, "hyperplane", len(C), threshold)
    return IntersectingReport(None, None, len(C), threshold)


@dataclass
class SkewReport:
    found: list[Subspace] | None
    best: list[Subspace]
    exact: bool
    certified_max: int | None
    size: int
    matching_bound: int | None
    within_bound: bool | None

    def to_json(self) -> dict:
        return {"found": [s.serialize() for s in self.found] if self.found else None,
                "best_size": len(self.best), "exact": self.exact,
                "certified_max": self.certified_max, "size": str(self.size),
                "matching_bound": str(self.matching_bound) if self.matching_bound is not None else None,
                "within_bound": self.within_bound}


def _bits(row: np.ndarray) -> int:
    return int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little")


def max_skew_subfamily(C: list[Subspace], target: int, exact_limit: int = 400, restarts: int = 32,
                       seed: int = 0) -> SkewReport:
    """Search ``target`` pairwise skew members of C.

    Exact clique search in the skewness graph when ``len(C) <= exact_limit``;
    otherwise randomized greedy with restarts.  When no such set is found,
    also reports whether |C| <= (target - 1) [2n, n-1] for (n-1)-spaces of
    PG(2n, q).
    """
    if not C:
        return SkewReport(None, [], True, 0, 0, None, None)
    if len({s.k for s in C}) > 1:
        raise MixedDimensions("members have different dimensions")
    pi, inc = _incidence(C)
    skew = _overlaps(inc) == 0
    np.fill_diagonal(skew, False)
    m = len(C)
    if m <= exact_limit:
        perm = np.argsort(-skew.sum(axis=1), kind="stable")
        sk = skew[np.ix_(perm, perm)]
        best, exhausted, _ = max_clique_bitsets([_bits(sk[i]) for i in range(m)], target=target)
        best = [int(perm[i]) for i in best]
        exact = exhausted or len(best) >= target
    else:
        rng = np.random.default_rng(seed)
        best = []
        for _ in range(restarts):
            cand = np.ones(m, dtype=bool)
            chosen = []
            for v in rng.permutation(m).tolist():
                if cand[v]:
                    chosen.append(v)
                    cand &= skew[v]
            if len(chosen) > len(best):
                best = chosen
            if len(best) >= target:
                break
        exact = False
    found = [C[i] for i in best[:target]] if len(best) >= target else None
    certified = len(best) if exact and found is None else None

    d, q, k = C[0].ambient, C[0].field.q, C[0].k
    bound = within = None
    if found is None and d == 2 * k + 1:
        bound = (target - 1) * gauss(2 * k, k - 1, q)
        within = m <= bound
    return SkewReport(found, [C[i] for i in best], exact, certified, m, bound, within)


def in_general_position_subfamily(C: list[Subspace], target: int, **kw) -> SkewReport:
    """Dual search: n-spaces pairwise meeting in exactly a point, via complements."""
    rep = max_skew_subfamily([s.complement() for s in C], target, **kw)
    back = {s.complement(): s for s in C}
    rep.found = [back[s] for s in rep.found] if rep.found else None
    rep.best = [back[s] for s in rep.best]
    return rep


def _require_pairwise_skew(A_list: list[Subspace], n: int) -> None:
    if len(A_list) != n + 1:
        raise NotPairwiseSkew(f"need exactly n+1 = {n + 1} subspaces, got {len(A_list)}")
    for s in A_list:
        if s.k != n or s.ambient != 2 * n + 1:
            raise WrongDimension(f"{s} is not an (n-1)-space of PG(2n, q)")
    for i in range(len(A_list)):
        for j in range(i + 1, len(A_list)):
            if A_list[i].meet_dim(A_list[j]):
                raise NotPairwiseSkew(f"members {i} and {j} meet", (i, j))


def count_n_spaces_meeting_all(geom: FlagGeometry, A_list: list[Subspace]) -> int:
    """Exact number of n-spaces meeting every member of n+1 pairwise skew (n-1)-spaces."""
    _require_pairwise_skew(A_list, geom.n)
    hit = np.ones(len(geom.B_arr), dtype=bool)
    for s in A_list:
        hit &= (geom.B_inc & geom.mask(s)).any(axis=1)
    return int(hit.sum())
