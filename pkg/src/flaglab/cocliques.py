"""Cocliques of the opposition graph: the extremal constructions, coclique and
maximality checks, greedy closure, and per-space weights with red/yellow colours.

Families are sets of vertex indices into a :class:`FlagGeometry`.  The
workhorse is :func:`opposition_hits`, which answers "is flag g opposite
some member?" for many g at once by bit-packing over the members.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    NonMaximalWeightSpectrum,
    NotACoclique,
    SpaceNotInFamily,
    SpecIncidenceViolation,
    WrongDimension,
)
from .geometry import FlagGeometry
from .linalg import Subspace
from .qcount import gauss

VARIANTS = ("a_i", "a_ii", "b_i", "b_ii")


@dataclass
class FlagFamily:
    geom: FlagGeometry
    members: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.members, dtype=np.int64).ravel()
        if m.size and (m.min() < 0 or m.max() >= self.geom.V):
            raise IndexError(f"member index outside [0, {self.geom.V})")
        u = np.unique(m)
        if u.size != m.size:
            raise ValueError("duplicate members")
        self.members = u

    def __len__(self) -> int:
        return int(self.members.size)

    def __contains__(self, v) -> bool:
        i = np.searchsorted(self.members, v)
        return bool(i < self.members.size and self.members[i] == v)

    def mask(self) -> np.ndarray:
        out = np.zeros(self.geom.V, dtype=bool)
        out[self.members] = True
        return out

    @property
    def A_idx(self) -> np.ndarray:
        return self.geom.flag_a[self.members]

    @property
    def B_idx(self) -> np.ndarray:
        return self.geom.flag_b[self.members]

    def with_members(self, members) -> "FlagFamily":
        return FlagFamily(self.geom, members)

    def dual(self) -> "FlagFamily":
        return FlagFamily(self.geom, self.geom.dual_permutation[self.members])

    def to_json(self) -> dict:
        g = self.geom
        return {"n": g.n, "q": g.q, "vertex_hash": g.vertex_hash, "indices": [int(v) for v in self.members]}

    @classmethod
    def from_json(cls, geom: FlagGeometry, data: dict) -> "FlagFamily":
        if (int(data["n"]), int(data["q"])) != (geom.n, geom.q):
            raise ValueError(f"family is for (n, q) = ({data['n']}, {data['q']})")
        if data["vertex_hash"] != geom.vertex_hash:
            raise ValueError("vertex_hash mismatch: indices refer to a different enumeration")
        return cls(geom, [int(v) for v in data["indices"]])


# -- constructions -----------------------------------------------------------

@dataclass(frozen=True)
class ConstructionSpec:
    """Variant plus anchors: (H, X) for a_i / a_ii, (P, X) for b_i / b_ii."""

    variant: str
    anchor1: Subspace
    anchor2: Subspace

    def validate(self, n: int) -> None:
        d = 2 * n + 1
        a1, a2 = self.anchor1, self.anchor2
        if self.variant not in VARIANTS:
            raise SpecIncidenceViolation(f"unknown variant {self.variant!r}")
        if a1.ambient != d or a2.ambient != d:
            raise SpecIncidenceViolation(f"anchors must live in GF(q)^{d}")
        want1 = 2 * n if self.variant.startswith("a") else 1
        want2 = {"a_i": 1, "a_ii": 2 * n - 1, "b_i": 2 * n, "b_ii": 2}[self.variant]
        if a1.k != want1 or a2.k != want2:
            raise SpecIncidenceViolation(
                f"{self.variant} needs anchors of vector dimension ({want1}, {want2}), got ({a1.k}, {a2.k})")
        inner, outer = (a2, a1) if self.variant.startswith("a") else (a1, a2)
        if not outer.contains(inner):
            raise SpecIncidenceViolation(f"{self.variant}: anchors are not incident")

    def to_json(self) -> dict:
        return {"variant": self.variant, "anchor1": self.anchor1.serialize(), "anchor2": self.anchor2.serialize()}

    @classmethod
    def from_json(cls, data: dict) -> "ConstructionSpec":
        return cls(data["variant"], Subspace.parse(data["anchor1"]), Subspace.parse(data["anchor2"]))


def example_mask(geom: FlagGeometry, spec: ConstructionSpec) -> np.ndarray:
    spec.validate(geom.n)
    fa, fb = geom.flag_a, geom.flag_b
    v, a1, a2 = spec.variant, spec.anchor1, spec.anchor2
    if v.startswith("a"):
        # B inside H, or A incident with both X and H
        B_in_H = geom.B_inside(a1)[fb]
        A_in_H = geom.A_inside(a1)[fa]
        A_X = geom.A_containing(a2)[fa] if v == "a_i" else geom.A_inside(a2)[fa]
        return B_in_H | (A_X & A_in_H)
    # P inside A, or B incident with both X and P
    P_in_A = geom.A_containing(a1)[fa]
    P_in_B = geom.B_containing(a1)[fb]
    B_X = geom.B_inside(a2)[fb] if v == "b_i" else geom.B_containing(a2)[fb]
    return P_in_A | (B_X & P_in_B)


def build_example(geom: FlagGeometry, spec: ConstructionSpec) -> FlagFamily:
    return FlagFamily(geom, np.flatnonzero(example_mask(geom, spec)))


def _point(geom: FlagGeometry, i: int) -> Subspace:
    return Subspace.span(geom.points.points[i], geom.field, geom.d)


def random_spec(geom: FlagGeometry, variant: str, rng: np.random.Generator) -> ConstructionSpec:
    """Uniformly random anchors for a variant, built from random points via duality."""
    npts = len(geom.points)
    P = _point(geom, int(rng.integers(npts)))
    if variant.startswith("a"):
        H = P.complement()
        if variant == "a_i":
            inside = np.flatnonzero(geom.mask(H))
            X = _point(geom, int(rng.choice(inside)))
        else:
            others = [i for i in range(npts) if _point(geom, i) != P]
            R = _point(geom, int(rng.choice(others)))
            X = P.join(R).complement()
        return ConstructionSpec(variant, H, X)
    if variant == "b_i":
        perp = np.flatnonzero(geom.mask(P.complement()))
        X = _point(geom, int(rng.choice(perp))).complement()
    else:
        others = [i for i in range(npts) if _point(geom, i) != P]
        X = P.join(_point(geom, int(rng.choice(others))))
    return ConstructionSpec(variant, P, X)


# -- coclique / maximality ---------------------------------------------------

def _pack_cols(bits: np.ndarray) -> np.ndarray:
    """Pack a (rows, m) bool matrix along m into uint64 words."""
    packed = np.packbits(bits, axis=1)
    pad = (-packed.shape[1]) % 8
    if pad:
        packed = np.pad(packed, ((0, 0), (0, pad)))
    return np.ascontiguousarray(packed).view(np.uint64)


def opposition_hits(geom: FlagGeometry, members: np.ndarray, targets: np.ndarray | None = None,
                    chunk: int = 8192) -> np.ndarray:
    """For each target flag: is it opposite at least one member?

    Opposite means ``not meets[A_f, B_g] and not meets[A_g, B_f]``; both
    factors are bit-packed over the members f, so each target costs one
    AND of two short word vectors.
    """
    targets = np.arange(geom.V) if targets is None else np.asarray(targets)
    out = np.zeros(len(targets), dtype=bool)
    if len(members) == 0 or len(targets) == 0:
        return out
    ma, mb = geom.flag_a[members], geom.flag_b[members]
    xb = _pack_cols(~geom.meets[ma, :].T)  # (NB, words): member A misses B
    ya = _pack_cols(~geom.meets[:, mb])  # (NA, words): A misses member B
    ta, tb = geom.flag_a[targets], geom.flag_b[targets]
    for s in range(0, len(targets), chunk):
        e = s + chunk
        out[s:e] = (xb[tb[s:e]] & ya[ta[s:e]]).any(axis=1)
    return out


@dataclass
class Check:
    ok: bool
    witness: object = None

    def __bool__(self) -> bool:
        return self.ok


def is_coclique(F: FlagFamily) -> Check:
    geom, mem = F.geom, F.members
    hits = opposition_hits(geom, mem, mem)
    if not hits.any():
        return Check(True)
    v = int(mem[np.argmax(hits)])
    w = int(mem[np.argmax(geom.opposite_row(v, among=mem))])
    return Check(False, (min(v, w), max(v, w)))


def addable(F: FlagFamily) -> np.ndarray:
    """Bool over all flags: outside F and opposite no member."""
    ok = ~opposition_hits(F.geom, F.members)
    ok[F.members] = False
    return ok


def is_maximal_coclique(F: FlagFamily) -> Check:
    hits = opposition_hits(F.geom, F.members)
    if hits[F.members].any():
        c = is_coclique(F)
        raise NotACoclique(f"flags {c.witness} are opposite", c.witness)
    hits[F.members] = True
    free = np.flatnonzero(~hits)
    if free.size:
        return Check(False, int(free[0]))
    return Check(True)


def greedy_closure(F: FlagFamily, order: np.ndarray | None = None) -> FlagFamily:
    """Add flags in ``order`` (default: ascending index) while they fit."""
    c = is_coclique(F)
    if not c:
        raise NotACoclique(f"flags {c.witness} are opposite", c.witness)
    geom = F.geom
    blocked = opposition_hits(geom, F.members)
    blocked[F.members] = True
    added = []
    order = np.arange(geom.V) if order is None else np.asarray(order)
    for v in order.tolist():
        if not blocked[v]:
            added.append(v)
            blocked |= geom.opposite_row(v)
            blocked[v] = True
    return F.with_members(np.concatenate([F.members, np.array(added, dtype=np.int64)]))


def random_maximal_coclique(geom: FlagGeometry, seed: int) -> FlagFamily:
    """Greedy closure of the empty family along a seeded random vertex order."""
    order = np.random.default_rng(seed).permutation(geom.V)
    return greedy_closure(FlagFamily(geom, []), order)


# -- weights and colours -----------------------------------------------------

RED, YELLOW, UNUSED, OFF = "red", "yellow", "unused", "off-spectrum"


def spectrum(n: int, q: int) -> dict[int, int]:
    """count -> k for the admissible weights [k, 1], k = 1..n+1."""
    return {gauss(k, 1, q): k for k in range(1, n + 2)}


def color_of(count: int, n: int, q: int) -> str:
    if count == 0:
        return UNUSED
    if count == gauss(n + 1, 1, q):
        return RED
    if count <= gauss(n, 1, q):
        return YELLOW
    return OFF


@dataclass
class WeightReport:
    space: Subspace
    count: int
    k: int | None
    core: Subspace | None
    color: str
    all_meet: bool

    def to_json(self) -> dict:
        return {"space": self.space.serialize(), "count": str(self.count),
                "k": self.k, "core": self.core.serialize() if self.core is not None else None,
                "color": self.color, "all_meet": self.all_meet}


def _span_points(geom: FlagGeometry, pt_idx) -> Subspace:
    pts = geom.points.points[np.asarray(sorted(set(int(i) for i in pt_idx)), dtype=np.int64)]
    return Subspace.span(pts.reshape(-1, geom.d), geom.field, geom.d)


def classify_space_weight(F: FlagFamily, S: Subspace) -> WeightReport:
    geom, n, q = F.geom, F.geom.n, F.geom.q
    if S.k == n + 1:
        b = geom.b_index(S)
        count = int((F.B_idx == b).sum())
        skew = F.members[~geom.meets[F.A_idx, b]]
        core = None
        if skew.size:
            # each B' with A' skew to B meets B in exactly one point
            inter = geom.B_inc[geom.flag_b[skew]] & geom.B_inc[b]
            core = _span_points(geom, np.nonzero(inter)[1])
    elif S.k == n:
        a = geom.a_index(S)
        count = int((F.A_idx == a).sum())
        skew = F.members[~geom.meets[a, F.B_idx]]
        core = None
        if skew.size:
            hyper = [S.join(geom.A(i)) for i in np.unique(geom.flag_a[skew])]
            core = hyper[0]
            for h in hyper[1:]:
                core = core.meet(h)
    else:
        raise WrongDimension(f"expected vector dimension {n} or {n + 1}, got {S.k}")
    return WeightReport(S, count, spectrum(n, q).get(count), core, color_of(count, n, q), skew.size == 0)


@dataclass
class ColorMap:
    """Index arrays (into the geometry's A / B lists) of red and yellow spaces."""

    red_B: np.ndarray
    yellow_B: np.ndarray
    red_A: np.ndarray
    yellow_A: np.ndarray
    count_B: np.ndarray = field(repr=False)
    count_A: np.ndarray = field(repr=False)

    def to_json(self, geom: FlagGeometry) -> dict:
        return {
            "red_n_spaces": [geom.B(i).serialize() for i in self.red_B],
            "yellow_n_spaces": str(len(self.yellow_B)),
            "red_n_minus_1_spaces": [geom.A(i).serialize() for i in self.red_A],
            "yellow_n_minus_1_spaces": str(len(self.yellow_A)),
        }


def space_counts(F: FlagFamily) -> tuple[np.ndarray, np.ndarray]:
    g = F.geom
    return (np.bincount(F.B_idx, minlength=len(g.B_arr)), np.bincount(F.A_idx, minlength=len(g.A_arr)))


def color_map(F: FlagFamily) -> ColorMap:
    geom, n, q = F.geom, F.geom.n, F.geom.q
    cB, cA = space_counts(F)
    allowed = np.array(sorted(spectrum(n, q)))
    for counts, getter in ((cB, geom.B), (cA, geom.A)):
        bad = np.flatnonzero((counts > 0) & ~np.isin(counts, allowed))
        if bad.size:
            i = int(bad[0])
            raise NonMaximalWeightSpectrum(
                f"{getter(i)} lies in {counts[i]} flags of the family, not a [k,1]: family is not maximal",
                getter(i), int(counts[i]))
    red, small = gauss(n + 1, 1, q), gauss(n, 1, q)
    return ColorMap(
        red_B=np.flatnonzero(cB == red), yellow_B=np.flatnonzero((cB >= 1) & (cB <= small)),
        red_A=np.flatnonzero(cA == red), yellow_A=np.flatnonzero((cA >= 1) & (cA <= small)),
        count_B=cB, count_A=cA,
    )


def weight_spectrum_violations(F: FlagFamily) -> list[str]:
    """Every departure from the [k,1] weight rule and its dual; empty for a maximal coclique.

    Checks each occurring space's count against [k,1], and that the count is
    the maximum [n+1,1] exactly when no member sits skew to the space.
    """
    geom, n, q = F.geom, F.geom.n, F.geom.q
    cB, cA = space_counts(F)
    allowed = set(spectrum(n, q))
    red = gauss(n + 1, 1, q)
    # B all-meet: every member A' meets B; A all-meet: every member B' meets A
    B_all = geom.meets[F.A_idx, :].all(axis=0)
    A_all = geom.meets[:, F.B_idx].all(axis=1)
    out = []
    for name, counts, allmeet in (("n-space", cB, B_all), ("(n-1)-space", cA, A_all)):
        for i in np.flatnonzero(counts > 0).tolist():
            c = int(counts[i])
            if c not in allowed:
                out.append(f"{name} #{i}: count {c} not in spectrum")
            if (c == red) != bool(allmeet[i]):
                out.append(f"{name} #{i}: count {c} but all-meet={bool(allmeet[i])}")
    return out


def _overlap(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.rint(x.astype(np.float32) @ y.T.astype(np.float32)).astype(np.int64)


def red_intersection_check(F: FlagFamily, cmap: ColorMap | None = None) -> bool:
    """Red (n-1)-spaces pairwise meet; red n-spaces pairwise share at least a line."""
    c = is_coclique(F)
    if not c:
        raise NotACoclique(f"flags {c.witness} are opposite", c.witness)
    geom, q = F.geom, F.geom.q
    cmap = cmap or color_map(F)
    ra = geom.A_inc[cmap.red_A]
    rb = geom.B_inc[cmap.red_B]
    if len(ra) and (_overlap(ra, ra) == 0).any():
        return False
    # sharing a line = at least q + 1 common points
    if len(rb) and (_overlap(rb, rb) < q + 1).any():
        return False
    return True


def count_flags_skew_to(F: FlagFamily, B: Subspace) -> int:
    """Distinct n-spaces B' over members (A', B') with A' skew to B."""
    geom, n = F.geom, F.geom.n
    if B.k != n + 1:
        raise WrongDimension(f"expected an n-space (vector dimension {n + 1}), got {B.k}")
    b = geom.b_index(B)
    cnt = int((F.B_idx == b).sum())
    if cnt == 0:
        raise SpaceNotInFamily(f"{B} occurs in no flag of the family")
    if cnt == gauss(n + 1, 1, geom.q):
        warnings.warn(f"{B} is red; the skew-flag bound is stated for yellow spaces", stacklevel=2)
    skew = ~geom.meets[F.A_idx, b]
    return int(np.unique(F.B_idx[skew]).size)
