"""Subspaces and (n-1, n)-flags of PG(2n, q).

Subspaces of GF(q)^d of dimension k are generated cell by cell: pick the
pivot columns, then fill the free entries in every possible way.  Each RREF
matrix appears exactly once, and sorting the flattened entries gives the
canonical order used for vertex numbering everywhere else.

:class:`FlagGeometry` holds the index structures the rest of the package
runs on: point incidence of every (n-1)- and n-space, the boolean table
``meets[a, b]`` (A_a meets B_b), and the flag list as two index arrays.
With that table two flags are opposite iff ``not meets[a1, b2] and not
meets[a2, b1]``, which vectorizes over whole flag lists.
"""

from __future__ import annotations

import hashlib
import itertools
import os
from dataclasses import dataclass
from functools import cached_property, lru_cache
from pathlib import Path

import numpy as np

from .errors import AmbientMismatch, OutOfRange, SpecIncidenceViolation
from .gf import GF, field_new
from .linalg import Subspace, matmul
from .qcount import gauss

CACHE_VERSION = "v1"


@dataclass(frozen=True)
class ProjSpace:
    n: int
    q: int

    def __post_init__(self):
        if self.n < 1:
            raise OutOfRange(f"n must be >= 1, got {self.n}")
        field_new(self.q)

    @property
    def d_v(self) -> int:
        return 2 * self.n + 1

    @property
    def field(self) -> GF:
        return field_new(self.q)


@dataclass(frozen=True)
class Flag:
    A: Subspace
    B: Subspace

    def __post_init__(self):
        if self.B.k != self.A.k + 1 or not self.B.contains(self.A):
            raise SpecIncidenceViolation(f"{self.A} is not a hyperplane of {self.B}")

    @property
    def n(self) -> int:
        return self.A.k


def is_opposite(f1: Flag, f2: Flag) -> bool:
    if f1.A.ambient != f2.A.ambient or f1.A.field.q != f2.A.field.q:
        raise AmbientMismatch("flags live in different spaces")
    return f1.A.meet_dim(f2.B) == 0 and f2.A.meet_dim(f1.B) == 0


def dualize_flag(f: Flag) -> Flag:
    return Flag(f.B.complement(), f.A.complement())


# -- RREF cell enumeration ---------------------------------------------------

def _digit_block(count: int, width: int, q: int, offset: int = 0) -> np.ndarray:
    """Rows are the base-q digit vectors (most significant first) of offset..offset+count-1."""
    codes = np.arange(offset, offset + count, dtype=np.int64)
    out = np.empty((count, width), dtype=np.uint8)
    for j in range(width):
        out[:, width - 1 - j] = (codes // q**j) % q
    return out


def iter_rref_blocks(d: int, k: int, q: int, chunk: int = 1 << 20):
    """Yield arrays of shape (m, k, d), together covering every k-subspace once.

    Blocks come pivot pattern by pivot pattern; within a pattern, free
    entries vary like an odometer.  Memory stays O(chunk * k * d).
    """
    if not 0 <= k <= d:
        raise OutOfRange(f"k={k} outside [0, {d}]")
    for pivots in itertools.combinations(range(d), k):
        free = [(i, j) for i, p in enumerate(pivots) for j in range(p + 1, d) if j not in pivots]
        template = np.zeros((k, d), dtype=np.uint8)
        for i, p in enumerate(pivots):
            template[i, p] = 1
        m = len(free)
        inner_w = m
        while inner_w and q**inner_w > chunk:
            inner_w -= 1
        outer, inner = free[: m - inner_w], free[m - inner_w:]
        inner_block = np.broadcast_to(template, (q**inner_w, k, d)).copy()
        digits = _digit_block(q**inner_w, inner_w, q)
        for t, (i, j) in enumerate(inner):
            inner_block[:, i, j] = digits[:, t]
        if not outer:
            yield inner_block
            continue
        for code in range(q ** len(outer)):
            block = inner_block.copy()
            for t, (i, j) in enumerate(outer):
                block[:, i, j] = (code // q ** (len(outer) - 1 - t)) % q
            yield block


def count_subspaces(d: int, k: int, q: int) -> int:
    """Count k-subspaces of GF(q)^d by streaming the full enumeration."""
    return sum(b.shape[0] for b in iter_rref_blocks(d, k, q))


def canonical_order(arr: np.ndarray) -> np.ndarray:
    flat = arr.reshape(arr.shape[0], -1)
    if flat.shape[1] == 0:
        return np.arange(arr.shape[0])
    return np.lexsort(flat.T[::-1])


def subspace_array(d: int, k: int, q: int, cache_dir: str | os.PathLike | None = None) -> np.ndarray:
    """All k-subspaces of GF(q)^d as RREF matrices, shape (N, k, d), canonical order."""
    if not 0 <= k <= d:
        raise OutOfRange(f"k={k} outside [0, {d}]")
    path = cache_path(cache_dir, q, d, k) if cache_dir is not None else None
    if path is not None and path.exists():
        return read_cache(path, q, d, k)
    blocks = list(iter_rref_blocks(d, k, q))
    arr = np.concatenate(blocks) if blocks else np.zeros((0, k, d), dtype=np.uint8)
    arr = np.ascontiguousarray(arr[canonical_order(arr)])
    if path is not None:
        write_cache(path, arr, q, d, k)
    return arr


def enumerate_subspaces(ps: ProjSpace, k: int, cache_dir=None) -> list[Subspace]:
    f = ps.field
    return [Subspace(f, ps.d_v, m) for m in subspace_array(ps.d_v, k, ps.q, cache_dir)]


# -- cache files -------------------------------------------------------------

def default_cache_dir() -> Path:
    env = os.environ.get("FLAGLAB_CACHE")
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "flaglab"


def cache_path(cache_dir, q: int, d: int, k: int) -> Path:
    mod = field_new(q).modulus_str()
    return Path(cache_dir) / f"pg_q{q}_d{d}_k{k}_m{mod}.txt"


def write_cache(path: Path, arr: np.ndarray, q: int, d: int, k: int) -> None:
    f = field_new(q)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    with open(tmp, "w") as fh:
        fh.write(f"PGCACHE {CACHE_VERSION} {q} {d} {k} {arr.shape[0]}\n")
        for m in arr:
            fh.write(Subspace(f, d, m).serialize() + "\n")
    os.replace(tmp, path)


def read_cache(path: Path, q: int, d: int, k: int) -> np.ndarray:
    with open(path) as fh:
        header = fh.readline().split()
        expected = ["PGCACHE", CACHE_VERSION, str(q), str(d), str(k)]
        if header[:5] != expected:
            raise ValueError(f"{path}: bad cache header {header}")
        count = int(header[5])
        lines = fh.read().splitlines()
    if len(lines) != count:
        raise ValueError(f"{path}: header says {count} entries, found {len(lines)}")
    arr = np.zeros((count, k, d), dtype=np.uint8)
    for i, line in enumerate(lines):
        body = line.split(":", 3)[3]
        if k:
            arr[i] = [[int(ch, 36) for ch in row] for row in body.split(";")]
    return arr


# -- the indexed geometry ----------------------------------------------------

def normalized_coefficients(k: int, q: int) -> np.ndarray:
    """All k-vectors whose first nonzero entry is 1 (one per projective point)."""
    if k == 0:
        return np.zeros((0, 0), dtype=np.int64)
    allv = _digit_block(q**k, k, q).astype(np.int64)
    first = allv[np.arange(len(allv)), np.argmax(allv != 0, axis=1)]
    return allv[first == 1]


class PointIndex:
    """Points of PG(d-1, q) and incidence vectors of subspaces against them."""

    def __init__(self, d: int, q: int):
        self.d, self.q, self.field = d, q, field_new(q)
        pts = subspace_array(d, 1, q).reshape(-1, d).astype(np.int64)
        self.points = pts
        self._weights = q ** np.arange(d - 1, -1, -1, dtype=np.int64)
        self._lookup = np.full(q**d, -1, dtype=np.int64)
        self._lookup[pts @ self._weights] = np.arange(len(pts))

    def __len__(self) -> int:
        return len(self.points)

    def incidence(self, arr: np.ndarray, batch: int = 4096) -> np.ndarray:
        """Boolean (N, #points) matrix: which points lie in each RREF matrix of ``arr``."""
        arr = np.asarray(arr, dtype=np.int64)
        n_sub, k = arr.shape[0], arr.shape[1]
        out = np.zeros((n_sub, len(self)), dtype=bool)
        if k == 0:
            return out
        coeffs = normalized_coefficients(k, self.q)
        for s in range(0, n_sub, batch):
            vecs = matmul(coeffs[None], arr[s:s + batch], self.field)
            idx = self._lookup[vecs @ self._weights]
            rows = np.repeat(np.arange(idx.shape[0]), idx.shape[1])
            out[s + rows, idx.ravel()] = True
        return out

    def mask(self, s: Subspace) -> np.ndarray:
        return self.incidence(s.basis[None])[0]


def _overlap_counts(x: np.ndarray, y: np.ndarray, batch: int = 2048):
    """Yield (start, counts) with counts[i, j] = |x[start+i] & y[j]| via float matmul."""
    yt = y.T.astype(np.float32)
    for s in range(0, x.shape[0], batch):
        yield s, np.rint(x[s:s + batch].astype(np.float32) @ yt).astype(np.int32)


class FlagGeometry:
    """Indexed (n-1, n)-flags of PG(2n, q): the vertex set of the opposition graph."""

    def __init__(self, n: int, q: int, cache_dir=None):
        self.ps = ProjSpace(n, q)
        self.n, self.q, self.d = n, q, 2 * n + 1
        self.field = field_new(q)
        self.A_arr = subspace_array(self.d, n, q, cache_dir)
        self.B_arr = subspace_array(self.d, n + 1, q, cache_dir)
        self.points = PointIndex(self.d, q)
        self.A_inc = self.points.incidence(self.A_arr)
        self.B_inc = self.points.incidence(self.B_arr)
        self.npts_A = gauss(n, 1, q)
        self.npts_B = gauss(n + 1, 1, q)

        NA, NB = len(self.A_arr), len(self.B_arr)
        self.meets = np.zeros((NA, NB), dtype=bool)
        contain_rows, contain_cols = [], []
        for s, cnt in _overlap_counts(self.A_inc, self.B_inc):
            self.meets[s:s + cnt.shape[0]] = cnt > 0
            a, b = np.nonzero(cnt == self.npts_A)
            contain_rows.append(a + s)
            contain_cols.append(b)
        a = np.concatenate(contain_rows)
        b = np.concatenate(contain_cols)
        order = np.lexsort((a, b))
        self.flag_a = a[order].astype(np.int64)
        self.flag_b = b[order].astype(np.int64)
        self._flag_key = self.flag_b * NA + self.flag_a
        self._a_lookup = {m.tobytes(): i for i, m in enumerate(self.A_arr)}
        self._b_lookup = {m.tobytes(): i for i, m in enumerate(self.B_arr)}

    # sizes and lookups
    @property
    def V(self) -> int:
        return len(self.flag_a)

    def __len__(self) -> int:
        return self.V

    def A(self, i: int) -> Subspace:
        return Subspace(self.field, self.d, self.A_arr[i])

    def B(self, i: int) -> Subspace:
        return Subspace(self.field, self.d, self.B_arr[i])

    def flag(self, v: int) -> Flag:
        return Flag(self.A(self.flag_a[v]), self.B(self.flag_b[v]))

    def flags(self) -> list[Flag]:
        As = [self.A(i) for i in range(len(self.A_arr))]
        Bs = [self.B(i) for i in range(len(self.B_arr))]
        return [Flag(As[a], Bs[b]) for a, b in zip(self.flag_a, self.flag_b)]

    def a_index(self, s: Subspace) -> int:
        return self._a_lookup[s.basis.astype(np.uint8).tobytes()]

    def b_index(self, s: Subspace) -> int:
        return self._b_lookup[s.basis.astype(np.uint8).tobytes()]

    def flag_index(self, a: int, b: int) -> int:
        key = b * len(self.A_arr) + a
        v = int(np.searchsorted(self._flag_key, key))
        if v >= self.V or self._flag_key[v] != key:
            raise KeyError(f"(A{a}, B{b}) is not a flag")
        return v

    def index_of(self, f: Flag) -> int:
        return self.flag_index(self.a_index(f.A), self.b_index(f.B))

    # opposition
    def opposite_row(self, v: int, among: np.ndarray | None = None) -> np.ndarray:
        """Boolean vector: which flags (all, or those in ``among``) are opposite flag v."""
        fa, fb = self.flag_a, self.flag_b
        if among is not None:
            fa, fb = fa[among], fb[among]
        return ~self.meets[self.flag_a[v], fb] & ~self.meets[fa, self.flag_b[v]]

    def is_opposite(self, v: int, w: int) -> bool:
        return not (self.meets[self.flag_a[v], self.flag_b[w]] or self.meets[self.flag_a[w], self.flag_b[v]])

    @cached_property
    def vertex_hash(self) -> str:
        h = hashlib.sha256()
        h.update(f"flags n={self.n} q={self.q} mod={self.field.modulus_str()}".encode())
        for arr in (self.A_arr, self.B_arr, self.flag_a, self.flag_b):
            h.update(np.ascontiguousarray(arr).tobytes())
        return h.hexdigest()[:16]

    # duality
    @cached_property
    def dual_maps(self) -> tuple[np.ndarray, np.ndarray]:
        """(a_to_b, b_to_a): index of the orthogonal complement of each A / B."""
        a_to_b = np.array([self.b_index(self.A(i).complement()) for i in range(len(self.A_arr))])
        b_to_a = np.array([self.a_index(self.B(i).complement()) for i in range(len(self.B_arr))])
        return a_to_b, b_to_a

    @cached_property
    def dual_permutation(self) -> np.ndarray:
        """v -> index of the dual flag (B^perp, A^perp)."""
        a_to_b, b_to_a = self.dual_maps
        keys = a_to_b[self.flag_a] * len(self.A_arr) + b_to_a[self.flag_b]
        perm = np.searchsorted(self._flag_key, keys)
        assert np.array_equal(self._flag_key[perm], keys)
        return perm

    # incidence helpers for anchors
    def mask(self, s: Subspace) -> np.ndarray:
        return self.points.mask(s)

    def A_inside(self, s: Subspace) -> np.ndarray:
        """Bool over A-indices: A_i contained in s."""
        m = self.mask(s)
        return ~(self.A_inc & ~m).any(axis=1)

    def B_inside(self, s: Subspace) -> np.ndarray:
        m = self.mask(s)
        return ~(self.B_inc & ~m).any(axis=1)

    def A_containing(self, s: Subspace) -> np.ndarray:
        m = self.mask(s)
        return ~(~self.A_inc & m).any(axis=1)

    def B_containing(self, s: Subspace) -> np.ndarray:
        m = self.mask(s)
        return ~(~self.B_inc & m).any(axis=1)


@lru_cache(maxsize=4)
def get_geometry(n: int, q: int, cache_dir: str | None = None) -> FlagGeometry:
    return FlagGeometry(n, q, cache_dir)


def enumerate_flags(ps: ProjSpace) -> list[Flag]:
    return get_geometry(ps.n, ps.q).flags()
