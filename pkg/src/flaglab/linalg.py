"""Linear algebra over GF(q): row reduction and canonical subspaces.

A subspace is stored by the reduced row echelon form of any basis.  RREF is
unique per row space, so equality and hashing of :class:`Subspace` reduce to
comparing bytes.
"""

from __future__ import annotations

import string

import numpy as np

from .errors import AmbientMismatch
from .gf import GF, field_new

_B36 = string.digits + string.ascii_lowercase


def rref(m, f: GF) -> np.ndarray:
    """Reduced row echelon form of the row space of ``m`` (zero rows dropped)."""
    a = np.array(m, dtype=np.int64, copy=True)
    if a.ndim != 2:
        a = a.reshape(-1, a.shape[-1] if a.ndim else 0)
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = f.mul[f.inv[a[r, c]], a[r]]
        for i in np.flatnonzero(a[:, c]):
            if i != r:
                a[i] = f.sub[a[i], f.mul[a[i, c], a[r]]]
        r += 1
    return a[:r]


def rank(m, f: GF) -> int:
    return rref(m, f).shape[0]


def gf2_rank(rows) -> int:
    """Rank over GF(2) of rows given as 0/1 sequences, using packed integer words."""
    basis: dict[int, int] = {}
    for row in rows:
        v = int("".join("1" if x else "0" for x in row) or "0", 2)
        while v:
            top = v.bit_length() - 1
            if top not in basis:
                basis[top] = v
                break
            v ^= basis[top]
    return len(basis)


def matmul(a: np.ndarray, b: np.ndarray, f: GF) -> np.ndarray:
    """Matrix product over GF(q); broadcasts like ``@`` on the leading axes."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    inner = a.shape[-1]
    if inner == 0:
        shape = np.broadcast_shapes(a.shape[:-2], b.shape[:-2]) + (a.shape[-2], b.shape[-1])
        return np.zeros(shape, dtype=np.int64)
    out = f.mul[a[..., :, 0, None], b[..., None, 0, :]]
    for t in range(1, inner):
        out = f.add[out, f.mul[a[..., :, t, None], b[..., None, t, :]]]
    return out


def null_space(m: np.ndarray, cols: int, f: GF) -> np.ndarray:
    """RREF basis of {v : m v^T = 0}; ``m`` must already be in RREF."""
    pivots = [int(np.flatnonzero(row)[0]) for row in m]
    free = [c for c in range(cols) if c not in pivots]
    out = np.zeros((len(free), cols), dtype=np.int64)
    for i, j in enumerate(free):
        out[i, j] = 1
        for r, p in enumerate(pivots):
            out[i, p] = f.neg[m[r, j]]
    return rref(out, f)


class Subspace:
    """A vector subspace of GF(q)^ambient, i.e. a projective space of dimension k-1."""

    __slots__ = ("field", "ambient", "basis", "_key")

    def __init__(self, field: GF, ambient: int, basis: np.ndarray):
        basis = np.asarray(basis, dtype=np.int64).reshape(-1, ambient)
        basis.setflags(write=False)
        self.field = field
        self.ambient = ambient
        self.basis = basis
        self._key = (field.q, ambient, basis.astype(np.uint8).tobytes())

    @classmethod
    def span(cls, rows, field: GF | int, ambient: int | None = None) -> "Subspace":
        f = field if isinstance(field, GF) else field_new(field)
        rows = np.asarray(rows, dtype=np.int64)
        if ambient is None:
            ambient = rows.shape[-1]
        rows = rows.reshape(-1, ambient) % f.q
        return cls(f, ambient, rref(rows, f))

    @classmethod
    def coordinate(cls, field: GF | int, ambient: int, *vectors) -> "Subspace":
        """Span of vectors given as lists of 1-based unit indices.

        ``Subspace.coordinate(2, 5, [1], [2, 4])`` is <e1, e2 + e4>.
        """
        rows = np.zeros((len(vectors), ambient), dtype=np.int64)
        for i, v in enumerate(vectors):
            for j in v:
                rows[i, j - 1] += 1
        return cls.span(rows, field, ambient)

    @classmethod
    def full(cls, field: GF | int, ambient: int) -> "Subspace":
        return cls.span(np.eye(ambient, dtype=np.int64), field, ambient)

    @classmethod
    def zero(cls, field: GF | int, ambient: int) -> "Subspace":
        return cls.span(np.zeros((0, ambient), dtype=np.int64), field, ambient)

    @property
    def k(self) -> int:
        return self.basis.shape[0]

    @property
    def proj_dim(self) -> int:
        return self.k - 1

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(int(np.flatnonzero(r)[0]) for r in self.basis)

    def __eq__(self, other) -> bool:
        return isinstance(other, Subspace) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __lt__(self, other: "Subspace") -> bool:
        return self.sort_key() < other.sort_key()

    def sort_key(self) -> tuple[int, ...]:
        return tuple(int(x) for x in self.basis.ravel())

    def __repr__(self) -> str:
        return f"Subspace({self.serialize()})"

    def _check(self, other: "Subspace") -> None:
        if self.ambient != other.ambient or self.field.q != other.field.q:
            raise AmbientMismatch(
                f"GF({self.field.q})^{self.ambient} vs GF({other.field.q})^{other.ambient}"
            )

    def _stack_rank(self, other: "Subspace") -> int:
        stacked = np.vstack([self.basis, other.basis])
        if self.field.q == 2:
            return gf2_rank(stacked)
        return rank(stacked, self.field)

    def meet_dim(self, other: "Subspace") -> int:
        """Vector dimension of the intersection; 0 means projectively disjoint."""
        self._check(other)
        return self.k + other.k - self._stack_rank(other)

    def join(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(np.vstack([self.basis, other.basis]), self.field, self.ambient)

    def meet(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return self.complement().join(other.complement()).complement()

    def complement(self) -> "Subspace":
        """Orthogonal complement under the standard dot product."""
        return Subspace(self.field, self.ambient, null_space(self.basis, self.ambient, self.field))

    def contains(self, other: "Subspace") -> bool:
        self._check(other)
        return self.meet_dim(other) == other.k

    def __le__(self, other: "Subspace") -> bool:
        return other.contains(self)

    def points(self) -> list["Subspace"]:
        """All 1-dimensional subspaces contained in this one."""
        f, k = self.field, self.k
        out = []
        for code in range(f.q**k):
            c = [(code // f.q**i) % f.q for i in range(k)][::-1]
            nz = [x for x in c if x]
            if not nz or nz[0] != 1:
                continue
            v = matmul(np.array([c]), self.basis, f)
            out.append(Subspace(f, self.ambient, v))
        return sorted(out)

    def serialize(self) -> str:
        body = ";".join("".join(_B36[x] for x in row) for row in self.basis)
        return f"{self.ambient}:{self.k}:{self.field.q}:{body}"

    @classmethod
    def parse(cls, text: str) -> "Subspace":
        d, k, q, body = text.strip().split(":", 3)
        d, k, q = int(d), int(k), int(q)
        rows = [[_B36.index(ch) for ch in r] for r in body.split(";")] if k else []
        arr = np.array(rows, dtype=np.int64).reshape(k, d)
        s = cls.span(arr, q, d)
        if s.k != k or not np.array_equal(s.basis, arr):
            raise ValueError(f"{text!r} is not a canonical RREF serialization")
        return s
