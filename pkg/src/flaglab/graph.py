"""The opposition graph on (n-1, n)-flags, dense (bit-packed rows) or streaming."""

from __future__ import annotations

import io
import json
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import DuplicateIndex, IndexOutOfRange, MemoryBudgetExceeded
from .geometry import FlagGeometry, ProjSpace, get_geometry
from .qcount import gauss

DEFAULT_MEMORY_BUDGET = 2 << 30


def memory_budget_from_env() -> int:
    return int(os.environ.get("FLAGLAB_MEMORY_BUDGET", DEFAULT_MEMORY_BUDGET))


class FlagGraph:
    """Opposition graph on ``vertices`` (indices into the geometry's flag list).

    The full graph has ``vertices = arange(V)``; induced subgraphs are the same
    class on a sorted subset.  Local vertex i is geometry flag ``vertices[i]``.
    """

    def __init__(self, geom: FlagGeometry, vertices: np.ndarray, mode: str, packed: np.ndarray | None = None):
        if mode not in ("dense", "streaming"):
            raise ValueError(f"mode must be 'dense' or 'streaming', not {mode!r}")
        self.geom = geom
        self.vertices = np.asarray(vertices, dtype=np.int64)
        self.mode = mode
        self._packed = packed

    @property
    def V(self) -> int:
        return len(self.vertices)

    def __len__(self) -> int:
        return self.V

    @property
    def vertex_hash(self) -> str:
        return self.geom.vertex_hash

    def row(self, i: int) -> np.ndarray:
        """Boolean adjacency row of local vertex i."""
        if self._packed is not None:
            return np.unpackbits(self._packed[i], count=self.V).astype(bool)
        return self.geom.opposite_row(self.vertices[i], among=self.vertices)

    def neighbors(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.row(i))

    def adjacent(self, i: int, j: int) -> bool:
        if self._packed is not None:
            return bool((self._packed[i, j >> 3] >> (7 - (j & 7))) & 1)
        return self.geom.is_opposite(self.vertices[i], self.vertices[j])

    def degrees(self) -> np.ndarray:
        if self._packed is not None:
            return np.bitwise_count(self._packed).sum(axis=1, dtype=np.int64)
        return np.array([self.row(i).sum() for i in range(self.V)], dtype=np.int64)

    @property
    def edge_count(self) -> int:
        return int(self.degrees().sum()) // 2

    def dense_matrix(self) -> np.ndarray:
        """Full boolean adjacency matrix (V x V); meant for small views."""
        if self._packed is not None:
            return np.unpackbits(self._packed, axis=1, count=self.V).astype(bool)
        return _adjacency_block(self.geom, self.vertices, self.vertices)


def _adjacency_block(geom: FlagGeometry, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    ra, rb = geom.flag_a[rows], geom.flag_b[rows]
    ca, cb = geom.flag_a[cols], geom.flag_b[cols]
    return ~geom.meets[ra[:, None], cb[None, :]] & ~geom.meets[ca[None, :], rb[:, None]]


def _packed_rows(geom: FlagGeometry, vertices: np.ndarray, threads: int, block: int = 256) -> np.ndarray:
    m = len(vertices)
    out = np.zeros((m, (m + 7) // 8), dtype=np.uint8)

    def work(start):
        stop = min(start + block, m)
        out[start:stop] = np.packbits(_adjacency_block(geom, vertices[start:stop], vertices), axis=1)

    starts = range(0, m, block)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            list(ex.map(work, starts))
    else:
        for s in starts:
            work(s)
    return out


def _check_budget(m: int, budget: int) -> None:
    need = m * ((m + 7) // 8)
    if need > budget:
        raise MemoryBudgetExceeded(
            f"dense adjacency for {m} vertices needs {need} bytes, budget is {budget}; "
            "use streaming mode or raise the budget"
        )


def build_graph(ps: ProjSpace | FlagGeometry, mode: str = "dense", memory_budget: int | None = None,
                threads: int = 1) -> FlagGraph:
    budget = memory_budget if memory_budget is not None else memory_budget_from_env()
    if isinstance(ps, FlagGeometry):
        geom, V = ps, ps.V
    else:
        geom, V = None, gauss(ps.d_v, ps.n + 1, ps.q) * gauss(ps.n + 1, 1, ps.q)
    if mode == "dense":
        _check_budget(V, budget)
    elif mode != "streaming":
        raise ValueError(f"mode must be 'dense' or 'streaming', not {mode!r}")
    if geom is None:
        geom = get_geometry(ps.n, ps.q)
    vertices = np.arange(geom.V)
    if mode == "dense":
        return FlagGraph(geom, vertices, "dense", _packed_rows(geom, vertices, threads))
    return FlagGraph(geom, vertices, "streaming")


def induced_subgraph(g: FlagGraph, subset) -> FlagGraph:
    idx = np.asarray(list(subset), dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= g.V):
        raise IndexOutOfRange(f"indices must lie in [0, {g.V})")
    if len(np.unique(idx)) != len(idx):
        raise DuplicateIndex("subset contains repeated indices")
    idx = np.sort(idx)
    verts = g.vertices[idx]
    if g.mode == "dense":
        return FlagGraph(g.geom, verts, "dense", _packed_rows(g.geom, verts, 1))
    return FlagGraph(g.geom, verts, "streaming")


def degree_histogram(g: FlagGraph) -> dict[int, int]:
    return dict(sorted(Counter(int(d) for d in g.degrees()).items()))


def export_dimacs(g: FlagGraph, destination) -> int:
    """Write the graph in DIMACS edge format (1-based, i < j, ascending)."""
    E = g.edge_count
    own = isinstance(destination, (str, os.PathLike))
    fh = open(destination, "w") if own else destination
    try:
        fh.write(f"p edge {g.V} {E}\n")
        written = 0
        for i in range(g.V):
            nb = g.neighbors(i)
            nb = nb[nb > i]
            if nb.size:
                fh.write("".join(f"e {i + 1} {j + 1}\n" for j in nb.tolist()))
                written += nb.size
    finally:
        if own:
            fh.close()
    assert written == E
    return E


def graph_metadata(g: FlagGraph) -> dict:
    return {"n": g.geom.n, "q": g.geom.q, "V": g.V, "E": g.edge_count, "vertex_hash": g.vertex_hash}


def read_dimacs(source) -> tuple[int, list[tuple[int, int]]]:
    text = source.read() if isinstance(source, io.IOBase) else open(source).read()
    V, edges = 0, []
    for line in text.splitlines():
        parts = line.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            V = int(parts[2])
        elif parts[0] == "e":
            edges.append((int(parts[1]) - 1, int(parts[2]) - 1))
    return V, edges


def write_metadata(g: FlagGraph, path) -> None:
    with open(path, "w") as fh:
        json.dump(graph_metadata(g), fh, sort_keys=True)
        fh.write("\n")
