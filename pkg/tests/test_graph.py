import io

import numpy as np
import pytest

from flaglab.errors import DuplicateIndex, IndexOutOfRange, MemoryBudgetExceeded
from flaglab.geometry import ProjSpace, dualize_flag, enumerate_flags, is_opposite
from flaglab.graph import (
    build_graph,
    degree_histogram,
    export_dimacs,
    graph_metadata,
    induced_subgraph,
    read_dimacs,
    write_metadata,
)
from flaglab.linalg import Subspace
from flaglab.qcount import gamma_degree


def brute_degree(flags, v):
    """Degree by rank computations on Subspace objects only."""
    f = flags[v]
    return sum(f.A.meet_dim(g.B) == 0 and g.A.meet_dim(f.B) == 0 for g in flags)


@pytest.mark.parametrize("nq", [(1, 2), (1, 3)])
def test_degree_oracle_all_vertices(nq):
    flags = enumerate_flags(ProjSpace(*nq))
    assert {brute_degree(flags, v) for v in range(len(flags))} == {gamma_degree(*nq)}


@pytest.mark.parametrize("nq,sample", [((2, 2), 12), ((2, 3), 2)])
def test_degree_oracle_sampled(nq, sample):
    flags = enumerate_flags(ProjSpace(*nq))
    rng = np.random.default_rng(0)
    for v in rng.choice(len(flags), size=sample, replace=False).tolist():
        assert brute_degree(flags, v) == gamma_degree(*nq)


@pytest.mark.parametrize("nq", [(1, 2), (2, 2), (2, 3)])
def test_regular(nq):
    g = build_graph(ProjSpace(*nq))
    assert degree_histogram(g) == {gamma_degree(*nq): g.V}


def test_edge_count_22(g22):
    g = build_graph(g22)
    assert (g.V, g.edge_count) == (1085, 138_880)


def test_dense_symmetric(g22):
    M = build_graph(g22).dense_matrix()
    assert np.array_equal(M, M.T) and not M.diagonal().any()


def test_dense_streaming_agree(g23):
    dense = build_graph(g23, threads=2)
    stream = build_graph(g23, mode="streaming")
    rng = np.random.default_rng(3)
    pairs = rng.integers(g23.V, size=(100_000, 2))
    d = np.array([dense.adjacent(int(i), int(j)) for i, j in pairs[:2000]])
    s = np.array([stream.adjacent(int(i), int(j)) for i, j in pairs[:2000]])
    assert np.array_equal(d, s)
    # bulk comparison through rows for the full 10^5 sample
    for i in np.unique(pairs[:, 0])[:50].tolist():
        assert np.array_equal(dense.row(i), stream.row(i))
    rows_d = np.unpackbits(dense._packed[pairs[:, 0]], axis=1, count=g23.V)[np.arange(len(pairs)), pairs[:, 1]]
    fa, fb = g23.flag_a, g23.flag_b
    i, j = pairs[:, 0], pairs[:, 1]
    rows_s = ~g23.meets[fa[i], fb[j]] & ~g23.meets[fa[j], fb[i]]
    assert np.array_equal(rows_d.astype(bool), rows_s)


def test_threads_identical(g22):
    a = build_graph(g22, threads=1)._packed
    for t in (4, 8):
        assert np.array_equal(build_graph(g22, threads=t)._packed, a)


def test_duality_preserves_adjacency(g22):
    p = g22.dual_permutation
    M = build_graph(g22).dense_matrix()
    assert np.array_equal(M[np.ix_(p, p)], M)


def test_memory_budget():
    with pytest.raises(MemoryBudgetExceeded, match="streaming"):
        build_graph(ProjSpace(3, 2), mode="dense")
    with pytest.raises(MemoryBudgetExceeded):
        build_graph(ProjSpace(2, 2), mode="dense", memory_budget=1000)


def test_memory_budget_env(monkeypatch):
    monkeypatch.setenv("FLAGLAB_MEMORY_BUDGET", "10")
    with pytest.raises(MemoryBudgetExceeded):
        build_graph(ProjSpace(1, 2))


def test_hyperplane_slice_edgeless(g22):
    g = build_graph(g22)
    H = Subspace.coordinate(2, 5, [1], [2], [3], [4])
    sl = induced_subgraph(g, np.flatnonzero(g22.B_inside(H)[g22.flag_b]))
    assert sl.V == 105 and sl.edge_count == 0


def test_induced_small_cases(g22):
    g = build_graph(g22)
    one = induced_subgraph(g, [5])
    assert one.V == 1 and one.edge_count == 0
    w = int(g.neighbors(0)[0])
    two = induced_subgraph(g, [w, 0])
    assert two.edge_count == 1 and two.vertices.tolist() == [0, w]
    empty = induced_subgraph(g, [])
    assert degree_histogram(empty) == {}
    with pytest.raises(IndexOutOfRange):
        induced_subgraph(g, [g.V])
    with pytest.raises(DuplicateIndex):
        induced_subgraph(g, [1, 1])


def test_induced_streaming_matches_dense(g22):
    idx = np.random.default_rng(1).choice(g22.V, 60, replace=False)
    a = induced_subgraph(build_graph(g22), idx).dense_matrix()
    b = induced_subgraph(build_graph(g22, mode="streaming"), idx).dense_matrix()
    assert np.array_equal(a, b)


def test_dimacs_12(tmp_path, g12):
    g = build_graph(g12)
    path = tmp_path / "g.dimacs"
    assert export_dimacs(g, str(path)) == 84
    lines = path.read_text().splitlines()
    assert lines[0] == "p edge 21 84" and len(lines) == 85
    edges = [tuple(map(int, l.split()[1:])) for l in lines[1:]]
    assert edges == sorted(edges) and all(i < j for i, j in edges)
    flags = enumerate_flags(ProjSpace(1, 2))
    for i, j in edges:
        assert is_opposite(flags[i - 1], flags[j - 1])
    V, back = read_dimacs(str(path))
    assert V == 21 and len(back) == 84


def test_dimacs_stable_and_header_22(g22):
    g = build_graph(g22)
    a, b = io.StringIO(), io.StringIO()
    export_dimacs(g, a)
    export_dimacs(build_graph(g22, mode="streaming"), b)
    assert a.getvalue() == b.getvalue()
    assert a.getvalue().startswith("p edge 1085 138880\n")


def test_dimacs_single_vertex(g22):
    buf = io.StringIO()
    export_dimacs(induced_subgraph(build_graph(g22), [3]), buf)
    assert buf.getvalue() == "p edge 1 0\n"


def test_metadata(tmp_path, g12):
    g = build_graph(g12)
    write_metadata(g, tmp_path / "m.json")
    import json
    meta = json.loads((tmp_path / "m.json").read_text())
    assert meta == graph_metadata(g) and meta["E"] == 84 and meta["vertex_hash"] == g12.vertex_hash


def test_dual_permutation_matches_dualize(g12):
    p = g12.dual_permutation
    for v in range(g12.V):
        assert g12.flag(p[v]) == dualize_flag(g12.flag(v))
