"""Maximum coclique search: exact branch-and-bound and iterated local search.

The exact search is a maximum *clique* search (greedy-colouring bound, MCQ
style) on the complement graph, with Python integers as bitsets.  The
heuristic keeps a solution with per-vertex tightness counters and looks for
(1,2)-swaps, escaping plateaus by forced insertions.
"""

from __future__ import annotations

import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import NotACoclique, ViewTooLarge
from .graph import FlagGraph

EXACT_LIMIT = 5000
PROGRESS_EVERY = 10**6


@dataclass
class SearchResult:
    set: list[int]
    size: int
    status: str  # "Optimal" | "LowerBound" | "TimedOut"
    nodes_explored: int = 0
    seed: int | None = None
    budget: int | None = None
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        d = asdict(self)
        d["set"] = [int(v) for v in self.set]
        return d


def _verify_independent(g: FlagGraph, vertices) -> None:
    """Re-check with the geometry's opposition test, not the search bitsets."""
    vs = sorted(int(v) for v in vertices)
    if len(set(vs)) != len(vs):
        raise NotACoclique("repeated vertex in result")
    geom = g.geom
    glob = g.vertices[vs]
    for i, v in enumerate(glob):
        hits = geom.opposite_row(int(v), among=glob[i + 1:])
        if hits.any():
            j = i + 1 + int(np.argmax(hits))
            raise NotACoclique(f"vertices {vs[i]} and {vs[j]} are adjacent", (vs[i], vs[j]))


def _bits(mask_row: np.ndarray) -> int:
    """Python int with bit i set where mask_row[i] is true."""
    packed = np.packbits(mask_row, bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def _color_sort(P: int, adj: list[int]):
    """Greedy sequential colouring of the candidate set (clique setting)."""
    order, bounds = [], []
    color = 0
    U = P
    while U:
        color += 1
        Q = U
        while Q:
            low = Q & -Q
            v = low.bit_length() - 1
            Q &= ~adj[v] & ~low
            U &= ~low
            order.append(v)
            bounds.append(color)
    return order, bounds


def max_clique_bitsets(adj: list[int], budget: int | None = None, incumbent: list[int] | None = None,
                       target: int | None = None, progress: bool = False):
    """Maximum clique of the graph given as bitset rows.

    Vertices should be numbered so that low indices are good branching
    candidates (e.g. by descending degree).  Stops early once a clique of
    size ``target`` is found.  Returns ``(best, exhausted, nodes)``.
    """
    m = len(adj)
    best = list(incumbent or [])
    if target is not None and len(best) >= target:
        return best, False, 0
    nodes = 0
    P0 = (1 << m) - 1
    order, bounds = _color_sort(P0, adj)
    stack = [[[], P0, order, bounds, len(order) - 1]]
    while stack:
        frame = stack[-1]
        R, P, order, bounds, i = frame
        if i < 0 or len(R) + bounds[i] <= len(best):
            stack.pop()
            continue
        v = order[i]
        frame[4] = i - 1
        frame[1] = P & ~(1 << v)
        newP = P & adj[v]
        nodes += 1
        if progress and nodes % PROGRESS_EVERY == 0:
            print(f"nodes={nodes} best={len(best)}", file=sys.stderr)
        if newP:
            o, b = _color_sort(newP, adj)
            stack.append([R + [v], newP, o, b, len(o) - 1])
        elif len(R) + 1 > len(best):
            best = R + [v]
            if target is not None and len(best) >= target:
                return best, False, nodes
        if budget is not None and nodes >= budget:
            return best, False, nodes
    return best, True, nodes


def _greedy_mis(adj_matrix: np.ndarray) -> list[int]:
    m = len(adj_matrix)
    alive = np.ones(m, dtype=bool)
    deg = adj_matrix.sum(axis=1).astype(np.int64)
    chosen = []
    while alive.any():
        cand = np.flatnonzero(alive)
        v = int(cand[np.argmin(deg[cand])])
        chosen.append(v)
        removed = alive & (adj_matrix[v] | (np.arange(m) == v))
        alive &= ~removed
        deg -= adj_matrix[:, removed].sum(axis=1)
    return chosen


def max_coclique_exact(g: FlagGraph, budget: int | None = 10**7, incumbent=None,
                       progress: bool = False) -> SearchResult:
    if g.V > EXACT_LIMIT:
        raise ViewTooLarge(f"exact search handles at most {EXACT_LIMIT} vertices, view has {g.V}")
    if g.V == 0:
        return SearchResult([], 0, "Optimal", 0, budget=budget)
    adj_m = g.dense_matrix()
    comp = ~adj_m
    np.fill_diagonal(comp, False)
    # renumber by descending complement degree so low bits branch first
    perm = np.argsort(-comp.sum(axis=1), kind="stable")
    inv = np.empty_like(perm)
    inv[perm] = np.arange(len(perm))
    comp_p = comp[np.ix_(perm, perm)]
    adj_bits = [_bits(comp_p[i]) for i in range(g.V)]

    start = [int(v) for v in (incumbent if incumbent is not None else [])]
    if start:
        _verify_independent(g, start)
    greedy = _greedy_mis(adj_m)
    seed_set = start if len(start) >= len(greedy) else greedy
    best, exhausted, nodes = max_clique_bitsets(adj_bits, budget, [int(inv[v]) for v in seed_set],
                                                progress=progress)
    result = sorted(int(perm[v]) for v in best)
    _verify_independent(g, result)
    return SearchResult(result, len(result), "Optimal" if exhausted else "TimedOut", nodes, budget=budget)


class _LocalSearch:
    def __init__(self, g: FlagGraph, rng: np.random.Generator):
        self.g, self.rng = g, rng
        self.V = g.V
        self._dense = g.dense_matrix() if g.V <= 4096 else None
        self._rows: dict[int, np.ndarray] = {}
        self.in_sol = np.zeros(self.V, dtype=bool)
        self.tight = np.zeros(self.V, dtype=np.int64)
        self.nb_sum = np.zeros(self.V, dtype=np.int64)

    def nbrs(self, v: int) -> np.ndarray:
        if self._dense is not None:
            return np.flatnonzero(self._dense[v])
        r = self._rows.get(v)
        if r is None:
            if len(self._rows) > 20000:
                self._rows.clear()
            r = self._rows[v] = self.g.neighbors(v)
        return r

    def add(self, v: int) -> None:
        self.in_sol[v] = True
        nb = self.nbrs(v)
        self.tight[nb] += 1
        self.nb_sum[nb] += v

    def remove(self, v: int) -> None:
        self.in_sol[v] = False
        nb = self.nbrs(v)
        self.tight[nb] -= 1
        self.nb_sum[nb] -= v

    def size(self) -> int:
        return int(self.in_sol.sum())

    def fill_free(self) -> None:
        while True:
            free = np.flatnonzero((self.tight == 0) & ~self.in_sol)
            if free.size == 0:
                return
            self.add(int(free[self.rng.integers(free.size)]))

    def greedy_min_degree(self) -> None:
        alive = np.ones(self.V, dtype=bool)
        deg = np.array([len(self.nbrs(v)) for v in range(self.V)], dtype=np.int64)
        while alive.any():
            cand = np.flatnonzero(alive)
            dmin = deg[cand].min()
            ties = cand[deg[cand] == dmin]
            v = int(ties[self.rng.integers(ties.size)])
            self.add(v)
            nb = self.nbrs(v)
            gone = nb[alive[nb]]
            alive[v] = False
            alive[gone] = False
            for u in gone.tolist():
                deg[self.nbrs(u)] -= 1

    def two_improvement(self) -> bool:
        one_tight = np.flatnonzero((self.tight == 1) & ~self.in_sol)
        if one_tight.size < 2:
            return False
        owners = self.nb_sum[one_tight]
        for x in self.rng.permutation(np.unique(owners)).tolist():
            grp = one_tight[owners == x]
            if grp.size < 2:
                continue
            for u in grp.tolist():
                nb = self.nbrs(u)
                others = grp[(grp != u) & ~np.isin(grp, nb)]
                if others.size:
                    self.remove(x)
                    self.add(u)
                    self.add(int(others[0]))
                    self.fill_free()
                    return True
        return False

    def perturb(self) -> None:
        outside = np.flatnonzero(~self.in_sol)
        if outside.size == 0:  # every vertex chosen: the graph is edgeless
            return
        v = int(outside[self.rng.integers(outside.size)])
        for x in self.nbrs(v)[self.in_sol[self.nbrs(v)]].tolist():
            self.remove(x)
        self.add(v)
        self.fill_free()


def max_coclique_heuristic(g: FlagGraph, seed: int = 0, warm_start=None, iterations: int = 2000) -> SearchResult:
    rng = np.random.default_rng(seed)
    if g.V == 0:
        return SearchResult([], 0, "LowerBound", 0, seed=seed)
    ls = _LocalSearch(g, rng)
    if warm_start is not None and len(warm_start):
        start = sorted(int(v) for v in warm_start)
        _verify_independent(g, start)
        for v in start:
            ls.add(v)
    else:
        ls.greedy_min_degree()
    ls.fill_free()
    best = np.flatnonzero(ls.in_sol)
    steps = 0
    for _ in range(iterations):
        steps += 1
        if not ls.two_improvement():
            if ls.size() < len(best):
                ls.in_sol[:] = False
                ls.tight[:] = 0
                ls.nb_sum[:] = 0
                for v in best.tolist():
                    ls.add(v)
            ls.perturb()
        if ls.size() > len(best):
            best = np.flatnonzero(ls.in_sol)
    result = [int(v) for v in best]
    _verify_independent(g, result)
    return SearchResult(result, len(result), "LowerBound", steps, seed=seed,
                        extra={"iterations": iterations, "warm_start_size": len(warm_start) if warm_start is not None else 0})
