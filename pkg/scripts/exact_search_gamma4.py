"""Exact maximum-coclique search on the full opposition graph at (n, q) = (2, 2).

Not a gate: the search is budgeted and TimedOut is an acceptable outcome.
The a_i construction (133 flags) is the incumbent unless --no-incumbent.
"""

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass

from flaglab.cocliques import ConstructionSpec, build_example
from flaglab.geometry import get_geometry
from flaglab.graph import build_graph
from flaglab.linalg import Subspace
from flaglab.search import max_coclique_exact


@dataclass
class Config:
    budget: int = 200_000
    incumbent: bool = True
    progress: bool = False


def run(cfg: Config) -> dict:
    geom = get_geometry(2, 2)
    g = build_graph(geom)
    inc = None
    if cfg.incumbent:
        H = Subspace.coordinate(2, 5, [1], [2], [3], [4])
        inc = build_example(geom, ConstructionSpec("a_i", H, Subspace.coordinate(2, 5, [1]))).members
    t = time.perf_counter()
    res = max_coclique_exact(g, budget=cfg.budget, incumbent=inc, progress=cfg.progress)
    return {"config": asdict(cfg), "size": res.size, "status": res.status,
            "nodes": res.nodes_explored, "seconds": round(time.perf_counter() - t, 1)}


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--budget", type=int, default=Config.budget)
    p.add_argument("--no-incumbent", action="store_true")
    p.add_argument("--progress", action="store_true")
    a = p.parse_args()
    out = run(Config(a.budget, not a.no_incumbent, a.progress))
    json.dump(out, sys.stdout, indent=2)
    print()


if __name__ == "__main__":
    main()
