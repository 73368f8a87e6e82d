"""Histogram of per-space flag counts over seeded random maximal cocliques.

Prints, for n-spaces and (n-1)-spaces separately, how often each count
occurs and how many spectrum violations were seen (expected: none).
"""

import argparse
import json
import sys
from collections import Counter
from dataclasses import dataclass

import numpy as np

from flaglab.cocliques import random_maximal_coclique, space_counts, weight_spectrum_violations
from flaglab.geometry import get_geometry


@dataclass
class Config:
    n: int = 2
    q: int = 3
    seeds: int = 20


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=Config.n)
    p.add_argument("--q", type=int, default=Config.q)
    p.add_argument("--seeds", type=int, default=Config.seeds)
    a = p.parse_args()
    cfg = Config(a.n, a.q, a.seeds)
    geom = get_geometry(cfg.n, cfg.q)
    hist_b, hist_a, violations = Counter(), Counter(), 0
    for seed in range(cfg.seeds):
        F = random_maximal_coclique(geom, seed)
        cB, cA = space_counts(F)
        hist_b.update(cB[cB > 0].tolist())
        hist_a.update(cA[cA > 0].tolist())
        violations += len(weight_spectrum_violations(F))
    out = {"n": cfg.n, "q": cfg.q, "seeds": cfg.seeds, "violations": violations,
           "n_space_counts": {str(k): v for k, v in sorted(hist_b.items())},
           "n_minus_1_space_counts": {str(k): v for k, v in sorted(hist_a.items())},
           "mean_family_size": float(np.mean([len(random_maximal_coclique(geom, s)) for s in range(cfg.seeds)]))}
    json.dump(out, sys.stdout, indent=2)
    print()


if __name__ == "__main__":
    main()
