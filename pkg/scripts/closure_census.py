"""Census of seeded random maximal cocliques: category, size, red counts and |F| / q^(n^2+n-2)."""

import argparse
import csv
import sys
from collections import Counter
from dataclasses import dataclass

from flaglab.classify import classify_maximal_coclique
from flaglab.cocliques import random_maximal_coclique
from flaglab.geometry import get_geometry


@dataclass
class Config:
    n: int = 2
    q: int = 2
    seeds: int = 100


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n", type=int, default=Config.n)
    p.add_argument("--q", type=int, default=Config.q)
    p.add_argument("--seeds", type=int, default=Config.seeds)
    a = p.parse_args()
    cfg = Config(a.n, a.q, a.seeds)
    geom = get_geometry(cfg.n, cfg.q)
    scale = cfg.q ** (cfg.n * cfg.n + cfg.n - 2)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["seed", "category", "size", "ratio", "red_n_spaces", "red_n_minus_1_spaces"])
    tally = Counter()
    for seed in range(cfg.seeds):
        rep = classify_maximal_coclique(random_maximal_coclique(geom, seed))
        tally[rep.category] += 1
        w.writerow([seed, rep.category, rep.size, f"{rep.size / scale:.3f}",
                    rep.red_counts["red_n_spaces"], rep.red_counts["red_n_minus_1_spaces"]])
    print(f"# categories: {dict(sorted(tally.items()))}", file=sys.stderr)


if __name__ == "__main__":
    main()
