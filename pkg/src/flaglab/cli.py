"""Command line interface: ``flaglab <verb> ...``.

Exit status: 0 all checks passed, 1 a mathematical check failed (the
witness is in the report), 2 usage or environment error.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .classify import classify_maximal_coclique
from .cocliques import (
    VARIANTS,
    ConstructionSpec,
    FlagFamily,
    build_example,
    color_map,
    count_flags_skew_to,
    is_coclique,
    is_maximal_coclique,
    random_maximal_coclique,
    random_spec,
    red_intersection_check,
    weight_spectrum_violations,
)
from .errors import FlagLabError, UndefinedBranch
from .geometry import ProjSpace, cache_path, default_cache_dir, get_geometry, subspace_array
from .graph import build_graph, degree_histogram, export_dimacs, induced_subgraph, write_metadata
from .linalg import Subspace
from .oracles import analyze_intersecting_family, count_n_spaces_meeting_all
from .qcount import (
    QFormulaReport,
    chromatic_formula,
    example_family_size,
    f_bound,
    gamma_degree,
    gauss,
)
from .search import max_coclique_exact, max_coclique_heuristic

# older verb names kept as aliases
ORACLE_ALIASES = {"lemma43": "meeting-count", "lemma44": "skew-flags"}

F_UNDEFINED = "undefined (f is defined only for n=3 or for n>=4 with q>=4)"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    n: int | None = None
    q: int | None = None
    cache_dir: str | None = None
    memory_budget: int | None = None
    threads: int = 1
    seed: int | None = None
    fmt: str = "json"
    output: str | None = None
    rows: list | None = None  # filled by verbs that support --format csv

    def __post_init__(self):
        if self.n is not None and self.n < 1:
            raise UsageError(f"n must be >= 1, got {self.n}")
        if self.threads < 1:
            raise UsageError("thread count must be >= 1")
        if self.n is not None and self.q is not None:
            ProjSpace(self.n, self.q)


def _dec(obj):
    """Integers become decimal strings (bools stay bools), recursively."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, dict):
        return {k: _dec(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_dec(v) for v in obj]
    return obj


def envelope(verb: str, cfg: RunConfig, result: dict, ok: bool, vertex_hash: str | None = None) -> dict:
    return {
        "tool": "flaglab",
        "version": __version__,
        "verb": verb,
        "n": _dec(cfg.n),
        "q": _dec(cfg.q),
        "vertex_hash": vertex_hash,
        "seed": _dec(cfg.seed),
        "ok": ok,
        "generated_at": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "result": _dec(result),
    }


def _geometry(cfg: RunConfig):
    return get_geometry(cfg.n, cfg.q, cfg.cache_dir)


def _read_json(path: str | None) -> dict:
    if path in (None, "-"):
        text = sys.stdin.read()
    else:
        with open(path) as fh:
            text = fh.read()
    if not text.strip():
        raise UsageError("expected JSON input, got nothing")
    return json.loads(text)


def _load_family(path: str | None, cfg: RunConfig) -> FlagFamily:
    data = _read_json(path)
    fam = data.get("result", {}).get("family", data) if "result" in data else data
    cfg.n, cfg.q = int(fam["n"]), int(fam["q"])
    if cfg.seed is None and data.get("seed") is not None:
        cfg.seed = int(data["seed"])
    return FlagFamily.from_json(_geometry(cfg), fam)


def _flag_json(geom, v: int) -> dict:
    return {"index": int(v), "A": geom.A(geom.flag_a[v]).serialize(), "B": geom.B(geom.flag_b[v]).serialize()}


# -- verbs -------------------------------------------------------------------

def cmd_formulas(args, cfg):
    n, q = cfg.n, cfg.q
    reports = []
    for b in range(2 * n + 2):
        for a in range(b + 1):
            reports.append(QFormulaReport("gauss", {"b": b, "a": a, "q": q}, gauss(b, a, q)))
    values = {
        "example_family_size": example_family_size(n, q),
        "chromatic_formula": chromatic_formula(n, q),
        "gamma_degree": gamma_degree(n, q),
    }
    try:
        values["f_bound"] = f_bound(n, q)
    except UndefinedBranch:
        values["f_bound"] = None
    for name, val in values.items():
        reports.append(QFormulaReport(name, {"n": n, "q": q}, val, note=F_UNDEFINED if val is None else None))
    flat = {k: (str(v) if v is not None else F_UNDEFINED) for k, v in values.items()}
    cfg.rows = [["name", "params", "value"]] + [
        [r.name, json.dumps(r.params, sort_keys=True), r.to_json()["value"]] for r in reports]
    result = {"formulas": [r.to_json() for r in reports], **flat}
    return result, True, None


def cmd_enumerate(args, cfg):
    d = 2 * cfg.n + 1
    k = args.k
    if not 0 <= k <= d:
        raise UsageError(f"--k must lie in [0, {d}]")
    arr = subspace_array(d, k, cfg.q, cfg.cache_dir)
    expected = gauss(d, k, cfg.q)
    result = {"d_v": d, "k": k, "count": len(arr), "gauss": expected,
              "cache_file": str(cache_path(cfg.cache_dir, cfg.q, d, k)) if cfg.cache_dir else None}
    return result, len(arr) == expected, None


def cmd_graph(args, cfg):
    ps = ProjSpace(cfg.n, cfg.q)
    g = build_graph(ps, mode=args.mode, memory_budget=cfg.memory_budget, threads=cfg.threads)
    hist = degree_histogram(g)
    deg = gamma_degree(cfg.n, cfg.q)
    ok = list(hist) == [deg]
    if args.dimacs:
        export_dimacs(g, args.dimacs)
        write_metadata(g, args.dimacs + ".json")
    cfg.rows = [["degree", "count"]] + [[str(k), str(v)] for k, v in hist.items()]
    result = {"mode": args.mode, "V": g.V, "E": sum(k * v for k, v in hist.items()) // 2,
              "degree_histogram": {str(k): v for k, v in hist.items()}, "expected_degree": deg, "regular": ok}
    return result, ok, g.vertex_hash


def _anchor_spec(args, cfg, geom) -> ConstructionSpec:
    if args.random_anchors:
        if cfg.seed is None:
            raise UsageError("--random-anchors needs --seed")
        return random_spec(geom, args.variant, np.random.default_rng(cfg.seed))
    if not args.anchors:
        raise UsageError("give --anchors FILE or --random-anchors --seed S")
    data = _read_json(args.anchors)
    data.setdefault("variant", args.variant)
    return ConstructionSpec.from_json(data)


def cmd_construct(args, cfg):
    geom = _geometry(cfg)
    spec = _anchor_spec(args, cfg, geom)
    F = build_example(geom, spec)
    expected = example_family_size(cfg.n, cfg.q)
    result = {"construction": spec.to_json(), "size": str(len(F)), "expected_size": str(expected),
              "family": F.to_json()}
    return result, len(F) == expected, geom.vertex_hash


def cmd_verify(args, cfg):
    F = _load_family(args.family, cfg)
    geom = F.geom
    c = is_coclique(F)
    result = {"size": str(len(F)), "coclique": c.ok, "maximal": None, "witness": None}
    ok = c.ok
    if not c.ok:
        result["witness"] = [_flag_json(geom, v) for v in c.witness]
    elif args.maximal:
        m = is_maximal_coclique(F)
        result["maximal"] = m.ok
        ok = m.ok
        if not m.ok:
            result["witness"] = [_flag_json(geom, m.witness)]
    return result, ok, geom.vertex_hash


def cmd_classify(args, cfg):
    if args.random_closure is not None:
        cfg.seed = args.random_closure
        F = random_maximal_coclique(_geometry(cfg), args.random_closure)
    else:
        F = _load_family(args.family, cfg)
    report = classify_maximal_coclique(F)
    return report.to_json(), True, F.geom.vertex_hash


def _default_skew_spaces(geom):
    chosen = []
    for i in range(len(geom.A_arr)):
        if all(not (geom.A_inc[i] & geom.A_inc[j]).any() for j in chosen):
            chosen.append(i)
            if len(chosen) == geom.n + 1:
                break
    return [geom.A(i) for i in chosen]


def cmd_oracle(args, cfg):
    which = ORACLE_ALIASES.get(args.which, args.which)
    if which == "meeting-count":
        geom = _geometry(cfg)
        if args.skew_lines:
            data = _read_json(args.skew_lines)
            spaces = [Subspace.parse(s) for s in (data["spaces"] if isinstance(data, dict) else data)]
        else:
            spaces = _default_skew_spaces(geom)
        count = count_n_spaces_meeting_all(geom, spaces)
        result = {"spaces": [s.serialize() for s in spaces], "count": str(count),
                  "scaled": f"{count / cfg.q ** (cfg.n ** 2 - 1):.6f}"}
        return result, True, geom.vertex_hash
    F = _load_family(args.family, cfg)
    geom, n, q = F.geom, F.geom.n, F.geom.q
    if which == "weights":
        viol = weight_spectrum_violations(F)
        cmap = color_map(F) if not viol else None
        result = {"violations": viol[:50], "violation_count": str(len(viol)),
                  "red_n_spaces": str(len(cmap.red_B)) if cmap else None,
                  "red_n_minus_1_spaces": str(len(cmap.red_A)) if cmap else None,
                  "red_intersection": red_intersection_check(F, cmap) if cmap else None}
        return result, not viol and bool(result["red_intersection"]), geom.vertex_hash
    if which == "skew-flags":
        cmap = color_map(F)
        bound = gauss(n, 1, q) * gauss(2 * n - 1, n - 1, q)
        targets = [Subspace.parse(args.space)] if args.space else [geom.B(i) for i in cmap.yellow_B]
        counts = {}
        for B in targets:
            counts[B.serialize()] = count_flags_skew_to(F, B)
        worst = max(counts.values(), default=0)
        result = {"bound": str(bound), "max_count": str(worst), "spaces_checked": str(len(counts)),
                  "counts": {k: str(v) for k, v in counts.items()} if len(counts) <= 64 else None}
        return result, worst <= bound, geom.vertex_hash
    if which == "intersecting":
        cmap = color_map(F)
        rep = analyze_intersecting_family([geom.A(i) for i in cmap.red_A], "point-pencil")
        return rep.to_json(), True, geom.vertex_hash
    raise UsageError(f"unknown oracle {which!r}")


def cmd_search(args, cfg):
    geom = _geometry(cfg)
    mode = "dense" if args.method == "exact" or geom.V <= 20000 else "streaming"
    g = build_graph(geom, mode=mode, memory_budget=cfg.memory_budget, threads=cfg.threads)
    if args.slice_hyperplane:
        H = Subspace.coordinate(cfg.q, geom.d, *[[i] for i in range(1, geom.d)])
        g = induced_subgraph(g, np.flatnonzero(geom.B_inside(H)[geom.flag_b]))
    warm = None
    if args.warm_start:
        warm = FlagFamily.from_json(geom, _read_json(args.warm_start).get("result", {}).get("family")
                                    or _read_json(args.warm_start)).members
    if args.method == "exact":
        res = max_coclique_exact(g, budget=args.budget, incumbent=warm, progress=args.progress)
    else:
        seed = cfg.seed if cfg.seed is not None else 0
        cfg.seed = seed
        res = max_coclique_heuristic(g, seed=seed, warm_start=warm, iterations=args.iterations)
    out = res.to_json()
    out["view_size"] = g.V
    out["set"] = [int(g.vertices[v]) for v in res.set]
    return out, True, geom.vertex_hash


VERBS = {
    "formulas": cmd_formulas,
    "enumerate": cmd_enumerate,
    "graph": cmd_graph,
    "construct": cmd_construct,
    "verify": cmd_verify,
    "classify": cmd_classify,
    "oracle": cmd_oracle,
    "search": cmd_search,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache-dir", default=None)
    common.add_argument("--no-cache", action="store_true")
    common.add_argument("--memory-budget", type=int, default=None)
    common.add_argument("--threads", type=int, default=int(os.environ.get("FLAGLAB_THREADS", "1")))
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--format", dest="fmt", choices=["json", "csv"], default="json")
    common.add_argument("--output", "-o", default=None)

    nq = argparse.ArgumentParser(add_help=False)
    nq.add_argument("--n", type=int, required=True)
    nq.add_argument("--q", type=int, required=True)

    p = argparse.ArgumentParser(prog="flaglab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="verb", required=True)

    sub.add_parser("formulas", parents=[common, nq])
    s = sub.add_parser("enumerate", parents=[common, nq])
    s.add_argument("--k", type=int, required=True, help="vector dimension of the subspaces")
    s = sub.add_parser("graph", parents=[common, nq])
    s.add_argument("--mode", choices=["dense", "streaming"], default="dense")
    s.add_argument("--dimacs", default=None, help="write DIMACS edges here (+ .json sidecar)")
    s = sub.add_parser("construct", parents=[common, nq])
    s.add_argument("--variant", choices=VARIANTS, required=True)
    s.add_argument("--anchors", default=None, help="JSON {anchor1, anchor2}")
    s.add_argument("--random-anchors", action="store_true")
    s = sub.add_parser("verify", parents=[common])
    s.add_argument("--family", default=None, help="family JSON (default: stdin)")
    s.add_argument("--maximal", action="store_true")
    s = sub.add_parser("classify", parents=[common])
    s.add_argument("--family", default=None)
    s.add_argument("--random-closure", type=int, default=None, metavar="SEED")
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--q", type=int, default=None)
    s = sub.add_parser("oracle", parents=[common])
    s.add_argument("which", choices=["meeting-count", "skew-flags", "weights", "intersecting", *ORACLE_ALIASES])
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--q", type=int, default=None)
    s.add_argument("--skew-lines", default=None)
    s.add_argument("--family", default=None)
    s.add_argument("--space", default=None, help="serialized n-space for skew-flags")
    s = sub.add_parser("search", parents=[common, nq])
    s.add_argument("--method", choices=["exact", "heuristic"], default="heuristic")
    s.add_argument("--budget", type=int, default=10**6)
    s.add_argument("--iterations", type=int, default=2000)
    s.add_argument("--warm-start", default=None)
    s.add_argument("--slice-hyperplane", action="store_true")
    s.add_argument("--progress", action="store_true")
    return p


def _emit(report, rows, cfg: RunConfig, stdout) -> None:
    if rows is not None:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        text = buf.getvalue()
    else:
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cache = None if args.no_cache else (args.cache_dir or str(default_cache_dir()))
        cfg = RunConfig(n=getattr(args, "n", None), q=getattr(args, "q", None), cache_dir=cache,
                        memory_budget=args.memory_budget, threads=args.threads, seed=args.seed,
                        fmt=args.fmt, output=args.output)
        if cfg.fmt == "csv" and args.verb not in ("formulas", "graph"):
            raise UsageError("--format csv is available for 'formulas' and 'graph' only")
        if args.verb in ("classify", "oracle") and args.family is None and (
                getattr(args, "random_closure", None) is not None or ORACLE_ALIASES.get(getattr(args, "which", None), getattr(args, "which", None)) == "meeting-count"):
            if cfg.n is None or cfg.q is None:
                raise UsageError("--n and --q are required here")
        result, ok, vhash = VERBS[args.verb](args, cfg)
    except (UsageError, FlagLabError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"flaglab: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    report = envelope(args.verb, cfg, result, ok, vhash)
    _emit(report, cfg.rows if cfg.fmt == "csv" else None, cfg, stdout)
    return 0 if ok else 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
