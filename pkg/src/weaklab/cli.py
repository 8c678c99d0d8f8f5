"""Batch experiment runner.

``weaklab run --config cfg.json`` executes one suite and writes CSV rows
plus a JSON summary; ``weaklab verify <suite>`` does the same from the
packaged config corpus.  One-shot subcommands (norm, maximal, constant,
construct) evaluate single module operations with inline parameters, and
``report`` merges CSV outputs into a summary.

Exit codes: 0 all checks passed, 1 some check failed, 2 configuration or
usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from importlib import resources
from pathlib import Path

import numpy as np

from .grid import (ConfigurationError, GridFunction, Weight, cube_family,
                   make_grid, ones, save_grid_function)
from .lorentz import lorentz_values
from .maximal import MaximalConfig, maximal, multilinear_maximal, rdf_iterate
from .weights import (ExponentSystem, WeightVector, a1_constant, ainf_constant,
                      apr_constant, apr_r1_constant, apvec_constant,
                      hat_ar_construct, hat_arq_construct, weight_generators)
from .extrapolation import OffDiagExponents
from .suites import SUITES, ReportRecord, run_suite

CSV_COLUMNS = ["suite", "case_id", "resolution", "lhs", "rhs", "constant",
               "witness", "pass"]


# -- config handling ----------------------------------------------------------

def _fail(path: str, message: str):
    raise ConfigurationError(f"{path}: {message}")


def validate_config(cfg) -> dict:
    if not isinstance(cfg, dict):
        _fail("config", "must be a JSON object")
    if cfg.get("schema_version") != 1:
        _fail("schema_version", f"must be 1, got {cfg.get('schema_version')!r}")
    suite = cfg.get("suite")
    if suite not in SUITES:
        _fail("suite", f"unknown suite {suite!r}; known: {sorted(SUITES)}")
    grid = cfg.get("grid")
    if not isinstance(grid, dict) or grid.get("d") not in (1, 2):
        _fail("grid.d", "dimension must be 1 or 2")
    levels = grid.get("levels") or [grid.get("L")]
    if grid.get("L") is None and not grid.get("levels"):
        _fail("grid.L", "either L or levels is required")
    for lv in levels:
        if not isinstance(lv, int) or not (2 <= lv <= 14):
            _fail("grid.levels", f"levels must be ints in [2, 14], got {lv!r}")
    if sorted(levels) != list(levels):
        _fail("grid.levels", "levels must be ascending")
    if "L" not in grid:
        grid["L"] = levels[-1]
    if not isinstance(cfg.get("seed"), int):
        _fail("seed", "an integer seed is mandatory (no nondeterminism)")
    if "cases" in cfg and (not isinstance(cfg["cases"], int) or cfg["cases"] < 1):
        _fail("cases", "must be a positive integer")
    if "exponents" in cfg:
        e = cfg["exponents"]
        try:
            ExponentSystem(tuple(e["p"]), tuple(e["r"]),
                           tuple(e.get("alpha", e["p"])))
        except (KeyError, TypeError) as exc:
            _fail("exponents", f"needs lists p, r, alpha ({exc})")
        except ConfigurationError as exc:
            _fail("exponents", str(exc))
    for i, blk in enumerate(cfg.get("params", {}).get("exponent_blocks", [])):
        try:
            OffDiagExponents(blk["r0"], blk["p0"], blk["q0"], blk["s0"],
                             blk["alpha"])
        except (KeyError, TypeError) as exc:
            _fail(f"params.exponent_blocks[{i}]", f"needs r0,p0,q0,s0,alpha ({exc})")
        except ConfigurationError as exc:
            _fail(f"params.exponent_blocks[{i}]", str(exc))
    return cfg


def load_config(path: str | Path) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigurationError(f"config: cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config: invalid JSON in {path}: {exc}")
    return validate_config(cfg)


def packaged_config(suite: str) -> dict:
    ref = resources.files("weaklab").joinpath(f"configs/{suite}.json")
    if not ref.is_file():
        raise ConfigurationError(f"suite: no packaged config for {suite!r}")
    return validate_config(json.loads(ref.read_text()))


# -- output -------------------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def write_csv(rows, path: Path) -> None:
    rows = sorted(rows, key=lambda r: (r.suite, r.case_id, r.resolution))
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in rows:
            writer.writerow([r.suite, r.case_id, r.resolution, _fmt(r.lhs),
                             _fmt(r.rhs), _fmt(r.constant), r.witness,
                             "true" if r.passed else "false"])


def summarize(rows, stability: dict | None = None) -> list:
    by_suite: dict[str, list] = {}
    for r in rows:
        by_suite.setdefault(r.suite, []).append(r)
    out = []
    for suite in sorted(by_suite):
        rs = by_suite[suite]
        consts = [r.constant for r in rs
                  if math.isfinite(r.constant) and r.constant > 0]
        if stability and suite in stability:
            stab = stability[suite]
        else:
            stab = _stability_from_rows(rs)
        out.append({
            "suite": suite,
            "cases": len(rs),
            "max_constant": max(consts) if consts else 0.0,
            "min_constant": min(consts) if consts else 0.0,
            "stability_factor": stab,
            "pass": all(r.passed for r in rs),
        })
    return out


def _stability_from_rows(rows) -> float:
    by_res: dict[int, float] = {}
    for r in rows:
        if math.isfinite(r.constant) and r.constant > 0:
            by_res[r.resolution] = max(by_res.get(r.resolution, 0.0), r.constant)
    levels = sorted(by_res)
    worst = 1.0
    for la, lb in zip(levels, levels[1:]):
        if by_res[la] > 0 and by_res[lb] > 0:
            g = by_res[lb] / by_res[la]
            worst = max(worst, g, 1.0 / g)
    return worst


def write_summary(summaries, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(summaries, fh, indent=2, sort_keys=True)
        fh.write("\n")


# -- inline function / weight specs ------------------------------------------

def parse_weight_spec(grid, spec: str) -> Weight:
    parts = spec.split(":")
    kind, args = parts[0], parts[1:]
    if kind == "constant":
        return weight_generators("constant", {"c": float(args[0]) if args else 1.0},
                                 0, grid)
    if kind == "power":
        return weight_generators("power", {"a": float(args[0])}, 0, grid)
    if kind == "product_power":
        return weight_generators("product_power", {"a": [float(a) for a in args]},
                                 0, grid)
    if kind == "rdf":
        seed = int(args[0]) if args else 0
        k = int(args[1]) if len(args) > 1 else 6
        return weight_generators("rdf", {"k": k}, seed, grid)
    if kind == "smooth":
        return weight_generators("indicator_smoothed", {},
                                 int(args[0]) if args else 0, grid)
    raise ConfigurationError(f"weight spec: unknown kind {kind!r}")


def parse_function_spec(grid, spec: str) -> GridFunction:
    parts = spec.split(":")
    kind, args = parts[0], parts[1:]
    n = grid.ncells
    if kind == "constant":
        return GridFunction(grid, np.full(n, float(args[0]) if args else 1.0))
    if kind == "indicator":
        a = float(args[0]) if args else 0.0
        b = float(args[1]) if len(args) > 1 else 1.0
        idx = np.arange(n) / n
        return GridFunction(grid, ((idx >= a) & (idx < b)).astype(float))
    if kind == "cell":
        vals = np.zeros(n)
        vals[int(args[0])] = 1.0
        return GridFunction(grid, vals)
    if kind == "random":
        rng = np.random.default_rng(int(args[0]) if args else 0)
        density = float(args[1]) if len(args) > 1 else 0.25
        return GridFunction(grid, (rng.random(n) < density).astype(float))
    if kind == "staircase":
        from .suites import suite_staircase
        return suite_staircase(int(args[0]) if args else 0, grid,
                               base_level=grid.L)
    if kind == "spikes":
        from .applications import spike_family
        return spike_family(grid, int(args[0]))
    raise ConfigurationError(f"function spec: unknown kind {kind!r}")


# -- subcommand implementations ----------------------------------------------

def _run_configs(cfgs, out_dir: Path, threads: int, seed_override: int | None) -> int:
    if seed_override is not None:
        for cfg in cfgs:
            cfg["seed"] = seed_override
    results = {}
    if threads > 1 and len(cfgs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = {cfg["suite"]: pool.submit(run_suite, cfg) for cfg in cfgs}
            results = {name: fut.result() for name, fut in futures.items()}
    else:
        results = {cfg["suite"]: run_suite(cfg) for cfg in cfgs}
    all_rows = []
    stability = {}
    for name in sorted(results):
        rows = results[name].rows
        all_rows.extend(rows)
        stability[name] = results[name].measured.get(
            "stability_factor", _stability_from_rows(rows))
        write_csv(rows, out_dir / f"{name}.csv")
    summaries = summarize(all_rows, stability)
    write_summary(summaries, out_dir / "summary.json")
    for s in summaries:
        status = "PASS" if s["pass"] else "FAIL"
        print(f"{status} {s['suite']}: {s['cases']} rows, "
              f"max_constant={s['max_constant']:.6g}, "
              f"stability={s['stability_factor']:.4g}")
    return 0 if all(s["pass"] for s in summaries) else 1


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    return _run_configs([cfg], Path(args.out), args.threads, args.seed_override)


def cmd_verify(args) -> int:
    if args.config:
        cfgs = [load_config(args.config)]
        if cfgs[0]["suite"] != args.suite and args.suite != "all":
            raise ConfigurationError(
                f"suite: config is for {cfgs[0]['suite']!r}, asked {args.suite!r}")
    elif args.suite == "all":
        cfgs = [packaged_config(name) for name in sorted(SUITES)]
    else:
        cfgs = [packaged_config(args.suite)]
    return _run_configs(cfgs, Path(args.out), args.threads, args.seed_override)


def _grid_from_args(args):
    return make_grid(args.d, args.L)


def cmd_norm(args) -> int:
    grid = _grid_from_args(args)
    f = parse_function_spec(grid, args.f)
    w = (parse_weight_spec(grid, args.w) if args.w else ones(grid))
    q = math.inf if args.q in (None, "inf") else float(args.q)
    val = lorentz_values(f.values, w.values * grid.cell_volume, args.p, q)
    print(repr(val))
    return 0


def cmd_maximal(args) -> int:
    grid = _grid_from_args(args)
    fam = cube_family(grid, args.shifted)
    mu = parse_weight_spec(grid, args.mu) if args.mu else None
    cfg = MaximalConfig(fam, mu)
    if args.fs:
        fs = [parse_function_spec(grid, s) for s in args.fs.split(",")]
        out = multilinear_maximal(fs, cfg)
    else:
        out = maximal(parse_function_spec(grid, args.g), cfg)
    print(repr(float(out.values.max())))
    if args.out_values:
        save_grid_function(out, args.out_values)
    return 0


def cmd_constant(args) -> int:
    grid = _grid_from_args(args)
    fam = cube_family(grid, args.shifted)
    weights = tuple(parse_weight_spec(grid, s) for s in args.w.split(","))
    if args.which == "a1":
        mu = parse_weight_spec(grid, args.mu) if args.mu else None
        est = a1_constant(weights[0], mu, fam)
    elif args.which == "ainf":
        mu = parse_weight_spec(grid, args.mu) if args.mu else None
        est = ainf_constant(weights[0], fam, mu)
    else:
        m = len(weights)
        p = tuple(float(x) for x in args.p.split(",")) if args.p else (2.0,) * m
        r = (tuple(float(x) for x in args.r.split(","))
             if args.r else (1.0,) * (m + 1))
        alpha = (tuple(float(x) for x in args.alpha.split(","))
                 if args.alpha else tuple(min(pi, 1.0) for pi in p))
        vec = WeightVector(weights, ExponentSystem(p, r, alpha))
        fn = {"apvec": apvec_constant, "apr": apr_constant,
              "apr1": apr_r1_constant}[args.which]
        est = fn(vec, fam)
    print(f"{est.value!r} witness={est.witness}")
    return 0


def cmd_construct(args) -> int:
    grid = _grid_from_args(args)
    fam = cube_family(grid, args.shifted)
    mu = parse_weight_spec(grid, args.mu) if args.mu else None
    if args.kind == "rdf":
        g = parse_function_spec(grid, args.g)
        w = rdf_iterate(g, args.k, MaximalConfig(fam, mu))
    else:
        u1 = parse_weight_spec(grid, args.u1)
        g = parse_function_spec(grid, args.g)
        if args.kind == "hat_ar":
            w = hat_ar_construct(u1, g, args.r, mu, fam)
        else:
            w = hat_arq_construct(u1, g, args.r, args.q, mu, fam)
    audit = a1_constant(w, mu, fam)
    print(f"built {args.kind} weight: range={w.dynamic_range:.4g}, "
          f"a1={audit.value:.6g}")
    if args.out:
        save_grid_function(w, args.out)
    return 0


def cmd_report(args) -> int:
    rows = []
    for path in args.csvs:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            for rec in reader:
                rows.append(ReportRecord(
                    rec["suite"], rec["case_id"], int(rec["resolution"]),
                    float(rec["lhs"]), float(rec["rhs"]),
                    float(rec["constant"]), rec["witness"],
                    rec["pass"] == "true"))
    summaries = summarize(rows)
    write_summary(summaries, Path(args.out))
    for s in summaries:
        print(f"{'PASS' if s['pass'] else 'FAIL'} {s['suite']}: "
              f"max_constant={s['max_constant']:.6g}")
    return 0 if all(s["pass"] for s in summaries) else 1


# -- argument parsing ----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="weaklab",
                                 description="weighted-inequality verification lab")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--out", default="weaklab-out")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--seed-override", type=int, default=None)

    p = sub.add_parser("run", help="run a suite from a config file")
    p.add_argument("--config", required=True)
    add_common(p)
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("verify", help="run a packaged suite (or 'all')")
    p.add_argument("suite")
    p.add_argument("--config", default=None)
    add_common(p)
    p.set_defaults(fn=cmd_verify)

    def add_grid(p):
        p.add_argument("--d", type=int, default=1)
        p.add_argument("--L", type=int, required=True)

    p = sub.add_parser("norm", help="evaluate a Lorentz norm")
    add_grid(p)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--q", default="inf")
    p.add_argument("--f", required=True)
    p.add_argument("--w", default=None)
    p.set_defaults(fn=cmd_norm)

    p = sub.add_parser("maximal", help="evaluate a maximal operator")
    add_grid(p)
    p.add_argument("--g", default=None)
    p.add_argument("--fs", default=None, help="comma-separated multilinear args")
    p.add_argument("--mu", default=None)
    p.add_argument("--shifted", action="store_true")
    p.add_argument("--out-values", default=None)
    p.set_defaults(fn=cmd_maximal)

    p = sub.add_parser("constant", help="evaluate a weight characteristic")
    add_grid(p)
    p.add_argument("--which", required=True,
                   choices=["a1", "ainf", "apvec", "apr", "apr1"])
    p.add_argument("--w", required=True, help="comma-separated weight specs")
    p.add_argument("--p", default=None)
    p.add_argument("--r", default=None)
    p.add_argument("--alpha", default=None)
    p.add_argument("--mu", default=None)
    p.add_argument("--shifted", action="store_true")
    p.set_defaults(fn=cmd_constant)

    p = sub.add_parser("construct", help="build a weight (hat classes, rdf)")
    add_grid(p)
    p.add_argument("--kind", required=True, choices=["hat_ar", "hat_arq", "rdf"])
    p.add_argument("--u1", default=None)
    p.add_argument("--g", default="constant:1")
    p.add_argument("--r", type=float, default=2.0)
    p.add_argument("--q", type=float, default=1.0)
    p.add_argument("--k", type=int, default=6)
    p.add_argument("--mu", default=None)
    p.add_argument("--shifted", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_construct)

    p = sub.add_parser("report", help="merge CSV reports into a JSON summary")
    p.add_argument("csvs", nargs="+")
    p.add_argument("--out", default="summary.json")
    p.set_defaults(fn=cmd_report)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (KeyError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
