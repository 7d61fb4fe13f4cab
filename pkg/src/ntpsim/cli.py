"""Command-line entry point: ``ntpsim bench | run | validate``.

Exit codes: 0 success, 1 configuration or parameter error, 2 failed check
(or failed grid cells).
"""
from __future__ import annotations

import argparse
import hashlib
import io
import json
import logging
import os
import platform
import sys
from pathlib import Path

import numpy as np
import scipy

from . import __version__, analytic, config, kernel, report, validate
from .exploration import AGENTS
from .fuzzy import RuleBase, dump_rule_base
from .model import FirmParams, ParameterError, SharingRule
from .runner import run_grid, run_replication

log = logging.getLogger("ntpsim")

EXIT_OK, EXIT_CONFIG, EXIT_CHECK = 0, 1, 2
BENCH_FIELDS = ("solution", "gamma_1", "gamma_2", "lambda_s", "lambda_1", "lambda_2",
                "i_s", "i_1", "i_2", "q_1", "q_2", "pi_s", "pi_1", "pi_2", "pi_hq")


def _add_bench(sub) -> None:
    p = sub.add_parser("bench", help="closed-form first-best / second-best rows")
    p.add_argument("--b", type=float, default=12.0, help="slope of inverse demand")
    p.add_argument("--e-theta-s", type=float, default=60.0)
    p.add_argument("--e-theta-1", type=float, default=100.0)
    p.add_argument("--e-theta-2", type=float, default=100.0)
    p.add_argument("--lambda-s", type=float, default=1.0)
    p.add_argument("--lambda1", type=float, default=0.5)
    p.add_argument("--lambda2", type=float, default=None, help="defaults to --lambda1")
    p.add_argument("--gamma", type=float, nargs="+", metavar="G",
                   help="sharing rule (one value for both buyers, or two); default optimal")
    p.add_argument("--csv", action="store_true", help="emit CSV instead of a table")


def _add_run(sub) -> None:
    p = sub.add_parser("run", help="simulate a scenario grid and write CSV outputs")
    p.add_argument("--scenario", required=True,
                   help="scenario file, or the name of a bundled one (scenario1 .. scenario6)")
    p.add_argument("--section", action="append",
                   help="only run these sections of the file (repeatable)")
    p.add_argument("--runs", type=int, help="replications per cell")
    p.add_argument("--seed", type=int, help="override the grid seed")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--out", default="results", help="output directory")
    p.add_argument("--freeze-eval", action="store_true",
                   help="stop q-updates during the evaluation window")
    p.add_argument("--greedy-eval", action="store_true",
                   help="select greedily during the evaluation window")
    p.add_argument("--full-trace", action="store_true",
                   help="write per-step quantile timelines over the full horizon")
    p.add_argument("--trace", choices=("sparse", "full"),
                   help="timeline resolution; sparse keeps every 10th learning step")
    p.add_argument("--per-run", action="store_true", help="also write per-replication means")
    p.add_argument("--dump-rules", action="store_true",
                   help="dump final rule bases of replication 0 of every cell")
    p.add_argument("--backend", choices=sorted(kernel.BACKENDS), default=None)
    p.add_argument("--quiet", action="store_true")


def _add_validate(sub) -> None:
    p = sub.add_parser("validate", help="run the analytic and property self-checks")
    p.add_argument("--json", action="store_true", help="machine-readable report")


class _Parser(argparse.ArgumentParser):
    """Usage errors are configuration errors here, not check failures."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ntpsim", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add_bench(sub)
    _add_run(sub)
    _add_validate(sub)
    return parser


# bench ---------------------------------------------------------------------

def cmd_bench(args) -> int:
    try:
        params = FirmParams(b=args.b, e_theta_s=args.e_theta_s, e_theta_1=args.e_theta_1,
                            e_theta_2=args.e_theta_2, lambda_s=args.lambda_s,
                            lambda_1=args.lambda1,
                            lambda_2=args.lambda1 if args.lambda2 is None else args.lambda2)
        if args.gamma:
            if len(args.gamma) > 2:
                raise ParameterError("--gamma takes one or two values")
            rule = SharingRule(args.gamma[0], args.gamma[-1])
        else:
            rule = analytic.optimal_gammas(params)
        fb = analytic.first_best(params, rule)
        sb = analytic.second_best(params, rule)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    lam = (params.lambda_s, params.lambda_1, params.lambda_2)
    rows = [("first_best", rule.gamma_1, rule.gamma_2) + lam
            + tuple(getattr(fb, f) for f in BENCH_FIELDS[6:]),
            ("second_best", rule.gamma_1, rule.gamma_2) + lam
            + tuple(getattr(sb, f) for f in BENCH_FIELDS[6:])]
    if args.csv:
        report.write_csv(sys.stdout, BENCH_FIELDS, rows)
        return EXIT_OK
    opt = analytic.optimal_gammas(params)
    print(f"optimal sharing rule: gamma_1={opt.gamma_1:.4f} gamma_2={opt.gamma_2:.4f}")
    print(f"HQ profit at optimum (closed form): {analytic.hq_profit_at_optimal_gammas(params):.4f}")
    head = ["solution", "G1", "G2"] + [f.upper() for f in BENCH_FIELDS[6:]]
    print(" ".join(f"{h:>11}" for h in head))
    for row in rows:
        cells = [f"{row[0]:>11}"] + [f"{v:11.2f}" for v in row[1:3]] + [f"{v:11.2f}" for v in row[6:]]
        print(" ".join(cells))
    return EXIT_OK


# run -----------------------------------------------------------------------

def _write(path: Path, header, rows) -> str:
    buf = io.StringIO()
    report.write_csv(buf, header, rows)
    data = buf.getvalue().encode("utf-8")
    path.write_bytes(data)
    return hashlib.sha256(data).hexdigest()


def _dump_rules(grid: config.ScenarioGrid, out: Path, backend) -> None:
    rules_dir = out / "rules"
    rules_dir.mkdir(exist_ok=True)
    for ci, spec in enumerate(grid.specs):
        rec = run_replication(spec, 0, trace="eval", keep_rule_bases=True, backend=backend)
        with open(rules_dir / f"cell{ci:04d}.csv", "w", encoding="utf-8", newline="") as fh:
            for a, name in enumerate(AGENTS):
                rb = RuleBase(np.tile(np.asarray(spec.actions, dtype=float), (rec.q.shape[1], 1)),
                              rec.q[a], rec.counts[a], spec.partition)
                buf = io.StringIO()
                dump_rule_base(rb, buf, name)
                text = buf.getvalue()
                fh.write(text if a == 0 else text.split("\n", 1)[1])


def _run_section(grid: config.ScenarioGrid, args, out: Path, config_text: str,
                 source: str) -> int:
    trace = "full" if args.full_trace else args.trace
    n_cells = len(grid.specs)
    if not args.quiet:
        runs = sum(s.n_runs for s in grid.specs)
        print(f"[{grid.name}] {n_cells} cells, {runs} replications, "
              f"backend={args.backend or kernel.BACKEND}, threads={args.threads}", file=sys.stderr)

    def progress(done, total):
        if not args.quiet and (done == total or done % max(1, total // 20) == 0):
            print(f"[{grid.name}] {done}/{total} blocks", file=sys.stderr)

    results = run_grid(grid.specs, threads=args.threads, backend=args.backend,
                       trace=trace, progress=progress)
    out.mkdir(parents=True, exist_ok=True)
    files = {}
    files["summary.csv"] = _write(out / "summary.csv", report.SUMMARY_FIELDS,
                                  report.summary_rows(results))
    ind = report.indicator_rows(results)
    files["indicators.csv"] = _write(out / "indicators.csv", report.INDICATOR_FIELDS,
                                     (r.as_row() for r in ind))
    files["gamma_rule.csv"] = _write(out / "gamma_rule.csv", report.GAMMA_RULE_FIELDS,
                                     report.gamma_rule_rows(ind))
    if args.per_run:
        files["replications.csv"] = _write(out / "replications.csv", report.REPLICATION_FIELDS,
                                           report.replication_rows(results))
    if trace:
        files["timeline.csv"] = _write(out / "timeline.csv", report.TIMELINE_FIELDS,
                                       report.timeline_rows(results))
    if args.dump_rules:
        _dump_rules(grid, out, args.backend)

    manifest = {
        "scenario": grid.name,
        "description": grid.description,
        "config_file": source,
        "config_sha256": config.config_digest(config_text),
        "seed": grid.seed,
        "runs_per_cell": sorted({s.n_runs for s in grid.specs}),
        "cells": n_cells,
        "baseline_cells_added": len(grid.baseline_keys),
        "freeze_eval": bool(args.freeze_eval),
        "greedy_eval": bool(args.greedy_eval),
        "trace": trace,
        "backend": args.backend or kernel.BACKEND,
        "versions": {"ntpsim": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
                     "python": platform.python_version()},
        "failures": {"|".join(map(str, k)): v for k, v in results.failures.items()},
        "files": files,
        "command": ["ntpsim", "run", "--scenario", args.scenario, "--seed", str(grid.seed),
                    "--runs", str(grid.specs[0].n_runs)]
                   + (["--freeze-eval"] if args.freeze_eval else [])
                   + (["--greedy-eval"] if args.greedy_eval else []),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                                       encoding="utf-8")
    if not args.quiet:
        print(f"[{grid.name}] wrote {', '.join(sorted(files))} and manifest.json to {out}",
              file=sys.stderr)
    return EXIT_CHECK if results.failures else EXIT_OK


def cmd_run(args) -> int:
    if args.runs is not None and args.runs < 1:
        print("error: --runs must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        path = config.resolve_scenario_path(args.scenario)
        text = path.read_text(encoding="utf-8")
        grids = config.parse_text(text, str(path))
        names = args.section or list(grids)
        missing = [n for n in names if n not in grids]
        if missing:
            raise config.ConfigError(f"{path}: no section named {', '.join(missing)} "
                                     f"(have {', '.join(grids)})")
        selected = [config.with_overrides(grids[n], runs=args.runs, seed=args.seed,
                                          freeze_eval=args.freeze_eval or None,
                                          greedy_eval=args.greedy_eval or None)
                    for n in names]
    except (config.ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    out_root = Path(args.out)
    status = EXIT_OK
    for grid in selected:
        out = out_root if len(selected) == 1 else out_root / grid.name
        try:
            status = max(status, _run_section(grid, args, out, text, args.scenario))
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
    return status


# validate ------------------------------------------------------------------

def cmd_validate(args) -> int:
    checks = validate.run_all()
    ok = all(c.passed for c in checks)
    if args.json:
        print(json.dumps({"passed": ok, "checks": [c.as_dict() for c in checks]}, indent=2))
    else:
        for c in checks:
            print(f"{'PASS' if c.passed else 'FAIL'}  {c.name:<26} {c.detail}")
        print("all checks passed" if ok else "some checks FAILED")
    return EXIT_OK if ok else EXIT_CHECK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    return {"bench": cmd_bench, "run": cmd_run, "validate": cmd_validate}[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
