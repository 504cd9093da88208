"""Command-line entry point.

    percolab <subcommand> [--config FILE] [--out DIR] [--seed N] [--workers N]

Each run writes ``manifest.json`` first, then ``results.csv`` and, for the
per-sample subcommands, ``samples.jsonl``.  Exit codes: 0 success, 2 bad
configuration, 3 file-system failure, 4 internal invariant violation.  On
failure a JSON error record goes to stderr and to ``error.json``.
"""

from __future__ import annotations

import argparse
import json
import platform
import sys
import time
from datetime import datetime, timezone
from functools import partial
from pathlib import Path

import numpy as np

from . import __version__
from .arms import estimate_pi
from .config import ConfigError, RunConfig, load_config
from .gamma import VerificationFailure, build_gamma, verify_gamma
from .lattice import build_box, sample_configuration
from .montecarlo import (
    InsufficientSamples,
    InvariantViolation,
    chemdist_sample,
    conditional_comparison,
    conditioned_sample,
    conditioned_stream,
    ratio_trend,
    records_by,
    rsw_check,
    run_experiment,
)
from .connectivity import radial_connection
from .oracles import SUITES, run_suites
from .runner import default_workers, derive_seed, map_samples
from .stats import (
    CSV_SCHEMA_VERSION,
    EstimateRecord,
    InsufficientPoints,
    exponent_fit,
    frequency_record,
    mean_record,
    read_records,
    write_records,
)

COMMANDS = ("sample", "arm", "chemdist", "gamma", "shortcut", "rsw", "compare", "oracle", "fit")
EXIT_CONFIG, EXIT_IO, EXIT_INVARIANT = 2, 3, 4


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _write_jsonl(path: Path, rows) -> None:
    with open(path, "w") as fh:
        for row in rows:
            fh.write(json.dumps(row, sort_keys=True) + "\n")


# -- per-sample workers (module level so they pickle) -------------------------

def _sample_row(n, p, seed, index):
    cfg_seed = derive_seed(seed, conditioned_stream(n, p), index)
    cfg = sample_configuration(build_box(n), p, cfg_seed)
    return {"n": n, "index": index, "seed": cfg_seed, "connected": radial_connection(cfg),
            "open_fraction": cfg.open_fraction(), "config": cfg.to_text()}


def _gamma_row(n, exp, index):
    cfg = conditioned_sample(n, exp.p, exp.seed, index)
    if cfg is None:
        return None
    gd = build_gamma(cfg)
    certified = len(verify_gamma(cfg, gd, exp.R)) if exp.verify else 0
    row = gd.to_json(cfg.geometry)
    row.update(n=n, index=index, seed=cfg.seed, length=gd.gamma.length, certified=certified)
    return row


def _shortcut_row(n, exp, index):
    return chemdist_sample(n, exp, index, detail=True)


# -- subcommands ----------------------------------------------------------------

def cmd_sample(rc: RunConfig, out: Path, workers):
    sec, exp = rc.section("sample"), rc.experiment
    rows = map_samples(partial(_sample_row, sec["n"], exp.p, exp.seed), sec["count"], workers)
    _write_jsonl(out / "samples.jsonl", rows)
    hits = sum(r["connected"] for r in rows)
    return [frequency_record("one_arm", sec["n"], None, hits, len(rows), exp.seed)]


def cmd_arm(rc: RunConfig, out: Path, workers):
    sec, exp = rc.section("arm"), rc.experiment
    k = sec["k"] or None
    inner = sec["inner"] or None
    return [estimate_pi(sec["family"], inner, N, exp.samples, exp.seed, exp.p, k, workers) for N in sec["outer"]]


def cmd_chemdist(rc: RunConfig, out: Path, workers):
    rows = []
    records = run_experiment(rc.experiment, workers, rows)
    _write_jsonl(out / "samples.jsonl", rows)
    return records


def cmd_gamma(rc: RunConfig, out: Path, workers):
    exp = rc.experiment
    records, rows = [], []
    for n in exp.n_grid:
        got = [r for r in map_samples(partial(_gamma_row, n, exp), exp.samples, workers) if r is not None]
        rows.extend(got)
        records.append(mean_record("gamma_length", n, [r["length"] for r in got], exp.samples, exp.seed))
        records.append(mean_record("circuits", n, [r["K"] for r in got], exp.samples, exp.seed))
        records.append(frequency_record("case_C0", n, None, sum(r["case"] == "C0" for r in got), len(got), exp.seed))
    _write_jsonl(out / "samples.jsonl", rows)
    return records


def cmd_shortcut(rc: RunConfig, out: Path, workers):
    exp = rc.experiment
    records, rows = [], []
    for n in exp.n_grid:
        got = [r for r in map_samples(partial(_shortcut_row, n, exp), exp.samples, workers) if r is not None]
        rows.extend(got)
        for name, key in (("s_length", "s_length"), ("savings", "savings"), ("detours", "detours")):
            records.append(mean_record(name, n, [r[key] for r in got], exp.samples, exp.seed))
    _write_jsonl(out / "samples.jsonl", rows)
    return records


def cmd_rsw(rc: RunConfig, out: Path, workers):
    sec, exp = rc.section("rsw"), rc.experiment
    return list(rsw_check(sec["k"], sec["n_grid"], exp.samples, exp.seed, exp.p, workers).records)


def cmd_compare(rc: RunConfig, out: Path, workers):
    sec, exp = rc.section("compare"), rc.experiment
    try:
        rep = conditional_comparison(sec["n"], exp.samples, exp.seed, exp.p, sec["distances"], k=sec["k"],
                                     arm_samples=sec["arm_samples"] or None, workers=workers)
    except InsufficientSamples as err:
        raise ConfigError(f"[compare] {err}") from err
    records = []
    for pos in rep.positions:
        records.append(frequency_record(f"E_given_gamma:d{pos.d}", pos.distance, None, pos.hits_gamma,
                                        pos.on_gamma, exp.seed))
        records.append(frequency_record(f"E_given_A3:d{pos.d}", pos.distance, None, pos.hits_arm,
                                        pos.arm_events, exp.seed))
    _write_json(out / "compare.json", {
        "n": rep.n, "event": rep.event, "max_ratio": rep.max_ratio, "spread": rep.spread,
        "ratios": {str(p.distance): p.ratio for p in rep.positions},
    })
    return records


def cmd_oracle(rc: RunConfig, out: Path, workers):
    names = rc.section("oracle")["suites"] or list(SUITES)
    unknown = set(names) - set(SUITES)
    if unknown:
        raise ConfigError(f"[oracle] unknown suites {sorted(unknown)}")
    results = run_suites(names)
    records = []
    for res in results:
        ok = res.cases - res.mismatches
        records.append(frequency_record(f"oracle:{res.name}", 0, None, ok, res.cases, rc.experiment.seed))
        print(f"{'PASS' if res.passed else 'FAIL'} {res.name}: {ok}/{res.cases} {res.detail}")
    write_records(out / "results.csv", records)
    failed = [r.name for r in results if not r.passed]
    if failed:
        raise InvariantViolation(f"oracle suites disagree: {failed}")
    return records


def cmd_fit(rc: RunConfig, out: Path, workers):
    sec = rc.section("fit")
    src = Path(sec["input"])
    if src.resolve() == (out / "results.csv").resolve():
        raise ConfigError("[fit] input must differ from the output results.csv")
    records = read_records(src)
    fits = []
    for stat in sec["statistics"]:
        by_n = records_by(records, stat)
        ns = sorted(by_n)
        try:
            fit = exponent_fit(ns, [by_n[n].estimate for n in ns])
        except InsufficientPoints:
            continue
        lo, hi = fit.interval()
        fits.append(EstimateRecord(f"slope:{stat}", ns[0], ns[-1], fit.slope, lo, hi, fit.points, fit.points,
                                   rc.experiment.seed))
    s, q = records_by(records, "S_n"), records_by(records, "pi3")
    ns = sorted(set(s) & set(q))
    if len(ns) >= 3:
        trend = ratio_trend(ns, [(s[n].estimate, s[n].ci_lo, s[n].ci_hi) for n in ns],
                            [(q[n].estimate, q[n].ci_lo, q[n].ci_hi) for n in ns])
        z = 1.959963984540054
        fits.append(EstimateRecord("delta_hat", ns[0], ns[-1], trend.delta_hat,
                                   trend.delta_hat - z * trend.delta_stderr, trend.delta_hat + z * trend.delta_stderr,
                                   len(ns), len(ns), rc.experiment.seed))
    if not fits:
        raise ConfigError(f"nothing to fit in {src}")
    return fits


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


# -- plumbing -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="percolab", description="Critical percolation Monte Carlo laboratory.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="TOML configuration file (defaults apply when omitted)")
        p.add_argument("--out", help="output directory (default runs/<subcommand>)")
        p.add_argument("--seed", type=int, help="override experiment.seed")
        p.add_argument("--workers", type=int, default=None, help="worker processes (default: available CPUs)")
    return parser


def manifest(command: str, rc: RunConfig, workers: int, config_path) -> dict:
    return {
        "command": command,
        "config": rc.to_dict(),
        "config_path": str(config_path) if config_path else None,
        "code_version": __version__,
        "csv_schema_version": CSV_SCHEMA_VERSION,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "workers": workers,
        "started": datetime.now(timezone.utc).isoformat(),
        "status": "running",
    }


def _fail(out: Path | None, code: int, err: BaseException) -> int:
    record = {"status": "error", "exit_code": code, "error": type(err).__name__, "message": str(err)}
    print(json.dumps(record, sort_keys=True), file=sys.stderr)
    if out is not None:
        try:
            _write_json(out / "error.json", record)
        except OSError:
            pass
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = None
    try:
        rc = load_config(args.config, args.seed)
        workers = args.workers if args.workers is not None else default_workers()
        if workers < 1:
            raise ConfigError("--workers must be at least 1")
        out = Path(args.out or Path("runs") / args.command)
        out.mkdir(parents=True, exist_ok=True)
        man = manifest(args.command, rc, workers, args.config)
        _write_json(out / "manifest.json", man)
        t0 = time.perf_counter()
        records = HANDLERS[args.command](rc, out, workers)
        if args.command != "oracle":
            write_records(out / "results.csv", records)
        man.update(status="ok", wall_seconds=round(time.perf_counter() - t0, 3),
                   finished=datetime.now(timezone.utc).isoformat())
        _write_json(out / "manifest.json", man)
    except ConfigError as err:
        return _fail(out, EXIT_CONFIG, err)
    except OSError as err:
        return _fail(out, EXIT_IO, err)
    except (InvariantViolation, VerificationFailure, AssertionError) as err:
        return _fail(out, EXIT_INVARIANT, err)
    return 0


if __name__ == "__main__":
    sys.exit(main())
