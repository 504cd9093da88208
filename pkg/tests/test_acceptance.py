"""Acceptance criteria, one test each, with a PASS/FAIL line per criterion.

Sample counts are reduced by default so the file runs in minutes on one
CPU.  Set PERCOLAB_FULL=1 for the full counts (hours).  Tolerances are the
same in both modes.
"""

import itertools
import json
import math
import os
from functools import cache

import numpy as np
import pytest

from percolab import cli
from percolab.arms import estimate_edge_pi3, quasi_mult_check
from percolab.connectivity import OPEN, crossing_exists
from percolab.gamma import cumulative_sum_check
from percolab.lattice import Configuration, build_box
from percolab.montecarlo import (
    ExperimentConfig,
    chemdist_sample,
    conditional_comparison,
    estimate_chemdist,
    estimate_one_arm,
    estimate_pi3,
    fit_statistic,
    rsw_check,
    rsw_rect,
    measured_ratio_trend,
)
from percolab.oracles import run_suites

FULL = os.environ.get("PERCOLAB_FULL") == "1"
GRID = (8, 16, 32, 64, 128)

# (full, reduced)
CHAIN_SAMPLES = 5000 if FULL else 150  # tried per n; full gives > 10^4 accepted in total
CHEMDIST_SAMPLES = 18000 if FULL else 150  # tried per n; full gives >= 10^4 accepted at n = 128
ONE_ARM_SAMPLES = 10**5 if FULL else 8000
PI3_SAMPLES = 10**5 if FULL else 4000
QM_SAMPLES = 40000 if FULL else 4000
COMPARE_SAMPLES = 20000 if FULL else 1500


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}: {detail}")
        return ok
    return emit


@cache
def exponent_records():
    config = ExperimentConfig(n_grid=GRID, samples=CHEMDIST_SAMPLES, seed=2024)
    chem = estimate_chemdist(config)
    one_arm = estimate_one_arm(ExperimentConfig(n_grid=GRID, samples=ONE_ARM_SAMPLES, seed=2025))
    pi3 = estimate_pi3(ExperimentConfig(n_grid=GRID, samples=PI3_SAMPLES, seed=2026))
    return config, chem, one_arm, pi3


def test_self_dual_crossing(report):
    # exhaustive on the 2 x 1 rectangle
    rect = rsw_rect(1, 1)
    geom = build_box(1)
    edges = [e for e in geom.edges()
             if all(rect.x0 <= x <= rect.x1 and rect.y0 <= y <= rect.y1 for x, y in e.endpoints)]
    hits = 0
    for bits in itertools.product((False, True), repeat=len(edges)):
        states = np.zeros(geom.n_edges, dtype=bool)
        for e, b in zip(edges, bits):
            states[geom.edge_index(e)] = b
        hits += crossing_exists(Configuration(geom, states), rect, OPEN, "horizontal")
    exact = hits / 2 ** len(edges)
    rec = rsw_check(1, (16,), 10**5, 7).records[0]
    ok = exact == 0.5 and abs(rec.estimate - 0.5) <= 0.005
    assert report(1, ok, f"2x1 exhaustive = {hits}/{2 ** len(edges)}; n=16 MC = {rec.estimate:.5f} "
                         f"(|dev| {abs(rec.estimate - 0.5):.5f} <= 0.005, {rec.samples} samples)")


def test_oracle_equivalence(report):
    results = run_suites()
    detail = "; ".join(f"{r.name} {r.cases - r.mismatches}/{r.cases}" for r in results)
    assert report(2, all(r.passed for r in results), detail)


def test_invariant_chain(report):
    config = ExperimentConfig(n_grid=(8, 16, 32, 64), samples=CHAIN_SAMPLES, seed=31, verify=True)
    accepted = violations = certified = 0
    first = ""
    for n in config.n_grid:
        for index in range(config.samples):
            try:
                row = chemdist_sample(n, config, index)
            except AssertionError as err:  # InvariantViolation and VerificationFailure
                violations += 1
                first = first or f"n={n} index={index}: {err}"
                continue
            if row is None:
                continue
            accepted += 1
            certified += row["certified"]
            if row["certified"] != row["gamma_length"]:
                violations += 1
                first = first or f"n={n} index={index}: {row['certified']} of {row['gamma_length']} edges certified"
    ok = violations == 0 and accepted > 0
    assert report(3, ok, f"{accepted} accepted samples over n in {{8,16,32,64}}, {certified} gamma edges "
                         f"certified, {violations} violations {first}")


def test_exponent_ranges(report):
    _, chem, one_arm, pi3 = exponent_records()
    pi3_fit = fit_statistic(pi3, "pi3")
    arm_fit = fit_statistic(one_arm, "one_arm")
    s_fit = fit_statistic(chem, "S_n")
    accepted = min(r.accepted for r in chem if r.statistic == "S_n")
    ok_pi3 = 0.55 <= -pi3_fit.slope <= 0.80
    ok_arm = 0.07 <= -arm_fit.slope <= 0.16
    ok_s = 1.00 <= s_fit.slope <= 1.30
    detail = (f"pi3 exponent {-pi3_fit.slope:.3f} +- {pi3_fit.stderr:.3f} in [0.55, 0.80] {ok_pi3}; "
              f"one-arm exponent {-arm_fit.slope:.3f} +- {arm_fit.stderr:.3f} in [0.07, 0.16] {ok_arm}; "
              f"s-hat {s_fit.slope:.3f} +- {s_fit.stderr:.3f} in [1.00, 1.30] {ok_s} (reference 1.1308); "
              f"min accepted per point {accepted}")
    assert report(4, ok_pi3 and ok_arm and ok_s, detail)


def test_ratio_trend(report):
    config, chem, _, pi3 = exponent_records()
    trend = measured_ratio_trend(config, records=chem + pi3)
    rho = ", ".join(f"{n}:{r:.3f}" for n, r in zip(trend.ns, trend.rho))
    ok = trend.nonincreasing and trend.delta_hat > 0
    assert report(5, ok, f"rho(n) = {rho}; nonincreasing {trend.nonincreasing}; "
                         f"delta-hat {trend.delta_hat:.3f} +- {trend.delta_stderr:.3f}")


def test_quasi_multiplicativity_and_cumulative_sum(report):
    triples = [(2, 4, 8), (4, 8, 16), (8, 16, 32), (16, 32, 64)]
    reps = [quasi_mult_check("pi3", *t, QM_SAMPLES, 77) for t in triples]
    c = [r.c_hat for r in reps]
    qm_ok = all(x > 0 and r.ci_lo > 0 for x, r in zip(c, reps)) and max(c) / min(c) < 2
    _, _, _, pi3 = exponent_records()
    points = {r.n: r for r in pi3}
    for l in (1, 2, 4):
        points[l] = estimate_edge_pi3(l, PI3_SAMPLES, 2026)
    ls = sorted(points)
    cs = cumulative_sum_check({l: points[l].estimate for l in ls}, (8, 16, 32, 64),
                              {l: points[l].ci_lo for l in ls}, {l: points[l].ci_hi for l in ls})
    cs_ok = not cs.grows and all(math.isfinite(x) for x in cs.c_hat)
    detail = (f"c-hat {', '.join(f'{t}:{x:.3f}' for t, x in zip(triples, c))}, max/min {max(c) / min(c):.3f} < 2; "
              f"C-hat(L) {', '.join(f'{L}:{x:.3f}' for L, x in zip(cs.L, cs.c_hat))}, grows {cs.grows}")
    assert report(6, qm_ok and cs_ok, detail)


def test_conditional_comparison(report):
    rep = conditional_comparison(32, COMPARE_SAMPLES, 5)
    ratios = ", ".join(f"{p.distance}:{p.ratio:.3f}" for p in rep.positions)
    counts = ", ".join(f"{p.distance}:{p.on_gamma}/{p.arm_events}" for p in rep.positions)
    ok = rep.spread <= 10
    assert report(7, ok, f"ratios {ratios}; max/min {rep.spread:.3f} <= 10; counts (gamma/A3) {counts}")


def _toml(tables):
    # values are ints, floats, bools, strings or lists of those, which JSON spells the TOML way
    return "".join(f"[{name}]\n" + "".join(f"{k} = {json.dumps(v)}\n" for k, v in body.items())
                   for name, body in tables.items())


def test_reproducibility(report, tmp_path):
    cfg = tmp_path / "run.toml"
    cfg.write_text("[experiment]\nn_grid = [8, 16, 32]\nsamples = 120\nseed = 99\n")
    codes = [cli.main(["chemdist", "--config", str(cfg), "--out", str(tmp_path / "w1"), "--workers", "1"]),
             cli.main(["chemdist", "--config", str(cfg), "--out", str(tmp_path / "w2"), "--workers", "2"])]
    manifest = json.loads((tmp_path / "w1" / "manifest.json").read_text())
    rerun = tmp_path / "rerun.toml"
    rerun.write_text(_toml(manifest["config"]))
    codes.append(cli.main(["chemdist", "--config", str(rerun), "--out", str(tmp_path / "re"), "--workers", "2"]))
    outputs = [(tmp_path / d / "results.csv").read_bytes() for d in ("w1", "w2", "re")]
    samples = [(tmp_path / d / "samples.jsonl").read_bytes() for d in ("w1", "w2", "re")]
    ok = codes == [0, 0, 0] and len(set(outputs)) == 1 and len(set(samples)) == 1
    assert report(8, ok, f"exit codes {codes}; results.csv identical {len(set(outputs)) == 1}; "
                         f"samples.jsonl identical {len(set(samples)) == 1} (workers 1, 2, rerun from manifest)")
