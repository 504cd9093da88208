"""Confidence intervals, estimate records and power-law fits."""

from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np
from scipy import stats as sps

Z95 = 1.959963984540054

CSV_COLUMNS = ("statistic", "n", "N", "estimate", "ci_lo", "ci_hi", "samples", "accepted", "seed")
CSV_SCHEMA_VERSION = 1


class InsufficientPoints(ValueError):
    pass


@dataclass(frozen=True)
class EstimateRecord:
    statistic: str
    n: int
    N: int | None
    estimate: float
    ci_lo: float
    ci_hi: float
    samples: int
    accepted: int
    seed: int

    def __post_init__(self):
        if self.accepted > self.samples:
            raise ValueError("accepted count exceeds sample count")

    def row(self) -> dict:
        out = asdict(self)
        for key in ("estimate", "ci_lo", "ci_hi"):
            out[key] = repr(float(out[key]))
        out["N"] = "" if self.N is None else self.N
        return out


def write_records(path, records: Sequence[EstimateRecord], append: bool = False) -> None:
    exists = append and path.exists() and path.stat().st_size > 0
    with open(path, "a" if append else "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
        if not exists:
            writer.writeheader()
        for rec in records:
            writer.writerow(rec.row())


def read_records(path) -> list[EstimateRecord]:
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            out.append(EstimateRecord(
                row["statistic"], int(row["n"]), int(row["N"]) if row["N"] else None,
                float(row["estimate"]), float(row["ci_lo"]), float(row["ci_hi"]),
                int(row["samples"]), int(row["accepted"]), int(row["seed"]),
            ))
    return out


def wilson_interval(successes: int, trials: int, z: float = Z95) -> tuple[float, float]:
    if trials <= 0:
        return (0.0, 1.0)
    p = successes / trials
    denom = 1 + z * z / trials
    mid = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return (max(0.0, mid - half), min(1.0, mid + half))


def frequency_record(statistic, n, N, successes, trials, seed, accepted=None) -> EstimateRecord:
    lo, hi = wilson_interval(successes, trials)
    est = successes / trials if trials else float("nan")
    return EstimateRecord(statistic, n, N, est, lo, hi, trials, trials if accepted is None else accepted, seed)


def mean_interval(values, level: float = 0.95) -> tuple[float, float, float]:
    """Sample mean with a Student-t interval."""
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        return (float("nan"),) * 3
    m = float(x.mean())
    if x.size == 1:
        return (m, m, m)
    half = float(sps.t.ppf(0.5 + level / 2, x.size - 1) * x.std(ddof=1) / math.sqrt(x.size))
    return (m, m - half, m + half)


def mean_record(statistic, n, values, samples, seed) -> EstimateRecord:
    m, lo, hi = mean_interval(values)
    return EstimateRecord(statistic, n, None, m, lo, hi, samples, len(values), seed)


@dataclass(frozen=True)
class PowerLawFit:
    slope: float
    stderr: float
    intercept: float
    points: int

    def interval(self, z: float = Z95) -> tuple[float, float]:
        return (self.slope - z * self.stderr, self.slope + z * self.stderr)


def exponent_fit(ns: Sequence[float], values: Sequence[float]) -> PowerLawFit:
    """Least-squares slope of log(value) against log(n)."""
    ns = np.asarray(ns, dtype=float)
    values = np.asarray(values, dtype=float)
    ok = np.isfinite(values) & (values > 0)
    if ok.sum() < 3:
        raise InsufficientPoints("a power-law fit needs at least three positive points")
    res = sps.linregress(np.log(ns[ok]), np.log(values[ok]))
    stderr = float(res.stderr) if np.isfinite(res.stderr) else 0.0
    return PowerLawFit(float(res.slope), stderr, float(res.intercept), int(ok.sum()))


def log_ratio_interval(parts: Sequence[tuple[int, int, int]], z: float = Z95) -> tuple[float, float, float]:
    """Estimate and delta-method CI of prod p_i^{sign_i} from (successes, trials, sign) triples."""
    log_est = 0.0
    var = 0.0
    for k, n, sign in parts:
        if k == 0 or n == 0:
            return (float("nan"),) * 3
        p = k / n
        log_est += sign * math.log(p)
        var += (1 - p) / (n * p)
    half = z * math.sqrt(var)
    return (math.exp(log_est), math.exp(log_est - half), math.exp(log_est + half))

