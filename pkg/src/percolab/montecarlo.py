"""Conditioned sampling, estimators over an n-grid, and the ratio checks built on them."""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass
from functools import partial
from typing import Callable, Sequence

import numpy as np

from .arms import estimate_edge_pi3, three_arm_event
from .connectivity import OPEN, Rect, chemical_distance, crossing_exists, radial_connection
from .gamma import build_gamma, verify_gamma
from .lattice import Configuration, EdgeIndex, build_box, displacement_M, sample_configuration
from .runner import derive_seed, map_samples
from .shortcuts import shortcut_stats, splice
from .stats import (
    EstimateRecord,
    InsufficientPoints,
    exponent_fit,
    frequency_record,
    mean_record,
)

STATISTICS = ("chemdist", "pi3", "one_arm")


class InsufficientSamples(ValueError):
    pass


class InvariantViolation(AssertionError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    n_grid: tuple[int, ...] = (8, 16, 32, 64)
    samples: int = 1000
    seed: int = 0
    p: float = 0.5
    delta: float = 0.9  # smaller values leave no shortcut scale below n = 2**(4/delta)
    epsilon: float = 0.25
    nu: float = 0.5
    statistics: tuple[str, ...] = STATISTICS
    verify: bool = False  # check every gamma edge's three-arm certificate
    R: int = 3

    def __post_init__(self):
        object.__setattr__(self, "n_grid", tuple(int(n) for n in self.n_grid))
        object.__setattr__(self, "statistics", tuple(self.statistics))
        if not self.n_grid or any(n < 2 for n in self.n_grid):
            raise ValueError("every radius in n_grid must be at least 2")
        if self.samples < 1:
            raise ValueError("samples must be at least 1")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        if not 0 <= self.p <= 1:
            raise ValueError("p must lie in [0, 1]")
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        if not self.nu >= 0:
            raise ValueError("nu must be nonnegative")
        unknown = set(self.statistics) - set(STATISTICS)
        if unknown:
            raise ValueError(f"unknown statistics {sorted(unknown)}")

    def to_dict(self) -> dict:
        out = asdict(self)
        out["n_grid"] = list(self.n_grid)
        out["statistics"] = list(self.statistics)
        return out


def conditioned_stream(n: int, p: float) -> str:
    return f"conditioned:{n}:{p!r}"


def conditioned_sample(n: int, p: float, seed: int, index: int) -> Configuration | None:
    """Sample ``index`` of the rejection stream, or None if the origin does not reach the boundary."""
    cfg = sample_configuration(build_box(n), p, derive_seed(seed, conditioned_stream(n, p), index))
    return cfg if radial_connection(cfg) else None


class ConditionedStream:
    """Iterator over (index, configuration) for accepted samples; counts are filled in as it runs."""

    def __init__(self, n: int, samples: int, seed: int, p: float = 0.5):
        if samples < 1:
            raise ValueError("samples must be at least 1")
        self.n, self.samples, self.seed, self.p = n, samples, seed, p
        self.tried = 0
        self.accepted = 0

    def __iter__(self):
        for index in range(self.samples):
            cfg = conditioned_sample(self.n, self.p, self.seed, index)
            self.tried += 1
            if cfg is not None:
                self.accepted += 1
                yield index, cfg
        if not self.accepted:
            warnings.warn(f"no accepted samples at n={self.n}, p={self.p}", RuntimeWarning, stacklevel=2)

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.tried if self.tried else float("nan")


def sample_conditioned(n: int, samples: int, seed: int, p: float = 0.5) -> ConditionedStream:
    return ConditionedStream(n, samples, seed, p)


def chemdist_sample(n: int, config: ExperimentConfig, index: int, detail: bool = False) -> dict | None:
    """Per-sample statistics row; ``detail`` adds the spliced path and the chosen detours."""
    cfg = conditioned_sample(n, config.p, config.seed, index)
    if cfg is None:
        return None
    gd = build_gamma(cfg)
    sp = splice(cfg, gd, config.epsilon, config.nu, config.delta)
    chem = chemical_distance(cfg).length
    if not chem <= sp.s.length <= gd.gamma.length:
        raise InvariantViolation(f"n={n} sample {index}: S_n={chem}, #s={sp.s.length}, #gamma={gd.gamma.length}")
    certified = 0
    if config.verify:
        certified = len(verify_gamma(cfg, gd, config.R))
    row = shortcut_stats(cfg, gd, sp, chem, config.epsilon, config.nu, config.delta).row()
    row.update(index=index, seed=cfg.seed, case=gd.case, circuits=gd.K, certified=certified)
    if math.isinf(row["nu"]):
        row["nu"] = "inf"  # keep the JSON lines standard
    if detail:
        row["s"] = sp.s.to_json()["vertices"]
        row["chosen"] = [{"edge": list(c.edge), "j": c.j, "u_index": c.u_index, "v_index": c.v_index,
                          "detour": c.detour.to_json()["vertices"]} for c in sp.detours]
    return row


def chemdist_rows(n: int, config: ExperimentConfig, workers: int | None = 1) -> tuple[list[dict], int]:
    """Per-sample rows for accepted samples at radius ``n`` and the number of samples tried."""
    out = map_samples(partial(chemdist_sample, n, config), config.samples, workers)
    return [r for r in out if r is not None], config.samples


def estimate_chemdist(config: ExperimentConfig, workers: int | None = 1,
                      rows: list | None = None) -> list[EstimateRecord]:
    """Means of S_n, #gamma and #s given 0 <-> boundary, plus the acceptance frequency, for each n."""
    records = []
    for n in config.n_grid:
        got, tried = chemdist_rows(n, config, workers)
        if rows is not None:
            rows.extend(got)
        if not got:
            warnings.warn(f"no accepted samples at n={n}", RuntimeWarning, stacklevel=2)
        for name, key in (("S_n", "chemical_distance"), ("gamma_length", "gamma_length"), ("s_length", "s_length")):
            records.append(mean_record(name, n, [r[key] for r in got], tried, config.seed))
        records.append(frequency_record("one_arm", n, None, len(got), tried, config.seed))
    return records


def estimate_one_arm(config: ExperimentConfig, workers: int | None = 1) -> list[EstimateRecord]:
    records = []
    for n in config.n_grid:
        hits = map_samples(partial(_accepts, n, config.p, config.seed), config.samples, workers)
        records.append(frequency_record("one_arm", n, None, int(np.sum(hits)), config.samples, config.seed))
    return records


def _accepts(n: int, p: float, seed: int, index: int) -> bool:
    return conditioned_sample(n, p, seed, index) is not None


def estimate_pi3(config: ExperimentConfig, workers: int | None = 1) -> list[EstimateRecord]:
    """pi_3(n) as the probability that the origin edge is a three-arm point to distance n."""
    return [estimate_edge_pi3(n, config.samples, config.seed, config.p, workers) for n in config.n_grid]


def run_experiment(config: ExperimentConfig, workers: int | None = 1, rows: list | None = None) -> list[EstimateRecord]:
    records = []
    if "chemdist" in config.statistics:
        records += estimate_chemdist(config, workers, rows)
    elif "one_arm" in config.statistics:
        records += estimate_one_arm(config, workers)
    if "pi3" in config.statistics:
        records += estimate_pi3(config, workers)
    return records


def records_by(records: Sequence[EstimateRecord], statistic: str) -> dict[int, EstimateRecord]:
    """Records of one statistic keyed by radius (the outer radius for annular ones)."""
    return {r.n if r.N is None else r.N: r for r in records if r.statistic == statistic}


@dataclass(frozen=True)
class ExponentReport:
    statistic: str
    slope: float
    stderr: float
    points: int

    @property
    def interval(self) -> tuple[float, float]:
        return (self.slope - 1.959963984540054 * self.stderr, self.slope + 1.959963984540054 * self.stderr)


def fit_statistic(records: Sequence[EstimateRecord], statistic: str) -> ExponentReport:
    """Power-law slope of ``statistic`` against n."""
    by_n = records_by(records, statistic)
    ns = sorted(by_n)
    fit = exponent_fit(ns, [by_n[n].estimate for n in ns])
    return ExponentReport(statistic, fit.slope, fit.stderr, fit.points)


@dataclass(frozen=True)
class RatioTrend:
    ns: tuple[int, ...]
    rho: tuple[float, ...]
    rho_lo: tuple[float, ...]
    rho_hi: tuple[float, ...]
    delta_hat: float
    delta_stderr: float

    @property
    def flagged(self) -> bool:
        return not self.delta_hat > 0

    @property
    def nonincreasing(self) -> bool:
        """No step where the larger n is significantly above the smaller one."""
        return all(self.rho_lo[k + 1] <= self.rho_hi[k] for k in range(len(self.ns) - 1))


def _rel_halfwidth(rec_or_triple) -> float:
    est, lo, hi = rec_or_triple
    if est <= 0:
        return float("inf")
    return max(est - lo, hi - est) / est


def ratio_trend(ns: Sequence[int], s_means: Sequence, pi3: Sequence) -> RatioTrend:
    """rho(n) = E[S_n]/(n^2 pi3(n)) and delta-hat = -(slope of log rho).

    ``s_means`` and ``pi3`` hold (estimate, lo, hi) triples, or plain
    numbers for synthetic input.
    """
    def triple(x):
        return tuple(x) if isinstance(x, (tuple, list)) else (x, x, x)

    rho, lo, hi = [], [], []
    for n, s, q in zip(ns, map(triple, s_means), map(triple, pi3)):
        r = s[0] / (n * n * q[0]) if q[0] > 0 else float("nan")
        rel = math.hypot(_rel_halfwidth(s), _rel_halfwidth(q))
        rho.append(r)
        lo.append(r * math.exp(-rel))
        hi.append(r * math.exp(rel))
    fit = exponent_fit(ns, rho)
    return RatioTrend(tuple(ns), tuple(rho), tuple(lo), tuple(hi), -fit.slope, fit.stderr)


def measured_ratio_trend(config: ExperimentConfig, workers: int | None = 1,
                        records: Sequence[EstimateRecord] | None = None) -> RatioTrend:
    if records is None:
        records = estimate_chemdist(config, workers) + estimate_pi3(config, workers)
    s = records_by(records, "S_n")
    q = records_by(records, "pi3")
    ns = [n for n in config.n_grid if n in s and n in q]
    if len(ns) < 3:
        raise InsufficientPoints("need S_n and pi3 at three or more radii")
    return ratio_trend(ns, [(s[n].estimate, s[n].ci_lo, s[n].ci_hi) for n in ns],
                       [(q[n].estimate, q[n].ci_lo, q[n].ci_hi) for n in ns])


# -- conditional comparison ------------------------------------------------

def cross_event(k: int) -> Callable[[Configuration, EdgeIndex], bool]:
    """All edges of B(e_x, k) on the horizontal and vertical lines through e_x are open."""
    def event(cfg: Configuration, e: EdgeIndex) -> bool:
        x, y = e.lower_left
        for t in range(-k, k):
            if not (cfg.is_open(EdgeIndex(x + t, y, True)) and cfg.is_open(EdgeIndex(x, y + t, False))):
                return False
        return True
    event.__name__ = f"cross{k}"
    return event


def axis_edges(t: int) -> list[EdgeIndex]:
    """The four edges on the coordinate axes leaving the box B(t) outward."""
    return [EdgeIndex(t, 0, True), EdgeIndex(0, t, False), EdgeIndex(-t - 1, 0, True), EdgeIndex(0, -t - 1, False)]


@dataclass(frozen=True)
class PositionRatio:
    distance: int
    d: int
    on_gamma: int
    hits_gamma: int
    arm_events: int
    hits_arm: int

    @property
    def p_gamma(self) -> float:
        return self.hits_gamma / self.on_gamma if self.on_gamma else float("nan")

    @property
    def p_arm(self) -> float:
        return self.hits_arm / self.arm_events if self.arm_events else float("nan")

    @property
    def ratio(self) -> float:
        return self.p_gamma / self.p_arm if self.p_arm > 0 else float("nan")


@dataclass(frozen=True)
class ComparisonReport:
    n: int
    event: str
    positions: tuple[PositionRatio, ...]

    @property
    def ratios(self) -> list[float]:
        return [pos.ratio for pos in self.positions]

    @property
    def max_ratio(self) -> float:
        return max(self.ratios)

    @property
    def spread(self) -> float:
        r = self.ratios
        return max(r) / min(r) if min(r) > 0 else float("inf")


def _gamma_hits(n, p, seed, distances, event, index):
    cfg = conditioned_sample(n, p, seed, index)
    if cfg is None:
        return None
    on = set(build_gamma(cfg).edges())
    out = []
    for t in distances:
        es = [e for e in axis_edges(t) if e in on]
        out.append((len(es), sum(bool(event(cfg, e)) for e in es)))
    return out


def _arm_hits(d, p, seed, event, index):
    cfg = sample_configuration(build_box(d + 1), p, derive_seed(seed, f"compare-arm:{d}:{p!r}", index))
    e = EdgeIndex(0, 0, True)
    if not three_arm_event(cfg, e, d):
        return None
    return bool(event(cfg, e))


def conditional_comparison(n: int = 32, samples: int = 2000, seed: int = 0, p: float = 0.5,
                           distances: Sequence[int] = (4, 8, 12, 16, 20, 24),
                           event: Callable | None = None, k: int = 1, arm_samples: int | None = None,
                           workers: int | None = 1, min_count: int = 1) -> ComparisonReport:
    """P(E | 0 <-> boundary, e in gamma) / P(E | A3(e, d)) with d = M(e)/2 for axis edges e.

    The numerator pools the four axis edges at each distance; the
    denominator is translation invariant and is sampled around one edge.
    """
    event = event or cross_event(k)
    name = getattr(event, "__name__", "event")
    geom = build_box(n)
    ds = [max(1, displacement_M(EdgeIndex(t, 0, True), geom) // 2) for t in distances]
    gamma_out = [r for r in map_samples(partial(_gamma_hits, n, p, seed, tuple(distances), event), samples, workers)
                 if r is not None]
    arm_cache = {}
    positions = []
    for pos, (t, d) in enumerate(zip(distances, ds)):
        if d not in arm_cache:
            got = map_samples(partial(_arm_hits, d, p, seed, event), arm_samples or samples, workers)
            got = [g for g in got if g is not None]
            arm_cache[d] = (len(got), int(sum(got)))
        on = sum(r[pos][0] for r in gamma_out)
        hits = sum(r[pos][1] for r in gamma_out)
        positions.append(PositionRatio(t, d, on, hits, *arm_cache[d]))
    short = [q.distance for q in positions if q.on_gamma < min_count or q.arm_events < min_count]
    if short:
        raise InsufficientSamples(f"too few conditional samples at distances {short}")
    return ComparisonReport(n, name, tuple(positions))


# -- RSW -------------------------------------------------------------------

def rsw_rect(k: int, n: int) -> Rect:
    """[0, kn] x [0, n] (width n + 1 when k = 1, the self-dual case), shifted to sit around the origin."""
    w = n + 1 if k == 1 else k * n
    x0, y0 = -(w // 2), -(n // 2)
    return Rect(x0, y0, x0 + w, y0 + n)


def _rsw_sample(k, n, p, seed, index):
    rect = rsw_rect(k, n)
    radius = max(abs(rect.x0), abs(rect.x1), abs(rect.y0), abs(rect.y1))
    cfg = sample_configuration(build_box(radius), p, derive_seed(seed, f"rsw:{k}:{n}:{p!r}", index))
    return crossing_exists(cfg, rect, OPEN, "horizontal")


@dataclass(frozen=True)
class RswReport:
    k: int
    records: tuple[EstimateRecord, ...]

    @property
    def delta_hat(self) -> float:
        return min(r.estimate for r in self.records)


def rsw_check(k: int, n_grid: Sequence[int], samples: int, seed: int, p: float = 0.5,
              workers: int | None = 1) -> RswReport:
    """Horizontal open crossing frequencies of k-by-1 rectangles."""
    if k not in (1, 2, 3):
        raise ValueError("k must be 1, 2 or 3")
    recs = []
    for n in n_grid:
        hits = map_samples(partial(_rsw_sample, k, n, p, seed), samples, workers)
        recs.append(frequency_record(f"rsw{k}", n, None, int(np.sum(hits)), samples, seed))
    return RswReport(k, tuple(recs))


__all__ = [
    "ComparisonReport", "ConditionedStream", "ExperimentConfig", "ExponentReport", "InsufficientSamples",
    "InvariantViolation", "RatioTrend", "RswReport", "conditional_comparison", "cross_event", "estimate_chemdist",
    "estimate_one_arm", "estimate_pi3", "fit_statistic", "ratio_trend", "rsw_check", "run_experiment",
    "sample_conditioned", "measured_ratio_trend",
]
