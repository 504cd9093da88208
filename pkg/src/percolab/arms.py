"""Arm events in annuli and around edges, and their Monte Carlo estimators."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import partial

import numpy as np

from . import _kernels as K
from .connectivity import (
    CLOSED,
    OPEN,
    NotConnected,
    decompose_flow,
    disjoint_arm_count,
    first_path,
    max_disjoint,
)
from .grid import Window, dual_adj, dual_linf2_field, linf_field, primal_adj, restrict, window_states
from .lattice import (
    AnnulusSpec,
    BoxGeometry,
    Configuration,
    EdgeIndex,
    Vertex,
    boundary_projection,
    build_box,
    sample_configuration,
)
from .paths import LatticePath
from .runner import derive_seed, map_samples
from .stats import EstimateRecord, frequency_record, log_ratio_interval

__all__ = [
    "ArmEventSpec", "ColorSequence", "QuasiMultReport", "ThreeArmWitness", "UnsupportedColorSequence",
    "boundary_projection", "detect_arm_event", "estimate_edge_pi3", "estimate_pi", "min_inner_radius", "projection_side",
    "quasi_mult_check", "three_arm_event",
]


class UnsupportedColorSequence(ValueError):
    """Mixed color sequences with at least two arms of each color."""


class ColorSequence:
    """Cyclic word over {O, C}; rotations compare equal."""

    def __init__(self, colors):
        word = "".join(colors).upper()
        if not word or set(word) - {"O", "C"}:
            raise ValueError(f"bad color sequence {colors!r}")
        self.word = word

    @property
    def canonical(self) -> str:
        w = self.word
        return min(w[i:] + w[:i] for i in range(len(w)))

    def __eq__(self, other):
        if isinstance(other, str):
            other = ColorSequence(other)
        return isinstance(other, ColorSequence) and self.canonical == other.canonical

    def __hash__(self):
        return hash(self.canonical)

    def __len__(self):
        return len(self.word)

    def __repr__(self):
        return f"ColorSequence({self.word!r})"

    @property
    def n_open(self) -> int:
        return self.word.count("O")

    @property
    def n_closed(self) -> int:
        return self.word.count("C")

    @property
    def supported(self) -> bool:
        return min(self.n_open, self.n_closed) <= 1


def min_inner_radius(k: int) -> int:
    """Smallest n >= 1 whose box boundary has at least k edges (8n of them)."""
    return max(1, -(-k // 8))


@dataclass(frozen=True)
class ArmEventSpec:
    annulus: AnnulusSpec
    colors: ColorSequence
    half_plane: str | None = None
    anchor_point: Vertex | None = None

    def __post_init__(self):
        if not isinstance(self.colors, ColorSequence):
            object.__setattr__(self, "colors", ColorSequence(self.colors))
        if self.annulus.inner < min_inner_radius(len(self.colors)):
            raise ValueError(f"inner radius below n0({len(self.colors)})")
        if not self.colors.supported:
            raise UnsupportedColorSequence(self.colors.word)
        if self.half_plane not in (None, "N", "S", "E", "W"):
            raise ValueError(f"bad half-plane direction {self.half_plane!r}")


def detect_arm_event(cfg: Configuration, spec: ArmEventSpec) -> bool:
    """k disjoint arms with the given colors across the annulus.

    With at most one arm of one color the cyclic order is automatic (a
    closed dual path cannot cross an open one), so the event splits into a
    count for each color.
    """
    colors = spec.colors
    if not colors.supported:
        raise UnsupportedColorSequence(colors.word)
    count = partial(disjoint_arm_count, cfg, spec.annulus, half_plane=spec.half_plane)
    n_open, n_closed = colors.n_open, colors.n_closed
    if n_open and count(OPEN, limit=n_open) < n_open:
        return False
    return not n_closed or count(CLOSED, limit=n_closed) >= n_closed


def projection_side(point: Vertex, geom: BoxGeometry) -> str:
    """Side of the box containing a boundary vertex (N before S before E before W at corners)."""
    x, y = point[0] - geom.center[0], point[1] - geom.center[1]
    n = geom.radius
    for side, hit in (("N", y == n), ("S", y == -n), ("E", x == n), ("W", x == -n)):
        if hit:
            return side
    raise ValueError(f"{point} is not on the boundary")


@dataclass(frozen=True)
class ThreeArmWitness:
    """Two disjoint open arms from the endpoints of ``edge`` and one closed dual arm, to L-inf distance ``radius``."""

    edge: EdgeIndex
    radius: int
    open_arms: tuple[LatticePath, ...] = field(default=())
    closed_arm: LatticePath | None = None


def _edge_event_graphs(cfg: Configuration, e: EdgeIndex, r: int):
    win = Window.around(e.lower_left, r)
    h, v = window_states(cfg, win)
    i, j = win.local(e.lower_left)
    h = h.copy()
    v = v.copy()
    if e.horizontal:
        h[i, j] = False
    else:
        v[i, j] = False
    dist = linf_field(win, e.lower_left)
    o_adj = primal_adj(h, v)
    o_src = win.mask(e.endpoints)
    o_dst = dist == r
    hw, vw = window_states(cfg, win)
    dwin = win.dual
    d2 = dual_linf2_field(dwin, e.lower_left)
    keep = d2 <= 2 * r - 1
    c_adj = restrict(dual_adj(~hw, ~vw), keep)
    c_src = dwin.mask(e.dual_endpoints())
    c_dst = keep & (d2 == 2 * r - 1)
    return win, (o_adj, o_src, o_dst), (c_adj, c_src, c_dst)


def three_arm_event(cfg: Configuration, e: EdgeIndex, r: int, witness: bool = False):
    """Edge three-arm event A3(e, r).

    ``e`` is open, its two endpoints start vertex-disjoint open arms (not
    using ``e``) reaching L-inf distance ``r`` from e_x, and an endpoint of
    the dual edge starts a closed dual arm reaching the last dual ring
    inside B(e_x, r), at distance r - 1/2.  Returns a bool, or a
    :class:`ThreeArmWitness` (None on failure) when ``witness`` is set.
    """
    if not cfg.is_open(e):
        return None if witness else False
    if r <= 0:
        return ThreeArmWitness(e, r) if witness else True
    win, (o_adj, o_src, o_dst), (c_adj, c_src, c_dst) = _edge_event_graphs(cfg, e, r)
    count, flow, through, trivial = max_disjoint(o_adj, o_src, o_dst, 2)
    if count < 2:
        return None if witness else False
    if not witness:
        return bool(K.reaches(c_adj, c_src, c_dst))
    try:
        dual_path = first_path(c_adj, win.dual, c_src, c_dst, dual=True)
    except NotConnected:
        return None
    arms = decompose_flow(win, flow, through, o_src & ~trivial, o_dst & ~trivial, trivial)
    return ThreeArmWitness(e, r, tuple(sorted(arms, key=lambda p: p.start)), dual_path)


def annulus_arms(cfg: Configuration, center: Vertex, inner: int, outer: int, n_open: int, n_closed: int) -> bool:
    """At least ``n_open`` disjoint open and ``n_closed`` closed crossings of B(center; inner, outer)."""
    ann = AnnulusSpec(center, inner, outer)
    if n_open and disjoint_arm_count(cfg, ann, OPEN, limit=n_open) < n_open:
        return False
    return not n_closed or disjoint_arm_count(cfg, ann, CLOSED, limit=n_closed) >= n_closed


FAMILIES = {"pi1": "O", "pi2": "OC", "pi3": "OOC"}


def family_colors(family: str, k: int | None = None) -> ColorSequence:
    if family == "pi_prime":
        if not k:
            raise ValueError("pi_prime needs the arm count k")
        return ColorSequence("O" * k)
    if family not in FAMILIES:
        raise ValueError(f"unknown arm family {family!r}")
    return ColorSequence(FAMILIES[family])


def _arm_sample(spec: ArmEventSpec, p: float, seed: int, stream: str, index: int) -> bool:
    cfg = sample_configuration(build_box(spec.annulus.outer), p, derive_seed(seed, stream, index))
    return detect_arm_event(cfg, spec)


def family_name(family: str, k: int | None) -> str:
    return f"pi_prime{k}" if family == "pi_prime" else family


def estimate_pi(family: str, n: int | None, N: int, samples: int, seed: int, p: float = 0.5,
                k: int | None = None, workers: int | None = 1) -> EstimateRecord:
    """Frequency of the arm event of ``family`` across B(n, N) about the origin.

    ``n=None`` means the smallest admissible inner radius n0(k).
    """
    colors = family_colors(family, k)
    if n is None:
        n = min_inner_radius(len(colors))
    name = family_name(family, k)
    if n >= N:
        # arms to a radius inside the inner box hold trivially
        return frequency_record(name, n, N, samples, samples, seed)
    spec = ArmEventSpec(AnnulusSpec((0, 0), n, N), colors)
    stream = f"{name}:{n}:{N}:{p!r}"
    hits = map_samples(partial(_arm_sample, spec, p, seed, stream), samples, workers)
    return frequency_record(name, n, N, int(np.sum(hits)), samples, seed)


ORIGIN_EDGE = EdgeIndex(0, 0, True)


def _edge_arm_sample(r: int, p: float, seed: int, stream: str, index: int) -> bool:
    cfg = sample_configuration(build_box(r), p, derive_seed(seed, stream, index))
    return three_arm_event(cfg, ORIGIN_EDGE, r)


def estimate_edge_pi3(r: int, samples: int, seed: int, p: float = 0.5, workers: int | None = 1) -> EstimateRecord:
    """Frequency of A3(e, r) for the edge from the origin to (1, 0): the chance that an edge is a three-arm point to distance r."""
    stream = f"pi3_edge:{r}:{p!r}"
    hits = map_samples(partial(_edge_arm_sample, r, p, seed, stream), samples, workers)
    return frequency_record("pi3", r, None, int(np.sum(hits)), samples, seed)


@dataclass(frozen=True)
class QuasiMultReport:
    family: str
    radii: tuple[int, int, int]
    c_hat: float
    ci_lo: float
    ci_hi: float
    records: tuple[EstimateRecord, ...]
    insufficient: bool


def quasi_mult_check(family: str, n: int, n_mid: int, N: int, samples: int, seed: int, p: float = 0.5,
                     k: int | None = None, workers: int | None = 1) -> QuasiMultReport:
    """c-hat = pi(n, N) / (pi(n, n') pi(n', N)) with a delta-method interval."""
    if not n < n_mid < N:
        raise ValueError("need n < n' < N")
    recs = tuple(estimate_pi(family, a, b, samples, seed, p, k, workers) for a, b in ((n, N), (n, n_mid), (n_mid, N)))
    hits = [round(r.estimate * r.samples) for r in recs]
    insufficient = any(h == 0 for h in hits)
    if insufficient:
        c = lo = hi = float("nan")
    else:
        c, lo, hi = log_ratio_interval([(hits[0], samples, 1), (hits[1], samples, -1), (hits[2], samples, -1)])
    return QuasiMultReport(family_name(family, k), (n, n_mid, N), c, lo, hi, recs, insufficient)
