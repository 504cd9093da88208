"""The three-arm path from the centre to the box boundary and its witnesses.

Off the circuit event the path is the open arm hugging the counterclockwise
side of the first closed dual path from the centre to the outside.  With
circuits it is assembled from connectors between successive circuits and
counterclockwise arcs along them, every connector again hugging the
counterclockwise side of a closed dual bridge.
"""

from __future__ import annotations

import math
from itertools import combinations_with_replacement
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import _kernels as K
from .arms import ThreeArmWitness, annulus_arms, three_arm_event
from .circuits import CircuitStack, build_circuit_stack, circuit_fill, face_ring
from .connectivity import NotConnected, box_window, boundary_ring, closed_dual_adj, radial_connection
from .grid import Window, edge_set_masks, primal_adj
from .lattice import Configuration, EdgeIndex, Vertex, displacement_M, linf
from .paths import LatticePath, loop_erase

DIRS = ((1, 0), (0, 1), (-1, 0), (0, -1))


class VerificationFailure(AssertionError):
    """A gamma edge without its three-arm certificate; signals a construction bug."""


def _direction(vec) -> int:
    return DIRS.index((int(np.sign(vec[0])), int(np.sign(vec[1]))))


def _ccw_order_from(vec) -> np.ndarray:
    """Axis directions sorted by counterclockwise angle from ``vec`` (angle 0 last)."""
    base = math.atan2(vec[1], vec[0])
    angles = [(math.atan2(dy, dx) - base) % (2 * math.pi) or 2 * math.pi for dx, dy in DIRS]
    return np.array(sorted(range(4), key=lambda k: angles[k]), dtype=np.int64)


def _outside_masks(fill: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """h/v masks of primal edges whose two faces both lie outside ``fill``."""
    out = ~fill
    return out[1:-1, :-1] & out[1:-1, 1:], out[:-1, 1:-1] & out[1:, 1:-1]


def _slit_start(source: LatticePath, fill: np.ndarray, dwin: Window, face: Vertex):
    """Crossing edge of ``source`` next to ``face`` and the counterclockwise endpoint to start from."""
    options = []
    a, b = face
    for inner, edge in (((a, b - 1), EdgeIndex(a, b, True)), ((a, b + 1), EdgeIndex(a, b + 1, True)),
                        ((a - 1, b), EdgeIndex(a, b, False)), ((a + 1, b), EdgeIndex(a + 1, b, False))):
        i, j = dwin.local(inner)
        if 0 <= i < dwin.side and 0 <= j < dwin.side and fill[i, j]:
            options.append((edge, inner))
    edges = set(source.edges())
    options = [o for o in options if o[0] in edges]
    if not options:
        raise ValueError(f"face {face} does not touch the circuit from outside")
    edge, inner = min(options)
    out_x, out_y = face[0] - inner[0], face[1] - inner[1]
    left = (-out_y, out_x)
    mx, my = edge.midpoint
    start = (int(round(mx + left[0] / 2)), int(round(my + left[1] / 2)))
    other = (int(round(mx - left[0] / 2)), int(round(my - left[1] / 2)))
    return edge, start, other


def ccw_closest_arm(cfg: Configuration, c: LatticePath, source, target: LatticePath | None = None) -> LatticePath:
    """Open arm closest to the counterclockwise side of the closed dual path ``c``.

    ``source`` is the centre vertex or an open circuit around it (``c``
    then starts at a face just outside that circuit); ``target`` is an open
    circuit, or None for the box boundary.  The arm is found by a
    depth-first search that always prefers the rightmost turn; when the
    source is a circuit the search may walk along it and only the part
    after its last visit is kept.
    """
    win = box_window(cfg)
    dwin = win.dual
    h_ok, v_ok = cfg.h, cfg.v
    wall: set[Vertex] = set()
    if isinstance(source, LatticePath):
        fill = circuit_fill(source, dwin)
        edge, start, other = _slit_start(source, fill, dwin, c.start)
        h_out, v_out = _outside_masks(fill)
        h_wall, v_wall = edge_set_masks(set(source.edges()) - {edge}, win)
        h_ok = cfg.h & (h_out | h_wall)
        v_ok = cfg.v & (v_out | v_wall)
        order = _ccw_order_from((other[0] - start[0], other[1] - start[1]))
        wall = set(source.vertices)
    else:
        start = tuple(source)
        w0 = c.start
        order = _ccw_order_from((w0[0] + 0.5 - start[0], w0[1] + 0.5 - start[1]))
        wall = {start}
    targets = boundary_ring(cfg) if target is None else win.mask(target.vertices)
    i, j = win.local(start)
    ids = K.right_first_search(primal_adj(h_ok, v_ok), i, j, order, targets)
    if ids.size == 0:
        raise NotConnected("no open arm between the requested sets")
    verts = [win.point_of_id(k) for k in ids]
    last = max(k for k, u in enumerate(verts) if u in wall)
    return LatticePath(tuple(verts[last:]))


def _ccw_arc(circuit: LatticePath, frm: Vertex, to: Vertex) -> list[Vertex]:
    ring = list(circuit.vertices[:-1])
    a, b = ring.index(frm), ring.index(to)
    if b < a:
        b += len(ring)
    return [ring[k % len(ring)] for k in range(a, b + 1)]


class GammaLabel(NamedTuple):
    kind: str  # "arm" (no circuit), "sigma" or "arc"
    index: int

    def __str__(self):
        return self.kind if self.kind == "arm" else f"{self.kind}{self.index}"


@dataclass
class GammaDecomposition:
    gamma: LatticePath
    labels: list[GammaLabel]
    case: str  # "C0" or "C0c"
    stack: CircuitStack = field(repr=False)
    dual_witnesses: list[LatticePath] = field(repr=False)
    sigmas: list[LatticePath] = field(repr=False)
    arcs: list[LatticePath] = field(repr=False)
    n: int = 0
    _cache: dict = field(default_factory=dict, repr=False)

    def cached(self, key, compute):
        if key not in self._cache:
            self._cache[key] = compute()
        return self._cache[key]

    @property
    def K(self) -> int:
        return self.stack.K

    def edges(self) -> list[EdgeIndex]:
        return self.gamma.edges()

    def label_of(self, e: EdgeIndex) -> GammaLabel:
        where = self.cached("edge_pos", lambda: {f: k for k, f in enumerate(self.edges())})
        if e not in where:
            raise ValueError(f"edge {e} is not on gamma")
        return self.labels[where[e]]

    def M_values(self, geom) -> list[int]:
        return [displacement_M(e, geom) for e in self.edges()]

    def parts(self) -> list[tuple[str, int, int]]:
        """Maximal runs of equal labels as (label, first edge, last edge + 1)."""
        runs = []
        for k, lab in enumerate(self.labels):
            if runs and runs[-1][0] == str(lab):
                runs[-1][2] = k + 1
            else:
                runs.append([str(lab), k, k + 1])
        return [tuple(r) for r in runs]

    def to_json(self, geom) -> dict:
        return {
            "case": self.case,
            "K": self.K,
            "gamma": self.gamma.to_json()["vertices"],
            "labels": [str(lab) for lab in self.labels],
            "M": self.M_values(geom),
            "parts": self.parts(),
            "circuits": [c.to_json()["vertices"] for c in self.stack.circuits],
            "dual_witnesses": [d.to_json()["vertices"] for d in self.dual_witnesses],
        }


def build_gamma(cfg: Configuration, stack: CircuitStack | None = None) -> GammaDecomposition:
    if not radial_connection(cfg):
        raise NotConnected("the centre is not connected to the boundary")
    if stack is None:
        stack = build_circuit_stack(cfg)
    center = cfg.geometry.center
    if stack.K == 0:
        arm = ccw_closest_arm(cfg, stack.certificate, center)
        return GammaDecomposition(arm, [GammaLabel("arm", 0)] * arm.length, "C0c", stack,
                                  [stack.certificate], [arm], [], cfg.n)
    bridges = stack.bridges + [stack.certificate]
    circuits = stack.circuits
    sigmas = [ccw_closest_arm(cfg, bridges[0], center, circuits[0])]
    for m in range(1, stack.K + 1):
        target = circuits[m] if m < stack.K else None
        sigmas.append(ccw_closest_arm(cfg, bridges[m], circuits[m - 1], target))
    arcs = [LatticePath(tuple(_ccw_arc(circuits[m], sigmas[m].end, sigmas[m + 1].start)))
            for m in range(stack.K)]
    verts: list[Vertex] = list(sigmas[0].vertices)
    labels = [GammaLabel("sigma", 1)] * sigmas[0].length
    for m in range(stack.K):
        verts += arcs[m].vertices[1:]
        labels += [GammaLabel("arc", m + 1)] * arcs[m].length
        verts += sigmas[m + 1].vertices[1:]
        labels += [GammaLabel("sigma", m + 2)] * sigmas[m + 1].length
    verts, labels = loop_erase(verts, labels)
    return GammaDecomposition(LatticePath(tuple(verts)), labels, "C0", stack, bridges, sigmas, arcs, cfg.n)


# three-arm certificates ------------------------------------------------------


class Clause(NamedTuple):
    kind: str  # "three_arm", "annulus" or "outer"
    inner: int
    outer: int
    n_open: int
    n_closed: int
    holds: bool


@dataclass
class ScaleSequence:
    edge: EdgeIndex
    M: int
    R: int
    scales: tuple[int, ...]  # l_0 = 0, l_1, ..., l_R
    clauses: list[Clause]
    constructive: bool = True  # scales from the proof's construction rather than the fallback search

    @property
    def certified(self) -> bool:
        return all(c.holds for c in self.clauses)


def _ceil_log2(d: int) -> int:
    return 0 if d <= 1 else (int(d) - 1).bit_length()


def _min_dist(e: EdgeIndex, verts: np.ndarray) -> int:
    return int(np.abs(verts - np.array(e.lower_left)).max(axis=1).min())


def _nearest_inner_circuit_edge(cfg, gd: GammaDecomposition, e: EdgeIndex, m: int) -> int:
    """L-inf distance from e_x to the nearest edge of circuit m-1 reached from the inside face of e by closed dual paths."""
    stack = gd.stack
    dwin = stack.window.dual
    fill = stack.fills[m - 1]
    faces = [f for f in e.dual_endpoints() if fill[dwin.local(f)]]
    labels = gd.cached("dual_labels", lambda: K.union_find_labels(closed_dual_adj(cfg)))
    target = labels[dwin.local(faces[0])]
    inner_fill = stack.fills[m - 2]
    best = None
    for f in stack.circuits[m - 2].edges():
        for face in f.dual_endpoints():
            i, j = dwin.local(face)
            if not inner_fill[i, j] and labels[i, j] == target:
                d = linf(e.lower_left, f.lower_left)
                best = d if best is None else min(best, d)
    if best is None:
        raise VerificationFailure(f"edge {e} has no closed dual link to circuit {m - 1}")
    return best


class _ClauseOracle:
    """Memoised arm checks around one edge."""

    def __init__(self, cfg: Configuration, e: EdgeIndex):
        self.cfg, self.e = cfg, e
        self.memo: dict = {}

    def three_arm(self, r: int) -> bool:
        key = ("three_arm", r)
        if key not in self.memo:
            self.memo[key] = bool(three_arm_event(self.cfg, self.e, r))
        return self.memo[key]

    def annulus(self, lo: int, hi: int, n_open: int, n_closed: int) -> bool:
        key = ("annulus", lo, hi, n_open, n_closed)
        if key not in self.memo:
            self.memo[key] = annulus_arms(self.cfg, self.e.lower_left, lo, hi, n_open, n_closed)
        return self.memo[key]


def _clauses(oracle: _ClauseOracle, scales, L: int, M: int, R: int, stop_early: bool = False) -> list[Clause]:
    """Arm clauses a scale sequence must satisfy, for the given scales (l_0 = 0 first)."""
    r1 = 2 ** (scales[1] - 1)
    out = [Clause("three_arm", 0, r1, 2, 1, oracle.three_arm(r1))]
    for i in range(2, R + 1):
        if stop_early and not out[-1].holds:
            return out
        lo, hi = scales[i - 1], scales[i]
        if lo >= L or hi <= lo:
            continue
        out.append(Clause("annulus", 2 ** lo, 2 ** hi, 2 * i, 0, oracle.annulus(2 ** lo, 2 ** hi, 2 * i, 0)))
        if hi - 1 > lo:
            holds = oracle.annulus(2 ** lo, 2 ** (hi - 1), 0, 1)
            out.append(Clause("annulus", 2 ** lo, 2 ** (hi - 1), 0, 1, holds))
    if scales[R] < L and not (stop_early and not out[-1].holds):
        holds = oracle.annulus(2 ** scales[R], M, 2 * R + 2, 0)
        out.append(Clause("outer", 2 ** scales[R], M, 2 * R + 2, 0, holds))
    return out


def constructive_scales(cfg: Configuration, gd: GammaDecomposition, e: EdgeIndex, R: int = 3) -> list[int]:
    """Constructive scales: each l_i is the first dyadic box around ``e`` meeting the next inner circuit."""
    label = gd.label_of(e)
    m = label.index
    M = displacement_M(e, cfg.geometry)
    L = int(math.floor(math.log2(M)))
    circuits = gd.cached("circuit_arrays", lambda: [np.array(c.vertices[:-1]) for c in gd.stack.circuits])
    if label.kind == "sigma":
        x, y = gd.sigmas[m - 1].start, gd.sigmas[m - 1].end
        lpp = min(_ceil_log2(max(linf(e.lower_left, x), linf(e.lower_left, y))), _ceil_log2(M))
    else:
        d = linf(e.lower_left, cfg.geometry.center) if m == 1 else _nearest_inner_circuit_edge(cfg, gd, e, m)
        lpp = _ceil_log2(d)
    l1 = L if 2 ** lpp >= M else max(lpp, 1)
    scales = [0, min(l1, L)]
    for i in range(2, R + 1):
        prev = scales[-1]
        # circuits are numbered from 1; index 0 stands for the centre
        idx = m - i
        if prev == L or idx < 1:
            scales.append(L)
            continue
        lpp = _ceil_log2(_min_dist(e, circuits[idx - 1]))
        scales.append(L if 2 ** lpp >= M else max(lpp, prev))
    return scales


def _all_scales(L: int, R: int):
    """Every 0 < l_1 <= ... <= l_R <= L, coarsest first."""
    return sorted(([0, *c] for c in combinations_with_replacement(range(1, L + 1), R)), key=lambda s: (-s[1], s))


def scale_sequence(cfg: Configuration, gd: GammaDecomposition, e: EdgeIndex, R: int = 3) -> ScaleSequence:
    """Scale sequence certifying the multi-scale arm structure of a connector or arc edge.

    The constructive scales are tried first.  When circuits share vertices
    near ``e`` their clauses can fail for vertex-disjoint arms; any sequence
    that works is a valid certificate, so all sequences are then searched.
    """
    M = displacement_M(e, cfg.geometry)
    L = int(math.floor(math.log2(M)))
    oracle = _ClauseOracle(cfg, e)
    scales = constructive_scales(cfg, gd, e, R)
    clauses = _clauses(oracle, scales, L, M, R)
    if all(c.holds for c in clauses):
        return ScaleSequence(e, M, R, tuple(scales), clauses, True)
    for cand in _all_scales(L, R):
        trial = _clauses(oracle, cand, L, M, R, stop_early=True)
        if all(c.holds for c in trial):
            return ScaleSequence(e, M, R, tuple(cand), trial, False)
    return ScaleSequence(e, M, R, tuple(scales), clauses, True)


def verify_three_arm(cfg: Configuration, gd: GammaDecomposition, e: EdgeIndex, R: int = 3):
    """Explicit arms to distance M(e), or a certified scale sequence for connector and arc edges."""
    label = gd.label_of(e)
    M = displacement_M(e, cfg.geometry)
    direct = label.kind == "arm" or M <= 1 or (label.kind == "sigma" and label.index in (1, gd.K + 1))
    if direct:
        wit = three_arm_event(cfg, e, M, witness=True)
        if wit is None:
            raise VerificationFailure(f"edge {e} ({label}) lacks three arms to distance {M}")
        return wit
    seq = scale_sequence(cfg, gd, e, R)
    if not seq.certified:
        bad = [c for c in seq.clauses if not c.holds]
        raise VerificationFailure(f"edge {e} ({label}) scale sequence {seq.scales} fails {bad}")
    return seq


def verify_gamma(cfg: Configuration, gd: GammaDecomposition, R: int = 3) -> list:
    """Check gamma is an open self-avoiding centre-to-boundary path and certify every edge."""
    g = gd.gamma
    if not g.is_open_in(cfg) or not g.is_self_avoiding():
        raise VerificationFailure("gamma is not an open self-avoiding path")
    if g.start != cfg.geometry.center or linf(g.end, cfg.geometry.center) != cfg.n:
        raise VerificationFailure("gamma does not join the centre to the boundary")
    return [verify_three_arm(cfg, gd, e, R) for e in g.edges()]


# cumulative sums -----------------------------------------------------------


@dataclass(frozen=True)
class CumulativeSumReport:
    L: tuple[int, ...]
    c_hat: tuple[float, ...]
    c_lo: tuple[float, ...]
    c_hi: tuple[float, ...]
    grows: bool


def _interpolate(points: dict[int, float], ls: np.ndarray) -> np.ndarray:
    xs = np.array(sorted(points), dtype=float)
    ys = np.array([points[k] for k in sorted(points)], dtype=float)
    return np.exp(np.interp(np.log(ls), np.log(xs), np.log(ys)))


def cumulative_sum_check(estimates: dict[int, float], Ls, lower: dict[int, float] | None = None,
                         upper: dict[int, float] | None = None) -> CumulativeSumReport:
    """C-hat(L) = sum_{l <= L} l pi(l) / (L^2 pi(L)) with pi interpolated geometrically between grid points.

    ``lower``/``upper`` (interval ends on the same grid) give a conservative
    band: lower numerator over upper denominator and vice versa.  The report
    flags growth when the band at the largest L lies entirely above the band
    at the smallest.
    """
    def chat(num_pts, den_pts, L):
        ls = np.arange(1, L + 1, dtype=float)
        num = float(np.sum(ls * _interpolate(num_pts, ls)))
        den = L * L * float(_interpolate(den_pts, np.array([float(L)]))[0])
        return num / den

    Ls = tuple(int(x) for x in Ls)
    mid = tuple(chat(estimates, estimates, L) for L in Ls)
    if lower is not None and upper is not None:
        lo = tuple(chat(lower, upper, L) for L in Ls)
        hi = tuple(chat(upper, lower, L) for L in Ls)
    else:
        lo = hi = mid
    return CumulativeSumReport(Ls, mid, lo, hi, bool(lo[-1] > hi[0]))


def duality_witnesses(cfg: Configuration, gd: GammaDecomposition) -> list[bool]:
    """For each gamma edge (off the circuit event): its clockwise face reaches the dual path by closed dual edges."""
    win = box_window(cfg)
    dwin = win.dual
    labels = K.union_find_labels(closed_dual_adj(cfg))
    witness = gd.dual_witnesses[0]
    marks = {labels[dwin.local(f)] for f in witness.vertices}
    out = []
    for u, w in zip(gd.gamma.vertices, gd.gamma.vertices[1:]):
        dx, dy = w[0] - u[0], w[1] - u[1]
        # face on the right of the step u -> w
        mx, my = (u[0] + w[0]) / 2 + dy / 2, (u[1] + w[1]) / 2 - dx / 2
        face = (int(math.floor(mx)), int(math.floor(my)))
        out.append(bool(labels[dwin.local(face)] in marks))
    return out


__all__ = [
    "Clause", "CumulativeSumReport", "GammaDecomposition", "GammaLabel", "ScaleSequence", "ThreeArmWitness",
    "VerificationFailure", "build_gamma", "ccw_closest_arm", "cumulative_sum_check", "duality_witnesses",
    "scale_sequence", "verify_gamma", "verify_three_arm", "face_ring",
]
