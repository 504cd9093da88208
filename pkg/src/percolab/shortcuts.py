"""Shortcuts around edges of gamma and the spliced path."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels as K
from .connectivity import first_path
from .gamma import GammaDecomposition
from .grid import Window, edge_masks, edge_set_masks, linf_field, primal_adj, window_states
from .lattice import Configuration, EdgeIndex, linf
from .paths import LatticePath, loop_erase


DEFAULT_DELTA = 0.9


class AnnulusOutOfBounds(ValueError):
    pass


@dataclass(frozen=True)
class ShortcutCandidate:
    edge: EdgeIndex
    j: int
    detour: LatticePath
    u_index: int  # positions of the detour's endpoints along gamma
    v_index: int

    @property
    def tau_length(self) -> int:
        return self.v_index - self.u_index

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.detour.length, self.tau_length)

    @property
    def savings(self) -> int:
        return self.tau_length - self.detour.length

    def tau(self, gd: GammaDecomposition) -> LatticePath:
        return LatticePath(gd.gamma.vertices[self.u_index:self.v_index + 1])


@dataclass
class SplicedPath:
    s: LatticePath
    detours: list[ShortcutCandidate] = field(default_factory=list)
    savings: int = 0


def scale_gap(epsilon: float) -> int:
    """floor(log2(1/epsilon))."""
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    return int(math.floor(math.log2(1 / epsilon) + 1e-12))


def shortcut_scales(n: int, delta: float) -> range:
    """j from ceil(delta/8 log2 n) to floor(delta/4 log2 n)."""
    lg = math.log2(n)
    return range(math.ceil(delta / 8 * lg - 1e-12), math.floor(delta / 4 * lg + 1e-12) + 1)


def annulus_radii(j: int, epsilon: float) -> tuple[int, int]:
    return 2 ** j, 2 ** (j + scale_gap(epsilon))


def annulus_fits(cfg: Configuration, e: EdgeIndex, j: int, epsilon: float) -> bool:
    _, outer = annulus_radii(j, epsilon)
    return linf(e.lower_left, cfg.geometry.center) + outer <= cfg.n


def _detour_graph(cfg: Configuration, gd: GammaDecomposition, e: EdgeIndex, j: int, epsilon: float):
    if not annulus_fits(cfg, e, j, epsilon):
        raise AnnulusOutOfBounds(f"annulus of scale {j} around {e} leaves the box")
    inner, outer = annulus_radii(j, epsilon)
    win = Window.around(e.lower_left, outer)
    h, v = window_states(cfg, win)
    h_in, v_in = edge_masks(linf_field(win, e.lower_left), lambda p, q: np.maximum(p, q) > inner)
    h_g, v_g = gd.cached(("gamma_masks", win), lambda: edge_set_masks(gd.edges(), win))
    return win, primal_adj(h & h_in & ~h_g, v & v_in & ~v_g)


def find_shortcut(cfg: Configuration, gd: GammaDecomposition, e: EdgeIndex, j: int,
                  epsilon: float) -> ShortcutCandidate | None:
    """Detour of least ratio #r/#tau around ``e`` inside the scale-j annulus.

    The detour is an open path using annulus edges off gamma, from a gamma
    vertex before ``e`` to one after it.  Ties go to the shorter detour,
    then to the lexicographically smallest vertex sequence.
    """
    win, adj = _detour_graph(cfg, gd, e, j, epsilon)
    verts = gd.gamma.vertices
    t = gd.cached("edge_pos", lambda: {f: k for k, f in enumerate(gd.edges())})[e]
    deg = adj.any(axis=2)
    local = [win.local(u) for u in verts]
    usable = [k for k, (i, jj) in enumerate(local)
              if 0 <= i < win.side and 0 <= jj < win.side and deg[i, jj]]
    before = [k for k in usable if k <= t]
    after = np.array([k for k in usable if k > t], dtype=np.int64)
    if not before or after.size == 0:
        return None
    ai = np.array([local[k][0] for k in after])
    aj = np.array([local[k][1] for k in after])
    best = None
    ties = []
    for k in before:
        src = np.zeros(deg.shape, dtype=bool)
        src[local[k]] = True
        d = K.bfs(adj, src)[ai, aj]
        for kv, dv in zip(after[d >= 0].tolist(), d[d >= 0].tolist()):
            key = (Fraction(dv, kv - k), dv)
            if best is None or key < best:
                best, ties = key, [(k, kv)]
            elif key == best:
                ties.append((k, kv))
    if best is None:
        return None
    options = []
    for k, kv in ties:
        path = first_path(adj, win, win.mask([verts[k]]), win.mask([verts[kv]]))
        options.append((path.vertices, k, kv, path))
    _, k, kv, path = min(options, key=lambda o: o[0])
    return ShortcutCandidate(e, j, path, k, kv)


def detect_Ej(cfg: Configuration, gd: GammaDecomposition, e: EdgeIndex, j: int, epsilon: float, nu: float) -> bool:
    """A detour around ``e`` in the scale-j annulus with #r <= nu * #tau (nu may be inf)."""
    if nu <= 0:
        return False
    cand = find_shortcut(cfg, gd, e, j, epsilon)
    if cand is None:
        return False
    return math.isinf(nu) or cand.detour.length <= nu * cand.tau_length


def best_interval_set(intervals: list[tuple[int, int, int]]) -> list[int]:
    """Weighted interval scheduling: indices of pairwise disjoint closed intervals (start, end, weight) of maximal weight."""
    order = sorted(range(len(intervals)), key=lambda k: (intervals[k][1], intervals[k][0]))
    ends = [intervals[k][1] for k in order]
    best = [0] * (len(order) + 1)
    take = [False] * len(order)
    prev = []
    for pos, k in enumerate(order):
        start, _, weight = intervals[k]
        # last interval ending strictly before this one starts
        p = int(np.searchsorted(ends, start, side="left"))
        prev.append(p)
        with_it = best[p] + weight
        take[pos] = with_it > best[pos]
        best[pos + 1] = max(best[pos], with_it)
    chosen = []
    pos = len(order)
    while pos > 0:
        if take[pos - 1]:
            chosen.append(order[pos - 1])
            pos = prev[pos - 1]
        else:
            pos -= 1
    return sorted(chosen, key=lambda k: intervals[k][0])


def shortcut_candidates(cfg: Configuration, gd: GammaDecomposition, epsilon: float, nu: float,
                        delta: float) -> list[ShortcutCandidate]:
    """Distinct length-reducing shortcuts with ratio at most ``nu`` over all gamma edges and scales."""
    seen = {}
    for j in shortcut_scales(cfg.n, delta):
        for e in gd.edges():
            if not annulus_fits(cfg, e, j, epsilon):
                continue
            cand = find_shortcut(cfg, gd, e, j, epsilon)
            if cand is None or cand.savings <= 0:
                continue
            if not (math.isinf(nu) or cand.detour.length <= nu * cand.tau_length):
                continue
            key = (cand.u_index, cand.v_index, cand.detour.vertices)
            seen.setdefault(key, cand)
    return list(seen.values())


def splice_candidates(cfg: Configuration, gd: GammaDecomposition, candidates: list[ShortcutCandidate]) -> SplicedPath:
    """Substitute a heaviest interval-disjoint, then vertex-disjoint, set of detours into gamma."""
    picked = best_interval_set([(c.u_index, c.v_index, c.tau_length) for c in candidates])
    chosen, used = [], set()
    for k in sorted(picked, key=lambda k: (-candidates[k].savings, candidates[k].u_index)):
        verts = set(candidates[k].detour.vertices)
        if verts & used:
            continue
        used |= verts
        chosen.append(candidates[k])
    chosen.sort(key=lambda c: c.u_index)
    gamma = gd.gamma.vertices
    out = []
    pos = 0
    for c in chosen:
        out.extend(gamma[pos:c.u_index])
        out.extend(c.detour.vertices[:-1])
        pos = c.v_index
    out.extend(gamma[pos:])
    s = LatticePath(tuple(loop_erase(out)))
    if not s.is_open_in(cfg) or s.start != gd.gamma.start or linf(s.end, cfg.geometry.center) != cfg.n:
        raise AssertionError("spliced path is not an open centre-to-boundary path")
    return SplicedPath(s, chosen, gd.gamma.length - s.length)


def splice(cfg: Configuration, gd: GammaDecomposition, epsilon: float, nu: float,
           delta: float = DEFAULT_DELTA) -> SplicedPath:
    return splice_candidates(cfg, gd, shortcut_candidates(cfg, gd, epsilon, nu, delta))


@dataclass(frozen=True)
class ShortcutStats:
    n: int
    delta: float
    epsilon: float
    nu: float
    gamma_length: int
    s_length: int
    chemical_distance: int
    detours: int
    savings: int

    def row(self) -> dict:
        return asdict(self)


def shortcut_stats(cfg: Configuration, gd: GammaDecomposition, sp: SplicedPath, chem: int,
                   epsilon: float, nu: float, delta: float) -> ShortcutStats:
    return ShortcutStats(cfg.n, delta, epsilon, nu, gd.gamma.length, sp.s.length, chem,
                         len(sp.detours), sp.savings)
