"""Clusters, crossings, chemical distance and disjoint arm counts."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels as K
from .grid import (
    Window,
    dual_adj,
    dual_linf2_field,
    edge_masks,
    linf_field,
    primal_adj,
    restrict,
    window_states,
)
from .lattice import AnnulusSpec, Configuration, Vertex
from .paths import LatticePath

OPEN = "open"
CLOSED = "closed"
K_DIRS = tuple(zip(K.DI.tolist(), K.DJ.tolist()))
HALF_PLANE_NORMALS = {"N": (0, 1), "S": (0, -1), "E": (1, 0), "W": (-1, 0)}


class NotConnected(Exception):
    """No open path joins the requested sets."""


@dataclass(frozen=True)
class ClusterLabeling:
    primal: np.ndarray  # (W, W) labels of open clusters, indexed [x + n, y + n]
    dual: np.ndarray  # (W + 1, W + 1) labels of closed dual clusters, ring included
    window: Window

    def same_primal(self, u: Vertex, w: Vertex) -> bool:
        (a, b), (c, d) = self.window.local(u), self.window.local(w)
        return bool(self.primal[a, b] == self.primal[c, d])

    def same_dual(self, u: Vertex, w: Vertex) -> bool:
        (a, b), (c, d) = self.window.dual.local(u), self.window.dual.local(w)
        return bool(self.dual[a, b] == self.dual[c, d])


@dataclass(frozen=True)
class GeodesicWitness:
    length: int
    path: LatticePath

    def to_json(self) -> str:
        return json.dumps({"length": self.length, **self.path.to_json()})


class Rect(NamedTuple):
    """Vertex rectangle [x0, x1] x [y0, y1]."""

    x0: int
    y0: int
    x1: int
    y1: int


def box_window(cfg: Configuration) -> Window:
    return Window.around(cfg.geometry.center, cfg.geometry.radius)


def open_adj(cfg: Configuration) -> np.ndarray:
    return primal_adj(cfg.h, cfg.v)


def closed_dual_adj(cfg: Configuration) -> np.ndarray:
    return dual_adj(~cfg.h, ~cfg.v)


def cluster_labels(cfg: Configuration) -> ClusterLabeling:
    return ClusterLabeling(
        K.union_find_labels(open_adj(cfg)), K.union_find_labels(closed_dual_adj(cfg)), box_window(cfg)
    )


def boundary_ring(cfg: Configuration) -> np.ndarray:
    return linf_field(box_window(cfg), cfg.geometry.center) == cfg.geometry.radius


def radial_connection(cfg: Configuration) -> bool:
    """Open path from the centre to the boundary of the box."""
    win = box_window(cfg)
    src = win.mask([cfg.geometry.center])
    return bool(K.reaches(open_adj(cfg), src, boundary_ring(cfg)))


def first_path(adj: np.ndarray, win: Window, starts: np.ndarray, ends: np.ndarray, dual: bool = False) -> LatticePath:
    """Shortest path from ``starts`` to ``ends``; ties go to the lexicographically smallest vertex sequence."""
    dist = K.bfs(adj, ends)
    reach = np.where(starts & (dist >= 0), dist, np.iinfo(np.int32).max)
    best = reach.min() if reach.size else np.iinfo(np.int32).max
    if best == np.iinfo(np.int32).max:
        raise NotConnected("no path between the requested sets")
    # nonzero scans in C order, which is lexicographic (x, y) order
    i, j = (int(t[0]) for t in np.nonzero(reach == best))
    out = [win.point(i, j)]
    d = int(dist[i, j])
    while d > 0:
        options = []
        for k, (di, dj) in enumerate(K_DIRS):
            if adj[i, j, k] and dist[i + di, j + dj] == d - 1:
                options.append((i + di, j + dj))
        i, j = min(options)
        out.append(win.point(i, j))
        d -= 1
    return LatticePath(tuple(out), dual)


def chemical_distance(cfg: Configuration) -> GeodesicWitness:
    win = box_window(cfg)
    try:
        path = first_path(open_adj(cfg), win, win.mask([cfg.geometry.center]), boundary_ring(cfg))
    except NotConnected:
        raise NotConnected("the centre is not connected to the boundary") from None
    return GeodesicWitness(path.length, path)


def _rect_window(cfg: Configuration, rect: Rect) -> Window:
    if rect.x1 <= rect.x0 or rect.y1 < rect.y0:
        raise ValueError(f"degenerate rectangle {rect}")
    geom = cfg.geometry
    for corner in ((rect.x0, rect.y0), (rect.x1, rect.y1)):
        if not geom.contains_vertex(corner):
            raise ValueError(f"rectangle {rect} leaves the box")
    return box_window(cfg)


def crossing_exists(cfg: Configuration, rect: Rect, color: str = OPEN, direction: str = "horizontal") -> bool:
    """Crossing of a vertex rectangle between its two designated sides.

    Open crossings use edges with both endpoints in ``rect`` and join the
    left and right (or bottom and top) columns.  Closed crossings live on
    the dual rectangle: a horizontal one joins the dual columns just
    outside the left and right sides, a vertical one the dual rows just
    below and above, using duals of the rectangle's closed edges.
    """
    rect = Rect(*rect)
    win = _rect_window(cfg, rect)
    x, y = win.coords()
    inside = (x >= rect.x0) & (x <= rect.x1) & (y >= rect.y0) & (y <= rect.y1)
    h_in, v_in = edge_masks(inside, np.logical_and)
    if color == OPEN:
        adj = restrict(primal_adj(cfg.h & h_in, cfg.v & v_in), inside)
        if direction == "horizontal":
            src, dst = inside & (x == rect.x0), inside & (x == rect.x1)
        else:
            src, dst = inside & (y == rect.y0), inside & (y == rect.y1)
        return bool(K.reaches(adj, src, dst))
    if color != CLOSED:
        raise ValueError(f"unknown color {color!r}")
    a, b = win.dual.coords()
    if direction == "vertical":
        keep = (a >= rect.x0) & (a <= rect.x1 - 1) & (b >= rect.y0 - 1) & (b <= rect.y1)
        src, dst = keep & (b == rect.y0 - 1), keep & (b == rect.y1)
    else:
        keep = (a >= rect.x0 - 1) & (a <= rect.x1) & (b >= rect.y0) & (b <= rect.y1 - 1)
        src, dst = keep & (a == rect.x0 - 1), keep & (a == rect.x1)
    adj = restrict(dual_adj(~cfg.h & h_in, ~cfg.v & v_in), keep)
    return bool(K.reaches(adj, src, dst))


def _half_plane_keep(win: Window, center: Vertex, direction: str | None, dual: bool) -> np.ndarray:
    x, y = win.coords()
    if direction is None:
        return np.ones(x.shape, dtype=bool)
    tx, ty = HALF_PLANE_NORMALS[direction]
    if dual:
        return tx * (2 * x + 1 - 2 * center[0]) + ty * (2 * y + 1 - 2 * center[1]) <= 0
    return tx * (x - center[0]) + ty * (y - center[1]) <= 0


def annulus_graph(cfg: Configuration, annulus: AnnulusSpec, color: str, half_plane: str | None = None):
    """(adjacency, sources, sinks, window) of the annulus crossing problem.

    Primal arms run from the ring at distance ``inner`` to the ring at
    ``outer``.  Dual arms run from the dual ring at ``inner + 1/2`` to the
    dual ring at ``outer + 1/2`` through duals of closed annulus edges.
    """
    c, n, N = annulus.center, annulus.inner, annulus.outer
    win = Window.around(c, N)
    h, v = window_states(cfg, win)
    dist = linf_field(win, c)
    h_in, v_in = edge_masks(dist, lambda p, q: np.maximum(p, q) > n)
    if color == OPEN:
        keep = (dist >= n) & _half_plane_keep(win, c, half_plane, False)
        adj = restrict(primal_adj(h & h_in, v & v_in), keep)
        return adj, keep & (dist == n), keep & (dist == N), win
    if color != CLOSED:
        raise ValueError(f"unknown color {color!r}")
    dwin = win.dual
    d2 = dual_linf2_field(dwin, c)
    keep = (d2 >= 2 * n + 1) & _half_plane_keep(dwin, c, half_plane, True)
    adj = restrict(dual_adj(~h & h_in, ~v & v_in), keep)
    return adj, keep & (d2 == 2 * n + 1), keep & (d2 == 2 * N + 1), dwin


def max_disjoint(adj, sources, sinks, limit=None):
    """Vertex-disjoint paths between two vertex sets; overlapping vertices count as trivial paths.

    Returns (count, flow, through, trivial_mask).
    """
    both = sources & sinks
    trivial = int(both.sum())
    if limit is None:
        limit = adj.shape[0] * adj.shape[0]
    if trivial:
        adj = restrict(adj, ~both)
        sources, sinks = sources & ~both, sinks & ~both
    if trivial >= limit:
        return trivial, np.zeros(adj.shape, np.int8), np.zeros(adj.shape[:2], np.int8), both
    count, flow, through = K.max_disjoint_paths(adj, sources, sinks, limit - trivial)
    return trivial + count, flow, through, both


def decompose_flow(win: Window, flow, through, sources, sinks, trivial, dual: bool = False) -> list[LatticePath]:
    """Explicit vertex lists of a flow returned by :func:`max_disjoint`."""
    paths = [LatticePath((win.point(i, j),), dual) for i, j in zip(*np.nonzero(trivial))]
    for i, j in zip(*np.nonzero(sources & (through == 1))):
        i, j = int(i), int(j)
        # a source with flow through it may just be an interior vertex of another path
        if any(0 <= i - di < win.side and 0 <= j - dj < win.side and flow[i - di, j - dj, k] == 1
               for k, (di, dj) in enumerate(K_DIRS)):
            continue
        verts = [(i, j)]
        while True:
            nxt = [k for k in range(4) if flow[i, j, k] == 1]
            if not nxt:
                break
            di, dj = K_DIRS[nxt[0]]
            i, j = i + di, j + dj
            verts.append((i, j))
        if sinks[i, j]:
            paths.append(LatticePath(tuple(win.point(a, b) for a, b in verts), dual))
    return paths


def disjoint_arm_count(cfg: Configuration, annulus: AnnulusSpec, color: str = OPEN, half_plane: str | None = None,
                       limit: int | None = None) -> int:
    """Maximum number of vertex-disjoint crossings of the annulus in the given color."""
    adj, src, dst, _ = annulus_graph(cfg, annulus, color, half_plane)
    return max_disjoint(adj, src, dst, limit)[0]


def disjoint_arms(cfg: Configuration, annulus: AnnulusSpec, color: str = OPEN, half_plane: str | None = None,
                  limit: int | None = None) -> list[LatticePath]:
    adj, src, dst, win = annulus_graph(cfg, annulus, color, half_plane)
    _, flow, through, trivial = max_disjoint(adj, src, dst, limit)
    return decompose_flow(win, flow, through, src, dst, trivial, color == CLOSED)
