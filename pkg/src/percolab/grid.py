"""Square windows of Z^2 and their primal/dual adjacency arrays.

A window of side ``s`` covers vertices x0..x0+s-1 by y0..y0+s-1.  Its dual
window covers the dual vertices (lower-left corners) x0-1..x0+s-1 by
y0-1..y0+s-1, i.e. every face touching the window plus the ring around it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import Configuration, EdgeIndex, Vertex

# counterclockwise: east, north, west, south
DIRECTIONS = ((1, 0), (0, 1), (-1, 0), (0, -1))


@dataclass(frozen=True)
class Window:
    x0: int
    y0: int
    side: int

    @classmethod
    def around(cls, center: Vertex, radius: int) -> "Window":
        return cls(center[0] - radius, center[1] - radius, 2 * radius + 1)

    @property
    def dual(self) -> "Window":
        return Window(self.x0 - 1, self.y0 - 1, self.side + 1)

    def local(self, u: Vertex) -> tuple[int, int]:
        return (u[0] - self.x0, u[1] - self.y0)

    def point(self, i: int, j: int) -> Vertex:
        return (self.x0 + int(i), self.y0 + int(j))

    def point_of_id(self, k: int) -> Vertex:
        return self.point(*divmod(int(k), self.side))

    def id_of(self, u: Vertex) -> int:
        i, j = self.local(u)
        return i * self.side + j

    def contains(self, u: Vertex) -> bool:
        i, j = self.local(u)
        return 0 <= i < self.side and 0 <= j < self.side

    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        """Absolute x and y of every cell, each of shape (side, side)."""
        r = np.arange(self.side)
        return np.meshgrid(self.x0 + r, self.y0 + r, indexing="ij")

    def mask(self, points) -> np.ndarray:
        m = np.zeros((self.side, self.side), dtype=bool)
        for u in points:
            i, j = self.local(u)
            if 0 <= i < self.side and 0 <= j < self.side:
                m[i, j] = True
        return m

    def points(self, mask: np.ndarray) -> list[Vertex]:
        return [self.point(i, j) for i, j in zip(*np.nonzero(mask))]


def linf_field(win: Window, center: Vertex) -> np.ndarray:
    """Integer L-infinity distance of each primal vertex of ``win`` from ``center``."""
    x, y = win.coords()
    return np.maximum(np.abs(x - center[0]), np.abs(y - center[1]))


def dual_linf2_field(dwin: Window, center: Vertex) -> np.ndarray:
    """Twice the L-infinity distance of each dual vertex centre from ``center`` (odd integers)."""
    a, b = dwin.coords()
    return np.maximum(np.abs(2 * a + 1 - 2 * center[0]), np.abs(2 * b + 1 - 2 * center[1]))


def edge_masks(field: np.ndarray, pred) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate ``pred(f(u), f(w))`` on both endpoints of every h and v edge."""
    return pred(field[:-1, :], field[1:, :]), pred(field[:, :-1], field[:, 1:])


def primal_adj(h: np.ndarray, v: np.ndarray) -> np.ndarray:
    s = v.shape[0]
    adj = np.zeros((s, s, 4), dtype=bool)
    adj[:-1, :, 0] = h
    adj[1:, :, 2] = h
    adj[:, :-1, 1] = v
    adj[:, 1:, 3] = v
    return adj


def dual_adj(h_closed: np.ndarray, v_closed: np.ndarray) -> np.ndarray:
    """Dual adjacency on the dual window; pass the masks of usable closed edges."""
    s = v_closed.shape[0]
    adj = np.zeros((s + 1, s + 1, 4), dtype=bool)
    # a vertical primal edge at (i, j) separates dual (i-1, j) and (i, j)
    adj[0:s, 1:s, 0] = v_closed
    adj[1:s + 1, 1:s, 2] = v_closed
    # a horizontal primal edge at (i, j) separates dual (i, j-1) and (i, j)
    adj[1:s, 0:s, 1] = h_closed
    adj[1:s, 1:s + 1, 3] = h_closed
    return adj


def restrict(adj: np.ndarray, keep: np.ndarray) -> np.ndarray:
    """Drop every adjacency touching a vertex outside ``keep``."""
    out = adj & keep[:, :, None]
    out[:-1, :, 0] &= keep[1:, :]
    out[1:, :, 2] &= keep[:-1, :]
    out[:, :-1, 1] &= keep[:, 1:]
    out[:, 1:, 3] &= keep[:, :-1]
    return out


def window_states(cfg: Configuration, win: Window) -> tuple[np.ndarray, np.ndarray]:
    """Slices of the configuration's h and v arrays covering ``win`` (must lie in the box)."""
    bx, by = cfg.geometry.origin
    i0, j0 = win.x0 - bx, win.y0 - by
    s = win.side
    if i0 < 0 or j0 < 0 or i0 + s > cfg.geometry.width or j0 + s > cfg.geometry.width:
        raise ValueError("window leaves the configuration box")
    return cfg.h[i0:i0 + s - 1, j0:j0 + s], cfg.v[i0:i0 + s, j0:j0 + s - 1]


def adj_edges(adj: np.ndarray, win: Window) -> list[EdgeIndex]:
    """Primal edges present in an adjacency array (east/north halves only)."""
    out = []
    for i, j in zip(*np.nonzero(adj[:, :, 0])):
        out.append(EdgeIndex(win.x0 + int(i), win.y0 + int(j), True))
    for i, j in zip(*np.nonzero(adj[:, :, 1])):
        out.append(EdgeIndex(win.x0 + int(i), win.y0 + int(j), False))
    return sorted(out)


def edge_set_masks(edges, win: Window) -> tuple[np.ndarray, np.ndarray]:
    """Boolean h/v masks of ``win`` marking the given primal edges."""
    s = win.side
    h = np.zeros((s - 1, s), dtype=bool)
    v = np.zeros((s, s - 1), dtype=bool)
    for e in edges:
        i, j = e.x - win.x0, e.y - win.y0
        if e.horizontal:
            if 0 <= i < s - 1 and 0 <= j < s:
                h[i, j] = True
        elif 0 <= i < s and 0 <= j < s - 1:
            v[i, j] = True
    return h, v
