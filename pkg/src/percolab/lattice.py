"""Boxes, annuli, edges and Bernoulli bond configurations on Z^2.

Coordinates are absolute lattice coordinates.  A box of radius n around
``center`` stores its edges in two boolean arrays indexed by window-local
coordinates ``i = x - center_x + n`` and ``j = y - center_y + n``:

* ``h[i, j]`` is the horizontal edge from (i, j) to (i + 1, j), shape (2n, 2n+1)
* ``v[i, j]`` is the vertical edge from (i, j) to (i, j + 1), shape (2n+1, 2n)

The canonical flat edge index is row-major over the lower-left endpoint
(row = y, then x) with the horizontal edge before the vertical one.

Dual vertices are written by their lower-left integer corner: ``(a, b)``
stands for the point (a + 1/2, b + 1/2).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

Vertex = tuple[int, int]


class EdgeIndex(NamedTuple):
    """A nearest-neighbour edge given by its lower-left endpoint and orientation."""

    x: int
    y: int
    horizontal: bool

    @property
    def lower_left(self) -> Vertex:
        return (self.x, self.y)

    @property
    def endpoints(self) -> tuple[Vertex, Vertex]:
        if self.horizontal:
            return (self.x, self.y), (self.x + 1, self.y)
        return (self.x, self.y), (self.x, self.y + 1)

    @property
    def midpoint(self) -> tuple[float, float]:
        if self.horizontal:
            return (self.x + 0.5, self.y)
        return (self.x, self.y + 0.5)

    def dual_endpoints(self) -> tuple[Vertex, Vertex]:
        """The two dual vertices (as lower-left corners) joined by the dual edge."""
        if self.horizontal:
            return (self.x, self.y - 1), (self.x, self.y)
        return (self.x - 1, self.y), (self.x, self.y)

    @staticmethod
    def between(u: Vertex, w: Vertex) -> "EdgeIndex":
        """Edge joining two vertices at L1 distance one."""
        (ux, uy), (wx, wy) = u, w
        if abs(ux - wx) + abs(uy - wy) != 1:
            raise ValueError(f"{u} and {w} are not nearest neighbours")
        return EdgeIndex(min(ux, wx), min(uy, wy), uy == wy)


class DualEdge(NamedTuple):
    """A dual edge between dual vertices (lower-left corners) sharing a side."""

    a: Vertex
    b: Vertex

    def primal(self) -> EdgeIndex:
        (ax, ay), (bx, by) = sorted((self.a, self.b))
        if ax == bx and by == ay + 1:
            # vertical dual edge crosses a horizontal primal edge
            return EdgeIndex(ax, by, True)
        if ay == by and bx == ax + 1:
            return EdgeIndex(bx, ay, False)
        raise ValueError(f"{self.a} and {self.b} are not adjacent dual vertices")


def dual_edge(e: EdgeIndex) -> DualEdge:
    a, b = e.dual_endpoints()
    return DualEdge(a, b)


def linf(u: Vertex, w: Vertex = (0, 0)) -> int:
    return max(abs(u[0] - w[0]), abs(u[1] - w[1]))


def dual_linf(d: Vertex, c: Vertex = (0, 0)) -> float:
    """L-infinity distance from the centre of dual vertex ``d`` to ``c``."""
    return max(abs(d[0] + 0.5 - c[0]), abs(d[1] + 0.5 - c[1]))


@dataclass(frozen=True)
class BoxGeometry:
    center: Vertex
    radius: int

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")

    @property
    def width(self) -> int:
        return 2 * self.radius + 1

    @property
    def n_edges(self) -> int:
        return 2 * self.width * (self.width - 1)

    @property
    def origin(self) -> Vertex:
        """Absolute coordinates of the window-local (0, 0) corner."""
        return (self.center[0] - self.radius, self.center[1] - self.radius)

    def contains_vertex(self, u: Vertex) -> bool:
        return linf(u, self.center) <= self.radius

    def contains_edge(self, e: EdgeIndex) -> bool:
        a, b = e.endpoints
        return self.contains_vertex(a) and self.contains_vertex(b)

    def is_boundary_edge(self, e: EdgeIndex) -> bool:
        a, b = e.endpoints
        return linf(a, self.center) == self.radius == linf(b, self.center)

    def edges(self) -> list[EdgeIndex]:
        """All edges in canonical flat order."""
        x0, y0 = self.origin
        w = self.width
        out = []
        for j in range(w):
            for i in range(w):
                if i < w - 1:
                    out.append(EdgeIndex(x0 + i, y0 + j, True))
                if j < w - 1:
                    out.append(EdgeIndex(x0 + i, y0 + j, False))
        return out

    def boundary_edges(self) -> list[EdgeIndex]:
        return [e for e in self.edges() if self.is_boundary_edge(e)]

    def edge_index(self, e: EdgeIndex) -> int:
        """Flat index of ``e`` (row-major over lower-left endpoint, h before v)."""
        if not self.contains_edge(e):
            raise ValueError(f"edge {e} is outside the box")
        i, j = e.x - self.origin[0], e.y - self.origin[1]
        hidx, vidx = _flat_layout(self.radius)
        return int(hidx[i, j] if e.horizontal else vidx[i, j])

    def edge_at(self, k: int) -> EdgeIndex:
        if not 0 <= k < self.n_edges:
            raise IndexError(k)
        w = self.width
        row_len = 2 * w - 1
        j, r = divmod(k, row_len)
        x0, y0 = self.origin
        if j == w - 1:
            return EdgeIndex(x0 + r, y0 + j, True)
        if r == row_len - 1:
            return EdgeIndex(x0 + w - 1, y0 + j, False)
        i, vert = divmod(r, 2)
        return EdgeIndex(x0 + i, y0 + j, not vert)


@dataclass(frozen=True)
class AnnulusSpec:
    center: Vertex
    inner: int
    outer: int

    def __post_init__(self):
        if not 0 < self.inner < self.outer:
            raise ValueError("annulus needs 0 < inner < outer")

    def contains_edge(self, e: EdgeIndex) -> bool:
        a, b = e.endpoints
        da, db = linf(a, self.center), linf(b, self.center)
        return max(da, db) <= self.outer and max(da, db) > self.inner


def build_box(n: int, center: Vertex = (0, 0)) -> BoxGeometry:
    return BoxGeometry(tuple(center), n)


@lru_cache(maxsize=64)
def _flat_layout(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Flat indices of the h and v arrays of a radius-n box."""
    w = 2 * n + 1
    if n == 0:
        return np.zeros((0, 1), dtype=np.int64), np.zeros((1, 0), dtype=np.int64)
    row_len = 2 * w - 1
    i = np.arange(w - 1)[:, None]
    j = np.arange(w)[None, :]
    hidx = np.where(j < w - 1, j * row_len + 2 * i, (w - 1) * row_len + i)
    i = np.arange(w)[:, None]
    j = np.arange(w - 1)[None, :]
    vidx = np.where(i < w - 1, j * row_len + 2 * i + 1, j * row_len + row_len - 1)
    hidx.flags.writeable = False
    vidx.flags.writeable = False
    return hidx, vidx


class Configuration:
    """Open/closed states of every edge of a box.  Dual states are derived."""

    def __init__(self, geometry: BoxGeometry, states: np.ndarray, p: float = 0.5, seed: int | None = None):
        states = np.asarray(states, dtype=bool).ravel()
        if states.size != geometry.n_edges:
            raise ValueError(f"expected {geometry.n_edges} edge states, got {states.size}")
        self.geometry = geometry
        self.p = float(p)
        self.seed = seed
        self.states = states.copy()
        self.states.flags.writeable = False
        hidx, vidx = _flat_layout(geometry.radius)
        self.h = self.states[hidx]
        self.v = self.states[vidx]
        self.h.flags.writeable = False
        self.v.flags.writeable = False

    @classmethod
    def from_arrays(cls, geometry: BoxGeometry, h: np.ndarray, v: np.ndarray, p: float = 0.5, seed=None):
        hidx, vidx = _flat_layout(geometry.radius)
        states = np.zeros(geometry.n_edges, dtype=bool)
        states[hidx] = h
        states[vidx] = v
        return cls(geometry, states, p, seed)

    @classmethod
    def constant(cls, geometry: BoxGeometry, is_open: bool) -> "Configuration":
        return cls(geometry, np.full(geometry.n_edges, is_open), p=float(is_open))

    @property
    def n(self) -> int:
        return self.geometry.radius

    def is_open(self, e: EdgeIndex) -> bool:
        return bool(self.states[self.geometry.edge_index(e)])

    def dual_is_closed(self, d: DualEdge) -> bool:
        return not self.is_open(d.primal())

    def with_edge(self, e: EdgeIndex, is_open: bool) -> "Configuration":
        states = self.states.copy()
        states[self.geometry.edge_index(e)] = is_open
        return Configuration(self.geometry, states, self.p, self.seed)

    def open_fraction(self) -> float:
        return float(self.states.mean()) if self.states.size else 0.0

    def __eq__(self, other):
        return (
            isinstance(other, Configuration)
            and self.geometry == other.geometry
            and np.array_equal(self.states, other.states)
        )

    def __repr__(self):
        return f"Configuration(n={self.n}, center={self.geometry.center}, open={int(self.states.sum())}/{self.states.size})"

    # serialization -------------------------------------------------------

    _HEADER = struct.Struct("<4sBxxxiiidQ")
    _MAGIC = b"PCFG"

    def to_bytes(self) -> bytes:
        seed = -1 if self.seed is None else self.seed
        head = self._HEADER.pack(
            self._MAGIC, 1, self.n, self.geometry.center[0], self.geometry.center[1],
            self.p, seed & 0xFFFFFFFFFFFFFFFF,
        )
        has_seed = b"\x01" if self.seed is not None else b"\x00"
        return head + has_seed + np.packbits(self.states).tobytes()

    @classmethod
    def from_bytes(cls, blob: bytes) -> "Configuration":
        size = cls._HEADER.size
        magic, version, n, cx, cy, p, seed = cls._HEADER.unpack(blob[:size])
        if magic != cls._MAGIC or version != 1:
            raise ValueError("not a configuration record")
        geom = BoxGeometry((cx, cy), n)
        has_seed = blob[size] == 1
        bits = np.unpackbits(np.frombuffer(blob[size + 1:], dtype=np.uint8), count=geom.n_edges)
        return cls(geom, bits.astype(bool), p, seed if has_seed else None)

    def to_text(self) -> str:
        """Debug picture: ``+`` vertices, ``-``/``|`` open edges, blanks closed; north at top."""
        w = self.geometry.width
        rows = []
        for j in reversed(range(w)):
            line = []
            for i in range(w):
                line.append("+")
                if i < w - 1:
                    line.append("-" if self.h[i, j] else " ")
            rows.append("".join(line))
            if j > 0:
                rows.append("".join(("|" if self.v[i, j - 1] else " ") + (" " if i < w - 1 else "") for i in range(w)))
        return "\n".join(rows) + "\n"

    @classmethod
    def from_text(cls, text: str, center: Vertex = (0, 0), p: float = 0.5) -> "Configuration":
        rows = text.rstrip("\n").split("\n")
        w = (len(rows) + 1) // 2
        geom = BoxGeometry(tuple(center), (w - 1) // 2)
        h = np.zeros((w - 1, w), dtype=bool)
        v = np.zeros((w, w - 1), dtype=bool)
        for r, line in enumerate(rows):
            line = line.ljust(2 * w - 1)
            if r % 2 == 0:
                j = w - 1 - r // 2
                for i in range(w - 1):
                    h[i, j] = line[2 * i + 1] == "-"
            else:
                j = w - 2 - r // 2
                for i in range(w):
                    v[i, j] = line[2 * i] == "|"
        return cls.from_arrays(geom, h, v, p)


def sample_configuration(geom: BoxGeometry, p: float = 0.5, seed: int = 0) -> Configuration:
    """Bernoulli(p) bond configuration.

    The k-th edge (canonical flat order) receives the k-th uniform of a
    Philox stream keyed by ``seed``, so the state of an edge depends only on
    (seed, edge index).
    """
    if not 0.0 <= p <= 1.0 or p != p:
        raise ValueError(f"invalid probability {p!r}")
    seed = int(seed)
    if seed < 0:
        raise ValueError("seed must be a nonnegative integer")
    gen = np.random.Generator(np.random.Philox(key=seed))
    states = gen.random(geom.n_edges) < p
    return Configuration(geom, states, p, seed)


def displacement_M(e: EdgeIndex, geom: BoxGeometry) -> int:
    """min(distance to centre, distance to the box boundary) measured from e_x."""
    if not geom.contains_edge(e):
        raise ValueError(f"edge {e} is outside the box")
    d = linf(e.lower_left, geom.center)
    return min(d, geom.radius - d)


def boundary_projection(e: EdgeIndex, geom: BoxGeometry) -> Vertex:
    """Nearest boundary vertex to e_x in Euclidean distance, ties to the lexicographically smallest."""
    if not geom.contains_edge(e):
        raise ValueError(f"edge {e} is outside the box")
    cx, cy = geom.center
    n = geom.radius
    x, y = e.x - cx, e.y - cy
    cands = [(n, y), (-n, y), (x, n), (x, -n)]
    best = min(cands, key=lambda q: ((q[0] - x) ** 2 + (q[1] - y) ** 2, q))
    return (best[0] + cx, best[1] + cy)
