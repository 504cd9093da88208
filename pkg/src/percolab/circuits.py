"""Successive innermost open circuits around the centre of a box.

Faces (plaquettes) are handled as dual vertices of the box's dual window.
The innermost open circuit outside a filled region F is the outer boundary
of F together with the closed dual clusters of the faces touching F; the
first one uses the four faces around the centre instead of F.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .connectivity import NotConnected, box_window, closed_dual_adj, first_path
from .grid import Window, restrict
from .lattice import Configuration, EdgeIndex, Vertex
from .paths import LatticePath


@dataclass
class CircuitStack:
    """Innermost-first open circuits around the centre.

    ``fills[m]`` marks the faces enclosed by ``circuits[m]``; ``bridges[m]``
    is the ordered-first closed dual path that leads from the faces just
    outside the previous circuit (or around the centre) to the inside of
    ``circuits[m]``; ``certificate`` joins the faces outside the last circuit
    (or around the centre) to the dual ring outside the box.
    """

    circuits: list[LatticePath]
    fills: list[np.ndarray]
    bridges: list[LatticePath]
    certificate: LatticePath | None  # None when the stack was cut short by max_circuits
    window: Window = field(repr=False)
    seeds: list[np.ndarray] = field(default_factory=list, repr=False)

    @property
    def K(self) -> int:
        return len(self.circuits)


def face_ring(side: int) -> np.ndarray:
    ring = np.zeros((side, side), dtype=bool)
    ring[0, :] = ring[-1, :] = ring[:, 0] = ring[:, -1] = True
    return ring


def center_faces(cfg: Configuration, dwin: Window) -> np.ndarray:
    cx, cy = cfg.geometry.center
    return dwin.mask([(cx - 1, cy - 1), (cx, cy - 1), (cx - 1, cy), (cx, cy)])


def face_neighbors(mask: np.ndarray) -> np.ndarray:
    """Faces sharing a side with ``mask`` but not in it."""
    out = np.zeros_like(mask)
    out[1:, :] |= mask[:-1, :]
    out[:-1, :] |= mask[1:, :]
    out[:, 1:] |= mask[:, :-1]
    out[:, :-1] |= mask[:, 1:]
    return out & ~mask


def fill_holes(region: np.ndarray) -> np.ndarray:
    """``region`` plus every face not connected to the outer ring outside it."""
    adj = restrict(_face_adj(region.shape[0]), ~region)
    outside = K.bfs(adj, face_ring(region.shape[0]) & ~region) >= 0
    return ~outside


_FACE_ADJ: dict[int, np.ndarray] = {}


def _face_adj(side: int) -> np.ndarray:
    if side not in _FACE_ADJ:
        adj = np.zeros((side, side, 4), dtype=bool)
        adj[:-1, :, 0] = adj[1:, :, 2] = True
        adj[:, :-1, 1] = adj[:, 1:, 3] = True
        _FACE_ADJ[side] = adj
    return _FACE_ADJ[side]


def boundary_circuit(fill: np.ndarray, dwin: Window) -> LatticePath:
    """Counterclockwise boundary of a simply connected face set as a closed vertex list."""
    succ: dict[Vertex, Vertex] = {}

    def add(start, stop):
        if start in succ:
            raise RuntimeError(f"face set boundary pinches at {start}")
        succ[start] = stop

    ii, jj = np.nonzero(fill)
    for i, j in zip(ii.tolist(), jj.tolist()):
        a, b = dwin.point(i, j)
        if not fill[i + 1, j]:
            add((a + 1, b), (a + 1, b + 1))
        if not fill[i - 1, j]:
            add((a, b + 1), (a, b))
        if not fill[i, j + 1]:
            add((a + 1, b + 1), (a, b + 1))
        if not fill[i, j - 1]:
            add((a, b), (a + 1, b))
    start = min(succ)
    verts = [start]
    u = succ[start]
    while u != start:
        verts.append(u)
        u = succ[u]
    if len(verts) != len(succ):
        raise RuntimeError("face set boundary is not a single circuit")
    verts.append(start)
    return LatticePath(tuple(verts))


def inner_faces(fill: np.ndarray) -> np.ndarray:
    """Faces of ``fill`` sharing a side with a face outside it."""
    return fill & face_neighbors(~fill)


def build_circuit_stack(cfg: Configuration, max_circuits: int | None = None) -> CircuitStack:
    win = box_window(cfg)
    dwin = win.dual
    closed = closed_dual_adj(cfg)
    ring = face_ring(dwin.side)
    seeds = center_faces(cfg, dwin)
    fill = np.zeros_like(seeds)
    circuits, fills, bridges, seed_list = [], [], [], []
    certificate = None
    while True:
        reach = K.bfs(closed, seeds) >= 0
        if (reach & ring).any():
            certificate = first_path(closed, dwin, seeds, ring, dual=True)
            break
        if max_circuits is not None and len(circuits) >= max_circuits:
            break
        fill = fill_holes(reach | fill)
        circuits.append(boundary_circuit(fill, dwin))
        fills.append(fill)
        bridges.append(first_path(closed, dwin, seeds, inner_faces(fill), dual=True))
        seed_list.append(seeds)
        seeds = face_neighbors(fill)
    seed_list.append(seeds)
    return CircuitStack(circuits, fills, bridges, certificate, win, seed_list)


def detect_C0(cfg: Configuration) -> tuple[bool, LatticePath]:
    """Whether an open circuit surrounds the centre; returns it, or a closed dual path to the outside."""
    stack = build_circuit_stack(cfg, max_circuits=1)
    if stack.K:
        return True, stack.circuits[0]
    return False, stack.certificate


def first_closed_dual_path(cfg: Configuration, starts, ends, region=None) -> LatticePath:
    """Ordered-first closed dual path (length, then lexicographic vertex sequence).

    ``starts`` and ``ends`` are iterables of dual vertices (lower-left
    corners) or boolean masks over the box's dual window; ``region``
    optionally restricts the dual vertices used.
    """
    dwin = box_window(cfg).dual
    adj = closed_dual_adj(cfg)
    starts = starts if isinstance(starts, np.ndarray) else dwin.mask(starts)
    ends = ends if isinstance(ends, np.ndarray) else dwin.mask(ends)
    if region is not None:
        region = region if isinstance(region, np.ndarray) else dwin.mask(region)
        adj = restrict(adj, region)
        starts, ends = starts & region, ends & region
    return first_path(adj, dwin, starts, ends, dual=True)


def circuit_edges(circuit: LatticePath) -> set[EdgeIndex]:
    return set(circuit.edges())


def circuit_fill(circuit: LatticePath, dwin: Window) -> np.ndarray:
    """Faces enclosed by a closed primal circuit (even-odd rule on vertical edges)."""
    cross = np.zeros((dwin.side, dwin.side), dtype=np.int64)
    for e in circuit.edges():
        if not e.horizontal:
            i, j = dwin.local((e.x, e.y))
            # the face (a, b) is inside iff an odd number of circuit edges lie to its west
            cross[i:, j] += 1
    return (cross % 2 == 1)


__all__ = [
    "CircuitStack", "NotConnected", "boundary_circuit", "build_circuit_stack", "circuit_edges",
    "circuit_fill", "detect_C0", "first_closed_dual_path", "face_neighbors", "inner_faces",
]
