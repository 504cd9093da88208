"""Brute-force reference implementations for tiny boxes.

The path and circuit oracles work from ``Configuration.is_open`` and plain
Python searches, sharing no code with the fast paths they check.  The
exact three-arm probability is the exception: it enumerates configurations
but reuses the flow kernels to decide each one.  All routines are
exponential and only meant for n <= 4.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import shortest_path

from .lattice import Configuration, EdgeIndex, Vertex, linf

Face = tuple[int, int]  # lower-left corner of a unit face


# -- graphs ------------------------------------------------------------------

def open_graph(cfg: Configuration) -> dict[Vertex, list[Vertex]]:
    nbrs: dict[Vertex, list[Vertex]] = {}
    for e in cfg.geometry.edges():
        if cfg.is_open(e):
            u, w = e.endpoints
            nbrs.setdefault(u, []).append(w)
            nbrs.setdefault(w, []).append(u)
    return {u: sorted(ws) for u, ws in nbrs.items()}


def separating_edge(f: Face, g: Face) -> EdgeIndex:
    """Primal edge crossed when stepping between adjacent faces."""
    (a, b), (c, d) = sorted((f, g))
    if c == a + 1:
        return EdgeIndex(c, b, False)
    return EdgeIndex(a, d, True)


def closed_dual_graph(cfg: Configuration) -> dict[Face, list[Face]]:
    geom = cfg.geometry
    nbrs: dict[Face, list[Face]] = {}
    for e in geom.edges():
        if cfg.is_open(e):
            continue
        if e.horizontal:
            f, g = (e.x, e.y - 1), (e.x, e.y)
        else:
            f, g = (e.x - 1, e.y), (e.x, e.y)
        nbrs.setdefault(f, []).append(g)
        nbrs.setdefault(g, []).append(f)
    return {f: sorted(gs) for f, gs in nbrs.items()}


def face_dist2(f: Face, c: Vertex = (0, 0)) -> int:
    """Twice the L-inf distance from ``c`` to the face centre."""
    return max(abs(2 * (f[0] - c[0]) + 1), abs(2 * (f[1] - c[1]) + 1))


# -- chemical distance -------------------------------------------------------

def chemical_distance(cfg: Configuration) -> int | None:
    """Dijkstra over the open subgraph; None when the centre is cut off from the boundary."""
    geom = cfg.geometry
    edges = [e for e in geom.edges() if cfg.is_open(e)]
    verts = sorted({u for e in geom.edges() for u in e.endpoints})
    ids = {u: k for k, u in enumerate(verts)}
    rows = [ids[e.endpoints[0]] for e in edges]
    cols = [ids[e.endpoints[1]] for e in edges]
    graph = coo_matrix((np.ones(len(edges)), (rows, cols)), shape=(len(verts), len(verts))).tocsr()
    dist = shortest_path(graph, directed=False, unweighted=True, indices=ids[geom.center])
    best = min((dist[ids[u]] for u in verts if linf(u, geom.center) == geom.radius), default=np.inf)
    return None if np.isinf(best) else int(best)


# -- circuits ----------------------------------------------------------------

def simple_cycles(nbrs: dict[Vertex, list[Vertex]]):
    """Every simple cycle once, as a closed vertex list starting at its smallest vertex."""
    for s in sorted(nbrs):
        path = [s]
        on_path = {s}

        def extend(u):
            for w in nbrs[u]:
                if w == s and len(path) >= 3 and path[1] < path[-1]:
                    yield path + [s]
                elif w > s and w not in on_path:
                    path.append(w)
                    on_path.add(w)
                    yield from extend(w)
                    path.pop()
                    on_path.discard(w)

        yield from extend(s)


def polygon_area2(points) -> int:
    """Twice the signed shoelace area of a closed polygon (first point repeated at the end)."""
    return sum(x0 * y1 - x1 * y0 for (x0, y0), (x1, y1) in zip(points, points[1:]))


def faces_inside(cycle: list[Vertex], radius: int) -> frozenset[Face]:
    """Faces whose centre is inside the cycle (ray cast towards +x)."""
    segs = [(u, w) for u, w in zip(cycle, cycle[1:]) if u[0] == w[0]]
    out = set()
    for a in range(-radius, radius):
        for b in range(-radius, radius):
            # a vertical segment at x crosses the ray from (a+1/2, b+1/2) iff x > a and it spans b..b+1
            hits = sum(1 for u, w in segs if u[0] > a and min(u[1], w[1]) == b)
            if hits % 2:
                out.add((a, b))
    return frozenset(out)


@dataclass(frozen=True)
class Circuit:
    vertices: tuple[Vertex, ...]
    area: int
    inside: frozenset[Face]

    @property
    def edges(self) -> frozenset[EdgeIndex]:
        return frozenset(EdgeIndex.between(u, w) for u, w in zip(self.vertices, self.vertices[1:]))


def open_circuits_around(cfg: Configuration, center: Vertex = (0, 0)) -> list[Circuit]:
    """All open simple cycles with the centre strictly inside."""
    n = cfg.n
    out = []
    for cyc in simple_cycles(open_graph(cfg)):
        if center in cyc:
            continue
        inside = faces_inside(cyc, n)
        if (center[0] - 1, center[1] - 1) in inside:
            out.append(Circuit(tuple(cyc), abs(polygon_area2(cyc)) // 2, inside))
    return out


def circuit_stack(cfg: Configuration) -> list[Circuit]:
    """Iterated innermost circuits: each is the least-area circuit enclosing the previous one and edge-disjoint from it.

    Raises if the least area is attained twice.
    """
    cands = open_circuits_around(cfg, cfg.geometry.center)
    stack = []
    while True:
        if stack:
            prev = stack[-1]
            cands = [c for c in cands if c.inside > prev.inside and not (c.edges & prev.edges)]
        if not cands:
            return stack
        least = min(c.area for c in cands)
        best = [c for c in cands if c.area == least]
        if len(best) > 1:
            raise AssertionError("innermost circuit is not unique")
        stack.append(best[0])


def same_cycle(a, b) -> bool:
    """Equal as closed vertex lists up to rotation and direction."""
    return frozenset(EdgeIndex.between(u, w) for u, w in zip(a, a[1:])) == \
        frozenset(EdgeIndex.between(u, w) for u, w in zip(b, b[1:]))


# -- ordered dual paths ------------------------------------------------------

def self_avoiding_paths(nbrs, start, stop, allowed=None):
    """Self-avoiding paths from ``start`` ending at the first vertex satisfying ``stop``."""
    path = [start]
    seen = {start}

    def extend(u):
        for w in nbrs.get(u, ()):
            if w in seen or (allowed is not None and not allowed(u, w)):
                continue
            path.append(w)
            if stop(w):
                yield tuple(path)
            else:
                seen.add(w)
                yield from extend(w)
                seen.discard(w)
            path.pop()

    if stop(start):
        yield (start,)
        return
    yield from extend(start)


def first_closed_dual_path(cfg: Configuration, starts, ends) -> tuple[Face, ...] | None:
    """Least closed dual path under (length, lexicographic faces) by full enumeration."""
    nbrs = closed_dual_graph(cfg)
    ends = set(ends)
    best = None
    for s in sorted(starts):
        for path in self_avoiding_paths(nbrs, s, ends.__contains__):
            key = (len(path), path)
            if best is None or key < best:
                best = key
    return None if best is None else best[1]


def dual_ring(n: int, center: Vertex = (0, 0)) -> list[Face]:
    return [(a, b) for a in range(center[0] - n - 1, center[0] + n + 1)
            for b in range(center[1] - n - 1, center[1] + n + 1) if face_dist2((a, b), center) == 2 * n + 1]


def center_faces(center: Vertex = (0, 0)) -> list[Face]:
    cx, cy = center
    return [(cx - 1, cy - 1), (cx, cy - 1), (cx - 1, cy), (cx, cy)]


# -- counterclockwise-closest arm ---------------------------------------------

def _ring_param(pt, r: Fraction) -> Fraction:
    """Position along the square of half-side r, counterclockwise from (r, -r), in [0, 8r)."""
    x, y = pt
    if x == r and y > -r:
        return y + r
    if y == r:
        return 2 * r + (r - x)
    if x == -r:
        return 4 * r + (r - y)
    return 6 * r + (x + r)


def _ring_walk(a, b, r: Fraction):
    """Corners met walking counterclockwise along the square from a to b."""
    ta, tb = _ring_param(a, r), _ring_param(b, r)
    if tb < ta:
        tb += 8 * r
    corners = [(r, r), (-r, r), (-r, -r), (r, -r)]
    ts = [2 * r, 4 * r, 6 * r, 8 * r]
    out = []
    for k in range(8):
        t = ts[k % 4] + 8 * r * (k // 4)
        if ta < t < tb:
            out.append(corners[k % 4])
    return out, tb == ta


def sector_area(arm: tuple[Vertex, ...], dual_path: tuple[Face, ...], n: int) -> Fraction:
    """Area swept counterclockwise from the dual path to the arm (centre at the origin)."""
    r = Fraction(2 * n + 1, 2)
    half = Fraction(1, 2)
    d = [(a + half, b + half) for a, b in dual_path]
    end = arm[-1]
    out_pt = (end[0] * r / n, end[1] * r / n)
    walk, same = _ring_walk(d[-1], out_pt, r)
    loop = [(Fraction(0), Fraction(0))] + d + walk + [out_pt] + [tuple(map(Fraction, u)) for u in reversed(arm)]
    area = Fraction(sum(x0 * y1 - x1 * y0 for (x0, y0), (x1, y1) in zip(loop, loop[1:])), 2)
    if same and area < 0:
        area += (2 * r) ** 2
    return area


def ccw_closest_arm(cfg: Configuration, dual_path: tuple[Face, ...]) -> tuple[Vertex, ...] | None:
    """Open arm from the centre to the box boundary of least counterclockwise sector area from ``dual_path``.

    Arms stop at their first boundary vertex.  Raises if the least area is tied.
    """
    n = cfg.n
    nbrs = open_graph(cfg)
    best, tied = None, False
    for arm in self_avoiding_paths(nbrs, (0, 0), lambda u: linf(u) == n):
        area = sector_area(arm, dual_path, n)
        if best is None or area < best[0]:
            best, tied = (area, arm), False
        elif area == best[0]:
            tied = True
    if tied:
        raise AssertionError("area-minimizing arm is not unique")
    return None if best is None else best[1]


# -- shortcuts ---------------------------------------------------------------

def shortcut(cfg: Configuration, gamma: tuple[Vertex, ...], e: EdgeIndex, inner: int, outer: int):
    """Least (ratio, length, vertices) open detour around ``e`` using edges off gamma with
    L-inf distance from e_x in (inner, outer] for the far endpoint and <= outer for both.

    Returns (u_index, v_index, detour) or None.
    """
    steps = list(zip(gamma, gamma[1:]))
    t = next(k for k, (u, w) in enumerate(steps) if EdgeIndex.between(u, w) == e)
    on_gamma = {EdgeIndex.between(u, w) for u, w in steps}
    pos = {u: k for k, u in enumerate(gamma)}
    c = e.lower_left

    def usable(u, w):
        f = EdgeIndex.between(u, w)
        if f in on_gamma or not cfg.geometry.contains_edge(f) or not cfg.is_open(f):
            return False
        du, dw = linf(u, c), linf(w, c)
        return max(du, dw) <= outer and not (du <= inner and dw <= inner)

    nbrs = {}
    for f in cfg.geometry.edges():
        u, w = f.endpoints
        if usable(u, w):
            nbrs.setdefault(u, []).append(w)
            nbrs.setdefault(w, []).append(u)
    best = None
    for k in range(t + 1):
        u = gamma[k]
        if u not in nbrs:
            continue
        for path in _all_simple_paths(nbrs, u):
            v = path[-1]
            if pos.get(v, -1) > t:
                key = (Fraction(len(path) - 1, pos[v] - k), len(path) - 1, path)
                if best is None or key < best[0]:
                    best = (key, k, pos[v])
    if best is None:
        return None
    return best[1], best[2], best[0][2]


def _all_simple_paths(nbrs, start):
    path = [start]
    seen = {start}

    def extend(u):
        for w in nbrs.get(u, ()):
            if w in seen:
                continue
            path.append(w)
            seen.add(w)
            yield tuple(path)
            yield from extend(w)
            seen.discard(w)
            path.pop()

    yield from extend(start)


# -- arms across an annulus --------------------------------------------------

def _keep(pt, center, half_plane):
    if half_plane is None:
        return True
    normal = {"N": (0, 1), "S": (0, -1), "E": (1, 0), "W": (-1, 0)}[half_plane]
    return normal[0] * (pt[0] - center[0]) + normal[1] * (pt[1] - center[1]) <= 0


def open_crossings(cfg: Configuration, center: Vertex, inner: int, outer: int, half_plane=None):
    """Open paths from the L-inf sphere of radius ``inner`` to that of radius ``outer``,
    using edges of B(outer) not inside B(inner), with all other vertices strictly between."""
    def ok(u, w):
        f = EdgeIndex.between(u, w)
        return (linf(u, center) <= outer and linf(w, center) <= outer and cfg.is_open(f)
                and linf(w, center) > inner and _keep(w, center, half_plane))

    nbrs = {}
    for e in cfg.geometry.edges():
        u, w = e.endpoints
        nbrs.setdefault(u, []).append(w)
        nbrs.setdefault(w, []).append(u)
    starts = [u for u in nbrs if linf(u, center) == inner and _keep(u, center, half_plane)]
    out = []
    for s in sorted(starts):
        out.extend(self_avoiding_paths(nbrs, s, lambda w: linf(w, center) == outer, ok))
    return out


def closed_crossings(cfg: Configuration, center: Vertex, inner: int, outer: int, half_plane=None):
    """Closed dual paths from dual sphere inner+1/2 to outer+1/2 through duals of closed edges of B(outer) \\ B(inner)."""
    def in_annulus(e: EdgeIndex) -> bool:
        du, dw = (linf(u, center) for u in e.endpoints)
        return max(du, dw) <= outer and max(du, dw) > inner

    def centre_pt(f):
        return (2 * f[0] + 1 - 2 * center[0], 2 * f[1] + 1 - 2 * center[1])

    def ok(f, g):
        e = separating_edge(f, g)
        return (in_annulus(e) and cfg.geometry.contains_edge(e) and not cfg.is_open(e)
                and face_dist2(g, center) > 2 * inner + 1 and _keep(centre_pt(g), (0, 0), half_plane))

    faces = [(a, b) for a in range(center[0] - outer - 1, center[0] + outer + 1)
             for b in range(center[1] - outer - 1, center[1] + outer + 1)]
    fs = set(faces)
    nbrs = {f: [g for g in ((f[0] + 1, f[1]), (f[0] - 1, f[1]), (f[0], f[1] + 1), (f[0], f[1] - 1)) if g in fs]
            for f in faces}
    starts = [f for f in faces if face_dist2(f, center) == 2 * inner + 1 and _keep(centre_pt(f), (0, 0), half_plane)]
    out = []
    for s in sorted(starts):
        out.extend(self_avoiding_paths(nbrs, s, lambda g: face_dist2(g, center) == 2 * outer + 1, ok))
    return out


def max_disjoint_count(paths, limit: int) -> int:
    """Largest number (capped at ``limit``) of pairwise vertex-disjoint paths, by exhaustive packing over bitmasks."""
    ids = {}
    masks = []
    for p in paths:
        m = 0
        for u in p:
            m |= 1 << ids.setdefault(u, len(ids))
        masks.append(m)
    masks = sorted(set(masks))

    def pack(start, used, k):
        if k == limit:
            return k
        best = k
        for i in range(start, len(masks)):
            if not masks[i] & used:
                best = max(best, pack(i + 1, used | masks[i], k + 1))
                if best == limit:
                    break
        return best

    return pack(0, 0, 0)


def arm_event(cfg: Configuration, center: Vertex, inner: int, outer: int, n_open: int, n_closed: int,
              half_plane=None) -> bool:
    if n_open and max_disjoint_count(open_crossings(cfg, center, inner, outer, half_plane), n_open) < n_open:
        return False
    return not n_closed or max_disjoint_count(closed_crossings(cfg, center, inner, outer, half_plane), n_closed) >= n_closed


# -- exact three-arm probability ----------------------------------------------

def exact_pi3(inner: int, outer: int, p: Fraction = Fraction(1, 2)) -> Fraction:
    """P(two disjoint open and one closed crossing of B(inner, outer)) by branch and bound.

    Edges are fixed one at a time; a branch is settled as soon as the open
    count with every free edge closed reaches two and the closed crossing
    survives with every free edge open (the event then holds for all
    completions), or either bound already fails.
    """
    from . import _kernels as K
    from .connectivity import CLOSED, OPEN, annulus_graph
    from .lattice import AnnulusSpec, build_box

    geom = build_box(outer)
    ann = AnnulusSpec((0, 0), inner, outer)
    edges = [e for e in geom.edges() if max(linf(u) for u in e.endpoints) > inner]
    edges.sort(key=lambda e: (max(linf(u) for u in e.endpoints), e))

    def slots(color, state):
        out = []
        for e in edges:
            cfg = Configuration.constant(geom, not state).with_edge(e, state)
            adj = annulus_graph(cfg, ann, color)[0]
            out.append(np.nonzero(adj))
        return out

    o_slots, c_slots = slots(OPEN, True), slots(CLOSED, False)
    _, o_src, o_dst, _ = annulus_graph(Configuration.constant(geom, True), ann, OPEN)
    c_adj0, c_src, c_dst, _ = annulus_graph(Configuration.constant(geom, False), ann, CLOSED)
    o_empty = np.zeros(annulus_graph(Configuration.constant(geom, True), ann, OPEN)[0].shape, dtype=bool)
    c_empty = np.zeros(c_adj0.shape, dtype=bool)

    def graphs(assign, free_open):
        o_adj, c_adj = o_empty.copy(), c_empty.copy()
        for t in range(len(edges)):
            state = assign[t] if t < len(assign) else free_open
            if state:
                o_adj[o_slots[t]] = True
            else:
                c_adj[c_slots[t]] = True
        return o_adj, c_adj

    def two_open(adj):
        return K.max_disjoint_paths(adj, o_src, o_dst, 2)[0] >= 2

    def closed_arm(adj):
        return bool(K.reaches(adj, c_src, c_dst))

    q = 1 - p

    def visit(assign) -> Fraction:
        o_hi, c_lo = graphs(assign, True)
        o_lo, c_hi = graphs(assign, False)
        if not two_open(o_hi) or not closed_arm(c_hi):
            return Fraction(0)
        if two_open(o_lo) and closed_arm(c_lo):
            return Fraction(1)
        return p * visit(assign + [True]) + q * visit(assign + [False])

    return visit([])


# -- suites ------------------------------------------------------------------

@dataclass(frozen=True)
class SuiteResult:
    name: str
    cases: int
    mismatches: int
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.cases > 0 and self.mismatches == 0


def _configs(n: int, p: float, seeds):
    from .lattice import build_box, sample_configuration
    geom = build_box(n)
    for s in seeds:
        yield sample_configuration(geom, p, s)


def chemical_distance_suite(seeds=range(2000), radii=(1, 2, 3, 4), p: float = 0.5) -> SuiteResult:
    from .connectivity import NotConnected, chemical_distance as fast
    from .lattice import Configuration as Cfg, build_box

    cases = bad = 0
    configs = []
    geom1 = build_box(1)
    for bits in itertools.product((False, True), repeat=geom1.n_edges):
        configs.append(Cfg(geom1, np.array(bits)))
    for n in radii:
        configs.extend(_configs(n, p, seeds))
    first_bad = ""
    for cfg in configs:
        ref = chemical_distance(cfg)
        try:
            got = fast(cfg).length
        except NotConnected:
            got = None
        cases += 1
        if got != ref:
            bad += 1
            first_bad = first_bad or f"n={cfg.n} seed={cfg.seed}: {got} vs {ref}"
    return SuiteResult("chemical_distance", cases, bad, first_bad)


def circuit_suite(seeds=range(300), n: int = 3, probabilities=(0.5, 0.6, 0.7)) -> SuiteResult:
    from .circuits import build_circuit_stack, detect_C0

    cases = bad = 0
    first_bad = ""
    for p in probabilities:
        for cfg in _configs(n, p, seeds):
            ref = circuit_stack(cfg)
            stack = build_circuit_stack(cfg)
            has, witness = detect_C0(cfg)
            ok = stack.K == len(ref) and all(same_cycle(a.vertices, b.vertices) for a, b in zip(stack.circuits, ref))
            ok = ok and has == bool(ref) and (not has or same_cycle(witness.vertices, ref[0].vertices))
            cases += 1
            if not ok:
                bad += 1
                first_bad = first_bad or f"p={p} seed={cfg.seed}: K={stack.K} vs {len(ref)}"
    from .lattice import build_box
    all_open = Configuration.constant(build_box(2), True)
    ref = circuit_stack(all_open)
    stack = build_circuit_stack(all_open)
    cases += 1
    if not (stack.K == len(ref) == 2 and all(same_cycle(a.vertices, b.vertices) for a, b in zip(stack.circuits, ref))):
        bad += 1
        first_bad = first_bad or "all open n=2"
    return SuiteResult("circuit_stack", cases, bad, first_bad)


def dual_path_suite(seeds=range(500), n: int = 2, p: float = 0.5) -> SuiteResult:
    from .circuits import first_closed_dual_path as fast
    from .connectivity import NotConnected

    cases = bad = 0
    first_bad = ""
    for cfg in _configs(n, p, seeds):
        ref = first_closed_dual_path(cfg, center_faces(), dual_ring(n))
        try:
            got = fast(cfg, center_faces(), dual_ring(n)).vertices
        except NotConnected:
            got = None
        cases += 1
        if got != ref:
            bad += 1
            first_bad = first_bad or f"seed={cfg.seed}"
    return SuiteResult("first_closed_dual_path", cases, bad, first_bad)


def ccw_arm_suite(seeds=range(600), n: int = 3, p: float = 0.5) -> SuiteResult:
    from .connectivity import radial_connection
    from .gamma import build_gamma

    cases = bad = 0
    first_bad = ""
    for cfg in _configs(n, p, seeds):
        if not radial_connection(cfg):
            continue
        gd = build_gamma(cfg)
        if gd.case != "C0c":
            continue
        cert = gd.stack.certificate.vertices
        ref = ccw_closest_arm(cfg, cert)
        cases += 1
        if ref != gd.gamma.vertices:
            bad += 1
            first_bad = first_bad or f"seed={cfg.seed}"
    return SuiteResult("ccw_closest_arm", cases, bad, first_bad)


def shortcut_suite(seeds=range(150), n: int = 4, p: float = 0.6, epsilon: float = 0.5) -> SuiteResult:
    from .connectivity import radial_connection
    from .gamma import build_gamma
    from .shortcuts import annulus_fits, annulus_radii, find_shortcut

    cases = bad = 0
    first_bad = ""
    for cfg in _configs(n, p, seeds):
        if not radial_connection(cfg):
            continue
        gd = build_gamma(cfg)
        for e in gd.edges():
            for j in (0, 1):
                if not annulus_fits(cfg, e, j, epsilon):
                    continue
                inner, outer = annulus_radii(j, epsilon)
                ref = shortcut(cfg, gd.gamma.vertices, e, inner, outer)
                got = find_shortcut(cfg, gd, e, j, epsilon)
                got = None if got is None else (got.u_index, got.v_index, got.detour.vertices)
                cases += 1
                if got != ref:
                    bad += 1
                    first_bad = first_bad or f"seed={cfg.seed} e={tuple(e)} j={j}"
    return SuiteResult("find_shortcut", cases, bad, first_bad)


ARM_WORDS = ("O", "OO", "OOO", "C", "CC", "OC", "OOC", "OCC")


def arm_suite(seeds=range(300), inner: int = 1, outer: int = 3, probabilities=(0.4, 0.5, 0.6),
              half_planes=(None, "N", "E")) -> SuiteResult:
    from .arms import ArmEventSpec, ColorSequence, detect_arm_event
    from .lattice import AnnulusSpec

    cases = bad = 0
    first_bad = ""
    for p in probabilities:
        for cfg in _configs(outer, p, seeds):
            for hp in half_planes:
                for word in ARM_WORDS:
                    colors = ColorSequence(word)
                    spec = ArmEventSpec(AnnulusSpec((0, 0), inner, outer), colors, hp)
                    ref = arm_event(cfg, (0, 0), inner, outer, colors.n_open, colors.n_closed, hp)
                    cases += 1
                    if detect_arm_event(cfg, spec) != ref:
                        bad += 1
                        first_bad = first_bad or f"p={p} seed={cfg.seed} {word} {hp}"
    return SuiteResult("arm_events", cases, bad, first_bad)


SUITES = {
    "chemical_distance": chemical_distance_suite,
    "circuit_stack": circuit_suite,
    "first_closed_dual_path": dual_path_suite,
    "ccw_closest_arm": ccw_arm_suite,
    "find_shortcut": shortcut_suite,
    "arm_events": arm_suite,
}


def run_suites(names=None) -> list[SuiteResult]:
    return [SUITES[name]() for name in (names or SUITES)]
