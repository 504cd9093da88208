import itertools

import networkx as nx
import numpy as np
import pytest

from percolab.connectivity import (
    CLOSED,
    OPEN,
    NotConnected,
    Rect,
    chemical_distance,
    cluster_labels,
    crossing_exists,
    disjoint_arm_count,
    disjoint_arms,
    radial_connection,
)
from percolab.lattice import AnnulusSpec, Configuration, EdgeIndex, build_box, sample_configuration


def _config_from_edges(n, open_edges):
    cfg = Configuration.constant(build_box(n), False)
    for e in open_edges:
        cfg = cfg.with_edge(e, True)
    return cfg


def _nx_open_graph(cfg):
    g = nx.Graph()
    n = cfg.geometry.radius
    g.add_nodes_from(itertools.product(range(-n, n + 1), repeat=2))
    g.add_edges_from(e.endpoints for e in cfg.geometry.edges() if cfg.is_open(e))
    return g


def _path_edges(verts):
    return [EdgeIndex.between(a, b) for a, b in zip(verts, verts[1:])]


def test_radial_connection_trivial_cases():
    for n in (1, 3, 6):
        assert radial_connection(Configuration.constant(build_box(n), True))
        assert not radial_connection(Configuration.constant(build_box(n), False))


def test_single_spoke():
    spoke = [(0, 0), (0, 1), (1, 1), (1, 2)]
    cfg = _config_from_edges(2, _path_edges(spoke))
    assert radial_connection(cfg)
    assert chemical_distance(cfg).path.vertices == tuple(spoke)


def test_chemical_distance_all_open_is_n():
    for n in range(1, 9):
        w = chemical_distance(Configuration.constant(build_box(n), True))
        assert w.length == n
        assert w.path.vertices[0] == (0, 0)


def test_spiral():
    spiral = [(0, 0), (1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1), (2, -1),
              (2, 0), (2, 1), (2, 2), (1, 2), (0, 2), (-1, 2), (-2, 2), (-2, 1), (-2, 0), (-2, -1),
              (-2, -2), (-1, -2), (0, -2), (1, -2), (2, -2), (3, -2), (3, -3)]
    cfg = _config_from_edges(3, _path_edges(spiral))
    w = chemical_distance(cfg)
    # the spiral first meets the boundary at (3, -2)
    assert w.length == len(spiral) - 2
    assert w.path.vertices == tuple(spiral[:-1])


def test_chemical_distance_matches_networkx():
    for n in (2, 3, 5):
        for seed in range(150):
            cfg = sample_configuration(build_box(n), 0.6, seed)
            g = _nx_open_graph(cfg)
            ring = [u for u in g if max(abs(u[0]), abs(u[1])) == n]
            lengths = nx.single_source_shortest_path_length(g, (0, 0))
            best = min((lengths[u] for u in ring if u in lengths), default=None)
            if best is None:
                with pytest.raises(NotConnected):
                    chemical_distance(cfg)
                continue
            w = chemical_distance(cfg)
            assert w.length == best
            path = w.path.vertices
            assert all(g.has_edge(a, b) for a, b in zip(path, path[1:]))


def test_chemical_distance_monotone_under_opening():
    rng = np.random.default_rng(1)
    for seed in range(40):
        cfg = sample_configuration(build_box(5), 0.55, seed)
        if not radial_connection(cfg):
            continue
        before = chemical_distance(cfg).length
        for k in rng.choice(cfg.geometry.n_edges, 10, replace=False):
            e = cfg.geometry.edge_at(int(k))
            assert chemical_distance(cfg.with_edge(e, True)).length <= before
        assert before >= cfg.geometry.radius


def test_two_by_one_rectangle_crossing_is_exactly_half():
    # the (n+1) x n rectangle with n = 1: vertices [0, 2] x [0, 1], seven edges
    rect = Rect(0, 0, 2, 1)
    geom = build_box(2)
    edges = [e for e in geom.edges()
             if all(0 <= x <= 2 and 0 <= y <= 1 for x, y in e.endpoints)]
    assert len(edges) == 7
    hits = 0
    for bits in itertools.product((False, True), repeat=len(edges)):
        cfg = _config_from_edges(2, [e for e, b in zip(edges, bits) if b])
        hits += crossing_exists(cfg, rect, OPEN, "horizontal")
    assert hits * 2 == 2 ** len(edges)


def test_crossing_trivial_cases():
    cfg = Configuration.constant(build_box(4), True)
    assert crossing_exists(cfg, Rect(-3, -2, 3, 2), OPEN, "horizontal")
    assert not crossing_exists(cfg, Rect(-3, -2, 3, 2), CLOSED, "vertical")
    with pytest.raises(ValueError):
        crossing_exists(cfg, Rect(-5, 0, 2, 1))
    with pytest.raises(ValueError):
        crossing_exists(cfg, Rect(0, 0, 0, 1))


@pytest.mark.parametrize("rect", [Rect(0, 0, 1, 0), Rect(0, 0, 2, 1), Rect(-2, -1, 1, 0), Rect(-1, -1, 1, 1)])
def test_crossing_duality_exhaustive(rect):
    geom = build_box(2)
    x0, y0, x1, y1 = rect
    edges = [e for e in geom.edges() if all(x0 <= x <= x1 and y0 <= y <= y1 for x, y in e.endpoints)]
    for bits in itertools.product((False, True), repeat=len(edges)):
        cfg = _config_from_edges(2, [e for e, b in zip(edges, bits) if b])
        # exactly one of the two crossings
        assert crossing_exists(cfg, rect, OPEN, "horizontal") != crossing_exists(cfg, rect, CLOSED, "vertical")


def test_cluster_labels_agree_with_networkx():
    for seed in range(20):
        cfg = sample_configuration(build_box(4), 0.5, seed)
        g = _nx_open_graph(cfg)
        lab = cluster_labels(cfg)
        for comp in nx.connected_components(g):
            comp = sorted(comp)
            assert all(lab.same_primal(comp[0], u) for u in comp)
        other = [u for u in g if not nx.has_path(g, (0, 0), u)]
        assert not any(lab.same_primal((0, 0), u) for u in other)


def test_arm_counts_trivial_cases():
    cfg = Configuration.constant(build_box(6), True)
    ann = AnnulusSpec((0, 0), 2, 6)
    assert disjoint_arm_count(cfg, ann, OPEN) >= 4
    assert disjoint_arm_count(cfg, ann, CLOSED) == 0
    closed = Configuration.constant(build_box(6), False)
    assert disjoint_arm_count(closed, ann, OPEN) == 0
    assert disjoint_arm_count(closed, ann, CLOSED) >= 4


def _menger_count(cfg, ann):
    g = _nx_open_graph(cfg)
    c, n, N = ann.center, ann.inner, ann.outer
    keep = [u for u in g if max(abs(u[0] - c[0]), abs(u[1] - c[1])) >= n]
    sub = g.subgraph(keep).copy()
    # drop edges inside the inner ring
    sub.remove_edges_from([(a, b) for a, b in sub.edges
                           if max(abs(a[0] - c[0]), abs(a[1] - c[1]), abs(b[0] - c[0]), abs(b[1] - c[1])) <= n])
    inner = [u for u in sub if max(abs(u[0] - c[0]), abs(u[1] - c[1])) == n]
    outer = [u for u in sub if max(abs(u[0] - c[0]), abs(u[1] - c[1])) == N]
    sub.add_nodes_from(["s", "t"])
    sub.add_edges_from(("s", u) for u in inner)
    sub.add_edges_from((u, "t") for u in outer)
    return nx.node_connectivity(sub, "s", "t") if sub.degree("s") and sub.degree("t") else 0


def test_open_arm_count_matches_min_cut():
    ann = AnnulusSpec((0, 0), 1, 4)
    for seed in range(60):
        cfg = sample_configuration(build_box(4), 0.6, seed)
        assert disjoint_arm_count(cfg, ann, OPEN) == _menger_count(cfg, ann)


def test_disjoint_arms_are_valid_paths():
    ann = AnnulusSpec((0, 0), 1, 5)
    for seed in range(30):
        cfg = sample_configuration(build_box(5), 0.55, seed)
        for color in (OPEN, CLOSED):
            arms = disjoint_arms(cfg, ann, color)
            assert len(arms) == disjoint_arm_count(cfg, ann, color)
            seen = set()
            for arm in arms:
                assert not seen & set(arm.vertices)
                seen |= set(arm.vertices)
                for a, b in zip(arm.vertices, arm.vertices[1:]):
                    if color == OPEN:
                        assert cfg.is_open(EdgeIndex.between(a, b))
