import math
from fractions import Fraction

import pytest

from percolab import oracles
from percolab.connectivity import chemical_distance
from percolab.gamma import build_gamma
from percolab.lattice import Configuration, EdgeIndex, build_box
from percolab.montecarlo import conditioned_sample
from percolab.shortcuts import (
    AnnulusOutOfBounds,
    annulus_radii,
    best_interval_set,
    detect_Ej,
    find_shortcut,
    scale_gap,
    shortcut_candidates,
    shortcut_scales,
    splice,
)

N = 16


def _open_path(cfg, verts):
    for a, b in zip(verts, verts[1:]):
        cfg = cfg.with_edge(EdgeIndex.between(a, b), True)
    return cfg


def _line_with_bump(side):
    """The x-axis from 0 to N plus a 3-high detour between x = 5 and x = 11 above (+1) or below (-1)."""
    cfg = _open_path(Configuration.constant(build_box(N), False), [(x, 0) for x in range(N + 1)])
    bump = [(5, 0), (5, side), (5, 2 * side), (5, 3 * side)] + [(x, 3 * side) for x in range(6, 12)]
    bump += [(11, 2 * side), (11, side), (11, 0)]
    return _open_path(cfg, bump)


def test_scale_helpers():
    assert scale_gap(0.25) == 2 and scale_gap(0.5) == 1 and scale_gap(0.3) == 1
    with pytest.raises(ValueError):
        scale_gap(1.0)
    assert annulus_radii(2, 0.25) == (4, 16)
    assert list(shortcut_scales(128, 0.9)) == [1]
    assert list(shortcut_scales(16, 0.5)) == []


def test_parallel_line_detour():
    cfg = _line_with_bump(1)
    gd = build_gamma(cfg)
    assert gd.gamma.vertices == tuple((x, 0) for x in range(N + 1))
    cand = find_shortcut(cfg, gd, EdgeIndex(8, 0, True), 1, 0.5)
    assert (cand.u_index, cand.v_index) == (5, 11)
    # six steps along the line against 3 + 6 + 3 around the bump
    assert cand.detour.length == 12 and cand.tau_length == 6
    assert cand.ratio == Fraction(2)
    assert cand.savings == -6
    assert not set(cand.detour.edges()) & set(gd.edges())


def test_nu_sweep_threshold():
    cfg = _line_with_bump(1)
    gd = build_gamma(cfg)
    e = EdgeIndex(8, 0, True)
    for nu in (0.5, 1.0, 1.99):
        assert not detect_Ej(cfg, gd, e, 1, 0.5, nu)
    for nu in (2.0, 2.5, math.inf):
        assert detect_Ej(cfg, gd, e, 1, 0.5, nu)
    assert not detect_Ej(cfg, gd, e, 1, 0.5, 0.0)


def test_no_open_edges_off_gamma():
    cfg = _open_path(Configuration.constant(build_box(N), False), [(x, 0) for x in range(N + 1)])
    gd = build_gamma(cfg)
    assert find_shortcut(cfg, gd, EdgeIndex(8, 0, True), 1, 0.5) is None
    assert not detect_Ej(cfg, gd, EdgeIndex(8, 0, True), 1, 0.5, math.inf)
    sp = splice(cfg, gd, 0.5, math.inf, delta=2.0)
    assert sp.s == gd.gamma and sp.detours == [] and sp.savings == 0


def test_annulus_must_fit():
    cfg = _line_with_bump(1)
    gd = build_gamma(cfg)
    with pytest.raises(AnnulusOutOfBounds):
        find_shortcut(cfg, gd, EdgeIndex(14, 0, True), 1, 0.5)


def test_splice_takes_the_short_way():
    cfg = _line_with_bump(-1)
    gd = build_gamma(cfg)
    # gamma follows the bump, so the axis is the shortcut
    assert gd.gamma.length == 22
    cand = find_shortcut(cfg, gd, EdgeIndex(8, -3, True), 1, 0.5)
    assert cand.ratio == Fraction(1, 2)
    sp = splice(cfg, gd, 0.5, 0.9, delta=2.0)
    assert sp.s.vertices == tuple((x, 0) for x in range(N + 1))
    assert sp.savings == 6 and len(sp.detours) == 1
    assert chemical_distance(cfg).length <= sp.s.length <= gd.gamma.length
    # a ratio cap below one half rules it out
    assert splice(cfg, gd, 0.5, 0.4, delta=2.0).s == gd.gamma


def test_interval_scheduling():
    assert best_interval_set([(0, 10, 10), (5, 12, 6)]) == [0]
    assert best_interval_set([(0, 10, 6), (5, 12, 10)]) == [1]
    # intervals sharing an endpoint conflict
    assert best_interval_set([(0, 5, 3), (5, 9, 3)]) in ([0], [1])
    assert best_interval_set([(0, 4, 3), (5, 9, 3)]) == [0, 1]
    assert best_interval_set([(0, 9, 5), (0, 4, 3), (5, 9, 3)]) == [1, 2]
    assert best_interval_set([]) == []


def _conditioned_gammas(n, count, p=0.5, seed=3):
    for index in range(count):
        cfg = conditioned_sample(n, p, seed, index)
        if cfg is not None:
            yield cfg, build_gamma(cfg)


def test_chain_and_detour_properties():
    checked = 0
    for cfg, gd in _conditioned_gammas(32, 30):
        sp = splice(cfg, gd, 0.25, 0.5)
        chem = chemical_distance(cfg).length
        assert chem <= sp.s.length <= gd.gamma.length
        assert sp.s.is_open_in(cfg) and sp.s.is_self_avoiding()
        pos = {e: k for k, e in enumerate(gd.edges())}
        gamma_edges = set(gd.edges())
        used = set()
        for c in sp.detours:
            assert c.u_index <= pos[c.edge] < c.v_index
            assert c.detour.length <= 0.5 * c.tau_length
            assert not set(c.detour.edges()) & gamma_edges
            assert not set(c.detour.vertices) & used
            used |= set(c.detour.vertices)
        checked += 1
    assert checked > 5


def test_shortcut_existence_monotone_in_nu():
    nus = (0.25, 0.5, 0.75, 1.0, 2.0, math.inf)
    for cfg, gd in _conditioned_gammas(32, 8):
        j = shortcut_scales(cfg.n, 0.9)[0]
        edges = [e for e in gd.edges() if abs(e.x) + 8 <= 32 and abs(e.y) + 8 <= 32][:40]
        counts = [sum(detect_Ej(cfg, gd, e, j, 0.25, nu) for e in edges) for nu in nus]
        assert counts == sorted(counts)
        assert len(shortcut_candidates(cfg, gd, 0.25, 0.5, 0.9)) <= len(shortcut_candidates(cfg, gd, 0.25, 1.0, 0.9))


def test_matches_brute_force_on_small_box():
    res = oracles.shortcut_suite(seeds=range(40))
    assert res.cases > 0
    assert res.passed, res.detail
