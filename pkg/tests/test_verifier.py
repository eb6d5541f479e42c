"""Verifier tests: stretch, lightness, forced edges, lower bounds, reports.

Forced-edge expectations were derived by brute force over all pairs of the
16-leaf instances (120 pairs each).
"""

import math
from fractions import Fraction

import pytest

from spanner_lab import (
    SpannerGraph,
    UniformMetric,
    build_hst,
    certify_spanner,
    forced_edge_count,
    forced_edge_weight,
    forced_edges,
    lightness,
    min_detour_matrix,
    mst,
    net_tree_spanner,
    size_lower_bound,
    stretch,
    weight_lower_bound,
)


def complete_graph(m):
    return SpannerGraph.from_pairs(
        m, [(i, j) for i in range(m.n) for j in range(i + 1, m.n)]
    )


def brute_forced_pairs(tree, eps):
    threshold = Fraction(2) / Fraction(eps)
    return {
        (u, v)
        for u in range(tree.n)
        for v in range(u + 1, tree.n)
        if tree.distance(u, v) < threshold
    }


# ---------------------------------------------------------------------------
# stretch
# ---------------------------------------------------------------------------


def test_stretch_complete_graph_is_one():
    m = build_hst(2, 2).metric()
    ratio, _ = stretch(m, complete_graph(m))
    assert ratio == 1


def test_stretch_mst_path_on_hst():
    m = build_hst(1, 2).metric()
    g = SpannerGraph.from_pairs(m, [(0, 1), (1, 2), (2, 3)])
    ratio, pair = stretch(m, g)
    assert ratio == 2  # d_G(0,3) = 2+4+2 = 8 over d_X = 4
    assert pair == (0, 3)


def test_stretch_missing_short_edge():
    # complete graph minus one distance-2 edge: detour costs at least d+2
    m = build_hst(1, 2).metric()
    pairs = [(i, j) for i in range(4) for j in range(i + 1, 4) if (i, j) != (0, 1)]
    ratio, pair = stretch(m, SpannerGraph.from_pairs(m, pairs))
    assert pair == (0, 1)
    assert ratio >= 2  # (d_X + 2) / d_X with d_X = 2


def test_stretch_disconnected_reports_inf():
    m = UniformMetric(4)
    g = SpannerGraph.from_pairs(m, [(0, 1)])
    ratio, pair = stretch(m, g)
    assert math.isinf(ratio)
    assert pair is not None


def test_stretch_at_least_one():
    m = build_hst(1, 3).metric()
    g = net_tree_spanner(m, Fraction(1, 2))
    ratio, _ = stretch(m, g)
    assert ratio >= 1


# ---------------------------------------------------------------------------
# lightness
# ---------------------------------------------------------------------------


def test_lightness_of_mst_is_one():
    m = build_hst(1, 3).metric()
    tree_graph, _ = mst(m)
    assert lightness(m, tree_graph) == 1


def test_lightness_uniform_complete():
    assert lightness(UniformMetric(4), complete_graph(UniformMetric(4))) == 2


def test_lightness_hst_complete():
    m = build_hst(1, 2).metric()
    assert lightness(m, complete_graph(m)) == Fraction(5, 2)  # 20 / 8


# ---------------------------------------------------------------------------
# forced edges
# ---------------------------------------------------------------------------


def test_forced_only_sibling_pairs_as_eps_near_one():
    tree = build_hst(1, 3)
    pairs = set(forced_edges(tree, Fraction(99, 100)))
    assert pairs == {(2 * i, 2 * i + 1) for i in range(4)}


def test_forced_d1_n16_eps_quarter():
    tree = build_hst(1, 4)
    pairs = set(forced_edges(tree, Fraction(1, 4)))
    assert pairs == brute_forced_pairs(tree, Fraction(1, 4))
    assert len(pairs) == 24  # four 4-leaf cliques


def test_forced_d2_n16_eps_half():
    tree = build_hst(2, 2)
    pairs = set(forced_edges(tree, Fraction(1, 2)))
    assert pairs == brute_forced_pairs(tree, Fraction(1, 2))
    assert len(pairs) == 24  # the 24 distance-2 pairs


def test_forced_boundary_is_strict():
    # 2/eps = 4 exactly: distance-4 pairs are NOT forced
    tree = build_hst(1, 2)
    pairs = set(forced_edges(tree, Fraction(1, 2)))
    assert pairs == {(0, 1), (2, 3)}


@pytest.mark.parametrize(
    "d,h,eps",
    [(1, 4, Fraction(1, 4)), (2, 2, Fraction(1, 2)), (2, 3, Fraction(1, 4)),
     (3, 2, Fraction(1, 2)), (1, 6, Fraction(1, 8))],
)
def test_forced_matches_brute_force(d, h, eps):
    tree = build_hst(d, h)
    assert set(forced_edges(tree, eps)) == brute_forced_pairs(tree, eps)
    assert forced_edge_count(tree, eps) == len(brute_forced_pairs(tree, eps))
    weight = sum(tree.distance(u, v) for u, v in brute_forced_pairs(tree, eps))
    assert forced_edge_weight(tree, eps) == weight


def test_forced_rejects_eps_outside_unit_interval():
    tree = build_hst(1, 2)
    for eps in (0, 1, Fraction(5, 4)):
        with pytest.raises(ValueError):
            forced_edges(tree, eps)


# ---------------------------------------------------------------------------
# size and weight lower bounds
# ---------------------------------------------------------------------------


def test_size_bound_d1_n16():
    report = size_lower_bound(build_hst(1, 4), Fraction(1, 4))
    assert report.forced_count == 24
    assert report.bound == 24  # 16 * (4 - 1) / 2
    assert report.passed
    assert report.d_max == 4 and report.i_max == 2
    assert Fraction(1, Fraction(1, 4)) <= report.d_max < 2 / Fraction(1, 4)


def test_size_bound_d2_n16():
    report = size_lower_bound(build_hst(2, 2), Fraction(1, 2))
    assert report.forced_count == 24
    assert report.bound == 24
    assert report.passed


def test_size_bound_eps_near_one_trivial():
    report = size_lower_bound(build_hst(1, 3), Fraction(99, 100))
    assert report.bound < 1
    assert report.passed


def test_size_bound_instance_too_small():
    with pytest.raises(ValueError, match="instance too small"):
        size_lower_bound(build_hst(1, 2), Fraction(1, 8))


def test_weight_bound_d1_n16():
    report = weight_lower_bound(build_hst(1, 4), Fraction(1, 4))
    assert report.forced_weight == 80  # 8 sibling pairs * 2 + 16 pairs * 4
    assert report.bound == 64  # 16 * 16 / 4
    assert report.passed
    assert report.per_point_bound == 8


def test_weight_bound_d2_n16():
    report = weight_lower_bound(build_hst(2, 2), Fraction(1, 2))
    assert report.forced_weight == 48  # 24 pairs at distance 2
    assert report.bound == 32
    assert report.passed


def test_weight_bound_eps_near_one():
    tree = build_hst(1, 3)
    report = weight_lower_bound(tree, Fraction(9, 10))
    assert report.forced_weight == 2 * tree.n // 2
    assert report.passed


# ---------------------------------------------------------------------------
# detour matrix (edge-removal test)
# ---------------------------------------------------------------------------


def test_min_detour_exceeds_distance_plus_two_on_hst():
    for d, h in [(1, 3), (2, 2)]:
        m = build_hst(d, h).metric()
        detour = min_detour_matrix(m)
        for u in range(m.n):
            for v in range(m.n):
                if u != v:
                    assert detour[u][v] >= m.dist(u, v) + 2


def test_min_detour_exact_small_values():
    m = build_hst(1, 2).metric()
    detour = min_detour_matrix(m)
    assert detour[0][1] == 8  # via 2 or 3: 4 + 4
    assert detour[0][2] == 6  # via 1: 2 + 4


# ---------------------------------------------------------------------------
# certification
# ---------------------------------------------------------------------------


def test_certify_net_tree_on_hst_passes():
    m = build_hst(1, 3).metric()
    g = net_tree_spanner(m, Fraction(1, 2))
    report = certify_spanner(m, g, Fraction(1, 2))
    assert report.passed
    assert report.forced_compliance is True
    assert report.stretch_ratio <= Fraction(3, 2)


def test_certify_mst_fails_stretch():
    m = build_hst(1, 2).metric()
    tree_graph, _ = mst(m)
    report = certify_spanner(m, tree_graph, Fraction(1, 2))
    assert not report.passed
    assert report.stretch_ratio >= 2
    assert report.forced_compliance is False


def test_certify_complete_graph():
    m = build_hst(2, 2).metric()
    report = certify_spanner(m, complete_graph(m), Fraction(1, 2))
    assert report.passed
    assert report.stretch_ratio == 1
    assert report.lightness == Fraction(2 * 48 + 4 * (120 - 48), 36) / 1


def test_certify_propagates_small_instance_error():
    m = build_hst(1, 2).metric()
    with pytest.raises(ValueError, match="instance too small"):
        certify_spanner(m, complete_graph(m), Fraction(1, 8))


def test_certify_non_hst_metric_skips_forced():
    m = UniformMetric(5)
    report = certify_spanner(m, complete_graph(m), Fraction(1, 2))
    assert report.forced_compliance is None
    assert report.passed
