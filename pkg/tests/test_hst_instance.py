"""Lower-bound instance tests: distances, path census, covers, line of copies.

The independent oracle for LCA heights walks ancestor blocks by repeated
integer division, avoiding the bit trick used by the implementation; path
weights are summed directly over consecutive leaves.
"""

from fractions import Fraction

import pytest

from spanner_lab import (
    build_hst,
    build_line_of_copies,
    doubling_cover_witness,
    edge_weight_census,
    hamiltonian_path_weight,
    hst_distance,
    mst,
    verify_cover,
    verify_metric_axioms,
    verify_ultrametric,
)


def lca_height_by_division(d, u, v):
    b = 2 ** d
    i = 0
    while u != v:
        u //= b
        v //= b
        i += 1
    return i


def distance_by_division(d, u, v):
    i = lca_height_by_division(d, u, v)
    return 0 if i == 0 else 2 ** i


def path_weight_by_summation(t):
    return sum(t.distance(j, j + 1) for j in range(t.n - 1))


SMALL_TREES = [(1, 1), (1, 2), (1, 3), (1, 4), (2, 1), (2, 2), (3, 1), (4, 1)]


# ---------------------------------------------------------------------------
# construction and distances
# ---------------------------------------------------------------------------


def test_build_rejects_bad_parameters():
    for d, h in [(0, 1), (1, 0), (-1, 2)]:
        with pytest.raises(ValueError):
            build_hst(d, h)


def test_two_leaf_tree():
    t = build_hst(1, 1)
    assert t.n == 2
    assert t.distance(0, 1) == 2


def test_d2_h1_all_pairs_at_two():
    t = build_hst(2, 1)
    assert t.n == 4
    assert all(t.distance(u, v) == 2 for u in range(4) for v in range(u + 1, 4))


def test_d1_h2_distances():
    t = build_hst(1, 2)
    assert t.distance(0, 1) == 2
    assert t.distance(0, 2) == 4
    assert t.distance(0, 3) == 4


def test_distance_zero_on_equal_indices():
    t = build_hst(2, 2)
    assert all(t.distance(u, u) == 0 for u in range(t.n))


def test_d2_h2_root_distance():
    t = build_hst(2, 2)
    assert hst_distance(t, 0, 15) == 4


def test_distance_index_out_of_range():
    t = build_hst(1, 2)
    with pytest.raises(IndexError):
        t.distance(0, 4)


@pytest.mark.parametrize("d,h", SMALL_TREES)
def test_distances_match_division_oracle(d, h):
    t = build_hst(d, h)
    for u in range(t.n):
        for v in range(t.n):
            assert t.distance(u, v) == distance_by_division(d, u, v)


@pytest.mark.parametrize("d,h", SMALL_TREES)
def test_min_max_distances(d, h):
    t = build_hst(d, h)
    m = t.metric()
    pairs = [(u, v) for u in range(t.n) for v in range(u + 1, t.n)]
    assert min(m.dist(u, v) for u, v in pairs) == 2
    assert max(m.dist(u, v) for u, v in pairs) == 2 ** h  # n^(1/d)


def test_labels():
    t = build_hst(2, 3)
    assert t.label(0) == 0
    assert [t.label(i) for i in range(1, 4)] == [2, 4, 8]


def test_dist_row_matches_scalar():
    t = build_hst(3, 2)
    m = t.metric()
    for u in (0, 17, t.n - 1):
        row = m.dist_row(u)
        assert [int(x) for x in row] == [m.dist(u, v) for v in range(t.n)]


# ---------------------------------------------------------------------------
# Hamiltonian path weight and census
# ---------------------------------------------------------------------------


def test_path_weight_d1_n4():
    assert hamiltonian_path_weight(build_hst(1, 2)) == 8  # n log2 n


def test_path_weight_d2_n16():
    t = build_hst(2, 2)
    assert hamiltonian_path_weight(t) == 36
    assert hamiltonian_path_weight(t) <= 4 * t.n


@pytest.mark.parametrize("d,h", SMALL_TREES)
def test_path_weight_matches_direct_summation(d, h):
    t = build_hst(d, h)
    assert hamiltonian_path_weight(t) == path_weight_by_summation(t)


def all_trees_up_to(limit):
    out = []
    for d in range(1, 5):
        for h in range(1, 6):
            if 2 ** (d * h) <= limit:
                out.append((d, h))
    return out


@pytest.mark.parametrize("d,h", all_trees_up_to(4096))
def test_path_weight_closed_form(d, h):
    t = build_hst(d, h)
    n = t.n
    closed = (2 ** d - 1) * 2 ** h * sum((2 ** (d - 1)) ** i for i in range(h))
    assert hamiltonian_path_weight(t) == closed


def test_census_d2_n16():
    census = edge_weight_census(build_hst(2, 2))
    assert census[4] == 3
    assert census[2] == 12


def test_census_d1_n4():
    assert edge_weight_census(build_hst(1, 2)) == {4: 1, 2: 2}


@pytest.mark.parametrize("d,h", all_trees_up_to(4096))
def test_census_formula_and_total(d, h):
    t = build_hst(d, h)
    census = edge_weight_census(t)
    assert sum(census.values()) == t.n - 1
    for i in range(h):
        weight = 2 ** h // 2 ** i  # n^(1/d) / 2^i
        assert census[weight] == 2 ** (d * i) * (2 ** d - 1)


def test_census_matches_walked_path():
    t = build_hst(2, 2)
    walked = {}
    for j in range(t.n - 1):
        w = t.distance(j, j + 1)
        walked[w] = walked.get(w, 0) + 1
    assert walked == edge_weight_census(t)


@pytest.mark.parametrize("d,h", SMALL_TREES)
def test_mst_at_most_path_weight(d, h):
    t = build_hst(d, h)
    _, w = mst(t.metric())
    assert w <= hamiltonian_path_weight(t)


# ---------------------------------------------------------------------------
# cover witnesses
# ---------------------------------------------------------------------------


def test_cover_tiny_radius_is_singleton():
    t = build_hst(1, 2)
    balls = doubling_cover_witness(t, 3, 1)
    assert balls == [(3, Fraction(1, 2))]
    assert verify_cover(t.metric(), 3, 1, balls)


def test_cover_d1_r2_two_centers():
    t = build_hst(1, 2)
    balls = doubling_cover_witness(t, 0, 2)
    assert len(balls) == 2
    assert verify_cover(t.metric(), 0, 2, balls)
    centers = {c for c, _ in balls}
    assert centers == {0, 1}  # one leaf in each child of the height-1 ancestor


def test_cover_d2_r4_covers_everything():
    t = build_hst(2, 2)
    balls = doubling_cover_witness(t, 0, 4)
    assert len(balls) == 4
    assert verify_cover(t.metric(), 0, 4, balls)


def test_cover_all_radii_membership():
    t = build_hst(2, 2)
    m = t.metric()
    for u in range(t.n):
        for r in (1, 2, 3, 4, 7, 8):
            balls = doubling_cover_witness(t, u, r)
            assert len(balls) <= t.branching
            assert verify_cover(m, u, r, balls)


def test_cover_rejects_nonpositive_radius():
    with pytest.raises(ValueError):
        doubling_cover_witness(build_hst(1, 1), 0, 0)


# ---------------------------------------------------------------------------
# line of copies
# ---------------------------------------------------------------------------


def test_line_degenerates_to_single_copy():
    lc = build_line_of_copies(Fraction(1, 2), 4)
    assert lc.copies == 1
    assert lc.n_prime == 4
    t = build_hst(1, 2)
    assert all(
        lc.dist(u, v) == t.distance(u, v) for u in range(4) for v in range(4)
    )


def test_line_cross_copy_distance():
    lc = build_line_of_copies(Fraction(1, 4), 16)
    assert lc.n_prime == 8
    assert lc.dist(0, 8) == 16
    assert lc.dist(3, 12) == 16


def test_line_metric_axioms():
    lc = build_line_of_copies(Fraction(1, 4), 32)
    assert verify_metric_axioms(lc) is None


def test_line_is_not_ultrametric_once_three_copies_exist():
    lc = build_line_of_copies(Fraction(1, 4), 24)
    assert lc.copies == 3
    assert verify_ultrametric(lc) is not None


def test_line_isolation_inequality():
    # spanner paths between same-copy points cannot leave the copy
    eps = Fraction(1, 4)
    lc = build_line_of_copies(eps, 16)
    for u in range(8):
        for v in range(u + 1, 8):
            duv = lc.dist(u, v)
            for w in range(8, 16):
                assert lc.dist(u, w) + lc.dist(w, v) > (1 + eps) * duv


def test_line_rejects_bad_parameters():
    with pytest.raises(ValueError):
        build_line_of_copies(Fraction(3, 2), 16)
    with pytest.raises(ValueError):
        build_line_of_copies(Fraction(1, 4), 12)  # not a multiple of n' = 8


def test_line_dist_row_matches_scalar():
    lc = build_line_of_copies(Fraction(1, 4), 24)
    for u in (0, 7, 13, 23):
        row = lc.dist_row(u)
        assert [int(x) for x in row] == [lc.dist(u, v) for v in range(lc.n)]
