import itertools
import math

import numpy as np
import pytest

from signrank import (
    ProjectiveSpace,
    SizeLimitError,
    default_line_orders,
    disjointness,
    grid_hyperplane,
    hamming_ball,
    heavy_dominant_free_random,
    heavy_dominant_free_random_logged,
    interval_class,
    is_maximum_class,
    line_subset_random,
    planted_line_orders,
    projective_incidence,
    regularity,
    signed_identity,
    to_boolean,
    vc_dimension,
)


class ArrayStubRng:
    """Duck-typed generator whose random() returns a fixed fill value."""

    def __init__(self, value: float):
        self.value = value

    def random(self, size=None):
        return np.full(size, self.value)


def brute_heavy_dominant_present(B: np.ndarray) -> bool:
    """Independent exhaustive check for a dominated 5x4 pattern (the all-ones
    row plus the four weight-3 rows) using direct assignment search."""
    n = B.shape[0]
    patterns = [(1, 1, 1, 1), (0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 0, 1), (1, 1, 1, 0)]
    for cols in itertools.combinations(range(n), 4):
        sub = B[:, cols]
        dominating = [
            [r for r in range(n) if all(sub[r][i] >= p[i] for i in range(4))]
            for p in patterns
        ]
        if any(len(c) == 0 for c in dominating):
            continue
        pool = sorted(set(itertools.chain.from_iterable(dominating)))
        if len(pool) < 5:
            continue
        for choice in itertools.permutations(pool, 5):
            if all(choice[i] in dominating[i] for i in range(5)):
                return True
    return False


def test_signed_identity():
    S = signed_identity(4)
    assert (np.diag(S.entries) == 1).all()
    off = S.entries[~np.eye(4, dtype=bool)]
    assert (off == -1).all()
    assert signed_identity(1).row_tuples() == [(1,)]
    with pytest.raises(ValueError):
        signed_identity(0)


def test_disjointness():
    D = disjointness(2)
    assert D.shape == (4, 4)
    assert D.row_tuples()[0] == (-1, -1, -1, -1)  # empty set meets nothing
    D1 = disjointness(1)
    assert D1.row_tuples() == [(-1, -1), (-1, 1)]


def test_projective_space_counts():
    for p, d in ((2, 2), (3, 2), (5, 2), (2, 3)):
        space = ProjectiveSpace.build(p, d)
        assert space.n_points == (p ** (d + 1) - 1) // (p - 1)
    with pytest.raises(ValueError):
        ProjectiveSpace.build(4, 2)
    with pytest.raises(ValueError):
        ProjectiveSpace.build(3, 1)


def test_projective_incidence_structure():
    A = projective_incidence(3, 2)
    assert A.shape == (13, 13)
    B = to_boolean(A)
    assert regularity(B).degree == 4
    # two points share exactly one line: B B^T = 3 I + J in exact integers
    gram = B.entries.astype(np.int64) @ B.entries.astype(np.int64).T
    expected = 3 * np.eye(13, dtype=np.int64) + 1
    assert (gram == expected).all()

    fano = projective_incidence(2, 2)
    assert fano.shape == (7, 7)
    assert regularity(to_boolean(fano)).degree == 3


def test_projective_incidence_higher_dim_gram():
    A = projective_incidence(2, 3)  # 15 points, plane degree 7
    B = to_boolean(A)
    n = 15
    assert regularity(B).degree == 7
    gram = B.entries.astype(np.int64) @ B.entries.astype(np.int64).T
    expected = 4 * np.eye(n, dtype=np.int64) + 3  # p^(d-1) I + (p+1) J
    assert (gram == expected).all()


def test_hamming_ball():
    ball = hamming_ball(5, 1)
    assert ball.n_rows == 6
    weights = (ball.matrix.entries == 1).sum(axis=1)
    assert weights.max() <= 1
    assert is_maximum_class(ball, 1)
    assert vc_dimension(ball.matrix) == 1
    assert hamming_ball(3, 3).n_rows == 8
    assert is_maximum_class(hamming_ball(4, 2), 2)
    with pytest.raises(ValueError):
        hamming_ball(3, 4)


def test_grid_hyperplane():
    G = grid_hyperplane(3, 2)
    assert G.shape == (9, 4)
    assert vc_dimension(G) == 2
    # independent entry check against the defining predicate
    points = list(itertools.product(range(1, 4), repeat=2))
    for r, pt in enumerate(points):
        c = 0
        for j in range(2):
            for i in range(1, 3):
                expected = 1 if pt[j] > i + 0.5 else -1
                assert G.entries[r, c] == expected
                c += 1
    with pytest.raises(ValueError):
        grid_hyperplane(1, 2)
    with pytest.raises(ValueError):
        grid_hyperplane(3, 0)


def test_interval_class_sizes_and_maximality():
    for p in (2, 3):
        C = interval_class(p)
        n = p * p + p + 1
        assert C.n_cols == n
        assert C.n_rows == 1 + n + math.comb(n, 2)
        assert is_maximum_class(C, 2)
    assert interval_class(2).n_rows == 29
    assert interval_class(3).n_rows == 92
    # size formula also at p=5 (maximality check skipped: 497 rows)
    assert interval_class(5).n_rows == 1 + 31 + math.comb(31, 2)


def test_hamming_ball_scales_past_word_width():
    ball = hamming_ball(40, 1)
    assert ball.n_rows == 41
    assert vc_dimension(ball.matrix) == 1


def test_interval_class_lines_intersect_once():
    plane = ProjectiveSpace.build(3, 2)
    lines = [set(plane.hyperplane_points(h)) for h in range(plane.n_points)]
    for a, b in itertools.combinations(range(len(lines)), 2):
        assert len(lines[a] & lines[b]) == 1
    # hence every interval of size >= 2 lies in exactly one line
    C = interval_class(3)
    for row in C.matrix.entries:
        members = set(np.flatnonzero(row == 1))
        if len(members) >= 2:
            assert sum(members <= line for line in lines) == 1


def test_interval_class_planted_orders():
    plane = ProjectiveSpace.build(3, 2)
    orders = planted_line_orders(plane, np.random.default_rng(9))
    C = interval_class(3, orders)
    assert is_maximum_class(C, 2)
    again = interval_class(3, planted_line_orders(plane, np.random.default_rng(9)))
    assert C.matrix == again.matrix  # same seed, same class
    with pytest.raises(ValueError):
        bad = default_line_orders(plane).orders[:-1]
        interval_class(3, type(orders)(bad))


def test_line_subset_random():
    rng = np.random.default_rng(1)
    S = line_subset_random(3, rng)
    assert vc_dimension(S) <= 2
    B = to_boolean(S).entries
    # no all-ones 2x2 boolean submatrix: any two rows share at most one column
    for a, b in itertools.combinations(range(13), 2):
        assert int((B[a] & B[b]).sum()) <= 1

    keep_all = line_subset_random(3, ArrayStubRng(0.0))
    assert keep_all == projective_incidence(3, 2)
    drop_all = line_subset_random(3, ArrayStubRng(1.0))
    assert (drop_all.entries == -1).all()
    assert vc_dimension(drop_all) == 0


def test_heavy_dominant_free_d3():
    rng = np.random.default_rng(2)
    S, log = heavy_dominant_free_random_logged(20, 3, rng)
    B = to_boolean(S).entries
    assert not brute_heavy_dominant_present(B)
    assert vc_dimension(S) <= 3
    assert log["ones_final"] == log["ones_initial"] - log["ones_deleted"]
    assert log["ones_deleted"] <= 2 * log["occurrences"]
    assert log["ones_final"] > 0


def test_heavy_dominant_free_d3_dense_draw_gets_cleaned():
    # An all-ones draw is saturated with occurrences; the cleaner must still
    # leave a pattern-free matrix.
    S, log = heavy_dominant_free_random_logged(8, 3, ArrayStubRng(0.0))
    B = to_boolean(S).entries
    assert log["occurrences"] > 0
    assert not brute_heavy_dominant_present(B)


def test_heavy_dominant_free_all_zero_draw():
    S = heavy_dominant_free_random(10, 3, ArrayStubRng(1.0))
    assert (S.entries == -1).all()
    assert vc_dimension(S) == 0


def test_heavy_dominant_free_d5_small():
    rng = np.random.default_rng(3)
    S, log = heavy_dominant_free_random_logged(12, 5, rng)
    assert S.shape == (12, 12)
    assert vc_dimension(S) <= 5
    assert log["ones_final"] == log["ones_initial"] - log["ones_deleted"]


def test_heavy_dominant_free_validation():
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        heavy_dominant_free_random(10, 4, rng)
    with pytest.raises(ValueError):
        heavy_dominant_free_random(10, 2, rng)
    with pytest.raises(SizeLimitError):
        heavy_dominant_free_random(41, 3, rng)
    with pytest.raises(SizeLimitError):
        heavy_dominant_free_random(26, 5, rng)
