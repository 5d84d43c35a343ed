import itertools
import math

import numpy as np
import pytest

from signrank import (
    SignMatrix,
    SizeLimitError,
    count_sign_changes,
    disjointness,
    distinct_rows,
    doubling_update,
    grid_hyperplane,
    haussler_packing_limit,
    line_subset_random,
    projective_incidence,
    sc_star_bruteforce,
    signed_identity,
    vc1_path,
    vc_dimension,
    welzl_path,
)
from testutil import random_distinct_matrix, random_vc1_matrix


def brute_sc_star(S):
    """Reference optimum via plain permutation loop (independent of the
    vectorized implementation)."""
    rows = S.row_tuples()
    best = math.inf
    for perm in itertools.permutations(range(len(rows))):
        worst = 0
        for c in range(S.n_cols):
            worst = max(
                worst,
                sum(
                    1
                    for a, b in zip(perm, perm[1:])
                    if rows[a][c] != rows[b][c]
                ),
            )
        best = min(best, worst)
    return best


def test_count_sign_changes_single_column():
    S = SignMatrix([[1], [1], [-1], [-1], [1]])
    ordering = count_sign_changes(S, (0, 1, 2, 3, 4))
    assert ordering.sign_changes == (2,)
    assert count_sign_changes(SignMatrix([[1], [1], [1]]), (0, 1, 2)).max_sign_changes == 0


def test_count_sign_changes_signed_identity():
    ordering = count_sign_changes(signed_identity(3), (0, 1, 2))
    assert ordering.sign_changes == (1, 2, 1)
    assert ordering.max_sign_changes == 2


def test_count_sign_changes_rejects_bad_permutation():
    with pytest.raises(ValueError):
        count_sign_changes(signed_identity(3), (0, 1))
    with pytest.raises(ValueError):
        count_sign_changes(signed_identity(3), (0, 1, 1))


def test_doubling_update_examples():
    p, x = doubling_update([0.25] * 4, (0, 1))
    assert x == pytest.approx(0.5)
    assert p.tolist() == pytest.approx([1 / 3, 1 / 3, 1 / 6, 1 / 6])

    p, x = doubling_update([0.25] * 4, ())
    assert x == 0.0
    assert p.tolist() == [0.25] * 4

    p, x = doubling_update([0.25] * 4, (0, 1, 2, 3))
    assert x == pytest.approx(1.0)
    assert p.tolist() == pytest.approx([0.25] * 4)


def test_doubling_update_preserves_total_mass():
    rng = np.random.default_rng(4)
    p = np.full(10, 0.1)
    for _ in range(200):
        crossed = np.flatnonzero(rng.random(10) < 0.3)
        p, _ = doubling_update(p, crossed)
        assert abs(p.sum() - 1.0) < 1e-12
    with pytest.raises(ValueError):
        doubling_update([0.5, 0.4], ())


def test_welzl_grid_bounds():
    G = grid_hyperplane(3, 2)
    ordering, state = welzl_path(G, np.random.default_rng(0))
    n, d = 9, 2
    assert ordering.max_sign_changes <= 200 * n ** (1 - 1 / d)
    # tighter internal chain
    assert ordering.max_sign_changes <= math.log2(n) + 8 * math.e**2 * n ** (1 - 1 / d)
    assert len(state.forest_edges) == n - 1
    assert abs(state.p.sum() - 1.0) < 1e-9


def test_welzl_single_column():
    S = SignMatrix([[1], [-1]])
    ordering, _ = welzl_path(S, np.random.default_rng(0))
    assert ordering.max_sign_changes <= 1


def test_welzl_step_weights_obey_packing_bound():
    P = projective_incidence(3, 2)
    _, state = welzl_path(P, np.random.default_rng(5), d=2)
    n = 13
    for i, x in enumerate(state.x_log, start=1):
        assert x <= 4 * math.e**2 * (n - i) ** (-1 / 2) + 1e-12


def test_welzl_forest_is_spanning_tree():
    P = line_subset_random(3, np.random.default_rng(8))
    Pd = distinct_rows(P)
    _, state = welzl_path(Pd, np.random.default_rng(8))
    n = Pd.n_rows
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v in state.forest_edges:
        ru, rv = find(u), find(v)
        assert ru != rv, "edge closed a cycle"
        parent[ru] = rv
    assert len({find(i) for i in range(n)}) == 1


def test_welzl_never_beats_bruteforce():
    rng = np.random.default_rng(10)
    for _ in range(30):
        S = random_distinct_matrix(rng, max_rows=8, max_cols=8)
        ordering, _ = welzl_path(S, rng)
        assert ordering.max_sign_changes >= sc_star_bruteforce(S)


def test_welzl_rejects_duplicate_rows():
    with pytest.raises(ValueError):
        welzl_path(SignMatrix([[1, 1], [1, 1]]), np.random.default_rng(0))


def test_vc1_path_examples():
    assert vc1_path(signed_identity(4)).max_sign_changes <= 2
    assert vc1_path(SignMatrix([[1], [-1]])).max_sign_changes == 1
    with pytest.raises(ValueError):
        vc1_path(disjointness(2))


def test_vc1_path_random_instances():
    rng = np.random.default_rng(12)
    for _ in range(100):
        S = random_vc1_matrix(rng)
        assert vc_dimension(S) <= 1
        ordering = vc1_path(S)
        assert ordering.max_sign_changes <= 2
        # recount independently
        recount = count_sign_changes(S, ordering.permutation)
        assert recount.sign_changes == ordering.sign_changes


def test_sc_star_examples():
    assert sc_star_bruteforce(grid_hyperplane(2, 2)) == 2
    # forced by the crossing bound (2^2 - 1) / (2 * 1) = 1.5
    assert sc_star_bruteforce(grid_hyperplane(2, 2)) >= 1.5
    assert sc_star_bruteforce(signed_identity(3)) == 2
    assert sc_star_bruteforce(SignMatrix([[1], [1], [1]][0:1])) == 0
    assert sc_star_bruteforce(SignMatrix([[1, -1]])) == 0


def test_sc_star_grid_crossing_bounds():
    # (2^d - 1) / (d (n-1)) forces the optimum up on small grids
    assert sc_star_bruteforce(grid_hyperplane(2, 2)) >= (2**2 - 1) / (2 * 1)
    assert sc_star_bruteforce(grid_hyperplane(2, 3)) >= (2**3 - 1) / (3 * 1)


def test_sc_star_matches_reference():
    rng = np.random.default_rng(13)
    for _ in range(12):
        S = random_distinct_matrix(rng, max_rows=6, max_cols=5)
        assert sc_star_bruteforce(S) == brute_sc_star(S)


def test_sc_star_limits():
    rng = np.random.default_rng(14)
    big = distinct_rows(
        SignMatrix(rng.choice((-1, 1), size=(40, 12)).astype(np.int8))
    )
    if big.n_rows > 8:
        with pytest.raises(SizeLimitError):
            sc_star_bruteforce(big)
    with pytest.raises(ValueError):
        sc_star_bruteforce(SignMatrix([[1, 1], [1, 1]]))


def test_haussler_packing_limit():
    assert haussler_packing_limit(1, 0.5) == pytest.approx(8 * math.e**2)
    assert haussler_packing_limit(1, 0.5) == pytest.approx(59.112, abs=5e-4)
    assert haussler_packing_limit(0, 0.123) == pytest.approx(math.e)
    assert haussler_packing_limit(2, 0.5) == pytest.approx(48 * math.e**3)
    assert haussler_packing_limit(2, 0.5) == pytest.approx(964.10, abs=5e-2)
    with pytest.raises(ValueError):
        haussler_packing_limit(2, 0.0)
    with pytest.raises(ValueError):
        haussler_packing_limit(-1, 0.5)
