"""Exhaustive census of concept classes over tiny cubes.

Classes over n columns are the non-empty subsets of the 2^n cube vertices,
encoded as bit masks, so the full census at n <= 4 is a table over at most
65536 masks. The per-mask VC dimension is computed with vectorized coverage
tests: a column set is shattered by a class mask iff the mask meets the
vertex set of every pattern. Larger n falls back to Monte Carlo sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .errors import SizeLimitError
from .matrix import SignMatrix
from .vc import ConceptClass, is_cube_connected, sauer_bound, vc_dimension

MAX_EXACT_N = 4


@dataclass(frozen=True)
class CensusResult:
    n: int
    d: int
    count_exact: int
    count_at_most: int
    maximum_count: int
    all_maximum_connected: bool


@dataclass(frozen=True)
class CensusEstimate:
    n: int
    d: int
    size: int
    samples: int
    successes: int
    fraction: float
    ci_radius: float


@lru_cache(maxsize=None)
def _census_tables(n: int) -> tuple[np.ndarray, np.ndarray]:
    """(vc, size) arrays indexed by class mask over the 2^n cube vertices."""
    n_vertices = 1 << n
    n_masks = 1 << n_vertices
    masks = np.arange(n_masks, dtype=np.int64)
    vc = np.zeros(n_masks, dtype=np.int8)
    for k in range(1, n + 1):
        shattered_k = np.zeros(n_masks, dtype=bool)
        for cols in combinations(range(n), k):
            ok = np.ones(n_masks, dtype=bool)
            for pattern in range(1 << k):
                cover = 0
                for v in range(n_vertices):
                    if all(
                        (v >> c) & 1 == (pattern >> i) & 1
                        for i, c in enumerate(cols)
                    ):
                        cover |= 1 << v
                ok &= (masks & cover) != 0
            shattered_k |= ok
        vc[shattered_k] = k
    sizes = np.array([m.bit_count() for m in range(n_masks)], dtype=np.int8)
    return vc, sizes


def _check_exact_n(n: int) -> None:
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > MAX_EXACT_N:
        raise SizeLimitError(
            f"the exact census enumerates 2^(2^n) classes; n={n} exceeds the "
            f"supported maximum {MAX_EXACT_N} (use sampling instead)"
        )


def class_from_mask(mask: int, n: int) -> ConceptClass:
    """Materialize a class mask as vectors: vertex v maps to the row whose
    column j carries +1 iff bit j of v is set."""
    rows = [
        [1 if (v >> j) & 1 else -1 for j in range(n)]
        for v in range(1 << n)
        if (mask >> v) & 1
    ]
    return ConceptClass(SignMatrix(rows))


def maximum_class_masks(n: int, d: int) -> list[int]:
    """Masks of all maximum classes of VC dimension d over n columns."""
    _check_exact_n(n)
    if d < 0 or d > n:
        raise ValueError(f"d must be between 0 and {n}")
    vc, sizes = _census_tables(n)
    target = sauer_bound(n, d)
    hits = np.flatnonzero((vc == d) & (sizes == target))
    return [int(m) for m in hits]


def _mask_connected(mask: int, n: int) -> bool:
    start = mask & -mask
    v0 = start.bit_length() - 1
    reached = {v0}
    stack = [v0]
    while stack:
        v = stack.pop()
        for j in range(n):
            u = v ^ (1 << j)
            if (mask >> u) & 1 and u not in reached:
                reached.add(u)
                stack.append(u)
    return len(reached) == mask.bit_count()


def enumerate_census(n: int, d: int) -> CensusResult:
    """Exact counts of non-empty classes over n columns (n <= 4): classes of
    VC dimension exactly d and at most d, the maximum classes among them, and
    whether every maximum class is a connected piece of the cube."""
    _check_exact_n(n)
    if d < 0 or d > n:
        raise ValueError(f"d must be between 0 and {n}")
    vc, sizes = _census_tables(n)
    nonempty = sizes > 0
    count_exact = int(((vc == d) & nonempty).sum())
    count_at_most = int(((vc <= d) & nonempty).sum())
    max_masks = maximum_class_masks(n, d)
    all_connected = all(_mask_connected(m, n) for m in max_masks)
    return CensusResult(
        n=n,
        d=d,
        count_exact=count_exact,
        count_at_most=count_at_most,
        maximum_count=len(max_masks),
        all_maximum_connected=all_connected,
    )


def sample_census(
    n: int, d: int, size: int, samples: int, rng: np.random.Generator
) -> CensusEstimate:
    """Monte Carlo estimate of the fraction of classes with VC dimension at
    most d among uniformly random classes of `size` distinct vectors, with a
    binomial confidence radius (normal approximation, conservative at the
    extremes)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if d < 0 or d > n:
        raise ValueError(f"d must be between 0 and {n}")
    if size < 1 or size > (1 << n):
        raise ValueError(f"size must be between 1 and {1 << n}")
    if samples < 1:
        raise ValueError("samples must be positive")
    successes = 0
    for _ in range(samples):
        vertices = rng.choice(1 << n, size=size, replace=False)
        rows = ((vertices[:, None] >> np.arange(n)[None, :]) & 1) * 2 - 1
        if vc_dimension(SignMatrix(rows.astype(np.int8))) <= d:
            successes += 1
    fraction = successes / samples
    spread = fraction * (1.0 - fraction)
    if spread == 0.0:
        spread = 0.25
    radius = 1.96 * math.sqrt(spread / samples)
    return CensusEstimate(n, d, size, samples, successes, fraction, radius)


def cube_connectivity_crosscheck(n: int, d: int) -> bool:
    """Re-check the census connectivity flag through the concept-class API:
    every maximum class, materialized as vectors, must have a connected
    one-inclusion graph."""
    return all(
        is_cube_connected(class_from_mask(m, n)) for m in maximum_class_masks(n, d)
    )
