"""Exact shattering combinatorics on sign matrices.

Everything here is exhaustive search over column subsets, organized so that
the typical case (tiny VC dimension) stays cheap: subsets are enumerated by
increasing size and the search stops at the first size with no witness, which
is sound because shattering (plain and antipodal) is monotone under taking
column subsets. Searches that would enumerate too many subsets raise
SizeLimitError instead of running without bound.
"""

from __future__ import annotations

import math
from itertools import combinations
from typing import Iterable, Sequence

from .errors import SizeLimitError
from .matrix import SignMatrix, distinct_rows, has_distinct_rows

# Max number of column subsets examined per subset size before giving up.
SUBSET_BUDGET = 2_000_000

ColumnSet = tuple[int, ...]


def _normalize_columns(S: SignMatrix, cols: Iterable[int]) -> ColumnSet:
    out = tuple(sorted(int(c) for c in cols))
    if not out:
        raise ValueError("column set must be non-empty")
    if len(set(out)) != len(out):
        raise ValueError("column indices must be distinct")
    if out[0] < 0 or out[-1] >= S.n_cols:
        raise IndexError(f"column index out of range for {S.n_cols} columns")
    return out


def _pattern(mask: int, cols: Sequence[int]) -> int:
    pat = 0
    for i, c in enumerate(cols):
        pat |= ((mask >> c) & 1) << i
    return pat


def _is_shattered_masks(masks: Sequence[int], cols: Sequence[int]) -> bool:
    k = len(cols)
    total = 1 << k
    if len(masks) < total:
        return False
    full = (1 << total) - 1
    seen = 0
    for m in masks:
        seen |= 1 << _pattern(m, cols)
        if seen == full:
            return True
    return False


def is_shattered(S: SignMatrix, cols: Iterable[int]) -> bool:
    """True iff every one of the 2^|cols| sign patterns occurs among the rows
    restricted to `cols`."""
    cols = _normalize_columns(S, cols)
    return _is_shattered_masks(S.row_masks, cols)


def is_antipodally_shattered(S: SignMatrix, cols: Iterable[int]) -> bool:
    """True iff for every pattern v over `cols`, v or -v occurs among the
    restricted rows."""
    cols = _normalize_columns(S, cols)
    return _is_antipodal_masks(S.row_masks, cols)


def _is_antipodal_masks(masks: Sequence[int], cols: Sequence[int]) -> bool:
    k = len(cols)
    need = 1 << (k - 1)
    full = (1 << k) - 1
    seen: set[int] = set()
    for m in masks:
        pat = _pattern(m, cols)
        seen.add(min(pat, full ^ pat))
        if len(seen) == need:
            return True
    return False


def _check_budget(n_cols: int, size: int) -> None:
    if math.comb(n_cols, size) > SUBSET_BUDGET:
        raise SizeLimitError(
            f"enumerating {math.comb(n_cols, size)} column subsets of size "
            f"{size} exceeds the budget of {SUBSET_BUDGET}; this input is too "
            "large for the exact search"
        )


def vc_dimension(S: SignMatrix) -> int:
    """Largest size of a shattered column set.

    Subset sizes are tried in increasing order; the loop stops at the first
    size with no shattered set. Practical limits: fine for matrices with up
    to roughly 30 columns when the answer is at most 4 or 5; beyond that the
    subset budget triggers a SizeLimitError.
    """
    S = distinct_rows(S)
    masks = S.row_masks
    limit = min(S.n_cols, max(len(masks).bit_length() - 1, 0))
    best = 0
    for k in range(1, limit + 1):
        _check_budget(S.n_cols, k)
        if any(_is_shattered_masks(masks, c) for c in combinations(range(S.n_cols), k)):
            best = k
        else:
            break
    return best


def dual_sign_rank(S: SignMatrix) -> int:
    """Largest size of an antipodally shattered column set.

    The answer always lies between the VC dimension and twice the VC
    dimension plus one, so the search is capped there.
    """
    vc = vc_dimension(S)
    hi = min(2 * vc + 1, S.n_cols)
    masks = S.row_masks
    best = 0
    for k in range(1, hi + 1):
        _check_budget(S.n_cols, k)
        if any(_is_antipodal_masks(masks, c) for c in combinations(range(S.n_cols), k)):
            best = k
        else:
            break
    return best


def sauer_bound(n: int, d: int) -> int:
    """sum_{i=0}^{d} C(n, i): the largest possible number of distinct rows in
    a matrix with n columns and VC dimension d."""
    if d < 0:
        raise ValueError("d must be non-negative")
    if d > n:
        raise ValueError(f"d={d} exceeds the number of columns n={n}")
    return sum(math.comb(n, i) for i in range(d + 1))


class ConceptClass:
    """A set of vectors in {+1,-1}^n, stored as a sign matrix with pairwise
    distinct rows."""

    def __init__(self, matrix: SignMatrix) -> None:
        if not has_distinct_rows(matrix):
            raise ValueError("concept class rows must be pairwise distinct")
        self.matrix = matrix

    @property
    def n_rows(self) -> int:
        return self.matrix.n_rows

    @property
    def n_cols(self) -> int:
        return self.matrix.n_cols

    def __repr__(self) -> str:
        return f"ConceptClass({self.n_rows} vectors in dim {self.n_cols})"


def is_maximum_class(C: ConceptClass, d: int) -> bool:
    """True iff the class has VC dimension exactly d and its size meets the
    Sauer-Shelah bound with equality."""
    if d < 0 or d > C.n_cols:
        return False
    if C.n_rows != sauer_bound(C.n_cols, d):
        return False
    return vc_dimension(C.matrix) == d


def is_cube_connected(C: ConceptClass) -> bool:
    """True iff the one-inclusion graph (rows as vertices, edges between rows
    at Hamming distance one) is connected."""
    masks = C.matrix.row_masks
    index = {m: i for i, m in enumerate(masks)}
    n_cols = C.n_cols
    seen = {masks[0]}
    stack = [masks[0]]
    while stack:
        m = stack.pop()
        for j in range(n_cols):
            nb = m ^ (1 << j)
            if nb in index and nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(masks)


def max_projections(S: SignMatrix, t: int) -> int:
    """Maximum, over all t-column sets, of the number of distinct row
    projections; this evaluates the primal shatter function at t."""
    if t < 1 or t > S.n_cols:
        raise ValueError(f"t must be between 1 and {S.n_cols}")
    _check_budget(S.n_cols, t)
    masks = S.row_masks
    cap = min(1 << t, len(masks))
    best = 0
    for cols in combinations(range(S.n_cols), t):
        pats = {_pattern(m, cols) for m in masks}
        if len(pats) > best:
            best = len(pats)
            if best == cap:
                break
    return best
