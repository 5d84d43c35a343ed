"""Dense sign (+1/-1) and boolean (0/1) matrices with a '+'/'-' text format.

The two representations are linked entrywise by S = 2B - J, with J the
all-ones matrix. Matrices are immutable after construction, so they are safe
to share between concurrent readers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MatrixFormatError

_SIGN_CHARS = {"+": 1, "-": -1}


class SignMatrix:
    """Immutable dense matrix whose entries are exactly +1 or -1.

    `row_masks` exposes each row as an integer bit mask (bit j set iff the
    entry in column j is +1); the shattering and ordering routines use these
    masks as compact row fingerprints regardless of the column count.
    """

    def __init__(self, entries) -> None:
        data = np.array(entries, dtype=np.int8)
        if data.ndim != 2 or data.shape[0] < 1 or data.shape[1] < 1:
            raise ValueError("a sign matrix needs at least one row and one column")
        if not np.isin(data, (-1, 1)).all():
            raise ValueError("sign matrix entries must be +1 or -1")
        data.setflags(write=False)
        self._data = data
        self._masks: tuple[int, ...] | None = None

    @property
    def entries(self) -> np.ndarray:
        return self._data

    @property
    def n_rows(self) -> int:
        return int(self._data.shape[0])

    @property
    def n_cols(self) -> int:
        return int(self._data.shape[1])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_cols)

    @property
    def row_masks(self) -> tuple[int, ...]:
        if self._masks is None:
            masks = []
            for row in self._data:
                m = 0
                for j in np.flatnonzero(row == 1):
                    m |= 1 << int(j)
                masks.append(m)
            self._masks = tuple(masks)
        return self._masks

    def row_tuples(self) -> list[tuple[int, ...]]:
        return [tuple(int(v) for v in row) for row in self._data]

    def submatrix(self, rows=None, cols=None) -> "SignMatrix":
        data = self._data
        if rows is not None:
            data = data[np.asarray(rows, dtype=int)]
        if cols is not None:
            data = data[:, np.asarray(cols, dtype=int)]
        return SignMatrix(data)

    def to_text(self) -> str:
        lines = ["".join("+" if v == 1 else "-" for v in row) for row in self._data]
        return "\n".join(lines) + "\n"

    @classmethod
    def constant(cls, n_rows: int, n_cols: int, value: int = 1) -> "SignMatrix":
        return cls(np.full((n_rows, n_cols), value, dtype=np.int8))

    @classmethod
    def from_rows(cls, rows) -> "SignMatrix":
        return cls(np.array(list(rows), dtype=np.int8))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SignMatrix)
            and self.shape == other.shape
            and bool((self._data == other._data).all())
        )

    def __repr__(self) -> str:
        return f"SignMatrix({self.n_rows}x{self.n_cols})"


class BooleanMatrix:
    """Immutable dense matrix with entries 0 or 1."""

    def __init__(self, entries) -> None:
        data = np.array(entries, dtype=np.int8)
        if data.ndim != 2 or data.shape[0] < 1 or data.shape[1] < 1:
            raise ValueError("a boolean matrix needs at least one row and one column")
        if not np.isin(data, (0, 1)).all():
            raise ValueError("boolean matrix entries must be 0 or 1")
        data.setflags(write=False)
        self._data = data

    @property
    def entries(self) -> np.ndarray:
        return self._data

    @property
    def n_rows(self) -> int:
        return int(self._data.shape[0])

    @property
    def n_cols(self) -> int:
        return int(self._data.shape[1])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_cols)

    @classmethod
    def ones(cls, n_rows: int, n_cols: int) -> "BooleanMatrix":
        return cls(np.ones((n_rows, n_cols), dtype=np.int8))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BooleanMatrix)
            and self.shape == other.shape
            and bool((self._data == other._data).all())
        )

    def __repr__(self) -> str:
        return f"BooleanMatrix({self.n_rows}x{self.n_cols})"


@dataclass(frozen=True)
class RegularityInfo:
    """Row/column regularity flags; `degree` is set only for square matrices
    whose row sums and column sums all share one common value."""

    is_row_regular: bool
    is_col_regular: bool
    degree: int | None


def parse_sign_matrix(text: str) -> SignMatrix:
    """Parse the '+'/'-' text format.

    Blank lines and lines starting with '#' (an optional header) are skipped.
    All remaining lines must have equal length and use only '+' and '-'.
    """
    rows: list[list[int]] = []
    width: int | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if width is None:
            width = len(line)
        elif len(line) != width:
            raise MatrixFormatError(
                f"expected {width} characters, found {len(line)}", line=lineno
            )
        try:
            rows.append([_SIGN_CHARS[ch] for ch in line])
        except KeyError:
            bad = next(ch for ch in line if ch not in _SIGN_CHARS)
            raise MatrixFormatError(f"illegal character {bad!r}", line=lineno) from None
    if not rows:
        raise MatrixFormatError("empty input: no matrix rows found")
    return SignMatrix(rows)


def to_boolean(S: SignMatrix) -> BooleanMatrix:
    """Boolean version B = (S + J) / 2."""
    return BooleanMatrix((S.entries + 1) // 2)


def to_signed(B: BooleanMatrix) -> SignMatrix:
    """Signed version S = 2B - J."""
    return SignMatrix(2 * B.entries.astype(np.int16) - 1)


def regularity(B: BooleanMatrix) -> RegularityInfo:
    """Check whether every row (column) has the same number of ones.

    The common degree is reported only when the matrix is square and both
    checks pass; then the shared row sum necessarily equals the shared column
    sum.
    """
    row_sums = B.entries.sum(axis=1)
    col_sums = B.entries.sum(axis=0)
    row_regular = bool((row_sums == row_sums[0]).all())
    col_regular = bool((col_sums == col_sums[0]).all())
    degree = None
    if row_regular and col_regular and B.n_rows == B.n_cols:
        degree = int(row_sums[0])
    return RegularityInfo(row_regular, col_regular, degree)


def distinct_rows(S: SignMatrix) -> SignMatrix:
    """Drop duplicate rows, keeping the first occurrence of each."""
    seen: set[tuple[int, ...]] = set()
    keep: list[int] = []
    for i, row in enumerate(S.row_tuples()):
        if row not in seen:
            seen.add(row)
            keep.append(i)
    if len(keep) == S.n_rows:
        return S
    return SignMatrix(S.entries[keep])


def has_distinct_rows(S: SignMatrix) -> bool:
    return len(set(S.row_masks)) == S.n_rows
