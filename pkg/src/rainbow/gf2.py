"""Dense bit-packed linear algebra over GF(2).

Every check matrix, logical basis, and subgraph support in this package
is a :class:`BitMatrix`: rows packed into ``uint64`` words, least
significant bit first.  All basis-returning operations echelonize their
output so that identical inputs produce bit-identical results.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

from . import _kernels as _k

WORD = 64

_DENSE_GUARD = 400_000_000


def n_words(ncols: int) -> int:
    """Number of 64-bit words needed for a row of `ncols` bits."""
    return (ncols + WORD - 1) // WORD


class BitMatrix:
    """A rows x cols matrix over GF(2), bit-packed row-major.

    Parameters
    ----------
    data:
        uint64 array of shape (rows, n_words(ncols)); padding bits above
        `ncols` must be zero.
    ncols:
        Logical column count.
    """

    __slots__ = ("data", "ncols")

    def __init__(self, data: np.ndarray, ncols: int):
        data = np.ascontiguousarray(data, dtype=np.uint64)
        if data.ndim != 2 or data.shape[1] != n_words(ncols):
            raise ValueError(
                f"data shape {data.shape} does not match ncols={ncols}"
            )
        self.data = data
        self.ncols = ncols

    # -- constructors -----------------------------------------------------

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "BitMatrix":
        return cls(np.zeros((nrows, n_words(ncols)), dtype=np.uint64), ncols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        out = cls.zeros(n, n)
        for i in range(n):
            out.set(i, i)
        return out

    @classmethod
    def from_dense(cls, rows) -> "BitMatrix":
        arr = np.atleast_2d(np.asarray(rows, dtype=np.uint8))
        if arr.ndim != 2:
            raise ValueError("expected a 2-d array of 0/1 entries")
        if arr.size and arr.max() > 1:
            raise ValueError("entries must be 0 or 1")
        m, n = arr.shape
        w = n_words(n)
        if n == 0:
            return cls(np.zeros((m, 0), dtype=np.uint64), 0)
        padded = np.zeros((m, w * WORD), dtype=np.uint8)
        padded[:, :n] = arr
        packed = np.packbits(padded, axis=1, bitorder="little")
        return cls(packed.view(np.uint64).reshape(m, w), n)

    @classmethod
    def from_supports(cls, supports: Iterable[Iterable[int]], ncols: int) -> "BitMatrix":
        """One row per support; each support is an iterable of column indices."""
        rows = list(supports)
        out = cls.zeros(len(rows), ncols)
        for i, sup in enumerate(rows):
            for c in sup:
                out.set(i, c)
        return out

    # -- shape and element access -----------------------------------------

    @property
    def nrows(self) -> int:
        return self.data.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.data.copy(), self.ncols)

    def get(self, i: int, j: int) -> int:
        if not 0 <= j < self.ncols:
            raise IndexError(f"column {j} out of range")
        return int((self.data[i, j >> 6] >> np.uint64(j & 63)) & np.uint64(1))

    def set(self, i: int, j: int, value: int = 1) -> None:
        if not 0 <= j < self.ncols:
            raise IndexError(f"column {j} out of range")
        mask = np.uint64(1) << np.uint64(j & 63)
        if value:
            self.data[i, j >> 6] |= mask
        else:
            self.data[i, j >> 6] &= ~mask

    def row(self, i: int) -> "BitMatrix":
        return BitMatrix(self.data[i : i + 1].copy(), self.ncols)

    def take_rows(self, indices) -> "BitMatrix":
        idx = np.asarray(indices, dtype=np.int64)
        return BitMatrix(self.data[idx].copy(), self.ncols)

    def row_support(self, i: int) -> list[int]:
        if self.ncols == 0:
            return []
        bits = np.unpackbits(
            np.ascontiguousarray(self.data[i]).view(np.uint8), bitorder="little"
        )
        return np.nonzero(bits[: self.ncols])[0].tolist()

    def row_weights(self) -> np.ndarray:
        return _k.popcount_rows(self.data)

    def to_dense(self) -> np.ndarray:
        m, w = self.data.shape
        if self.ncols == 0:
            return np.zeros((m, 0), dtype=np.uint8)
        byts = self.data.view(np.uint8).reshape(m, w * 8)
        bits = np.unpackbits(byts, axis=1, bitorder="little")
        return np.ascontiguousarray(bits[:, : self.ncols])

    def is_zero(self) -> bool:
        return not self.data.any()

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.ncols == other.ncols and np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash((self.ncols, self.data.tobytes()))

    def __repr__(self) -> str:
        return f"BitMatrix({self.nrows}x{self.ncols})"


def vstack(mats: Sequence[BitMatrix]) -> BitMatrix:
    """Stack matrices with equal column counts."""
    mats = list(mats)
    if not mats:
        raise ValueError("need at least one matrix")
    ncols = mats[0].ncols
    for m in mats[1:]:
        if m.ncols != ncols:
            raise ValueError(f"column mismatch: {m.ncols} != {ncols}")
    return BitMatrix(np.vstack([m.data for m in mats]), ncols)


def rref(m: BitMatrix, col_order: np.ndarray | None = None) -> tuple[BitMatrix, np.ndarray]:
    """Reduced row echelon form with zero rows dropped.

    Returns the echelonized matrix and its pivot columns.  With the
    default natural column order the result is the canonical basis of
    the row span, so two matrices have equal spans iff their rref data
    are identical.
    """
    if col_order is None:
        col_order = np.arange(m.ncols, dtype=np.int64)
    else:
        col_order = np.asarray(col_order, dtype=np.int64)
    work = m.data.copy()
    r, pivots = _k.rref_inplace(work, col_order)
    return BitMatrix(work[:r].copy(), m.ncols), pivots


def rank(m: BitMatrix) -> int:
    return rref(m)[0].nrows


def reduce_against(v: BitMatrix, basis: BitMatrix, pivots: np.ndarray) -> BitMatrix:
    """Residuals of each row of `v` after reduction against an rref basis."""
    if v.ncols != basis.ncols:
        raise ValueError(f"column mismatch: {v.ncols} != {basis.ncols}")
    work = v.data.copy()
    _k.reduce_rows_inplace(work, basis.data, np.asarray(pivots, dtype=np.int64))
    return BitMatrix(work, v.ncols)


def rows_in_span(v: BitMatrix, basis: BitMatrix, pivots: np.ndarray) -> np.ndarray:
    """Boolean vector: which rows of `v` lie in the span of the rref basis."""
    residual = reduce_against(v, basis, pivots)
    return ~residual.data.any(axis=1)


def in_span(v: BitMatrix, m: BitMatrix) -> bool:
    """True iff the single row `v` lies in the row span of `m`."""
    if v.nrows != 1:
        raise ValueError("in_span expects a single-row matrix")
    if v.ncols != m.ncols:
        raise ValueError(f"column mismatch: {v.ncols} != {m.ncols}")
    basis, pivots = rref(m)
    return bool(rows_in_span(v, basis, pivots)[0])


def kernel(m: BitMatrix) -> BitMatrix:
    """Reduced-echelon basis of the right kernel {v : m @ v = 0}."""
    basis, pivots = rref(m)
    n = m.ncols
    pivot_set = set(int(p) for p in pivots)
    free_cols = np.asarray(
        [c for c in range(n) if c not in pivot_set], dtype=np.int64
    )
    out = np.zeros((free_cols.shape[0], n_words(n)), dtype=np.uint64)
    _k.kernel_from_rref(basis.data, np.asarray(pivots, dtype=np.int64), free_cols, out)
    ker = BitMatrix(out, n)
    return rref(ker)[0]


def transpose(m: BitMatrix) -> BitMatrix:
    if m.nrows * max(m.ncols, 1) > _DENSE_GUARD:
        raise ValueError(f"transpose of {m.shape} exceeds the dense guard")
    return BitMatrix.from_dense(m.to_dense().T) if m.ncols else BitMatrix.zeros(0, m.nrows)


def matmul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """Product over GF(2); row i of the result XORs the rows of `b` selected by row i of `a`."""
    if a.ncols != b.nrows:
        raise ValueError(f"inner dimensions differ: {a.ncols} != {b.nrows}")
    out = np.zeros((a.nrows, n_words(b.ncols)), dtype=np.uint64)
    for i in range(a.nrows):
        sel = a.row_support(i)
        if sel:
            out[i] = np.bitwise_xor.reduce(b.data[sel], axis=0)
    return BitMatrix(out, b.ncols)


def matmul_t(a: BitMatrix, b: BitMatrix) -> np.ndarray:
    """Dense uint8 matrix of parities a @ b.T over GF(2)."""
    if a.ncols != b.ncols:
        raise ValueError(f"column mismatch: {a.ncols} != {b.ncols}")
    return _k.matmul_parity(a.data, b.data)


def first_odd_overlap(a: BitMatrix, b: BitMatrix) -> tuple[int, int] | None:
    """First (i, j) with odd |a_i AND b_j|, or None if all overlaps are even."""
    if a.ncols != b.ncols:
        raise ValueError(f"column mismatch: {a.ncols} != {b.ncols}")
    if a.nrows == 0 or b.nrows == 0:
        return None
    i, j = _k.first_odd_pair(a.data, b.data)
    return None if i < 0 else (int(i), int(j))


def span_intersection(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """Reduced-echelon basis of rowspan(a) intersected with rowspan(b).

    Follows the stacked-transpose kernel construction: left-kernel
    vectors of [a; b] split as (u | w) with u @ a = w @ b, so the u
    parts applied to `a` generate exactly the intersection.
    """
    if a.ncols != b.ncols:
        raise ValueError(f"column mismatch: {a.ncols} != {b.ncols}")
    if a.nrows == 0 or b.nrows == 0:
        return BitMatrix.zeros(0, a.ncols)
    stacked = vstack([a, b])
    left_kernel = kernel(transpose(stacked))
    if left_kernel.nrows == 0:
        return BitMatrix.zeros(0, a.ncols)
    selector = BitMatrix(left_kernel.data[:, : n_words(a.nrows)].copy(), a.nrows)
    # strip phantom bits beyond a.nrows that belong to b's block
    if a.nrows % WORD:
        mask = (np.uint64(1) << np.uint64(a.nrows % WORD)) - np.uint64(1)
        selector.data[:, -1] &= mask
    return rref(matmul(selector, a))[0]


def select_columns(m: BitMatrix, cols) -> BitMatrix:
    """Submatrix keeping the given columns, in the given order."""
    cols = np.asarray(cols, dtype=np.int64)
    if cols.size == 0:
        return BitMatrix.zeros(m.nrows, 0)
    if cols.min() < 0 or cols.max() >= m.ncols:
        raise IndexError("column index out of range")
    words = m.data[:, cols >> 6]
    bits = ((words >> (cols & 63).astype(np.uint64)) & np.uint64(1)).astype(np.uint8)
    return BitMatrix.from_dense(bits)


def scatter_columns(m: BitMatrix, cols, ncols: int) -> BitMatrix:
    """Embed m's columns at the given positions of a wider zero matrix."""
    cols = np.asarray(cols, dtype=np.int64)
    if m.ncols != cols.shape[0]:
        raise ValueError(f"{m.ncols} columns cannot scatter onto {cols.shape[0]} targets")
    if cols.size and (cols.min() < 0 or cols.max() >= ncols):
        raise IndexError("column index out of range")
    out = BitMatrix.zeros(m.nrows, ncols)
    dense = m.to_dense()
    for j in range(cols.shape[0]):
        rows = np.nonzero(dense[:, j])[0]
        out.data[rows, cols[j] >> 6] |= np.uint64(1) << np.uint64(cols[j] & 63)
    return out


def spans_equal(a: BitMatrix, b: BitMatrix) -> bool:
    return rref(a)[0] == rref(b)[0]


def span_contains(a: BitMatrix, b: BitMatrix) -> bool:
    """True iff rowspan(a) contains every row of `b`."""
    if b.nrows == 0:
        return True
    basis, pivots = rref(a)
    return bool(rows_in_span(b, basis, pivots).all())


def invert(m: BitMatrix) -> BitMatrix:
    """Inverse of a square invertible matrix; raises ValueError if singular."""
    k = m.nrows
    if k != m.ncols:
        raise ValueError(f"matrix is {m.shape}, not square")
    dense = m.to_dense()
    aug = np.concatenate([dense, np.eye(k, dtype=np.uint8)], axis=1)
    work = BitMatrix.from_dense(aug)
    reduced, pivots = rref(work)
    if reduced.nrows != k or any(int(p) >= k for p in pivots[:k]):
        raise ValueError("matrix is singular over GF(2)")
    return BitMatrix.from_dense(reduced.to_dense()[:, k:])
