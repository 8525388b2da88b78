"""Compressed sparse row matrix.

Only what the pipeline needs: construction from triplets, dense products in
both directions, row/column selection and reductions. Products reduce each
row segment in storage order, so results are bit-reproducible.
"""

import numpy as np

from ..errors import DimensionError

_CHUNK_NNZ = 1 << 20


class CsrMatrix:
    __slots__ = ("row_ptr", "col_idx", "values", "shape", "_t")

    def __init__(self, row_ptr, col_idx, values, shape, check=True):
        self.row_ptr = np.asarray(row_ptr, dtype=np.int64)
        self.col_idx = np.asarray(col_idx, dtype=np.int64)
        self.values = np.asarray(values, dtype=np.float64)
        self.shape = (int(shape[0]), int(shape[1]))
        self._t = None
        if check:
            self._validate()

    def _validate(self):
        rows, cols = self.shape
        rp = self.row_ptr
        if rp.shape != (rows + 1,) or rp[0] != 0:
            raise DimensionError("row_ptr must have length rows+1 and start at 0")
        if np.any(np.diff(rp) < 0):
            raise DimensionError("row_ptr must be non-decreasing")
        nnz = int(rp[-1])
        if self.col_idx.shape != (nnz,) or self.values.shape != (nnz,):
            raise DimensionError("col_idx/values length must equal nnz")
        if nnz:
            if self.col_idx.min() < 0 or self.col_idx.max() >= cols:
                raise DimensionError("column index out of range")
            d = np.diff(self.col_idx)
            row_start = np.zeros(nnz, dtype=bool)
            row_start[rp[:-1][np.diff(rp) > 0]] = True
            if np.any((d <= 0) & ~row_start[1:]):
                raise DimensionError("column indices must be strictly increasing per row")

    # construction ---------------------------------------------------------

    @classmethod
    def from_triplets(cls, rows, cols, values, shape):
        """Build from COO triplets; duplicate cells are summed, zeros dropped."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        values = np.asarray(values, dtype=np.float64)
        n, p = shape
        if rows.size and (rows.min() < 0 or rows.max() >= n or cols.min() < 0 or cols.max() >= p):
            raise DimensionError("triplet index out of range")
        order = np.lexsort((cols, rows))
        rows, cols, values = rows[order], cols[order], values[order]
        if rows.size:
            new = np.ones(rows.size, dtype=bool)
            new[1:] = (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])
            starts = np.flatnonzero(new)
            values = np.add.reduceat(values, starts)
            rows, cols = rows[starts], cols[starts]
            keep = values != 0
            rows, cols, values = rows[keep], cols[keep], values[keep]
        row_ptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n), out=row_ptr[1:])
        return cls(row_ptr, cols, values, (n, p), check=False)

    @classmethod
    def from_dense(cls, a):
        a = np.asarray(a, dtype=np.float64)
        if a.ndim != 2:
            raise DimensionError("expected a 2-D array")
        r, c = np.nonzero(a)
        return cls.from_triplets(r, c, a[r, c], a.shape)

    @classmethod
    def zeros(cls, shape):
        return cls(np.zeros(shape[0] + 1, dtype=np.int64), [], [], shape, check=False)

    # basic views ----------------------------------------------------------

    @property
    def nnz(self):
        return int(self.row_ptr[-1])

    def row_indices(self):
        return np.repeat(np.arange(self.shape[0], dtype=np.int64), np.diff(self.row_ptr))

    def to_dense(self):
        out = np.zeros(self.shape)
        out[self.row_indices(), self.col_idx] = self.values
        return out

    def copy(self):
        return CsrMatrix(self.row_ptr.copy(), self.col_idx.copy(), self.values.copy(),
                         self.shape, check=False)

    def with_values(self, values):
        return CsrMatrix(self.row_ptr, self.col_idx, values, self.shape, check=False)

    def __eq__(self, other):
        if not isinstance(other, CsrMatrix):
            return NotImplemented
        return (self.shape == other.shape
                and np.array_equal(self.row_ptr, other.row_ptr)
                and np.array_equal(self.col_idx, other.col_idx)
                and np.array_equal(self.values, other.values))

    __hash__ = None

    def __repr__(self):
        return f"CsrMatrix(shape={self.shape}, nnz={self.nnz})"

    @property
    def T(self):
        """Transpose, cached (the matrix is treated as immutable)."""
        if self._t is None:
            n, p = self.shape
            rows = self.row_indices()
            order = np.argsort(self.col_idx, kind="stable")
            row_ptr = np.zeros(p + 1, dtype=np.int64)
            np.cumsum(np.bincount(self.col_idx, minlength=p), out=row_ptr[1:])
            t = CsrMatrix(row_ptr, rows[order], self.values[order], (p, n), check=False)
            t._t = self
            self._t = t
        return self._t

    # arithmetic -----------------------------------------------------------

    def dot(self, dense):
        """``self @ dense`` for a dense vector or matrix."""
        dense = np.asarray(dense, dtype=np.float64)
        vec = dense.ndim == 1
        d = dense[:, None] if vec else dense
        if d.shape[0] != self.shape[1]:
            raise DimensionError(f"cannot multiply {self.shape} by {dense.shape}")
        out = np.zeros((self.shape[0], d.shape[1]))
        counts = np.diff(self.row_ptr)
        nonempty = np.flatnonzero(counts)
        # process whole rows in chunks to bound the temporary nnz x k buffer
        start = 0
        while start < nonempty.size:
            stop = start
            budget = 0
            while stop < nonempty.size and (budget == 0 or budget + counts[nonempty[stop]] <= _CHUNK_NNZ):
                budget += counts[nonempty[stop]]
                stop += 1
            rows = nonempty[start:stop]
            lo, hi = self.row_ptr[rows[0]], self.row_ptr[rows[-1] + 1]
            contrib = self.values[lo:hi, None] * d[self.col_idx[lo:hi]]
            out[rows] = np.add.reduceat(contrib, self.row_ptr[rows] - lo, axis=0)
            start = stop
        return out[:, 0] if vec else out

    def __matmul__(self, other):
        return self.dot(other)

    def tdot(self, dense):
        """``self.T @ dense``."""
        return self.T.dot(dense)

    def row_sums(self):
        out = np.zeros(self.shape[0])
        counts = np.diff(self.row_ptr)
        nz = np.flatnonzero(counts)
        if nz.size:
            out[nz] = np.add.reduceat(self.values, self.row_ptr[nz])
        return out

    def col_sums(self):
        return self.T.row_sums()

    def row_nnz(self):
        return np.diff(self.row_ptr)

    def frobenius_sq(self):
        return float(np.dot(self.values, self.values))

    def binarize(self):
        """Positive entries become 1; anything else is dropped."""
        if np.all(self.values > 0):
            return self.with_values(np.ones_like(self.values))
        rows = self.row_indices()
        keep = self.values > 0
        return CsrMatrix.from_triplets(rows[keep], self.col_idx[keep],
                                       np.ones(int(keep.sum())), self.shape)

    # selection ------------------------------------------------------------

    def take_rows(self, idx):
        idx = np.asarray(idx, dtype=np.int64)
        counts = np.diff(self.row_ptr)[idx]
        row_ptr = np.zeros(idx.size + 1, dtype=np.int64)
        np.cumsum(counts, out=row_ptr[1:])
        offsets = np.repeat(self.row_ptr[idx] - row_ptr[:-1], counts)
        pos = offsets + np.arange(row_ptr[-1], dtype=np.int64)
        return CsrMatrix(row_ptr, self.col_idx[pos], self.values[pos],
                         (idx.size, self.shape[1]), check=False)

    def take_cols(self, idx):
        """Keep the listed columns (in the given, increasing order)."""
        idx = np.asarray(idx, dtype=np.int64)
        if idx.size > 1 and np.any(np.diff(idx) <= 0):
            raise DimensionError("column selection must be strictly increasing")
        remap = np.full(self.shape[1], -1, dtype=np.int64)
        remap[idx] = np.arange(idx.size)
        new_cols = remap[self.col_idx]
        keep = new_cols >= 0
        rows = self.row_indices()[keep]
        row_ptr = np.zeros(self.shape[0] + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=self.shape[0]), out=row_ptr[1:])
        return CsrMatrix(row_ptr, new_cols[keep], self.values[keep],
                         (self.shape[0], idx.size), check=False)
