"""Exact dense linear algebra: reduced row echelon form, rank, kernel."""

from __future__ import annotations


class DenseMatrix:
    """Immutable dense matrix whose entries all live in one field."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field, rows, ncols=None):
        rows = tuple(tuple(row) for row in rows)
        if rows:
            ncols = len(rows[0])
            if any(len(r) != ncols for r in rows):
                raise ValueError("ragged rows")
        elif ncols is None:
            ncols = 0
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", ncols)
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("DenseMatrix is immutable")

    @classmethod
    def from_rows(cls, field, rows, ncols=None):
        return cls(field, [[field(x) for x in row] for row in rows], ncols)

    @classmethod
    def identity(cls, field, n):
        return cls(field, [[field.one if i == j else field.zero for j in range(n)]
                           for i in range(n)])

    @classmethod
    def zeros(cls, field, nrows, ncols):
        return cls(field, [[field.zero] * ncols for _ in range(nrows)], ncols)

    def entry(self, i, j):
        return self.rows[i][j]

    def transpose(self):
        return DenseMatrix(self.field, list(zip(*self.rows)), self.nrows)

    def add(self, other):
        f = self.field
        if other.field != f or (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape or field mismatch")
        return DenseMatrix(f, [[f.add(a, b) for a, b in zip(r, s)]
                               for r, s in zip(self.rows, other.rows)], self.ncols)

    def scale(self, c):
        f = self.field
        c = f(c)
        return DenseMatrix(f, [[f.mul(c, x) for x in r] for r in self.rows], self.ncols)

    def mul_vector(self, v):
        f = self.field
        if len(v) != self.ncols:
            raise ValueError("length mismatch")
        out = []
        for row in self.rows:
            acc = f.zero
            for a, x in zip(row, v):
                acc = f.add(acc, f.mul(a, x))
            out.append(acc)
        return out

    def __eq__(self, other):
        return (isinstance(other, DenseMatrix) and self.field == other.field
                and self.rows == other.rows and self.ncols == other.ncols)

    def __hash__(self):
        return hash((self.field, self.ncols, self.rows))

    def __repr__(self):
        return f"DenseMatrix({self.nrows}x{self.ncols} over {self.field})"


def rref(matrix: DenseMatrix):
    """Gauss-Jordan elimination.

    Returns ``(reduced, rank, pivots)`` where ``reduced`` is the unique
    reduced row echelon form and ``pivots`` is the strictly increasing tuple
    of pivot column indices.
    """
    f = matrix.field
    m = [list(r) for r in matrix.rows]
    nrows, ncols = matrix.nrows, matrix.ncols
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pr = None
        for i in range(r, nrows):
            if not f.is_zero(m[i][c]):
                pr = i
                break
        if pr is None:
            continue
        if pr != r:
            m[r], m[pr] = m[pr], m[r]
        inv = f.inv(m[r][c])
        m[r] = [f.mul(inv, x) for x in m[r]]
        for i in range(nrows):
            if i != r and not f.is_zero(m[i][c]):
                q = m[i][c]
                m[i] = [f.sub(x, f.mul(q, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return DenseMatrix(f, m, ncols), r, tuple(pivots)


def kernel_basis(matrix: DenseMatrix) -> DenseMatrix:
    """Basis of the right null space, one vector per row.

    Row count equals ``ncols - rank``; every row v satisfies M v^T = 0.
    """
    f = matrix.field
    reduced, rank, pivots = rref(matrix)
    pivot_set = set(pivots)
    free = [c for c in range(matrix.ncols) if c not in pivot_set]
    rows = []
    for j in free:
        v = [f.zero] * matrix.ncols
        v[j] = f.one
        for r, pc in enumerate(pivots):
            v[pc] = f.neg(reduced.rows[r][j])
        rows.append(v)
    return DenseMatrix(f, rows, matrix.ncols)


def row_space_basis(matrix: DenseMatrix) -> DenseMatrix:
    """The nonzero rows of the reduced row echelon form."""
    f = matrix.field
    reduced, rank, _ = rref(matrix)
    return DenseMatrix(f, reduced.rows[:rank], matrix.ncols)
