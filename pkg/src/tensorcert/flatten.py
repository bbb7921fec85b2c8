"""Catalecticant and split flattenings of multihomogeneous tensors.

A split assigns to every group a pair ``a_i + b_i = d_i``.  The flattening of
a tensor T at a split is the matrix whose row for a differentiation monomial
m of multidegree a holds the coefficients of the iterated partial derivative
of T by m, written in the multidegree-b monomial basis.  For a single group
this is the s-th catalecticant matrix of the form.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .linalg import DenseMatrix, rref, row_space_basis
from .poly import TensorSpace, dimension_of_multidegree, monomial_basis


class SplitError(ValueError):
    """No admissible flattening split exists for the requested rank."""


@dataclass(frozen=True)
class Split:
    a: tuple
    b: tuple
    dim_a: int
    dim_b: int

    @classmethod
    def of(cls, space: TensorSpace, a) -> "Split":
        a = tuple(int(x) for x in a)
        if len(a) != space.p:
            raise ValueError(f"split needs {space.p} entries")
        if any(not (0 <= ai <= di) for ai, di in zip(a, space.degrees)):
            raise ValueError(f"split {a} out of range for degrees {space.degrees}")
        b = tuple(d - ai for ai, d in zip(a, space.degrees))
        return cls(a, b,
                   dimension_of_multidegree(space.sizes, a),
                   dimension_of_multidegree(space.sizes, b))

    @property
    def s(self) -> int:
        """Symmetric shorthand; only meaningful for a single group."""
        if len(self.a) != 1:
            raise ValueError("s is defined for single-group splits only")
        return self.a[0]


def choose_split(space: TensorSpace, h: int, mode: str = "minimal") -> Split:
    """Pick a split suited to target rank h.

    ``minimal`` (single group only) returns the smallest s with
    binom(n+s, n) >= h, so that binom(n+s-1, n) < h as well.  ``balanced``
    takes a_i = ceil(d_i/2).  Raises SplitError when no admissible split
    reaches dim V_A >= h.
    """
    if h < 1:
        raise ValueError("h must be >= 1")
    if mode == "minimal":
        if space.p != 1:
            raise SplitError("minimal splits are defined for a single group")
        n = space.sizes[0] - 1
        d = space.degrees[0]
        for s in range(d + 1):
            if comb(n + s, n) >= h:
                return Split.of(space, (s,))
        raise SplitError(
            f"no admissible split: dim V_A is at most {comb(n + d, n)} < {h}")
    if mode == "balanced":
        a = tuple((d + 1) // 2 for d in space.degrees)
        split = Split.of(space, a)
        if split.dim_a < h:
            raise SplitError(
                f"balanced split has dim V_A = {split.dim_a} < {h}")
        return split
    raise ValueError(f"unknown split mode {mode!r}")


def default_split(space: TensorSpace, h: int) -> Split:
    """Minimal split for one group, balanced split for several."""
    return choose_split(space, h, "minimal" if space.p == 1 else "balanced")


@dataclass(frozen=True)
class Flattening:
    tensor: object
    split: Split
    matrix: DenseMatrix
    rank: int


def flatten(T, split: Split) -> Flattening:
    """Build the flattening matrix of T at the given split and record its rank."""
    space = T.space
    deg = T.multidegree()
    if deg is not None and deg != space.degrees:
        raise ValueError(f"tensor multidegree {deg} differs from space {space.degrees}")
    if tuple(ai + bi for ai, bi in zip(split.a, split.b)) != space.degrees:
        raise ValueError("split does not match the space multidegree")
    p = T.field.modulus
    if p is not None and p <= max(space.degrees):
        raise ValueError(
            f"prime modulus {p} <= max degree {max(space.degrees)}: derivative "
            "coefficients may vanish; choose a larger prime")
    row_monos = monomial_basis(space, split.a)
    col_index = {m: j for j, m in enumerate(monomial_basis(space, split.b))}
    zero = T.field.zero
    rows = []
    for m in row_monos:
        row = [zero] * len(col_index)
        for mono, c in T.derivative_by(m).terms.items():
            row[col_index[mono]] = c
        rows.append(row)
    matrix = DenseMatrix(T.field, rows, len(col_index))
    _, rank, _ = rref(matrix)
    return Flattening(T, split, matrix, rank)


def image_span(fl: Flattening) -> DenseMatrix:
    """Canonical basis of the row space: the span of the partial derivatives."""
    return row_space_basis(fl.matrix)
