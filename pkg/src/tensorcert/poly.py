"""Multigraded sparse polynomials over exact fields.

A tensor in a product of symmetric powers is stored as a multihomogeneous
polynomial in ``p`` groups of variables.  Group ``i`` (1-based in variable
names) has ``sizes[i]`` variables ``x{i}_0 .. x{i}_{n_i}`` and carries degree
``degrees[i]``.  Monomials are flat exponent tuples across all groups.

Every basis, leading-term choice and printed form uses one deterministic
order: graded reverse lexicographic within each group, groups compared in
index order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import comb, factorial

from .fields import QQ

Mono = tuple  # exponent tuple across all variables


@dataclass(frozen=True)
class TensorSpace:
    """Ambient space descriptor: group sizes (n_i + 1) and multidegree."""

    sizes: tuple
    degrees: tuple

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        object.__setattr__(self, "degrees", tuple(int(d) for d in self.degrees))
        if len(self.sizes) < 1 or len(self.sizes) != len(self.degrees):
            raise ValueError("need one positive degree per variable group")
        if any(s < 2 for s in self.sizes):
            raise ValueError("every group needs at least 2 variables")
        if any(d < 1 for d in self.degrees):
            raise ValueError("every degree must be >= 1")

    @property
    def p(self) -> int:
        return len(self.sizes)

    @cached_property
    def nvars(self) -> int:
        return sum(self.sizes)

    @cached_property
    def group_slices(self):
        out, start = [], 0
        for s in self.sizes:
            out.append(slice(start, start + s))
            start += s
        return tuple(out)

    @cached_property
    def projective_dims(self):
        """The tuple (n_1, ..., n_p)."""
        return tuple(s - 1 for s in self.sizes)

    @cached_property
    def total_projective_dim(self) -> int:
        return sum(self.projective_dims)

    @cached_property
    def ambient_dim(self) -> int:
        """Number of coordinates of the ambient tensor space."""
        return dimension_of_multidegree(self.sizes, self.degrees)

    def multidegree_of(self, mono: Mono):
        return tuple(sum(mono[sl]) for sl in self.group_slices)

    def monomial_key(self, mono: Mono):
        """Sort key realising the blockwise graded reverse lex order."""
        parts = []
        for sl in self.group_slices:
            block = mono[sl]
            parts.append(sum(block))
            parts.append(tuple(-e for e in reversed(block)))
        return tuple(parts)

    def var_index(self, group: int, j: int) -> int:
        """Flat index of variable j (0-based) of group (1-based)."""
        if not (1 <= group <= self.p) or not (0 <= j < self.sizes[group - 1]):
            raise ValueError(f"no variable x{group}_{j} in this space")
        return self.group_slices[group - 1].start + j

    def var_name(self, index: int) -> str:
        for g, sl in enumerate(self.group_slices):
            if sl.start <= index < sl.stop:
                return f"x{g + 1}_{index - sl.start}"
        raise ValueError(f"variable index {index} out of range")

    def group_of_var(self, index: int) -> int:
        for g, sl in enumerate(self.group_slices):
            if sl.start <= index < sl.stop:
                return g
        raise ValueError(f"variable index {index} out of range")


def dimension_of_multidegree(sizes, deg) -> int:
    """Number of monomials of the given multidegree: prod binom(n_i+deg_i, n_i)."""
    out = 1
    for s, d in zip(sizes, deg):
        out *= comb(s - 1 + d, s - 1)
    return out


def monomial_multinomial(space, mono: Mono) -> int:
    """Per-group multinomial coefficient of a monomial.

    This is the factor relating the coefficient of ``mono`` in an expanded
    power of linear forms to the plain product of the forms' coordinates; it
    converts between coefficient coordinates and tensor coordinates.
    """
    out = 1
    for sl in space.group_slices:
        block = mono[sl]
        num = factorial(sum(block))
        for e in block:
            num //= factorial(e)
        out *= num
    return out


def _group_monomials(size: int, degree: int):
    # exponent tuples of one group, graded reverse lex, descending
    def compositions(k, d):
        if k == 1:
            yield (d,)
            return
        for i in range(d, -1, -1):
            for rest in compositions(k - 1, d - i):
                yield (i,) + rest

    return sorted(compositions(size, degree), key=lambda e: tuple(reversed(e)))


def monomial_basis(space: TensorSpace, deg):
    """All monomials of the exact multidegree ``deg``, in the fixed order."""
    deg = tuple(int(d) for d in deg)
    if len(deg) != space.p or any(d < 0 for d in deg):
        raise ValueError(f"bad multidegree {deg} for {space.p} groups")
    per_group = [_group_monomials(space.sizes[g], deg[g]) for g in range(space.p)]
    return [sum(parts, ()) for parts in itertools.product(*per_group)]


class MPoly:
    """Sparse multihomogeneous polynomial: monomial -> nonzero coefficient."""

    __slots__ = ("space", "field", "terms")

    def __init__(self, space, terms, field=QQ, *, _clean=False):
        self.space = space
        self.field = field
        if _clean:
            self.terms = terms
        else:
            nvars = space.nvars
            clean = {}
            for mono, c in terms.items():
                mono = tuple(mono)
                if len(mono) != nvars or any(e < 0 for e in mono):
                    raise ValueError(f"bad exponent vector {mono}")
                c = field(c)
                if not field.is_zero(c):
                    clean[mono] = c
            self.terms = clean

    @classmethod
    def zero(cls, space, field=QQ):
        return cls(space, {}, field, _clean=True)

    @classmethod
    def from_coeff_vector(cls, space, deg, coeffs, field=QQ):
        """Dense ingestion: coefficients aligned with ``monomial_basis(space, deg)``."""
        basis = monomial_basis(space, deg)
        if len(coeffs) != len(basis):
            raise ValueError(f"expected {len(basis)} coefficients, got {len(coeffs)}")
        return cls(space, dict(zip(basis, coeffs)), field)

    def _check_compatible(self, other):
        if self.space != other.space or self.field != other.field:
            raise ValueError("polynomials live in different spaces or fields")

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return (isinstance(other, MPoly) and self.space == other.space
                and self.field == other.field and self.terms == other.terms)

    def __add__(self, other):
        self._check_compatible(other)
        f = self.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = f.add(out.get(m, f.zero), c)
            if f.is_zero(v):
                out.pop(m, None)
            else:
                out[m] = v
        return MPoly(self.space, out, f, _clean=True)

    def __neg__(self):
        f = self.field
        return MPoly(self.space, {m: f.neg(c) for m, c in self.terms.items()},
                     f, _clean=True)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        f = self.field
        c = f(c)
        if f.is_zero(c):
            return MPoly.zero(self.space, f)
        return MPoly(self.space, {m: f.mul(c, v) for m, v in self.terms.items()},
                     f, _clean=True)

    def __mul__(self, other):
        self._check_compatible(other)
        f = self.field
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = f.add(out.get(m, f.zero), f.mul(c1, c2))
                if f.is_zero(v):
                    out.pop(m, None)
                else:
                    out[m] = v
        return MPoly(self.space, out, f, _clean=True)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = MPoly(self.space, {(0,) * self.space.nvars: self.field.one},
                       self.field, _clean=True)
        for _ in range(n):
            result = result * self
        return result

    def multidegree(self):
        """Common multidegree of all terms; None for the zero polynomial."""
        it = iter(self.terms)
        try:
            first = next(it)
        except StopIteration:
            return None
        deg = self.space.multidegree_of(first)
        for m in it:
            if self.space.multidegree_of(m) != deg:
                raise ValueError("polynomial is not multihomogeneous")
        return deg

    def is_multihomogeneous(self) -> bool:
        try:
            self.multidegree()
        except ValueError:
            return False
        return True

    def derivative(self, var: int):
        """Partial derivative with respect to one flat variable index."""
        f = self.field
        out = {}
        for m, c in self.terms.items():
            e = m[var]
            if e == 0:
                continue
            v = f.mul_int(c, e)
            if f.is_zero(v):
                continue
            m2 = m[:var] + (e - 1,) + m[var + 1:]
            out[m2] = v
        return MPoly(self.space, out, f, _clean=True)

    def derivative_by(self, mono: Mono):
        """Iterated raw partial derivative, one pass per unit of each exponent."""
        result = self
        for var, e in enumerate(mono):
            for _ in range(e):
                if not result:
                    return result
                result = result.derivative(var)
        return result

    def __str__(self):
        return poly_to_string(self)

    def __repr__(self):
        return f"MPoly({poly_to_string(self)})"


def partial_derivatives(F: MPoly, s: int):
    """All order-s partials of a single-group form, in monomial-basis order."""
    space = F.space
    if space.p != 1:
        raise ValueError("order-s partials are defined for a single variable group")
    d = space.degrees[0]
    if not (0 <= s <= d):
        raise ValueError(f"derivative order {s} out of range 0..{d}")
    _validate_degree(F)
    return [F.derivative_by(m) for m in monomial_basis(space, (s,))]


def mixed_partial_derivatives(T: MPoly, a):
    """Iterated partials across all groups, one per monomial of multidegree a."""
    space = T.space
    a = tuple(int(x) for x in a)
    if len(a) != space.p or any(not (0 <= ai <= di) for ai, di in zip(a, space.degrees)):
        raise ValueError(f"multidegree {a} out of range for degrees {space.degrees}")
    _validate_degree(T)
    return [T.derivative_by(m) for m in monomial_basis(space, a)]


def _validate_degree(F: MPoly):
    deg = F.multidegree()
    if deg is not None and deg != F.space.degrees:
        raise ValueError(f"polynomial has multidegree {deg}, space declares {F.space.degrees}")


def coefficient_vector(F: MPoly, basis):
    """Coefficients of F aligned with ``basis``; every term of F must occur."""
    f = F.field
    index = {m: i for i, m in enumerate(basis)}
    out = [f.zero] * len(basis)
    for m, c in F.terms.items():
        i = index.get(m)
        if i is None:
            raise ValueError(f"monomial {m} of the polynomial is missing from the basis")
        out[i] = c
    return out


def linear_form(space: TensorSpace, group: int, coeffs, field=QQ):
    """The form sum_j coeffs[j] * x{group}_j (group is 0-based here)."""
    size = space.sizes[group]
    if len(coeffs) != size:
        raise ValueError(f"group {group + 1} needs {size} coefficients")
    start = space.group_slices[group].start
    terms = {}
    for j, c in enumerate(coeffs):
        mono = [0] * space.nvars
        mono[start + j] = 1
        terms[tuple(mono)] = c
    return MPoly(space, terms, field)


def power_and_product(space: TensorSpace, forms, exponents=None, field=QQ):
    """Expand prod_i l_i^{d_i} for one linear form l_i per group.

    ``forms`` holds one coefficient sequence per group; ``exponents`` defaults
    to the space multidegree.
    """
    if exponents is None:
        exponents = space.degrees
    if len(forms) != space.p or len(exponents) != space.p:
        raise ValueError("need one linear form and one exponent per group")
    result = MPoly(space, {(0,) * space.nvars: field.one}, field, _clean=True)
    for g, (coeffs, e) in enumerate(zip(forms, exponents)):
        result = result * (linear_form(space, g, coeffs, field) ** e)
    return result


def _format_coeff(c, field) -> str:
    if field.modulus is None:
        return str(c) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return str(c)


def poly_to_string(F: MPoly) -> str:
    if not F.terms:
        return "0"
    space, field = F.space, F.field
    parts = []
    for mono in sorted(F.terms, key=space.monomial_key, reverse=True):
        c = F.terms[mono]
        factors = []
        for i, e in enumerate(mono):
            if e == 1:
                factors.append(space.var_name(i))
            elif e > 1:
                factors.append(f"{space.var_name(i)}^{e}")
        negative = field.modulus is None and c < 0
        mag = -c if negative else c
        body = _format_coeff(mag, field)
        if factors:
            body = "*".join(factors) if mag == field.one else body + "*" + "*".join(factors)
        parts.append(("- " if negative else "+ ") + body)
    first = parts[0]
    text = ("-" + first[2:]) if first.startswith("- ") else first[2:]
    for part in parts[1:]:
        text += " " + part
    return text
