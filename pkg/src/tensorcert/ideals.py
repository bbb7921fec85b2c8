"""Groebner engine and classification of linear-section schemes.

The scheme cut on a (Segre-)Veronese variety by a linear subspace is pulled
back to the source product of projective spaces as a multihomogeneous ideal.
Its status is decided on the Hilbert function of the leading-term ideal of a
reduced Groebner basis:

* a single group of variables gets the exact Hilbert series of the monomial
  ideal (recursive pivot decomposition), hence exact dimension and degree;
* several groups are decided on the diagonal Hilbert profile t -> HF(t,..,t),
  with a stabilization rule and a hard cap, never guessing: when the cap is
  reached the verdict is Inconclusive;
* ideals of binary forms skip Groebner bases entirely: the scheme is the
  divisor of the gcd of the generators.

Buchberger runs with Gebauer-Moeller pair elimination and sugar selection;
over the rationals the reduction arithmetic is fraction free on primitive
integer polynomials.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from heapq import heapify, heappop, heappush
from math import comb, gcd

from .fields import QQ
from .linalg import DenseMatrix, kernel_basis
from .poly import MPoly, TensorSpace, monomial_basis, monomial_multinomial

DEFAULT_PAIR_BUDGET = 500_000


class BudgetExceededError(RuntimeError):
    """S-pair budget of a Groebner run exhausted."""


class Ideal:
    """Multihomogeneous ideal given by generators in one space and field."""

    __slots__ = ("space", "field", "generators", "multidegrees")

    def __init__(self, space: TensorSpace, generators, field=None):
        gens = []
        for g in generators:
            if not isinstance(g, MPoly) or g.space != space:
                raise ValueError("generators must be MPoly over the given space")
            if not g:
                continue
            gens.append(g)
        if field is None:
            field = gens[0].field if gens else QQ
        if any(g.field != field for g in gens):
            raise ValueError("generators use mixed fields")
        self.space = space
        self.field = field
        self.generators = tuple(gens)
        self.multidegrees = tuple(g.multidegree() for g in gens)

    def __len__(self):
        return len(self.generators)


def pullback_linear_section(span: DenseMatrix, space: TensorSpace, b) -> Ideal:
    """Ideal of the section of the multidegree-b variety by the row space of span.

    Span rows hold polynomial coefficients; dividing column m by its
    multinomial rewrites them in tensor coordinates, where the variety is
    parametrized by the plain monomials.  Every kernel vector c of the scaled
    matrix is a linear form sum c_m z_m vanishing on the span, and
    substituting the parametrization turns it into the multidegree-b
    polynomial sum c_m m(x).
    """
    b = tuple(int(x) for x in b)
    basis = monomial_basis(space, b)
    if span.ncols != len(basis):
        raise ValueError(
            f"span has {span.ncols} columns, multidegree {b} basis has {len(basis)}")
    field = span.field
    if field.modulus is not None and field.modulus <= max(b, default=0):
        raise ValueError(
            f"prime modulus {field.modulus} <= max degree {max(b)}: monomial "
            "multinomials may vanish; choose a larger prime")
    scale = [field.inv(field(monomial_multinomial(space, m))) for m in basis]
    scaled = DenseMatrix(field, [[field.mul(c, s) for c, s in zip(row, scale)]
                                 for row in span.rows], span.ncols)
    gens = []
    for row in kernel_basis(scaled).rows:
        terms = {m: c for m, c in zip(basis, row) if not field.is_zero(c)}
        gens.append(MPoly(space, terms, field, _clean=True))
    return Ideal(space, gens, field)


@dataclass(frozen=True)
class SchemeReport:
    """Decision record for one linear-section scheme."""

    status: str                      # Empty | ZeroDim | PositiveDim | Inconclusive
    length: int = None               # set exactly when status == ZeroDim
    trace: tuple = ()                # ((t, hilbert value), ...)
    method: str = ""
    note: str = ""
    budget_exhausted: bool = False

    def __post_init__(self):
        if self.status == "ZeroDim" and (self.length is None or self.length < 1):
            raise ValueError("zero dimensional schemes have length >= 1")

    def describe(self) -> str:
        if self.status == "ZeroDim":
            return f"ZeroDim({self.length})"
        return self.status

    def trace_text(self) -> str:
        """Hilbert profile as one text line per sampled degree."""
        lines = [f"hilbert[{t}] = {v}" for t, v in self.trace]
        lines.append(f"status: {self.describe()} ({self.method})")
        if self.note:
            lines.append(f"note: {self.note}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# monomial helpers on flat exponent tuples


def _m_lcm(a, b):
    return tuple(map(max, a, b))


def _m_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _m_divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _m_div(a, b):
    return tuple(x - y for x, y in zip(a, b))


class _Engine:
    """Buchberger state: basis polynomials as primitive/monic int dicts."""

    def __init__(self, space: TensorSpace, field, budget):
        self.space = space
        self.field = field
        self.modulus = field.modulus
        self.budget = budget if budget is not None else DEFAULT_PAIR_BUDGET
        self.pairs_done = 0
        self.slices = space.group_slices
        self._keys = {}
        self._negkeys = {}
        self.polys = []   # dict mono -> int
        self.lts = []
        self.lcs = []
        self.sugars = []

    # -- order -------------------------------------------------------------

    def key(self, m):
        k = self._keys.get(m)
        if k is None:
            parts = []
            for sl in self.slices:
                block = m[sl]
                parts.append(sum(block))
                parts.append(tuple(-e for e in reversed(block)))
            k = tuple(parts)
            self._keys[m] = k
        return k

    def negkey(self, m):
        k = self._negkeys.get(m)
        if k is None:
            parts = []
            for sl in self.slices:
                block = m[sl]
                parts.append(-sum(block))
                parts.append(tuple(reversed(block)))
            k = tuple(parts)
            self._negkeys[m] = k
        return k

    # -- coefficient normalization ------------------------------------------

    def prepare(self, poly: MPoly):
        """MPoly -> int-coefficient dict (primitive over QQ, monic over Fp)."""
        if self.modulus is None:
            den = 1
            for c in poly.terms.values():
                den = den * c.denominator // gcd(den, c.denominator)
            terms = {m: int(c * den) for m, c in poly.terms.items()}
            return self.strip_content(terms)
        terms = {m: c % self.modulus for m, c in poly.terms.items()}
        return self.make_monic(terms)

    def strip_content(self, terms):
        if not terms:
            return terms
        content = 0
        for c in terms.values():
            content = gcd(content, c)
            if content == 1:
                break
        lt = max(terms, key=self.key)
        if terms[lt] < 0:
            content = -content
        if content != 1:
            terms = {m: c // content for m, c in terms.items()}
        return terms

    def make_monic(self, terms):
        if not terms:
            return terms
        lt = max(terms, key=self.key)
        inv = pow(terms[lt], -1, self.modulus)
        if inv != 1:
            terms = {m: c * inv % self.modulus for m, c in terms.items()}
        return terms

    def normalize(self, terms):
        return self.make_monic(terms) if self.modulus is not None else self.strip_content(terms)

    # -- reduction -----------------------------------------------------------

    def _find_reducer(self, m, skip=None):
        for i, lt in enumerate(self.lts):
            if i != skip and _m_divides(lt, m):
                return i
        return None

    def normal_form(self, terms, skip=None):
        """Fully reduce a term dict against the current basis."""
        p = dict(terms)
        if not p:
            return p
        modulus = self.modulus
        done = set()
        heap = [(self.negkey(m), m) for m in p]
        heapify(heap)
        steps = 0
        while heap:
            _, m = heappop(heap)
            if m in done or m not in p:
                continue
            i = self._find_reducer(m, skip)
            if i is None:
                done.add(m)
                continue
            g = self.polys[i]
            glt = self.lts[i]
            shift = _m_div(m, glt)
            c = p[m]
            if modulus is None:
                glc = self.lcs[i]
                common = gcd(c, glc)
                mult_p = glc // common
                mult_g = c // common
                if mult_p != 1:
                    for k in p:
                        p[k] *= mult_p
            else:
                mult_g = c
            for gm, gc in g.items():
                k = _m_mul(gm, shift) if any(shift) else gm
                old = p.get(k)
                v = (old or 0) - mult_g * gc
                if modulus is not None:
                    v %= modulus
                if v:
                    if old is None and k not in done:
                        heappush(heap, (self.negkey(k), k))
                    p[k] = v
                else:
                    p.pop(k, None)
            steps += 1
            if modulus is None and steps % 64 == 0 and p:
                p = self.strip_content(p)
        return self.normalize(p)

    # -- pair management (Gebauer-Moeller) ------------------------------------

    def _pair_meta(self, i, j):
        lcm = _m_lcm(self.lts[i], self.lts[j])
        tdeg = sum(lcm)
        sugar = max(self.sugars[i] + tdeg - sum(self.lts[i]),
                    self.sugars[j] + tdeg - sum(self.lts[j]))
        return (sugar, self.key(lcm))

    def update_pairs(self, pairs, f_idx):
        """Add basis element f_idx, pruning by the Gebauer-Moeller criteria."""
        lts = self.lts
        lmf = lts[f_idx]
        kept = {}
        for (i, j), meta in pairs.items():
            l = _m_lcm(lts[i], lts[j])
            if (not _m_divides(lmf, l)
                    or l == _m_lcm(lts[i], lmf)
                    or l == _m_lcm(lts[j], lmf)):
                kept[(i, j)] = meta
        lcm_groups = {}
        for i in range(f_idx):
            lcm_groups.setdefault(_m_lcm(lts[i], lmf), []).append(i)
        minimal = []
        for l in sorted(lcm_groups, key=self.key):
            if all(not _m_divides(m, l) for m in minimal):
                minimal.append(l)
        for l in minimal:
            if any(_m_lcm(lts[i], lmf) == _m_mul(lts[i], lmf) for i in lcm_groups[l]):
                continue  # Buchberger's coprime criterion
            i = min(lcm_groups[l])
            kept[(i, f_idx)] = self._pair_meta(i, f_idx)
        return kept

    def add_poly(self, terms, sugar=None):
        lt = max(terms, key=self.key)
        self.polys.append(terms)
        self.lts.append(lt)
        self.lcs.append(terms[lt])
        self.sugars.append(sum(lt) if sugar is None else sugar)
        return len(self.polys) - 1

    def s_poly(self, i, j):
        lcm = _m_lcm(self.lts[i], self.lts[j])
        si = _m_div(lcm, self.lts[i])
        sj = _m_div(lcm, self.lts[j])
        gi, gj = self.polys[i], self.polys[j]
        if self.modulus is None:
            ci, cj = self.lcs[i], self.lcs[j]
            common = gcd(ci, cj)
            mi, mj = cj // common, ci // common
        else:
            mi = mj = 1
        out = {}
        for m, c in gi.items():
            out[_m_mul(m, si)] = mi * c
        for m, c in gj.items():
            k = _m_mul(m, sj)
            v = out.get(k, 0) - mj * c
            if self.modulus is not None:
                v %= self.modulus
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return out

    def run(self, generators):
        """Compute a reduced Groebner basis of the generator dicts."""
        prepared = sorted((g for g in generators if g),
                          key=lambda g: self.key(max(g, key=self.key)))
        pairs = {}
        for g in prepared:
            r = self.normal_form(g)
            if not r:
                continue
            idx = self.add_poly(r)
            pairs = self.update_pairs(pairs, idx)
        while pairs:
            pair = min(pairs, key=lambda q: pairs[q])
            sugar = pairs[pair][0]
            del pairs[pair]
            self.pairs_done += 1
            if self.pairs_done > self.budget:
                raise BudgetExceededError(
                    f"S-pair budget of {self.budget} exhausted")
            s = self.s_poly(*pair)
            r = self.normal_form(s)
            if not r:
                continue
            idx = self.add_poly(r, sugar)
            pairs = self.update_pairs(pairs, idx)
        return self._interreduce()

    def _interreduce(self):
        order = sorted(range(len(self.polys)), key=lambda i: self.key(self.lts[i]))
        kept = []
        for i in order:
            if not any(_m_divides(self.lts[k], self.lts[i]) for k in kept):
                kept.append(i)
        self.polys = [self.polys[i] for i in kept]
        self.lts = [self.lts[i] for i in kept]
        self.lcs = [self.lcs[i] for i in kept]
        self.sugars = [self.sugars[i] for i in kept]
        reduced = []
        for i in range(len(self.polys)):
            reduced.append(self.normal_form(self.polys[i], skip=i))
        self.polys = reduced
        self.lcs = [p[lt] for p, lt in zip(self.polys, self.lts)]
        return reduced


class GroebnerBasis:
    """Reduced Groebner basis under the blockwise graded reverse lex order."""

    order = "grevlex within each group, groups by index"

    def __init__(self, space: TensorSpace, field, polys, lead_terms):
        self.space = space
        self.field = field
        self.polys = tuple(polys)
        self.lead_terms = tuple(lead_terms)

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    @cached_property
    def numerator(self):
        """Hilbert series numerator of the leading-term ideal (per-group grading)."""
        return _series_numerator(self.lead_terms, self.space)


def buchberger(ideal: Ideal, budget=None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal; may raise BudgetExceededError."""
    engine = _Engine(ideal.space, ideal.field, budget)
    dicts = engine.run([engine.prepare(g) for g in ideal.generators])
    field = ideal.field
    polys = []
    for terms, lt in zip(dicts, engine.lts):
        lc = terms[lt]
        if field.modulus is None:
            coeffs = {m: Fraction(c, lc) for m, c in terms.items()}
        else:
            inv = pow(lc, -1, field.modulus)
            coeffs = {m: c * inv % field.modulus for m, c in terms.items()}
        polys.append(MPoly(ideal.space, coeffs, field, _clean=True))
    return GroebnerBasis(ideal.space, field, polys, engine.lts)


# ---------------------------------------------------------------------------
# Hilbert series numerator of a monomial ideal


def _minimalize(monos):
    out = []
    for m in sorted(monos, key=sum):
        if not any(_m_divides(g, m) for g in out):
            out.append(m)
    return out


def _poly_mul_one_minus(num, v):
    # num * (1 - T^v) on multidegree dicts
    out = dict(num)
    for e, c in num.items():
        k = tuple(x + y for x, y in zip(e, v))
        w = out.get(k, 0) - c
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def _series_numerator(lead_terms, space: TensorSpace):
    """Numerator K with HS(R/I) = K(T_1..T_p) / prod (1-T_i)^{sizes[i]}."""
    p = space.p
    zero_deg = (0,) * p
    group_of = [space.group_of_var(i) for i in range(space.nvars)]

    def mdeg(mono):
        return space.multidegree_of(mono)

    def recurse(gens):
        if not gens:
            return {zero_deg: 1}
        non_simple = [m for m in gens if sum(1 for e in m if e) > 1]
        if not non_simple:
            num = {zero_deg: 1}
            for m in gens:
                num = _poly_mul_one_minus(num, mdeg(m))
            return num
        counts = [0] * space.nvars
        for m in non_simple:
            for i, e in enumerate(m):
                if e:
                    counts[i] += 1
        pivot = max(range(space.nvars), key=lambda i: counts[i])
        pivot_mono = tuple(1 if i == pivot else 0 for i in range(space.nvars))
        added = _minimalize([m for m in gens if m[pivot] == 0] + [pivot_mono])
        colon = _minimalize([
            m[:pivot] + (m[pivot] - 1,) + m[pivot + 1:] if m[pivot] else m
            for m in gens])
        num = recurse(added)
        shift = tuple(1 if g == group_of[pivot] else 0 for g in range(p))
        for e, c in recurse(colon).items():
            k = tuple(x + y for x, y in zip(e, shift))
            w = num.get(k, 0) + c
            if w:
                num[k] = w
            else:
                num.pop(k, None)
        return num

    return recurse(_minimalize(list(lead_terms)))


def _standard_count(num, space: TensorSpace, deg):
    """Monomials of the multidegree not divisible by any leading term."""
    dims = space.projective_dims
    total = 0
    for e, c in num.items():
        prod = 1
        for t, ei, n in zip(deg, e, dims):
            m = t - ei
            if m < 0:
                prod = 0
                break
            prod *= comb(m + n, n)
        if prod:
            total += c * prod
    return total


def hilbert_value(gb: GroebnerBasis, deg) -> int:
    """Dimension of the degree-deg graded piece of the quotient ring."""
    deg = tuple(int(d) for d in deg)
    if len(deg) != gb.space.p or any(d < 0 for d in deg):
        raise ValueError(f"bad multidegree {deg}")
    return _standard_count(gb.numerator, gb.space, deg)


# ---------------------------------------------------------------------------
# classification


def classify_linear_section(ideal: Ideal, expected_length=None, *, budget=None,
                            t_cap=None, use_binary_path=True) -> SchemeReport:
    """Decide Empty / ZeroDim(length) / PositiveDim for the section scheme.

    Resource exhaustion or an insufficient profile cap yields Inconclusive,
    never a wrong verdict.
    """
    space = ideal.space
    if not ideal.generators:
        # zero ideal: the whole variety, of dimension >= 1
        return SchemeReport("PositiveDim", method="empty-generators")
    if use_binary_path and space.p == 1 and space.sizes[0] == 2:
        return binary_fast_path(ideal)
    try:
        gb = buchberger(ideal, budget=budget)
    except BudgetExceededError as exc:
        return SchemeReport("Inconclusive", method="groebner",
                            note=str(exc), budget_exhausted=True)
    if space.p == 1:
        return _classify_single_graded(gb)
    return _classify_multigraded(gb, ideal, expected_length, t_cap)


def _classify_single_graded(gb: GroebnerBasis) -> SchemeReport:
    space = gb.space
    v = space.sizes[0]
    num = gb.numerator
    if not num:
        # unit ideal: the quotient ring is zero
        return SchemeReport("Empty", method="hilbert-series")
    top = max(e[0] for e in num)
    coeffs = [0] * (top + 1)
    for e, c in num.items():
        coeffs[e[0]] = c
    # split off the full power of (1 - T)
    drops = 0
    while sum(coeffs) == 0:
        coeffs = list(itertools.accumulate(coeffs[:-1]))
        drops += 1
    krull = v - drops
    trace = tuple((t, _standard_count(num, space, (t,))) for t in range(top + 3))
    if krull <= 0:
        return SchemeReport("Empty", trace=trace, method="hilbert-series")
    if krull == 1:
        return SchemeReport("ZeroDim", length=sum(coeffs), trace=trace,
                            method="hilbert-series")
    return SchemeReport("PositiveDim", trace=trace, method="hilbert-series")


def _classify_multigraded(gb: GroebnerBasis, ideal: Ideal, expected_length,
                          t_cap) -> SchemeReport:
    space = gb.space
    p, n = space.p, space.total_projective_dim
    num = gb.numerator
    exact_from = max((max(e) for e in num), default=0)
    gen_cap = tuple(max(d[i] for d in ideal.multidegrees) for i in range(p))
    length_guess = expected_length if expected_length and expected_length > 0 else 1
    t_min = sum(gen_cap) * length_guess
    t_trust = max(t_min, exact_from)
    t_top = t_cap if t_cap is not None else t_trust + n + 3

    profile = []
    for t in range(t_top + 1):
        val = _standard_count(num, space, (t,) * p)
        profile.append(val)
        if val == 0:
            # standard monomials are closed under division, so the diagonal
            # Hilbert function stays zero from here on (t = 0 means the
            # ideal is the unit ideal)
            trace = tuple(enumerate(profile))
            return SchemeReport("Empty", trace=trace, method="diagonal-profile")
    trace = tuple(enumerate(profile))

    seq = profile
    for k in range(n + 1):
        if k > 0:
            seq = [b - a for a, b in zip(seq, seq[1:])]
        window = n - k + 3
        start_t = t_top - k - (window - 1)
        if len(seq) < window or start_t < t_trust:
            continue
        tail = seq[-window:]
        if all(x == tail[0] for x in tail):
            value = tail[0]
            if k == 0:
                return SchemeReport("ZeroDim", length=value, trace=trace,
                                    method="diagonal-profile")
            if value != 0:
                return SchemeReport("PositiveDim", trace=trace,
                                    method="diagonal-profile")
    return SchemeReport("Inconclusive", trace=trace, method="diagonal-profile",
                        note=f"diagonal profile cap {t_top} reached before stabilization")


# ---------------------------------------------------------------------------
# binary forms: the scheme is the divisor of the gcd


def _int_coeff_list(poly: MPoly):
    # binary form -> little-endian int list indexed by the x1_0 exponent
    d = poly.multidegree()[0]
    out = [0] * (d + 1)
    if poly.field.modulus is None:
        den = 1
        for c in poly.terms.values():
            den = den * c.denominator // gcd(den, c.denominator)
        for (i, _), c in poly.terms.items():
            out[i] = int(c * den)
    else:
        for (i, _), c in poly.terms.items():
            out[i] = c
    return out


def _deg(u):
    for i in range(len(u) - 1, -1, -1):
        if u[i]:
            return i
    return -1


def _primitive(u):
    g = 0
    for c in u:
        g = gcd(g, c)
        if g == 1:
            return u
    if g == 0:
        return []
    return [c // g for c in u]


def _pseudo_rem(u, v):
    # lead(v)^(du-dv+1) * u  mod  v, all over the integers
    du, dv = _deg(u), _deg(v)
    u = list(u[:du + 1])
    lead = v[dv]
    for i in range(du - dv, -1, -1):
        c = u[i + dv]
        for j in range(i + dv):
            u[j] *= lead
        u[i + dv] = 0
        if c:
            for j in range(dv):
                u[i + j] -= c * v[j]
    return u[:dv] or [0]


def _gcd_int_poly(u, v):
    u, v = _primitive(u), _primitive(v)
    if _deg(u) < _deg(v):
        u, v = v, u
    while _deg(v) >= 0:
        r = _primitive(_pseudo_rem(u, v))
        u, v = v, r
    return u


def _gcd_mod_poly(u, v, p):
    if _deg(u) < _deg(v):
        u, v = v, u
    u = [c % p for c in u]
    v = [c % p for c in v]
    while _deg(v) >= 0:
        du, dv = _deg(u), _deg(v)
        inv = pow(v[dv], -1, p)
        while du >= dv:
            c = u[du] * inv % p
            if c:
                for j in range(dv + 1):
                    u[du - dv + j] = (u[du - dv + j] - c * v[j]) % p
            du = _deg(u)
        u, v = v, u[:dv] or [0]
    return u


def binary_fast_path(ideal: Ideal) -> SchemeReport:
    """Scheme of binary forms via the exact gcd of the generators.

    A nonzero ideal of binary forms always cuts a finite divisor whose length
    is the degree of the homogeneous gcd; a zero ideal leaves the whole line.
    """
    space = ideal.space
    if space.p != 1 or space.sizes[0] != 2:
        raise ValueError("binary fast path needs a single group of 2 variables")
    if not ideal.generators:
        return SchemeReport("PositiveDim", method="binary-gcd")
    p = ideal.field.modulus
    gcd_t = None
    mult_at_infinity = None
    for g in ideal.generators:
        u = _int_coeff_list(g)
        d = len(u) - 1
        at_inf = d - _deg(u)
        mult_at_infinity = at_inf if mult_at_infinity is None else min(mult_at_infinity, at_inf)
        gcd_t = u if gcd_t is None else (
            _gcd_mod_poly(gcd_t, u, p) if p is not None else _gcd_int_poly(gcd_t, u))
    total = _deg(gcd_t) + mult_at_infinity
    if total == 0:
        return SchemeReport("Empty", method="binary-gcd")
    return SchemeReport("ZeroDim", length=total, method="binary-gcd")
