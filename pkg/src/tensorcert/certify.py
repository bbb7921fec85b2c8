"""Identifiability criteria and the certification dispatcher.

Three sufficient criteria are implemented; their report labels are part of
the tool's interface:

* ``Proposition 3.1``: the flattening at a chosen split has rank h and the
  span of the derivatives cuts the multidegree-b variety in a zero
  dimensional scheme of length exactly h.  A certificate asserts that the
  tensor is h-identifiable and has rank exactly h.
* ``Proposition 3.3``: for an explicit decomposition, the boundary regime
  where the section may pick up one extra point; two arithmetic conditions
  plus a length check on the span of the rank-one terms themselves.
* ``Theorem 3.7``: the three exceptional single-group families where the
  criterion is full-rank of the catalecticant plus emptiness of the section.

Verdicts are only Certified or Inconclusive: these are sufficient conditions,
so failure never claims non-identifiability.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .fields import QQ
from .flatten import Split, SplitError, default_split, flatten, image_span
from .ideals import SchemeReport, classify_linear_section, pullback_linear_section
from .linalg import DenseMatrix, row_space_basis
from .poly import MPoly, TensorSpace, coefficient_vector, monomial_basis, power_and_product

CRITERION_LABELS = {
    "Prop31": "Proposition 3.1",
    "Prop33": "Proposition 3.3",
    "Thm37": "Theorem 3.7",
}


@dataclass(frozen=True)
class Check:
    """One verified condition: what was computed and what was required."""

    name: str
    computed: object
    required: object
    passed: bool
    detail: dict = None


@dataclass
class Certificate:
    criterion: str            # Prop31 | Prop33 | Thm37 | None
    verdict: str              # Certified | Inconclusive
    h: int
    space: TensorSpace
    checks: tuple = ()
    label: str = ""
    reason: str = None
    split: Split = None
    family: tuple = None      # (n, d, h, s) for Thm37
    effective: bool = False
    field_mode: str = "exact"
    prime: int = None
    seconds: float = 0.0
    budget_exhausted: bool = False

    @property
    def certified(self) -> bool:
        return self.verdict == "Certified"

    def summary_lines(self):
        """Text report in the spirit of an interactive session log."""
        space = self.space
        if space.p == 1:
            lines = [f"got symmetric tensor of dimension {space.sizes[0]} "
                     f"and degree {space.degrees[0]}"]
        else:
            lines = [f"got mixed symmetric tensor of dimensions {list(space.sizes)} "
                     f"and multidegree {list(space.degrees)}"]
        if self.criterion in ("Thm37", "Prop33"):
            lines.append(f"applying {self.label}...")
        for c in self.checks:
            status = "pass" if c.passed else "fail"
            lines.append(f"check {c.name}: computed {c.computed}, "
                         f"required {c.required} -> {status}")
        if self.certified:
            if self.criterion == "Prop31":
                lines.append(f"specific {self.h}-identifiability certified")
            else:
                lines.append(f"{self.h}-identifiability certified")
        else:
            reason = self.reason or "conditions not satisfied"
            lines.append(f"{self.h}-identifiability not certified: {reason}")
        mode = self.field_mode if self.prime is None else f"{self.field_mode} mod {self.prime}"
        lines.append(f"field: {mode}; proven-effective range: "
                     f"{'yes' if self.effective else 'no'}; "
                     f"time: {self.seconds:.3f}s")
        return lines

    def to_json_dict(self) -> dict:
        def scalarize(v):
            if isinstance(v, Fraction):
                return str(v) if v.denominator != 1 else int(v)
            if isinstance(v, (list, tuple)):
                return [scalarize(x) for x in v]
            if isinstance(v, dict):
                return {k: scalarize(x) for k, x in v.items()}
            return v

        return {
            "schema_version": 1,
            "criterion": self.criterion,
            "label": self.label,
            "verdict": self.verdict,
            "reason": self.reason,
            "h": self.h,
            "space": {"sizes": list(self.space.sizes),
                      "degrees": list(self.space.degrees)},
            "split": None if self.split is None else
                     {"a": list(self.split.a), "b": list(self.split.b),
                      "dim_a": self.split.dim_a, "dim_b": self.split.dim_b},
            "family": None if self.family is None else list(self.family),
            "checks": [{"name": c.name,
                        "computed": scalarize(c.computed),
                        "required": scalarize(c.required),
                        "passed": c.passed,
                        "detail": scalarize(c.detail)}
                       for c in self.checks],
            "effective": self.effective,
            "field": {"mode": self.field_mode, "prime": self.prime},
            "budget_exhausted": self.budget_exhausted,
            "timing_seconds": self.seconds,
        }


class Decomposition:
    """An ordered list of rank-one terms, one tuple of linear forms each."""

    __slots__ = ("space", "field", "terms", "lambdas")

    def __init__(self, space: TensorSpace, terms, lambdas=None, field=QQ):
        clean_terms = []
        for term in terms:
            if len(term) != space.p:
                raise ValueError("each term needs one linear form per group")
            forms = []
            for g, coeffs in enumerate(term):
                coeffs = tuple(field(c) for c in coeffs)
                if len(coeffs) != space.sizes[g]:
                    raise ValueError(f"group {g + 1} form needs {space.sizes[g]} entries")
                if all(field.is_zero(c) for c in coeffs):
                    raise ValueError("zero linear form in a rank-one term")
                forms.append(coeffs)
            clean_terms.append(tuple(forms))
        if not clean_terms:
            raise ValueError("a decomposition needs at least one term")
        if lambdas is not None:
            lambdas = tuple(field(x) for x in lambdas)
            if len(lambdas) != len(clean_terms):
                raise ValueError("one coefficient per term expected")
            if any(field.is_zero(x) for x in lambdas):
                raise ValueError("zero coefficient in a decomposition")
        for i, j in itertools.combinations(range(len(clean_terms)), 2):
            if _terms_proportional(field, clean_terms[i], clean_terms[j]):
                raise ValueError(f"terms {i} and {j} are proportional")
        self.space = space
        self.field = field
        self.terms = tuple(clean_terms)
        self.lambdas = lambdas

    @property
    def h(self) -> int:
        return len(self.terms)

    def term_polynomial(self, i: int) -> MPoly:
        out = power_and_product(self.space, self.terms[i], field=self.field)
        if self.lambdas is not None:
            out = out.scale(self.lambdas[i])
        return out

    def expand(self) -> MPoly:
        total = MPoly.zero(self.space, self.field)
        for i in range(self.h):
            total = total + self.term_polynomial(i)
        return total


def _terms_proportional(field, t1, t2) -> bool:
    for u, v in zip(t1, t2):
        for i, j in itertools.combinations(range(len(u)), 2):
            if field.mul(u[i], v[j]) != field.mul(u[j], v[i]):
                return False
    return True


# ---------------------------------------------------------------------------
# numeric ranges


def effective_range(space: TensorSpace, split: Split, h: int) -> bool:
    """Whether the split lies in the proven-effective range: dim V_B > h + n."""
    return split.dim_b > h + space.total_projective_dim


def segre_veronese_degree(proj_dims, multideg) -> int:
    """Closed-form degree of the multidegree embedding of a product of
    projective spaces: multinomial(n; n_i) * prod d_i^{n_i}."""
    n = sum(proj_dims)
    out = factorial(n)
    for ni, di in zip(proj_dims, multideg):
        out //= factorial(ni)
        out *= di ** ni
    return out


def corollary35_bound(family: str, *, n=None, degrees=None, factors=None, dims=None) -> int:
    """Strict upper bound B of the effectiveness statement: effective for h < B."""
    if family == "mixed-symmetric":
        if n is None or degrees is None:
            raise ValueError("mixed-symmetric needs n (space dimension) and degrees")
        if n < 1 or any(d < 1 for d in degrees):
            raise ValueError("need n >= 1 and positive degrees")
        out = 1
        for d in degrees:
            out *= comb(n - 1 + d // 2, n - 1)
        return out - len(degrees) * (n - 1)
    if family == "skew":
        if n is None or degrees is None:
            raise ValueError("skew needs n (space dimension) and degrees")
        prod_dim, prod_var = 1, 1
        for d in degrees:
            m = d // 2
            prod_dim *= comb(n, m)
            prod_var *= m * (n - m)
        return prod_dim - prod_var
    if family == "segre":
        if n is None or factors is None:
            raise ValueError("segre needs n (common space dimension) and factors")
        m = factors // 2
        return n ** m - m * (n - 1)
    if family == "unbalanced-segre":
        if dims is None or len(dims) < 2:
            raise ValueError("unbalanced-segre needs the list of space dimensions")
        rest_prod = 1
        rest_sum = 0
        for ni in dims[1:]:
            rest_prod *= ni
            rest_sum += ni - 1
        bound = rest_prod - rest_sum
        if dims[0] <= 1 + bound:
            raise ValueError(
                f"product is not unbalanced: need dims[0] > {1 + bound}, got {dims[0]}")
        return bound
    raise ValueError(f"unknown family {family!r}")


def corollary35_bounds(family: str, h: int, **params) -> bool:
    """Effectiveness test by direct evaluation of the displayed inequality."""
    return h < corollary35_bound(family, **params)


# ---------------------------------------------------------------------------
# criteria


def _field_info(field):
    if field.modulus is None:
        return "exact", None
    return "probabilistic", field.modulus


def _section_checks(prefix_dim, prefix_len, report: SchemeReport, h, length_required):
    detail = {"status": report.describe(), "method": report.method,
              "trace": [list(pair) for pair in report.trace]}
    if report.note:
        detail["note"] = report.note
    zero_dim = report.status == "ZeroDim"
    checks = [Check(prefix_dim, report.describe(), "ZeroDim", zero_dim, detail)]
    if length_required:
        checks.append(Check(prefix_len, report.length if zero_dim else report.describe(),
                            h, zero_dim and report.length == h))
    return checks


def certify_prop31(T: MPoly, h: int, split: Split = None, *, budget=None,
                   t_cap=None) -> Certificate:
    """Rank + section criterion; certifies h-identifiability and rank h."""
    start = time.perf_counter()
    if h < 1:
        raise ValueError("h must be >= 1")
    space = T.space
    if split is None:
        split = default_split(space, h)      # may raise SplitError
    elif split.dim_a < h:
        raise SplitError(f"split has dim V_A = {split.dim_a} < h = {h}")
    mode, prime = _field_info(T.field)
    cert = Certificate("Prop31", "Inconclusive", h, space,
                       label=CRITERION_LABELS["Prop31"], split=split,
                       effective=effective_range(space, split, h),
                       field_mode=mode, prime=prime)
    fl = flatten(T, split)
    checks = [Check("i_flattening_rank", fl.rank, h, fl.rank == h)]
    if checks[0].passed:
        ideal = pullback_linear_section(image_span(fl), space, split.b)
        report = classify_linear_section(ideal, expected_length=h,
                                         budget=budget, t_cap=t_cap)
        checks.extend(_section_checks("ii_section_dimension",
                                      "iii_section_length", report, h, True))
        cert.budget_exhausted = report.budget_exhausted
    cert.checks = tuple(checks)
    _finish(cert, start)
    return cert


def certify_thm37(F: MPoly, h: int, *, budget=None, t_cap=None) -> Certificate:
    """Exceptional-family criterion: full catalecticant rank + empty section."""
    start = time.perf_counter()
    space = F.space
    if space.p != 1:
        raise ValueError("this criterion applies to a single group of variables")
    family = thm37_family(space, h)
    if family is None:
        raise ValueError(
            f"(n, d, h) = ({space.sizes[0] - 1}, {space.degrees[0]}, {h}) "
            "is not in one of the three certified families")
    n, d, _, s = family
    mode, prime = _field_info(F.field)
    cert = Certificate("Thm37", "Inconclusive", h, space,
                       label=(f"Theorem 3.7 ({h}-identifiability for "
                              f"{n + 1}-forms of degree {d})"),
                       family=family, effective=True,
                       field_mode=mode, prime=prime)
    split = Split.of(space, (s,))
    fl = flatten(F, split)
    full = comb(n + s, n)
    checks = [Check("a_derivative_span_rank", fl.rank, full, fl.rank == full)]
    if checks[0].passed:
        ideal = pullback_linear_section(image_span(fl), space, split.b)
        report = classify_linear_section(ideal, budget=budget, t_cap=t_cap)
        detail = {"status": report.describe(), "method": report.method,
                  "trace": [list(pair) for pair in report.trace]}
        if report.note:
            detail["note"] = report.note
        checks.append(Check("b_section_empty", report.describe(), "Empty",
                            report.status == "Empty", detail))
        cert.budget_exhausted = report.budget_exhausted
    cert.split = split
    cert.checks = tuple(checks)
    _finish(cert, start)
    return cert


def thm37_family(space: TensorSpace, h: int):
    """The quadruple (n, d, h, s) when the instance lies in a certified family."""
    if space.p != 1:
        return None
    n = space.sizes[0] - 1
    d = space.degrees[0]
    if n == 1 and h >= 2 and d == 2 * h - 1:
        return (1, d, h, h - 2)
    if (n, d, h) == (2, 5, 7):
        return (2, 5, 7, 2)
    if (n, d, h) == (3, 3, 5):
        return (3, 3, 5, 1)
    return None


def _prop33_split(space: TensorSpace, h: int):
    """Splits with dim V_A >= h satisfying the exact count dim V_B = h + n.

    Returns (split, iv_holds) for the first admissible split, preferring one
    where the variety-degree bound also holds; (None, None) when no split
    satisfies the count, (split, False) when the count holds but the degree
    bound fails everywhere.
    """
    target = h + space.total_projective_dim
    first = None
    ranges = [range(d + 1) for d in space.degrees]
    for a in itertools.product(*ranges):
        split = Split.of(space, a)
        if split.dim_a < h or split.dim_b != target:
            continue
        degree = segre_veronese_degree(space.projective_dims, split.b)
        if degree <= h + 1:
            return split, True
        if first is None:
            first = split
    if first is not None:
        return first, False
    return None, None


def certify_prop33(dec: Decomposition, *, budget=None, t_cap=None) -> Certificate:
    """Boundary-regime criterion on an explicit decomposition."""
    start = time.perf_counter()
    space = dec.space
    h = dec.h
    n = space.total_projective_dim
    mode, prime = _field_info(dec.field)
    cert = Certificate("Prop33", "Inconclusive", h, space,
                       label=CRITERION_LABELS["Prop33"],
                       field_mode=mode, prime=prime)
    split, iv_ok = _prop33_split(space, h)
    if split is None:
        cert.checks = (Check("iii_ambient_count", None, h + n, False,
                             {"note": "no split with dim V_A >= h has dim V_B = h + n"}),)
        _finish(cert, start)
        return cert
    cert.split = split
    degree = segre_veronese_degree(space.projective_dims, split.b)
    checks = [
        Check("iii_ambient_count", split.dim_b, h + n, True),
        Check("iv_variety_degree", degree, f"<= {h + 1}", bool(iv_ok)),
    ]
    cert.effective = iv_ok
    if iv_ok:
        T = dec.expand()
        fl = flatten(T, split)
        checks.append(Check("i_flattening_rank", fl.rank, h, fl.rank == h))
        if checks[-1].passed:
            section = pullback_linear_section(image_span(fl), space, split.b)
            report = classify_linear_section(section, expected_length=h,
                                             budget=budget, t_cap=t_cap)
            checks.extend(_section_checks("ii_section_dimension", "",
                                          report, h, False))
            cert.budget_exhausted = report.budget_exhausted
            if checks[-1].passed:
                basis = monomial_basis(space, space.degrees)
                rows = [coefficient_vector(dec.term_polynomial(i), basis)
                        for i in range(h)]
                span = row_space_basis(DenseMatrix(dec.field, rows, len(basis)))
                full_section = pullback_linear_section(span, space, space.degrees)
                report_v = classify_linear_section(full_section, expected_length=h,
                                                   budget=budget, t_cap=t_cap)
                checks.extend(_section_checks("v_span_section_dimension",
                                              "v_span_section_length",
                                              report_v, h, True))
                cert.budget_exhausted = cert.budget_exhausted or report_v.budget_exhausted
    cert.checks = tuple(checks)
    _finish(cert, start)
    return cert


def _finish(cert: Certificate, start: float):
    cert.seconds = time.perf_counter() - start
    if cert.checks and all(c.passed for c in cert.checks):
        cert.verdict = "Certified"
        cert.reason = None
    else:
        cert.verdict = "Inconclusive"
        if cert.budget_exhausted:
            cert.reason = "resource budget exhausted"
        else:
            failing = [c.name for c in cert.checks if not c.passed]
            cert.reason = f"failed checks: {', '.join(failing)}" if failing \
                else "no check evaluated"


def certify(target, h: int = None, *, criterion: str = "auto", split=None,
            budget=None, t_cap=None) -> Certificate:
    """Dispatch a tensor or decomposition to the appropriate criterion.

    Order: a single-group instance in one of the three exceptional families
    goes to Theorem 3.7; otherwise, when a default split exists and lies in
    the proven-effective range (or a split was forced), Proposition 3.1 runs;
    otherwise a decomposition falls back to Proposition 3.3.  Anything else
    is Inconclusive with reason "out of criteria range".
    """
    dec = target if isinstance(target, Decomposition) else None
    if dec is not None:
        if h is not None and h != dec.h:
            raise ValueError(f"h = {h} disagrees with the {dec.h}-term decomposition")
        h = dec.h
        T = dec.expand()
    else:
        T = target
        if h is None:
            raise ValueError("h is required when certifying a tensor")
    if h < 1:
        raise ValueError("h must be >= 1")
    space = T.space

    if criterion == "thm37":
        return certify_thm37(T, h, budget=budget, t_cap=t_cap)
    if criterion == "prop31":
        return certify_prop31(T, h, split, budget=budget, t_cap=t_cap)
    if criterion == "prop33":
        if dec is None:
            raise ValueError("this criterion needs an explicit decomposition")
        return certify_prop33(dec, budget=budget, t_cap=t_cap)
    if criterion != "auto":
        raise ValueError(f"unknown criterion {criterion!r}")

    if space.p == 1 and thm37_family(space, h) is not None:
        return certify_thm37(T, h, budget=budget, t_cap=t_cap)
    if split is not None:
        return certify_prop31(T, h, split, budget=budget, t_cap=t_cap)
    try:
        candidate = default_split(space, h)
    except SplitError:
        candidate = None
    if candidate is not None and effective_range(space, candidate, h):
        return certify_prop31(T, h, candidate, budget=budget, t_cap=t_cap)
    if dec is not None:
        return certify_prop33(dec, budget=budget, t_cap=t_cap)

    mode, prime = _field_info(T.field)
    cert = Certificate(None, "Inconclusive", h, space, label="",
                       reason="out of criteria range",
                       field_mode=mode, prime=prime)
    return cert
