"""Command-line front end: parse inputs, dispatch criteria, emit certificates.

Input documents are UTF-8 text.  A header declares the space, then either a
polynomial expression or a decomposition follows::

    # a binary cubic
    sizes: 2
    degrees: 3
    tensor: x1_0^3 + 2*x1_1^3

    sizes: 3
    degrees: 5
    decomposition:
    1,2,3
    4,-5,6

Decomposition rows carry one term per line, per-group coefficient vectors
separated by ``|``, entries comma-separated integers or rationals.

Exit codes: 0 the certificate is Certified, 2 it is Inconclusive, 1 usage,
parse or resource errors.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction

from .certify import Certificate, Decomposition, certify, corollary35_bound
from .fields import QQ, field_from_spec
from .flatten import Split, SplitError
from .poly import MPoly, TensorSpace, poly_to_string
from .randgen import RandomConfig, random_tensor

BUDGET_ENV = "TENSORCERT_BUDGET"
FIELD_ENV = "TENSORCERT_FIELD"


class ParseError(ValueError):
    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


# ---------------------------------------------------------------------------
# polynomial expressions

_TOKEN_RE = re.compile(r"(?P<ws>\s+)|(?P<num>\d+)|(?P<var>x(\d+)_(\d+))|(?P<op>[-+*^()/])")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup == "num":
            tokens.append(("num", int(m.group("num")), pos))
        elif m.lastgroup == "var":
            tokens.append(("var", (int(m.group(4)), int(m.group(5))), pos))
        elif m.lastgroup == "op":
            tokens.append((m.group("op"), None, pos))
        pos = m.end()
    return tokens


class _ExprParser:
    def __init__(self, text, space, field):
        self.tokens = _tokenize(text)
        self.i = 0
        self.space = space
        self.field = field
        self.text = text

    def _peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def _take(self):
        tok = self._peek()
        if tok is None:
            raise ParseError("unexpected end of expression", len(self.text))
        self.i += 1
        return tok

    def parse(self) -> MPoly:
        poly = self._expr()
        tok = self._peek()
        if tok is not None:
            raise ParseError(f"unexpected token {tok[0]!r}", tok[2])
        return poly

    def _expr(self) -> MPoly:
        sign = 1
        tok = self._peek()
        if tok is not None and tok[0] in "+-":
            self._take()
            sign = -1 if tok[0] == "-" else 1
        result = self._term()
        if sign < 0:
            result = -result
        while True:
            tok = self._peek()
            if tok is None or tok[0] not in "+-":
                return result
            self._take()
            term = self._term()
            result = result + (-term if tok[0] == "-" else term)

    def _term(self) -> MPoly:
        result = self._factor()
        while True:
            tok = self._peek()
            if tok is None or tok[0] != "*":
                return result
            self._take()
            result = result * self._factor()

    def _factor(self) -> MPoly:
        base = self._atom()
        tok = self._peek()
        if tok is not None and tok[0] == "^":
            self._take()
            etok = self._take()
            if etok[0] != "num":
                raise ParseError("exponent must be a nonnegative integer", etok[2])
            return base ** etok[1]
        return base

    def _atom(self) -> MPoly:
        tok = self._take()
        if tok[0] == "num":
            value = Fraction(tok[1])
            nxt = self._peek()
            if nxt is not None and nxt[0] == "/":
                self._take()
                dtok = self._take()
                if dtok[0] != "num" or dtok[1] == 0:
                    raise ParseError("denominator must be a positive integer", dtok[2])
                value = Fraction(tok[1], dtok[1])
            return MPoly(self.space, {(0,) * self.space.nvars: value}, self.field)
        if tok[0] == "var":
            group, j = tok[1]
            try:
                index = self.space.var_index(group, j)
            except ValueError as exc:
                raise ParseError(str(exc), tok[2]) from None
            mono = [0] * self.space.nvars
            mono[index] = 1
            return MPoly(self.space, {tuple(mono): self.field.one}, self.field,
                         _clean=True)
        if tok[0] == "(":
            inner = self._expr()
            close = self._take()
            if close[0] != ")":
                raise ParseError("expected ')'", close[2])
            return inner
        raise ParseError(f"unexpected token {tok[0]!r}", tok[2])


def _mono_name(space, mono) -> str:
    parts = [f"{space.var_name(i)}^{e}" if e > 1 else space.var_name(i)
             for i, e in enumerate(mono) if e]
    return "*".join(parts) if parts else "1"


def parse_polynomial(text: str, space: TensorSpace, field=QQ) -> MPoly:
    """Parse an expression in x<group>_<index> variables and validate the
    multidegree against the space; offending monomials are named."""
    poly = _ExprParser(text, space, field).parse()
    for mono in poly.terms:
        if space.multidegree_of(mono) != space.degrees:
            raise ParseError(
                f"monomial {_mono_name(space, mono)} has multidegree "
                f"{space.multidegree_of(mono)}, expected {space.degrees}")
    return poly


# ---------------------------------------------------------------------------
# input documents

class InputDocument:
    __slots__ = ("space", "payload", "field", "seed")

    def __init__(self, space, payload, field, seed=None):
        self.space = space
        self.payload = payload      # MPoly or Decomposition
        self.field = field
        self.seed = seed


def _parse_int_list(value: str):
    items = [x for x in re.split(r"[,\s]+", value.strip()) if x]
    return tuple(int(x) for x in items)


def parse_document(text: str, field_override=None) -> InputDocument:
    sizes = degrees = None
    field = None
    seed = None
    payload_kind = None
    tensor_lines = []
    dec_lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip() if payload_kind != "tensor" else raw.strip()
        if not line:
            continue
        if payload_kind == "tensor":
            tensor_lines.append(line)
            continue
        if payload_kind == "decomposition":
            dec_lines.append(line)
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise ParseError(f"expected 'key: value', got {line!r}")
        key = key.strip().lower()
        value = value.strip()
        if key == "sizes":
            sizes = _parse_int_list(value)
        elif key == "degrees":
            degrees = _parse_int_list(value)
        elif key == "field":
            field = field_from_spec(value)
        elif key == "seed":
            seed = int(value)
        elif key == "tensor":
            payload_kind = "tensor"
            if value:
                tensor_lines.append(value)
        elif key == "decomposition":
            payload_kind = "decomposition"
            if value:
                dec_lines.append(value)
        else:
            raise ParseError(f"unknown document key {key!r}")
    if sizes is None or degrees is None:
        raise ParseError("document must declare 'sizes:' and 'degrees:'")
    space = TensorSpace(sizes, degrees)
    if field_override is not None:
        field = field_override
    elif field is None:
        field = QQ
    if payload_kind == "tensor":
        payload = parse_polynomial(" ".join(tensor_lines), space, field)
    elif payload_kind == "decomposition":
        terms = []
        for line in dec_lines:
            groups = line.split("|")
            if len(groups) != space.p:
                raise ParseError(
                    f"term {line!r} has {len(groups)} groups, expected {space.p}")
            term = []
            for part in groups:
                entries = [e for e in part.split(",") if e.strip()]
                try:
                    term.append(tuple(Fraction(e.strip()) for e in entries))
                except (ValueError, ZeroDivisionError) as exc:
                    raise ParseError(f"bad coefficient in {line!r}: {exc}") from None
            terms.append(tuple(term))
        try:
            payload = Decomposition(space, terms, field=field)
        except ValueError as exc:
            raise ParseError(str(exc)) from None
    else:
        raise ParseError("document must contain 'tensor:' or 'decomposition:'")
    return InputDocument(space, payload, field, seed)


def _format_scalar(c) -> str:
    if isinstance(c, Fraction) and c.denominator != 1:
        return f"{c.numerator}/{c.denominator}"
    return str(c)


def _document_header(space, field, seed):
    lines = [f"sizes: {','.join(map(str, space.sizes))}",
             f"degrees: {','.join(map(str, space.degrees))}"]
    if field.modulus is not None:
        lines.append(f"field: fp:{field.modulus}")
    if seed is not None:
        lines.append(f"seed: {seed}")
    return lines


def render_tensor_document(T: MPoly, seed=None) -> str:
    lines = _document_header(T.space, T.field, seed)
    lines.append(f"tensor: {poly_to_string(T)}")
    return "\n".join(lines) + "\n"


def render_decomposition_document(dec: Decomposition, seed=None) -> str:
    lines = _document_header(dec.space, dec.field, seed)
    lines.append("decomposition:")
    for term in dec.terms:
        lines.append(" | ".join(",".join(_format_scalar(c) for c in form)
                                for form in term))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# reports

def certificate_json(cert: Certificate) -> str:
    return json.dumps(cert.to_json_dict(), indent=2, sort_keys=True) + "\n"


def _emit_certificate(cert: Certificate, report: str, out, trace=False) -> int:
    if report == "json":
        out.write(certificate_json(cert))
    else:
        for line in cert.summary_lines():
            out.write(line + "\n")
        if trace:
            for check in cert.checks:
                if check.detail and check.detail.get("trace"):
                    out.write(f"-- {check.name} profile --\n")
                    for t, v in check.detail["trace"]:
                        out.write(f"hilbert[{t}] = {v}\n")
    if cert.certified:
        return 0
    return 1 if cert.budget_exhausted else 2


# ---------------------------------------------------------------------------
# commands

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tensorcert",
        description="Certify specific h-identifiability of symmetric and "
                    "mixed symmetric tensors over exact fields.")
    sub = parser.add_subparsers(dest="command", required=True)

    cert = sub.add_parser("certify", help="run the certification dispatcher")
    cert.add_argument("--input", required=True,
                      help="input document path, or '-' for stdin")
    cert.add_argument("--h", type=int, default=None,
                      help="decomposition length to certify")
    cert.add_argument("--criterion", default="auto",
                      choices=["auto", "prop31", "prop33", "thm37"])
    cert.add_argument("--split", default=None,
                      help="comma-separated a_1,..,a_p overriding the default split")
    cert.add_argument("--field", default=None, help="qq or fp:P")
    cert.add_argument("--report", default="text", choices=["text", "json"])
    cert.add_argument("--budget", type=int, default=None,
                      help="S-pair budget for Groebner runs")
    cert.add_argument("--profile-cap", type=int, default=None,
                      help="cap for the diagonal Hilbert profile")
    cert.add_argument("--trace", action="store_true",
                      help="dump Hilbert profile traces in text reports")

    rnd = sub.add_parser("random", help="generate a random tensor or decomposition")
    rnd.add_argument("--sizes", required=True, help="comma-separated group sizes")
    rnd.add_argument("--degrees", required=True, help="comma-separated degrees")
    rnd.add_argument("--h", type=int, required=True)
    rnd.add_argument("--seed", type=int, default=0)
    rnd.add_argument("--bound", type=int, default=1 << 15)
    rnd.add_argument("--emit", default="tensor", choices=["tensor", "decomposition"])
    rnd.add_argument("--field", default=None, help="qq or fp:P")

    bnd = sub.add_parser("bounds", help="evaluate the effectiveness bounds")
    bnd.add_argument("--family", required=True,
                     choices=["mixed-symmetric", "skew", "segre", "unbalanced-segre"])
    bnd.add_argument("--h", type=int, required=True)
    bnd.add_argument("--n", type=int, default=None, help="common space dimension")
    bnd.add_argument("--degrees", default=None, help="comma-separated degrees")
    bnd.add_argument("--factors", type=int, default=None,
                     help="number of factors (segre family)")
    bnd.add_argument("--dims", default=None,
                     help="comma-separated space dimensions (unbalanced family)")
    bnd.add_argument("--report", default="text", choices=["text", "json"])
    return parser


def _resolve_field(flag_value):
    if flag_value:
        return field_from_spec(flag_value)
    env = os.environ.get(FIELD_ENV)
    if env:
        return field_from_spec(env)
    return None


def _resolve_budget(flag_value):
    if flag_value is not None:
        return flag_value
    env = os.environ.get(BUDGET_ENV)
    return int(env) if env else None


def _cmd_certify(args, out) -> int:
    if args.input == "-":
        text = sys.stdin.read()
    else:
        with open(args.input, "r", encoding="utf-8") as fh:
            text = fh.read()
    doc = parse_document(text, field_override=_resolve_field(args.field))
    if args.h is not None and args.h < 1:
        raise ValueError("--h must be >= 1")
    target = doc.payload
    h = args.h
    if isinstance(target, MPoly) and h is None:
        raise ValueError("--h is required for tensor input")
    split = None
    if args.split is not None:
        split = Split.of(doc.space, _parse_int_list(args.split))
    cert = certify(target, h, criterion=args.criterion, split=split,
                   budget=_resolve_budget(args.budget), t_cap=args.profile_cap)
    return _emit_certificate(cert, args.report, out, trace=args.trace)


def _cmd_random(args, out) -> int:
    space = TensorSpace(_parse_int_list(args.sizes), _parse_int_list(args.degrees))
    if args.h < 1:
        raise ValueError("--h must be >= 1")
    field = _resolve_field(args.field) or QQ
    cfg = RandomConfig(seed=args.seed, bound=args.bound, field=field)
    tensor, dec = random_tensor(space, args.h, cfg)
    if args.emit == "tensor":
        out.write(render_tensor_document(tensor, seed=args.seed))
    else:
        out.write(render_decomposition_document(dec, seed=args.seed))
    return 0


def _cmd_bounds(args, out) -> int:
    params = {}
    if args.n is not None:
        params["n"] = args.n
    if args.degrees is not None:
        params["degrees"] = _parse_int_list(args.degrees)
    if args.factors is not None:
        params["factors"] = args.factors
    if args.dims is not None:
        params["dims"] = _parse_int_list(args.dims)
    bound = corollary35_bound(args.family, **params)
    effective = args.h < bound
    if args.report == "json":
        out.write(json.dumps({"family": args.family, "bound": bound,
                              "h": args.h, "effective": effective},
                             indent=2, sort_keys=True) + "\n")
    else:
        out.write(f"family {args.family}: effective for h < {bound}; "
                  f"h = {args.h} is {'within' if effective else 'outside'} "
                  "the range\n")
    return 0 if effective else 2


def run(argv=None, out=None) -> int:
    """Entry point returning the exit code; prints errors to stderr."""
    out = out if out is not None else sys.stdout
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if not exc.code else 1
    try:
        if args.command == "certify":
            return _cmd_certify(args, out)
        if args.command == "random":
            return _cmd_random(args, out)
        return _cmd_bounds(args, out)
    except (ParseError, SplitError, ValueError, ZeroDivisionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
