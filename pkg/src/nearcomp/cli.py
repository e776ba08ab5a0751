"""Command-line entry point: ``nearcomp <verb> ...`` (or ``python -m nearcomp``).

Sequence specs are single tokens of the form ``kind:parameters``:

==================  =======================================================
``closed:EXPR``     closed form in ``n``, e.g. ``closed:1-2**-n``
``table:PATH``      sample file, one ``index p/q`` record per line
``compress:N:PROBE:SPEC``  the compressed sequence of another spec
``anti-cauchy:P1,P2,...``  the diagonal over the named probes
``field:EXPR``      a real built from rationals with ``sqrt``, ``+ - * /``
``quaternary:A``    truncations of ``sum 4^-k`` over the comma list ``A``
==================  =======================================================

Probes are ``identity``, ``double``, ``square``, ``triangular``, ``shift3``
or an expression in ``n``. Moduli are an expression in ``n`` or ``own``
(``own:i`` for the i-th diagonal stage), the modulus that comes with a
``compress``/``anti-cauchy``/``field`` spec.

Exit status: 0 ok, 1 domain error (message names the error class), 2 usage.
"""

from __future__ import annotations

import argparse
import ast
import operator
import sys
from dataclasses import dataclass
from pathlib import Path

from gmpy2 import mpq

from . import field as fld
from .coding import PrefixCode, lengths_from_weights
from .compression import compress, diagonal
from .core import BallCode, format_rational, parse_rational
from .errors import HorizonExceeded, NearcompError
from .extraction import decode_quaternary, embed_indicator_sum, locate
from .harness import brute_min_modulus, check_modulus, probe_suite
from .sequences import (
    DEFAULT_CHECK_HORIZON,
    DEFAULT_SEARCH_HORIZON,
    ModulusedReal,
    ModulusEvaluator,
    Probe,
    SequenceEvaluator,
)


class SpecError(ValueError):
    """Malformed command-line text; reported as a usage error."""


# ---------------------------------------------------------------- expressions

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.FloorDiv: operator.floordiv,
    ast.Mod: operator.mod,
}


def _parse_expr(text: str) -> ast.AST:
    try:
        return ast.parse(text, mode="eval").body
    except SyntaxError as exc:
        raise SpecError(f"cannot parse expression {text!r}") from exc


def _int_exponent(e) -> int:
    e = mpq(e)
    if e.denominator != 1:
        raise SpecError("exponents must be integers")
    return int(e)


def _eval_rational(node: ast.AST, n: int | None) -> mpq:
    """Exact value of an arithmetic expression in the variable ``n``."""
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return mpq(node.value)
    if isinstance(node, ast.Name) and node.id == "n":
        if n is None:
            raise SpecError("this expression may not use n")
        return mpq(n)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_rational(node.operand, n)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        left = _eval_rational(node.left, n)
        right = _eval_rational(node.right, n)
        if isinstance(node.op, ast.Pow):
            return left ** _int_exponent(right)
        op = _BINOPS.get(type(node.op))
        if op is not None:
            if isinstance(node.op, ast.FloorDiv):
                return mpq(left // right)
            return mpq(op(left, right))
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) \
            and node.func.id in ("max", "min") and not node.keywords:
        vals = [_eval_rational(a, n) for a in node.args]
        return max(vals) if node.func.id == "max" else min(vals)
    raise SpecError(f"unsupported expression element: {ast.dump(node)}")


def _uses_n(node: ast.AST) -> bool:
    return any(isinstance(x, ast.Name) and x.id == "n" for x in ast.walk(node))


def _eval_field(node: ast.AST) -> ModulusedReal:
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) \
            and node.func.id == "sqrt" and len(node.args) == 1:
        return fld.sqrt_real(_eval_rational(node.args[0], None))
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return fld.creal_neg(_eval_field(node.operand))
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            k = _int_exponent(_eval_rational(node.right, None))
            base = _eval_field(node.left)
            if k < 0:
                base, k = fld.creal_inv(base), -k
            acc = ModulusedReal.from_rational(1)
            for _ in range(k):
                acc = fld.creal_mul(acc, base)
            return acc
        a, b = _eval_field(node.left), _eval_field(node.right)
        if isinstance(node.op, ast.Add):
            return fld.creal_add(a, b)
        if isinstance(node.op, ast.Sub):
            return fld.creal_sub(a, b)
        if isinstance(node.op, ast.Mult):
            return fld.creal_mul(a, b)
        if isinstance(node.op, ast.Div):
            return fld.creal_mul(a, fld.creal_inv(b))
    return ModulusedReal.from_rational(_eval_rational(node, None))


def parse_field_expr(text: str) -> ModulusedReal:
    return _eval_field(_parse_expr(text))


# ---------------------------------------------------------------- specs

_NAMED_PROBES = {p.name: p for p in probe_suite()}


def parse_probe(text: str) -> Probe:
    if text in _NAMED_PROBES:
        return _NAMED_PROBES[text]
    node = _parse_expr(text)
    return Probe(lambda n: int(_eval_rational(node, n)), name=text)


def parse_modulus(text: str, own: list[ModulusEvaluator] | None = None) -> ModulusEvaluator:
    if text == "own" or text.startswith("own:"):
        if not own:
            raise SpecError("this sequence spec carries no modulus of its own")
        idx = int(text[4:]) if text.startswith("own:") else len(own) - 1
        if not 0 <= idx < len(own):
            raise SpecError(f"no modulus own:{idx}")
        return own[idx]
    node = _parse_expr(text)

    def g(n):
        v = _eval_rational(node, n)
        if v.denominator != 1:
            raise SpecError(f"modulus {text!r} is not integer-valued at {n}")
        return max(int(v), 0)

    return ModulusEvaluator(g, name=text)


@dataclass
class SequenceSpec:
    kind: str
    text: str
    sequence: SequenceEvaluator
    moduli: list[ModulusEvaluator]
    real: ModulusedReal | None = None
    exact: mpq | None = None  # set for constant closed forms


def _read_table(path: str) -> SequenceEvaluator:
    values = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        if not line.strip():
            continue
        try:
            idx, val = line.split()
            values[int(idx)] = parse_rational(val)
        except ValueError as exc:
            raise SpecError(f"{path}:{lineno}: expected 'index p/q'") from exc
    size = len(values)
    if sorted(values) != list(range(size)):
        raise SpecError(f"{path}: indices must be 0..{size - 1}")

    def at(k):
        if k >= size:
            raise HorizonExceeded(f"table {path} has no index {k}", size - 1)
        return values[k]

    return SequenceEvaluator(at, name=f"table:{path}")


def parse_spec(text: str, horizon: int = DEFAULT_SEARCH_HORIZON) -> SequenceSpec:
    kind, sep, rest = text.partition(":")
    if not sep:
        raise SpecError(f"sequence spec {text!r} needs the form kind:parameters")
    if kind == "closed":
        node = _parse_expr(rest)
        seq = SequenceEvaluator(lambda n: _eval_rational(node, n), name=text)
        if _uses_n(node):
            return SequenceSpec(kind, text, seq, [])
        c = _eval_rational(node, None)
        return SequenceSpec(kind, text, seq, [], ModulusedReal.from_rational(c), c)
    if kind == "table":
        return SequenceSpec(kind, text, _read_table(rest), [])
    if kind == "compress":
        parts = rest.split(":", 2)
        if len(parts) != 3:
            raise SpecError("compress spec is compress:N:PROBE:SPEC")
        N = int(parts[0])
        inner = parse_spec(parts[2], horizon)
        res = compress(inner.sequence, N, parse_probe(parts[1]), horizon)
        return SequenceSpec(kind, text, res.compressed, [res.modulus])
    if kind == "anti-cauchy":
        probes = [parse_probe(p) for p in rest.split(",") if p]
        d = diagonal(probes, horizon)
        return SequenceSpec(kind, text, d.q, d.moduli)
    if kind == "field":
        real = parse_field_expr(rest)
        return SequenceSpec(kind, text, real.approximant, [real.cauchy_modulus], real)
    if kind == "quaternary":
        elements = sorted({int(x) for x in rest.split(",") if x.strip()})
        from .extraction import quaternary_value

        seq = SequenceEvaluator(lambda k: quaternary_value(e for e in elements if e <= k),
                                name=text)
        return SequenceSpec(kind, text, seq, [])
    raise SpecError(f"unknown sequence kind {kind!r}")


def _naturals(path: str) -> list[int]:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    out = []
    for line in text.splitlines():
        if line.strip():
            try:
                out.append(int(line))
            except ValueError as exc:
                raise SpecError(f"{path}: not a natural: {line!r}") from exc
    return out


# ---------------------------------------------------------------- verbs

def _cmd_compress(args, out):
    inner = parse_spec(args.spec, args.horizon)
    res = compress(inner.sequence, args.N, parse_probe(args.probe), args.horizon)
    for j in range(args.samples):
        out.write(f"b {j} {format_rational(res.compressed(j))}\n")
    for n in range(args.blocks + 1):
        out.write(f"g {n} {res.modulus(n)}\n")


def _cmd_diag(args, out):
    d = diagonal([parse_probe(p) for p in args.probes], args.horizon)
    for j in range(args.samples):
        out.write(f"q {j} {format_rational(d.q(j))}\n")
    for i, g in enumerate(d.moduli):
        for n in range(args.blocks + 1):
            out.write(f"g{i} {n} {g(n)}\n")


def _cmd_kc(args, out):
    code = PrefixCode()
    for length in _naturals(args.lengths):
        out.write(code.request(length) + "\n")


def _cmd_weights2lengths(args, out):
    f = lengths_from_weights(parse_spec(args.spec, args.horizon).sequence)
    for n in range(args.count):
        out.write(f"{f(n)}\n")


def _cmd_decode4(args, out):
    spec = parse_spec(args.spec, args.horizon)
    g = parse_modulus(args.modulus, spec.moduli)
    out.write(f"{decode_quaternary(spec.sequence, g, args.bit, args.horizon)}\n")


def _spec_real(spec: SequenceSpec) -> ModulusedReal:
    if spec.real is not None:
        return spec.real
    raise SpecError(f"spec {spec.text!r} does not describe a real with a Cauchy modulus")


def _cmd_embed(args, out):
    spec = parse_spec(args.spec, args.horizon)
    x = spec.exact if spec.exact is not None else _spec_real(spec)
    out.write(format_rational(embed_indicator_sum(x, args.precision)) + "\n")


def _cmd_locate(args, out):
    spec = parse_spec(args.spec, args.horizon)
    g = parse_modulus(args.modulus, spec.moduli)
    balls = [BallCode(c) for c in _naturals(args.balls)]
    out.write(format_rational(locate(spec.sequence, g, balls, args.precision,
                                     max_balls=len(balls))) + "\n")


def _cmd_check(args, out):
    spec = parse_spec(args.spec, args.horizon)
    g = parse_modulus(args.modulus, spec.moduli)
    for v in check_modulus(spec.sequence, parse_probe(args.probe), g, args.window):
        out.write(v.format() + "\n")


def _cmd_oracle(args, out):
    spec = parse_spec(args.spec, args.horizon)
    out.write(brute_min_modulus(spec.sequence, parse_probe(args.probe), args.window).format())


def _cmd_field_eval(args, out):
    if args.poly is None:
        if args.expr is None:
            raise SpecError("field-eval needs EXPR or --poly")
        out.write(format_rational(parse_field_expr(args.expr).approx(args.precision)) + "\n")
        return
    coeffs = [parse_rational(c) for c in args.poly.split(",")]
    p = fld.Polynomial.from_rationals(coeffs)
    if args.root is not None:
        lo, hi = (parse_rational(t) for t in args.root.split(","))
        bracket = fld.SignedInterval.for_polynomial(p, lo, hi)
        out.write(format_rational(fld.refine_root(p, bracket, args.precision)) + "\n")
    else:
        x = parse_field_expr(args.expr) if args.expr is not None else None
        if x is None:
            raise SpecError("--poly needs --root LO,HI or an EXPR to evaluate at")
        out.write(format_rational(fld.poly_eval(p, x).approx(args.precision)) + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nearcomp", description=__doc__.split("\n")[0],
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--horizon", type=int, default=DEFAULT_SEARCH_HORIZON,
                        help="index bound for every search (default %(default)s)")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("compress", help="compress a sequence along a probe")
    p.add_argument("spec")
    p.add_argument("N", type=int)
    p.add_argument("probe")
    p.add_argument("--samples", type=int, default=16)
    p.add_argument("--blocks", type=int, default=4)
    p.set_defaults(run=_cmd_compress)

    p = sub.add_parser("diag", help="diagonal sequence over a probe list")
    p.add_argument("probes", nargs="*")
    p.add_argument("--samples", type=int, default=16)
    p.add_argument("--blocks", type=int, default=4)
    p.set_defaults(run=_cmd_diag)

    p = sub.add_parser("kc", help="prefix-free code for a lengths file ('-' for stdin)")
    p.add_argument("lengths")
    p.set_defaults(run=_cmd_kc)

    p = sub.add_parser("weights2lengths", help="code lengths from a weight sequence")
    p.add_argument("spec")
    p.add_argument("count", type=int)
    p.set_defaults(run=_cmd_weights2lengths)

    p = sub.add_parser("decode4", help="one bit of A from approximations of 4^-A")
    p.add_argument("spec")
    p.add_argument("modulus")
    p.add_argument("bit", type=int)
    p.set_defaults(run=_cmd_decode4)

    p = sub.add_parser("embed", help="approximate sum 4^-n over nu_q(n) below a real")
    p.add_argument("spec")
    p.add_argument("precision", type=int)
    p.set_defaults(run=_cmd_embed)

    p = sub.add_parser("locate", help="locate a limit from labelled balls")
    p.add_argument("spec")
    p.add_argument("modulus")
    p.add_argument("balls", help="ball file, one code per line")
    p.add_argument("precision", type=int)
    p.set_defaults(run=_cmd_locate)

    p = sub.add_parser("check", help="falsify a modulus on a window")
    p.add_argument("spec")
    p.add_argument("probe")
    p.add_argument("modulus")
    p.add_argument("window", type=int, nargs="?", default=DEFAULT_CHECK_HORIZON)
    p.set_defaults(run=_cmd_check)

    p = sub.add_parser("oracle", help="least modulus valid on a window")
    p.add_argument("spec")
    p.add_argument("probe")
    p.add_argument("window", type=int, nargs="?", default=DEFAULT_CHECK_HORIZON)
    p.set_defaults(run=_cmd_oracle)

    p = sub.add_parser("field-eval", help="evaluate a field expression or refine a root")
    p.add_argument("expr", nargs="?")
    p.add_argument("precision", type=int)
    p.add_argument("--poly", help="coefficients c0,c1,... lowest degree first")
    p.add_argument("--root", help="sign-change bracket LO,HI")
    p.set_defaults(run=_cmd_field_eval)
    return parser


def run_command(argv: list[str], out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.run(args, out)
    except SpecError as exc:
        err.write(f"nearcomp: usage: {exc}\n")
        return 2
    except (NearcompError, ValueError, ZeroDivisionError, RuntimeError) as exc:
        err.write(f"nearcomp: {type(exc).__name__}: {exc}\n")
        return 1
    return 0


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
