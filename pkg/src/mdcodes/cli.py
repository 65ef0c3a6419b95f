"""``mdc``: command-line front end for the codecs, checkers and counters.

Exit codes: 0 success, 1 a constraint violation reported by ``check``,
2 usage or input error, 3 corrupted codeword or unsupported size.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import analysis
from .boxes import MinimalBoxFamily
from .core import NdArray, format_array, parse_array
from .errors import BudgetExceededError, CorruptionError, DomainError, UnsupportedSizeError
from .oracles import DEFAULT_BUDGET, ConstraintParams, check, exhaustive_count, redundancy
from .squares_unique import SquaresUniqueCodec
from .squares_unique import params as squares_params
from .zero_boxes import ZeroBoxesCodec, param_V
from .zero_cubes import ZeroCubesCodec, param_L

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_CODEC = 0, 1, 2, 3

CODEC_FAMILIES = ("zero-cubes", "squares-unique", "zero-boxes")
CONSTRAINTS = {
    "zero-cubes": "zero-cubes-free",
    "zero-cubes-free": "zero-cubes-free",
    "cubes-unique": "cubes-unique",
    "zero-boxes": "zero-boxes-free",
    "zero-boxes-free": "zero-boxes-free",
    "boxes-unique": "boxes-unique",
}


class UsageError(Exception):
    pass


# -- array I/O -------------------------------------------------------------


def _read_array(path: str | None) -> NdArray:
    if path in (None, "-"):
        text = sys.stdin.read()
    else:
        with open(path) as fh:
            text = fh.read()
    return parse_array(text)


def _write_array(X: NdArray, path: str | None):
    text = format_array(X)
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _agree(name: str, given, found):
    if given is not None and given != found:
        raise UsageError(f"-{name} {given} disagrees with the input array ({name}={found})")


def _make_codec(args, d: int, q: int, n: int):
    if args.family == "zero-cubes":
        return ZeroCubesCodec(n, d, q, rescan=not args.single_pass)
    if args.family == "zero-boxes":
        return ZeroBoxesCodec(n, d, q, V=args.V)
    if d != 2 or q != 2:
        raise UsageError("squares-unique works on binary 2-D arrays only")
    return SquaresUniqueCodec(n, strict=args.strict)


def _codec_for_input(args, decoding: bool):
    if args.random:
        if decoding:
            raise UsageError("--random only applies to encode")
        if args.n is None:
            raise UsageError("--random needs -n")
        d = args.d if args.d is not None else 2
        q = args.q if args.q is not None else 2
        codec = _make_codec(args, d, q, args.n)
        rng = np.random.default_rng(args.seed)
        dom = codec.in_domain
        return codec, NdArray(dom, rng.integers(0, q, len(dom)), q)
    X = _read_array(args.inp)
    n = X.domain.bounds[0]
    for name, given, found in (("d", args.d, X.d), ("q", args.q, X.q), ("n", args.n, n)):
        _agree(name, given, found)
    return _make_codec(args, X.d, X.q, n), X


def _emit_trace(trace: list[str]):
    for line in trace:
        print(line, file=sys.stderr)


def cmd_encode(args) -> int:
    codec, W = _codec_for_input(args, decoding=False)
    trace: list[str] | None = [] if args.trace else None
    X = codec.encode(W, trace=trace)
    if trace is not None:
        _emit_trace(trace)
    _write_array(X, args.out)
    return EXIT_OK


def cmd_decode(args) -> int:
    codec, X = _codec_for_input(args, decoding=True)
    trace: list[str] | None = [] if args.trace else None
    W = codec.decode(X, trace=trace)
    if trace is not None:
        _emit_trace(trace)
    _write_array(W, args.out)
    return EXIT_OK


# -- checking and counting -------------------------------------------------


def _size_arg(args, family: str) -> int:
    if family in ("zero-cubes-free", "cubes-unique"):
        if args.L is None:
            raise UsageError(f"--family {args.family} needs -L")
        return args.L
    if args.V is None:
        raise UsageError(f"--family {args.family} needs -V")
    return args.V


def cmd_check(args) -> int:
    family = CONSTRAINTS[args.family]
    X = _read_array(args.inp)
    size = _size_arg(args, family)
    report = check(X, ConstraintParams(family, X.d, X.q, X.domain.bounds[0], size))
    for line in report.lines():
        print(line)
    return EXIT_OK if report.ok else EXIT_VIOLATION


def cmd_count(args) -> int:
    family = CONSTRAINTS[args.family]
    p = ConstraintParams(family, args.d, args.q, args.n, _size_arg(args, family))
    c = exhaustive_count(p, budget=args.budget, workers=args.workers)
    print(c)
    if args.redundancy:
        print(f"{redundancy(p, c):.6g}")
    return EXIT_OK


def cmd_minimal_boxes(args) -> int:
    for shape in MinimalBoxFamily(args.d, args.V):
        print(" ".join(map(str, shape.sides)))
    return EXIT_OK


def cmd_bounds(args) -> int:
    family = CONSTRAINTS[args.family]
    rep = analysis.threshold(family, args.n, args.d, args.q)
    for line in rep.lines():
        print(line)
    # the codec parameters, where a codec exists for the family
    try:
        if family == "zero-cubes-free":
            print(f"codec L = {param_L(args.n, args.d, args.q)}")
        elif family == "zero-boxes-free":
            print(f"codec V = {param_V(args.n, args.d, args.q)}")
        elif family == "cubes-unique" and args.d == 2 and args.q == 2:
            print(f"codec L = {squares_params(args.n)[1]}")
    except UnsupportedSizeError as exc:
        print(f"codec: {exc}")
    return EXIT_OK


def _parse_range(text: str) -> list[int]:
    out: list[int] = []
    for part in text.split(","):
        if ":" in part:
            a, b = part.split(":")
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def cmd_report(args) -> int:
    family = CONSTRAINTS[args.family]
    ns = _parse_range(args.n_range)
    if args.rule == "fixed":
        rule = _size_arg(args, family)
    elif args.rule == "threshold":
        rule = lambda n: analysis.threshold(family, n, args.d, args.q).minimal  # noqa: E731
    else:
        if family not in ("zero-cubes-free", "zero-boxes-free"):
            raise UsageError("--rule codec needs a family with a codec (zero-cubes, zero-boxes)")
        fn = param_L if family == "zero-cubes-free" else param_V
        rule = lambda n: fn(n, args.d, args.q)  # noqa: E731
    print(analysis.CSV_HEADER)
    for row in analysis.redundancy_table(family, args.d, args.q, ns, rule, budget=args.budget, workers=args.workers):
        print(row.csv())
    return EXIT_OK


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mdc", description="Multidimensional constrained codes: encode, check, count.")
    sub = parser.add_subparsers(dest="command", required=True)

    def dims(p, required=False):
        p.add_argument("-d", type=int, required=required, help="dimension")
        p.add_argument("-q", type=int, required=required, help="alphabet size")
        p.add_argument("-n", type=int, required=required, help="side length")

    for name, fn in (("encode", cmd_encode), ("decode", cmd_decode)):
        p = sub.add_parser(name, help=f"{name} an array with one of the codecs")
        p.add_argument("--family", choices=CODEC_FAMILIES, required=True)
        dims(p)
        p.add_argument("-V", type=int, help="box volume for zero-boxes (default: the codec formula)")
        p.add_argument("--in", dest="inp", help="input file (default stdin)")
        p.add_argument("--out", help="output file (default stdout)")
        p.add_argument("--trace", action="store_true", help="print one line per step on stderr")
        p.add_argument("--single-pass", action="store_true", help="zero-cubes: one forward scan, no rescan")
        p.add_argument(
            "--strict", action=argparse.BooleanOptionalAction, default=True, help="squares-unique expansion rule"
        )
        if name == "encode":
            p.add_argument("--random", action="store_true", help="encode a random payload instead of reading one")
            p.add_argument("--seed", type=int, default=None)
        else:
            p.set_defaults(random=False)
        p.set_defaults(func=fn)

    p = sub.add_parser("check", help="list constraint violations in an array")
    p.add_argument("--family", choices=sorted(CONSTRAINTS), required=True)
    p.add_argument("-L", type=int)
    p.add_argument("-V", type=int)
    p.add_argument("--in", dest="inp")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("count", help="exact number of constrained arrays")
    p.add_argument("--family", choices=sorted(CONSTRAINTS), required=True)
    dims(p, required=True)
    p.add_argument("-L", type=int)
    p.add_argument("-V", type=int)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--redundancy", action="store_true", help="also print n^d - log_q(count)")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("minimal-boxes", help="list the minimal box shapes of volume V")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-V", type=int, required=True)
    p.set_defaults(func=cmd_minimal_boxes)

    p = sub.add_parser("bounds", help="union-bound thresholds for L or V")
    p.add_argument("--family", choices=sorted(CONSTRAINTS), required=True)
    dims(p, required=True)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("report", help="CSV of exact counts and redundancies over a range of n")
    p.add_argument("--family", choices=sorted(CONSTRAINTS), required=True)
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-q", type=int, required=True)
    p.add_argument("--n-range", required=True, help="e.g. 1:10 or 3,4,5")
    p.add_argument("--rule", choices=("fixed", "threshold", "codec"), default="fixed")
    p.add_argument("-L", type=int)
    p.add_argument("-V", type=int)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CorruptionError, UnsupportedSizeError) as exc:
        print(f"mdc: {exc}", file=sys.stderr)
        return EXIT_CODEC
    except (UsageError, DomainError, BudgetExceededError, OSError) as exc:
        print(f"mdc: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
