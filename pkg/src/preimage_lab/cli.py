"""Command-line entry point. Every command prints UTF-8 JSON on stdout.

Exit status: 0 on success, 1 when ``verify-paper`` has a failing check,
2 on usage errors or inputs outside an operation's domain.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Sequence

from .descent import DValue, cd_search, classify_point
from .dynamics import dm_search, iterated_preimages
from .elliptic import E_MAIN, Q0, ec_mul, x_minus_T
from .errors import DomainError, PreimageLabError
from .exact import parse_rational
from .preimage_curves import factor_mod_p, format_factorization, preimage_ideal, ramification_poly
from .verify import CHECK_IDS, VerifyConfig, verify

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_NEGATIVE_FRACTION = re.compile(r"^-\d+/\d+$")


def _rational(text: str):
    try:
        return parse_rational(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text}")
    return n


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")


def cmd_preimages(args) -> int:
    tree = iterated_preimages(args.d, args.c, args.root, args.max_depth)
    _emit(tree.to_json())
    return EXIT_OK


def cmd_cd_points(args) -> int:
    D = DValue.of(args.D)
    points = cd_search(D, args.height_bound)
    _emit(
        {
            "D": str(D),
            "bound": str(args.height_bound),
            "points": [{"x": str(x), "y": str(y)} for x, y in points],
            "delta_pairs": [{"x": str(x), "y": str(y), **classify_point(x, y, D).to_json()} for x, y in points],
        }
    )
    return EXIT_OK


def cmd_curve_ideal(args) -> int:
    gens = preimage_ideal(args.N, args.a)
    out = {
        "N": str(args.N),
        "a": str(args.a),
        "variables": list(gens.variables),
        "generators": [str(g) for g in gens.generators],
    }
    if args.factor_mod:
        if (args.N, args.a) != (4, 0):
            raise DomainError("--factor-mod is available for N = 4, a = 0 only")
        F = ramification_poly()
        out["ramification_polynomial"] = str(F)
        out["factorizations"] = []
        for p in args.factor_mod:
            factors = factor_mod_p(F, p)
            out["factorizations"].append(
                {
                    "p": str(p),
                    "factors": [
                        {"coefficients": [str(c) for c in f.coeffs], "multiplicity": str(f.multiplicity)}
                        for f in factors
                    ],
                    "text": format_factorization(factors),
                }
            )
    _emit(out)
    return EXIT_OK


def cmd_xt_class(args) -> int:
    P = ec_mul(E_MAIN, args.n, Q0)
    _emit({"n": str(args.n), "point": P.to_json(), "class": x_minus_T(P).canonical_tag})
    return EXIT_OK


def cmd_dm_search(args) -> int:
    sols = dm_search(args.n, args.bound)

    def row(s):
        return {"x": str(s.x), "y": str(s.y), "z": str(s.z), "trivial": s.trivial}

    _emit(
        {
            "n": str(args.n),
            "bound": str(args.bound),
            "solutions": [row(s) for s in sols],
            "nontrivial": [row(s) for s in sols if not s.trivial],
        }
    )
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    cfg = VerifyConfig(
        height_bound=args.height_bound,
        dm_bound=args.dm_bound,
        timing=not args.no_timing,
        only=tuple(args.only or ()),
        inject_failure=tuple(args.inject_failure or ()),
    )
    report, ok = verify(cfg)
    _emit(report)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="preimage-lab", description="Exact computations for rational iterated preimages of 0 under x^d + c.")
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("preimages", help="iterated preimages of a point under x^d + c")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-c", type=_rational, required=True)
    p.add_argument("--root", type=_rational, default=parse_rational("0"), help="the point a (default 0)")
    p.add_argument("--max-depth", type=_positive_int, default=10)
    p.set_defaults(func=cmd_preimages)

    p = sub.add_parser("cd-points", help="bounded search on D^2 y^4 = x^3 - x + 1")
    p.add_argument("-D", type=int, required=True)
    p.add_argument("--height-bound", type=_positive_int, required=True)
    p.set_defaults(func=cmd_cd_points)

    p = sub.add_parser("curve-ideal", help="generators of X^pre(2, N, a)")
    p.add_argument("-N", type=int, required=True)
    p.add_argument("-a", type=_rational, required=True)
    p.add_argument("--factor-mod", type=int, action="append", metavar="P", help="factor the ramification polynomial mod P (repeatable)")
    p.set_defaults(func=cmd_curve_ideal)

    p = sub.add_parser("xt-class", help="square class of u - theta at n*Q0")
    p.add_argument("-n", type=int, required=True)
    p.set_defaults(func=cmd_xt_class)

    p = sub.add_parser("dm-search", help="primitive solutions of x^n + y^n = z^2")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--bound", type=int, required=True)
    p.set_defaults(func=cmd_dm_search)

    p = sub.add_parser("verify-paper", help="run the acceptance checks and print a JSON report")
    p.add_argument("--height-bound", type=_positive_int, default=1000)
    p.add_argument("--dm-bound", type=_positive_int, default=200)
    p.add_argument("--only", action="append", choices=CHECK_IDS, metavar="ID", help="run only this check (repeatable)")
    p.add_argument("--no-timing", action="store_true", help="omit elapsed times so reports are byte-identical")
    p.add_argument("--inject-failure", action="append", choices=CHECK_IDS, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify_paper)
    return parser


def _attach_negative_fractions(argv: Sequence[str]) -> list[str]:
    """argparse reads "-1/8" as an option; glue it to the preceding flag."""
    out: list[str] = []
    for tok in argv:
        if _NEGATIVE_FRACTION.match(tok) and out and out[-1].startswith("-") and "=" not in out[-1]:
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = parser.parse_args(_attach_negative_fractions(argv))
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"preimage-lab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PreimageLabError as exc:
        print(f"preimage-lab: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
