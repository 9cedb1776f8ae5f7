"""Command line entry point.

Subcommands:

    hamiltonian   print one Hamiltonian density (text, JSON or LaTeX)
    s-series      print generating-series coefficients up to an order
    commute       check one pair of Hamiltonians on bounded momenta
    reconstruct   rebuild a density from commutation constraints
    intersect     print a predicted stratum polynomial
    verify-all    run the whole verification suite

Every command exits 0 exactly when its check or computation succeeds,
1 on a mathematical failure, and 2 on a usage error.  Output bytes are
deterministic for a fixed command line.
"""

from __future__ import annotations

import argparse
import json
import sys

from ._version import ENGINE_VERSION
from .diffpoly import to_json_dict
from .fock import CommutatorNonzero, check_commute
from .hierarchy import s_series, wang_hamiltonian
from .intersection import assemble_polynomial, as_rational_string
from .reconstruction import (
    InconsistentError,
    UnderdeterminedError,
    reconstruct_with_certificate,
)
from .render import (
    render_mpoly_latex,
    render_mpoly_text,
    render_poly_latex,
    render_poly_text,
)
from .verify import run_suite


def _index(value: str) -> int:
    iv = int(value)
    if iv < -1:
        raise argparse.ArgumentTypeError("index must be >= -1")
    return iv


def _nonneg(value: str) -> int:
    iv = int(value)
    if iv < 0:
        raise argparse.ArgumentTypeError("value must be >= 0")
    return iv


def _emit_json(payload: dict) -> None:
    print(json.dumps(payload, indent=2))


def cmd_hamiltonian(args) -> int:
    record = wang_hamiltonian(args.d, args.cache_dir)
    if args.format == "json":
        payload = {"d": args.d, "engine": ENGINE_VERSION}
        payload.update(to_json_dict(record.density))
        _emit_json(payload)
    elif args.format == "latex":
        print(f"H_{{{args.d}}} = {render_poly_latex(record.density)}")
    else:
        print(f"H_{args.d} = {render_poly_text(record.density)}")
        if record.functional.rep != record.density:
            print(f"normal form = {render_poly_text(record.functional.rep)}")
    return 0


def cmd_s_series(args) -> int:
    series = s_series(args.kmax)
    if args.format == "json":
        payload = {
            "kmax": args.kmax,
            "coefficients": [
                to_json_dict(series.coeff(k)) for k in range(args.kmax + 1)
            ],
        }
        _emit_json(payload)
        return 0
    for k in range(args.kmax + 1):
        if args.format == "latex":
            print(f"S_{{({k})}} = {render_poly_latex(series.coeff(k))}")
        else:
            print(f"S_({k}) = {render_poly_text(series.coeff(k))}")
    return 0


def cmd_commute(args) -> int:
    try:
        report = check_commute(args.d1, args.d2, args.mmax, args.cache_dir)
    except CommutatorNonzero as exc:
        _emit_json(exc.witness_dict())
        return 1
    if args.format == "json":
        _emit_json(report.to_json_dict())
    else:
        print(
            f"PASS [H_{args.d1}, H_{args.d2}] = 0 on momenta <= {args.mmax} "
            f"({len(report.sectors_checked)} momentum sectors)"
        )
    return 0


def cmd_reconstruct(args) -> int:
    try:
        functional, cert = reconstruct_with_certificate(
            args.d, args.G, mmax=args.mmax, cache_dir=args.cache_dir
        )
    except (UnderdeterminedError, InconsistentError) as exc:
        _emit_json({"status": type(exc).__name__, "message": str(exc)})
        return 1
    payload = cert.to_json_dict()
    if args.compare:
        from .reconstruction import compare_with_wang

        matches = compare_with_wang(args.d, args.G, cache_dir=args.cache_dir)
        payload["matches_closed_form"] = matches
        _emit_json(payload)
        return 0 if matches else 1
    _emit_json(payload)
    return 0


def cmd_intersect(args) -> int:
    try:
        sp = assemble_polynomial(args.d, args.g, args.cache_dir)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    names = sp.variable_names()
    if args.format == "json":
        payload = {
            "prediction": True,
            "d": sp.d,
            "g": sp.g,
            "n": sp.n,
            "falling": {
                "(" + ",".join(str(a) for a in exps) + ")": as_rational_string(c)
                for exps, c in sp.falling
            },
            "power": render_mpoly_text(sp.power_dict(), names),
        }
        _emit_json(payload)
        return 0
    if args.format == "latex":
        print(f"% prediction: d={sp.d}, g={sp.g}, n={sp.n}")
        print(
            f"P_{{{sp.d},{sp.g}}}({', '.join(names)}) = "
            f"{render_mpoly_latex(sp.power_dict(), names)}"
        )
        return 0
    print(f"prediction for d={sp.d}, g={sp.g} (n={sp.n} marked points)")
    print(f"P({', '.join(names)}) = {render_mpoly_text(sp.power_dict(), names)}")
    print("falling-basis coefficients:")
    for exps, c in sp.falling:
        label = ",".join(str(a) for a in exps)
        print(f"  ({label}) -> {as_rational_string(c)}")
    return 0


def cmd_verify_all(args) -> int:
    echo = print if args.format == "text" else None
    summary = run_suite(args.level, cache_dir=args.cache_dir, echo=echo)
    if args.format == "json":
        _emit_json(summary.to_json_dict())
    else:
        failures = sum(1 for r in summary.results if not r.passed)
        if summary.passed:
            print(f"ALL CHECKS PASSED (level={summary.level})")
        else:
            print(f"FAILURES: {failures} (level={summary.level})")
    return 0 if summary.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qkdv",
        description="Exact engine for a quantized dispersionless KdV hierarchy.",
    )
    parser.add_argument(
        "--cache-dir",
        default=None,
        help="density cache directory (default: $QKDV_CACHE or ./.qkdv-cache)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hamiltonian", help="print one Hamiltonian density")
    p.add_argument("-d", type=_index, required=True, help="hierarchy index, >= -1")
    p.add_argument("--format", choices=("text", "json", "latex"), default="text")
    p.set_defaults(func=cmd_hamiltonian)

    p = sub.add_parser("s-series", help="print generating-series coefficients")
    p.add_argument("-k", "--kmax", type=_nonneg, required=True)
    p.add_argument("--format", choices=("text", "json", "latex"), default="text")
    p.set_defaults(func=cmd_s_series)

    p = sub.add_parser("commute", help="check one commutator on bounded momenta")
    p.add_argument("--d1", type=_index, required=True)
    p.add_argument("--d2", type=_index, required=True)
    p.add_argument("--mmax", type=_nonneg, default=6)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_commute)

    p = sub.add_parser(
        "reconstruct", help="rebuild a density from commutation constraints"
    )
    p.add_argument("-d", type=_index, required=True)
    p.add_argument("-G", type=_nonneg, required=True, help="highest hbar order")
    p.add_argument("--mmax", type=_nonneg, default=None)
    p.add_argument(
        "--compare",
        action="store_true",
        help="also compare against the closed-form density",
    )
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("intersect", help="print a predicted stratum polynomial")
    p.add_argument("-d", type=_index, required=True)
    p.add_argument("-g", type=_nonneg, required=True, help="genus, >= 0")
    p.add_argument("--format", choices=("text", "json", "latex"), default="text")
    p.set_defaults(func=cmd_intersect)

    p = sub.add_parser("verify-all", help="run the whole verification suite")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_verify_all)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
