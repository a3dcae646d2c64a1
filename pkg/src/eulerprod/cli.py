"""Command-line front end.

Subcommands::

    analyze   unitarity verdicts, exponent table, rigidity classification
    eval      numeric value via the truncated product and the continuation
    poles     pole/zero atlas of the continued product
    scan      grid evaluation emitted as CSV
    verify    run the acceptance battery

Family parameters are exact rationals (``0``, ``1/2``, ``-3/4``); complex
evaluation points use the form ``re+imi``, e.g. ``0.6+2i``.  Exit status is
0 on success, 1 on domain errors (bad rationals, out-of-region requests,
vanishing factors, ...) and 2 on command-line usage errors.  Defaults may
be overridden by a JSON file named by the ``EULERPROD_CONFIG`` environment
variable.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import acceptance
from .analytic import (
    EvalConfig,
    GridSpec,
    Region,
    atlas_json_obj,
    boundary_scan,
    continued_eval,
    euler_product_eval,
    pole_atlas,
    write_scan_csv,
)
from .datum import datum_euler_product_eval, load_datum, partial_products
from .decomp import decompose, classify_rigidity, RigidityClass
from .errors import EulerProdError
from .families import FamilySpec, assess_unitarity
from .chars import as_param

CONFIG_ENV_VAR = "EULERPROD_CONFIG"

_CONFIG_KEYS = ("prime_limit", "level", "zeta_terms", "bernoulli_terms", "threads")


def _env_defaults() -> dict:
    path = os.environ.get(CONFIG_ENV_VAR)
    if not path:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    unknown = set(data) - set(_CONFIG_KEYS) - {"sample_count", "witness_tol"}
    if unknown:
        raise ValueError(f"unknown config keys in {path}: {sorted(unknown)}")
    return data


def _parse_rational(text: str) -> Fraction:
    try:
        return as_param(text)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"unparsable rational {text!r}")


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace("i", "j").replace(" ", ""))
    except ValueError:
        raise ValueError(f"unparsable complex number {text!r} (expected re+imi)")


def _format_complex(z: complex) -> str:
    return f"{z.real!r}{z.imag:+}i".replace("+", "+", 1)


def _add_family_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument(
        "--abc",
        nargs=3,
        metavar=("A", "B", "C"),
        help="degree-2 family parameters as rationals",
    )
    group.add_argument(
        "--chain",
        nargs="+",
        metavar="A",
        help="chain shifts a_1 .. a_n (rationals, n >= 2); requires --b",
    )
    parser.add_argument("--b", metavar="B", help="top parameter for --chain")


def _spec_from_args(args: argparse.Namespace) -> FamilySpec:
    if args.abc is not None:
        if args.b is not None:
            raise ValueError("--b only applies to --chain")
        a, b, c = (_parse_rational(t) for t in args.abc)
        return FamilySpec.abc(a, b, c)
    if args.b is None:
        raise ValueError("--chain requires --b")
    shifts = [_parse_rational(t) for t in args.chain]
    return FamilySpec.chain(shifts, _parse_rational(args.b))


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-M", "--level", type=int, help="decomposition depth")
    parser.add_argument("-P", "--prime-limit", type=int, help="prime cutoff")
    parser.add_argument("--threads", type=int, help="worker threads (default serial)")


def _config_from_args(args: argparse.Namespace, defaults: dict) -> EvalConfig:
    values = {k: defaults[k] for k in _CONFIG_KEYS if k in defaults}
    if getattr(args, "level", None) is not None:
        values["level"] = args.level
    if getattr(args, "prime_limit", None) is not None:
        values["prime_limit"] = args.prime_limit
    if getattr(args, "threads", None) is not None:
        values["threads"] = args.threads
    return EvalConfig(**values)


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _zeta_identity(table) -> Optional[str]:
    if table.first_boundary_level() is not None:
        return None
    parts = []
    for _, q, lam in table.entries:
        base = "zeta(s)" if q == 0 else f"zeta(s - ({q})i)"
        parts.append(base if lam == 1 else f"{base}^{lam}")
    return " * ".join(parts)


def _cmd_analyze(args: argparse.Namespace, defaults: dict) -> int:
    spec = _spec_from_args(args)
    cfg = _config_from_args(args, defaults)
    sample_count = args.samples or int(defaults.get("sample_count", 64))
    tol = args.tol if args.tol is not None else float(defaults.get("witness_tol", 1e-8))
    poly = spec.polynomial()
    verdict = assess_unitarity(spec, sample_count, tol)
    table = decompose(poly, cfg.level)
    rigidity = classify_rigidity(spec, cfg.level, sample_count, tol)
    identity = _zeta_identity(table)
    first = table.first_boundary_level()

    if args.format == "json":
        payload = {
            "family": spec.label(),
            "polynomial": {
                f"h{m}": coeff.to_strings()
                for m, coeff in enumerate(poly.coeffs, start=1)
            },
            "unitary": verdict.to_json_obj(),
            "rigidity": rigidity.value,
            "first_boundary_level": first,
            "decomposition": table.to_json_obj(),
            "zeta_identity": identity,
        }
        _emit(json.dumps(payload, indent=2), args.out)
        return 0

    lines = [
        f"family: {spec.label()}",
        f"polynomial: {poly}",
        f"unitary (exact test): {'yes' if verdict.algebraic else 'no'}",
    ]
    if verdict.witness is not None:
        moduli = ", ".join(f"{m:.6f}" for m in verdict.witness.root_moduli)
        lines.append(f"witness: x={verdict.witness.x!r}, root moduli [{moduli}]")
    lines.append(f"rigidity: {rigidity.value}")
    if rigidity is RigidityClass.ENTIRE_MEROMORPHIC:
        lines.append(f"identity: {identity}")
        lines.append(
            "the Euler product continues to a meromorphic function on all of C"
        )
    else:
        lines.append(f"first boundary level: {first}")
        lines.append(
            "the Euler product continues meromorphically to Re(s) > 0 only; "
            "poles accumulate toward every point of the line Re(s) = 0"
        )
    lines.append(f"exponent table (depth {cfg.level}):")
    lines.append(table.text_table())
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_eval(args: argparse.Namespace, defaults: dict) -> int:
    spec = _spec_from_args(args)
    cfg = _config_from_args(args, defaults)
    s = _parse_complex(args.s)
    poly = spec.polynomial()

    results: dict[str, object] = {"family": spec.label(), "s": _format_complex(s)}
    if args.datum is not None:
        datum = load_datum(args.datum)
        value = datum_euler_product_eval(datum, poly, s, threads=cfg.threads)
        results["datum"] = datum.label
        results["direct"] = value
        if args.partials:
            results["partials"] = list(partial_products(datum, poly, s))
    else:
        direct: object
        try:
            direct = euler_product_eval(poly, s, cfg)
        except EulerProdError as exc:
            direct = f"error: {exc}"
        table = decompose(poly, cfg.level)
        continued = continued_eval(poly, table, s, cfg)
        results["direct"] = direct
        results["continued"] = continued
        if isinstance(direct, complex):
            results["delta"] = abs(direct - continued)

    if args.format == "json":
        payload = {
            k: (
                {"re": v.real, "im": v.imag}
                if isinstance(v, complex)
                else [{"re": p.real, "im": p.imag} for p in v]
                if isinstance(v, list)
                else v
            )
            for k, v in results.items()
        }
        _emit(json.dumps(payload, indent=2), args.out)
        return 0

    lines = [f"family: {results['family']}", f"s: {results['s']}"]
    if "datum" in results:
        lines.append(f"datum: {results['datum']}")
        lines.append(f"product over norms: {_format_complex(results['direct'])}")
        if args.partials:
            for norm, value in zip(load_datum(args.datum).norms, results["partials"]):
                lines.append(f"  after {norm!r}: {_format_complex(value)}")
    else:
        direct = results["direct"]
        lines.append(
            f"direct [P={cfg.prime_limit}]: "
            + (_format_complex(direct) if isinstance(direct, complex) else str(direct))
        )
        lines.append(f"continued [M={cfg.level}]: {_format_complex(results['continued'])}")
        if "delta" in results:
            lines.append(f"delta: {results['delta']:.3e}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_poles(args: argparse.Namespace, defaults: dict) -> int:
    spec = _spec_from_args(args)
    cfg = _config_from_args(args, defaults)
    table = decompose(spec.polynomial(), cfg.level)
    region = None
    bounds = (args.re_min, args.re_max, args.im_min, args.im_max)
    if any(v is not None for v in bounds):
        if any(v is None for v in bounds):
            raise ValueError("region needs all of --re-min/--re-max/--im-min/--im-max")
        region = Region(*bounds)
    entries = pole_atlas(table, region)

    if args.format == "csv":
        buf = io.StringIO()
        buf.write("re,im,kind,order,m,q,lambda\n")
        for e in entries:
            buf.write(
                f"{float(e.re)!r},{float(e.im)!r},{e.kind},{e.order},{e.m},{e.q},{e.exponent}\n"
            )
        _emit(buf.getvalue(), args.out)
    else:
        _emit(json.dumps(atlas_json_obj(entries), indent=2), args.out)
    return 0


def _cmd_scan(args: argparse.Namespace, defaults: dict) -> int:
    spec = _spec_from_args(args)
    cfg = _config_from_args(args, defaults)
    grid = GridSpec(args.re_min, args.re_max, args.im_min, args.im_max, args.step)
    table = decompose(spec.polynomial(), cfg.level)
    rows = boundary_scan(spec.polynomial(), table, grid, cfg)
    buf = io.StringIO()
    write_scan_csv(rows, buf)
    _emit(buf.getvalue(), args.out)
    return 0


def _cmd_verify(args: argparse.Namespace, defaults: dict) -> int:
    failures = 0

    def report(result) -> None:
        nonlocal failures
        status = "PASS" if result.passed else "FAIL"
        if not result.passed:
            failures += 1
        print(f"{status}  {result.name}  ({result.detail}; {result.seconds:.1f}s)")

    acceptance.run_all(progress=report)
    return 1 if failures else 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eulerprod",
        description="Rigidity analysis and numerical evaluation of parametrized Euler products.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="classify a family member")
    _add_family_flags(p_analyze)
    _add_config_flags(p_analyze)
    p_analyze.add_argument("--samples", type=int, help="witness-search sample count")
    p_analyze.add_argument("--tol", type=float, help="witness modulus tolerance")
    p_analyze.add_argument("--format", choices=["text", "json"], default="text")
    p_analyze.add_argument("--out", help="write the report to a file")
    p_analyze.set_defaults(handler=_cmd_analyze)

    p_eval = sub.add_parser("eval", help="evaluate the Euler product numerically")
    _add_family_flags(p_eval)
    _add_config_flags(p_eval)
    p_eval.add_argument("--s", required=True, help="evaluation point, e.g. 2+0i")
    p_eval.add_argument("--datum", help="norm file; restricts to the plain product")
    p_eval.add_argument(
        "--partials", action="store_true", help="emit partial products (with --datum)"
    )
    p_eval.add_argument("--format", choices=["text", "json"], default="text")
    p_eval.add_argument("--out", help="write the report to a file")
    p_eval.set_defaults(handler=_cmd_eval)

    p_poles = sub.add_parser("poles", help="emit the pole/zero atlas")
    _add_family_flags(p_poles)
    _add_config_flags(p_poles)
    p_poles.add_argument("--re-min", type=float)
    p_poles.add_argument("--re-max", type=float)
    p_poles.add_argument("--im-min", type=float)
    p_poles.add_argument("--im-max", type=float)
    p_poles.add_argument("--format", choices=["json", "csv"], default="json")
    p_poles.add_argument("--out", help="write the atlas to a file")
    p_poles.set_defaults(handler=_cmd_poles)

    p_scan = sub.add_parser("scan", help="evaluate over a grid, emit CSV")
    _add_family_flags(p_scan)
    _add_config_flags(p_scan)
    p_scan.add_argument("--re-min", type=float, required=True)
    p_scan.add_argument("--re-max", type=float, required=True)
    p_scan.add_argument("--im-min", type=float, required=True)
    p_scan.add_argument("--im-max", type=float, required=True)
    p_scan.add_argument("--step", type=float, required=True)
    p_scan.add_argument("--out", help="write the CSV to a file")
    p_scan.set_defaults(handler=_cmd_scan)

    p_verify = sub.add_parser("verify", help="run the acceptance battery")
    p_verify.set_defaults(handler=_cmd_verify)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        defaults = _env_defaults()
        return args.handler(args, defaults)
    except (EulerProdError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
