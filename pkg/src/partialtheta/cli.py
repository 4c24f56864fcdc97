"""Command-line interface: ``partialtheta {eval,classify,expand,qdim,map,verify}``.

Exit codes: 0 success, 1 verification failure, 2 unreadable arguments,
3 domain error, 4 ambiguous classification, 5 no quantum-dimension clause.
Numbers are printed with 17 significant digits so output is a pure
function of the flags.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .args import EllipticArg, TauArg, ThetaParams, parse_complex, to_fraction
from .errors import AmbiguousClassification, DomainError, NoCaseApplies, ThetaError

MAX_GRID_POINTS = 10**7


def _num(x: float) -> str:
    # adding 0.0 turns -0.0 into 0.0
    return format(float(x) + 0.0, ".17g")


def _cnum(z: complex) -> str:
    return f"{_num(z.real)} {_num(z.imag)}"


# --------------------------------------------------------------------------
# argument types (failures here exit with status 2)


def _rational(text: str) -> Fraction:
    try:
        value, _ = to_fraction(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    return value


def _complex_text(text: str) -> EllipticArg:
    try:
        re, im, kind = parse_complex(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    return EllipticArg(re, im, kind)


def _exact_pair(text: str) -> EllipticArg:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 're,im' as two rationals, got {text!r}")
    vals = []
    for part in parts:
        try:
            value, kind = to_fraction(part)
        except DomainError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from exc
        if kind != "rational":
            raise argparse.ArgumentTypeError(f"{part!r} is not an exact p/q rational")
        vals.append(value)
    return EllipticArg(vals[0], vals[1], "rational")


def _tau(text: str) -> TauArg:
    try:
        return TauArg.of(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _eps_exact(text: str) -> tuple:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected 'k,u0,v0', got {text!r}")
    try:
        k, kk = to_fraction(parts[0])
        u0, ku = to_fraction(parts[1])
        v0, kv = to_fraction(parts[2])
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    if k.denominator != 1:
        raise argparse.ArgumentTypeError(f"k must be an integer, got {parts[0]!r}")
    if "rational" != ku or "rational" != kv:
        raise argparse.ArgumentTypeError("u0 and v0 must be exact p/q rationals")
    return int(k), u0, v0


def _eps_float(text: str) -> complex:
    try:
        re, im, _ = parse_complex(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    return complex(float(re), float(im))


def _module(text: str) -> tuple[str, tuple]:
    kind, sep, rest = text.partition(":")
    if not sep or kind not in ("M", "F"):
        raise argparse.ArgumentTypeError(f"module must look like M:r,s or F:lambda, got {text!r}")
    if kind == "M":
        try:
            r, s = (int(v) for v in rest.split(","))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"cannot read r,s from {rest!r}") from exc
        return "M", (r, s)
    try:
        re, im, _ = parse_complex(rest)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    return "F", (complex(float(re), float(im)),)


def _grid(values: Sequence[str]) -> tuple:
    re_min, re_max, im_min, im_max = (float(v) for v in values[:4])
    n_re, n_im = int(values[4]), int(values[5])
    if n_re < 1 or n_im < 1:
        raise DomainError("grid sizes must be positive")
    if n_re * n_im > MAX_GRID_POINTS:
        raise DomainError(f"grid has {n_re * n_im} points; the limit is {MAX_GRID_POINTS}")
    return re_min, re_max, im_min, im_max, n_re, n_im


# --------------------------------------------------------------------------
# helpers shared by subcommands


def _need(args, *names: str) -> None:
    missing = [n for n in names if getattr(args, n.replace("-", "_")) is None]
    if missing:
        raise DomainError("missing required flag(s): " + ", ".join("--" + n for n in missing))


def _z_of(args) -> EllipticArg:
    if args.z_exact is not None:
        return args.z_exact
    if args.z is None:
        raise DomainError("one of --z or --z-exact is required")
    return args.z


def _label(args):
    from .singlet import Atypical, Typical

    _need(args, "p", "module")
    kind, vals = args.module
    if kind == "M":
        return Atypical(args.p, *vals)
    return Typical(args.p, vals[0])


def _eps_of(args):
    if args.eps_exact is not None:
        return args.eps_exact
    if args.eps is None:
        raise DomainError("one of --eps or --eps-exact is required")
    return args.eps


def _params(args) -> ThetaParams:
    _need(args, "d", "ell")
    return ThetaParams(args.d, args.ell)


# --------------------------------------------------------------------------
# subcommands


def cmd_eval(args) -> int:
    from .numerics import Tolerance
    from .singlet import Atypical, char_atypical, char_typical, dedekind_eta
    from .theta_core import f_partial, g_false, jacobi_theta, m_full

    tol = Tolerance(args.tol, args.tol)
    _need(args, "tau")
    tau = args.tau
    fn = args.fn
    if fn in ("F", "G", "M"):
        func = {"F": f_partial, "G": g_false, "M": m_full}[fn]
        value = func(_params(args), _z_of(args), tau, tol)
    elif fn == "theta":
        value = jacobi_theta(_z_of(args), tau, tol)
    elif fn == "eta":
        value = dedekind_eta(tau, tol)
    else:
        label = _label(args)
        eps = _eps_of(args)
        if fn == "charM":
            if not isinstance(label, Atypical):
                raise DomainError("--fn charM needs --module M:r,s")
            value = char_atypical(label, eps, tau, tol)
        else:
            if isinstance(label, Atypical):
                raise DomainError("--fn charF needs --module F:lambda")
            if isinstance(eps, tuple):
                from .singlet import decompose_eps

                eps = decompose_eps(eps, label.p).value
            value = char_typical(label, eps, tau)
    value = complex(value)
    if args.json:
        print(json.dumps({"re": value.real + 0.0, "im": value.imag + 0.0}, sort_keys=True))
    else:
        print(_cnum(value))
    return 0


def _coord(x: Fraction, source: str) -> str:
    return str(x) if source == "rational" else repr(float(x))


def cmd_classify(args) -> int:
    from .asymptotics import classify_F, classify_G, decompose_z

    _need(args, "ell")
    z = _z_of(args)
    pt = decompose_z(z, args.ell)
    if args.d is not None:
        tag = str(classify_G(ThetaParams(args.d, args.ell), z))
    else:
        tag = classify_F(z, args.ell).value
    print(f"{tag} j={pt.j} x0={_coord(pt.x0, z.source)} y0={_coord(pt.y0, z.source)}")
    return 0


def cmd_expand(args) -> int:
    from .asymptotics import expand_F, expand_G, expansion_to_json

    if args.fn == "F":
        exp = expand_F(_params(args), _z_of(args), args.N)
    elif args.fn == "G":
        exp = expand_G(_params(args), _z_of(args), args.N, variant=args.variant)
    else:
        from .singlet import Atypical, expand_C

        label = _label(args)
        if not isinstance(label, Atypical):
            raise DomainError("--fn C needs --module M:r,s")
        exp = expand_C(label, _eps_of(args), args.N, variant=args.variant)
    print(json.dumps(expansion_to_json(exp), sort_keys=True))
    return 0


def _qdim_text(res) -> str:
    if not res.exists:
        return f"does not exist (case {res.case_tag})"
    v = complex(res.value)
    body = _num(v.real) if v.imag == 0 else _cnum(v)
    return f"{body} (case {res.case_tag})"


def cmd_qdim(args) -> int:
    from .singlet import qdim_closed, qdim_numeric

    label = _label(args)
    eps = _eps_of(args)
    res = qdim_closed(label, eps)
    print(_qdim_text(res))
    if args.numeric:
        est = qdim_numeric(label, eps)
        line = f"numeric {_cnum(est.value)} error {_num(est.error)}"
        if res.exists:
            line += f" diff {_num(abs(est.value - complex(res.value)))}"
        print(line)
    return 0


def _axis(lo: float, hi: float, n: int) -> list[float]:
    if n == 1:
        return [lo]
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def cmd_map(args) -> int:
    from .asymptotics import classify_F
    from .singlet import qdim_closed

    re_min, re_max, im_min, im_max, n_re, n_im = _grid(args.grid)
    out = ["re,im,region,qdim_re,qdim_im,exists"]
    if args.target == "theta":
        _need(args, "ell")
    else:
        label = _label(args)
    for im in _axis(im_min, im_max, n_im):
        for re in _axis(re_min, re_max, n_re):
            point = complex(re, im)
            if args.target == "theta":
                try:
                    region = classify_F(point, args.ell).value
                    exists = "true"
                except AmbiguousClassification:
                    region, exists = "boundary", "false"
                out.append(f"{_num(re)},{_num(im)},{region},,,{exists}")
                continue
            try:
                res = qdim_closed(label, point)
            except DomainError:
                # float points on a boundary line: no clause can be decided
                out.append(f"{_num(re)},{_num(im)},boundary,,,false")
                continue
            if res.exists:
                v = complex(res.value)
                out.append(f"{_num(re)},{_num(im)},{res.case_tag},{_num(v.real)},{_num(v.imag)},true")
            else:
                out.append(f"{_num(re)},{_num(im)},{res.case_tag},,,false")
    sys.stdout.write("\n".join(out) + "\n")
    return 0


def cmd_verify(args) -> int:
    from .verify import report_lines, sweep_cases

    reports = sweep_cases(args.suite, args.seed, perturb=args.perturb)
    for line in report_lines(reports):
        print(line)
    return 0 if all(rep.passed for rep in reports) else 1


# --------------------------------------------------------------------------
# parser


def _add_theta_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--d", type=_rational, help="shift d as p/q")
    p.add_argument("--ell", type=int, help="positive integer l")
    p.add_argument("--z", type=_complex_text, help="z as a+bi (decimals are inexact)")
    p.add_argument("--z-exact", type=_exact_pair, help="z as pr/qr,pi/qi")


def _add_singlet_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--p", type=int, help="singlet parameter p >= 2")
    p.add_argument("--module", type=_module, help="M:r,s or F:lambda")
    p.add_argument("--eps", type=_eps_float, help="eps as a+bi")
    p.add_argument("--eps-exact", type=_eps_exact, help="eps as k,u0,v0 with u0, v0 exact")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="partialtheta", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a theta-type function")
    p.add_argument("--fn", required=True, choices=["F", "G", "M", "theta", "eta", "charM", "charF"])
    _add_theta_flags(p)
    _add_singlet_flags(p)
    p.add_argument("--tau", type=_tau, help="t (so tau = i t) or a+bi")
    p.add_argument("--tol", type=float, default=1e-15)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("classify", help="region tag of z")
    _add_theta_flags(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("expand", help="asymptotic expansion as JSON")
    p.add_argument("--fn", required=True, choices=["F", "G", "C"])
    _add_theta_flags(p)
    _add_singlet_flags(p)
    p.add_argument("--N", type=int, default=0)
    p.add_argument("--variant", choices=["l2t", "lt"], default="l2t", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("qdim", help="quantum dimension")
    _add_singlet_flags(p)
    p.add_argument("--numeric", action="store_true", help="also extrapolate the character ratio")
    p.set_defaults(func=cmd_qdim)

    p = sub.add_parser("map", help="CSV of regions and quantum dimensions over a grid")
    _add_singlet_flags(p)
    p.add_argument("--ell", type=int, help="l for --target theta")
    p.add_argument(
        "--grid", nargs=6, required=True, metavar=("RE_MIN", "RE_MAX", "IM_MIN", "IM_MAX", "N_RE", "N_IM")
    )
    p.add_argument("--target", choices=["eps", "theta"], default="eps")
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("verify", help="run the verification sweep")
    p.add_argument("--suite", choices=["all", "theta", "singlet"], default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--perturb", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NoCaseApplies as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5
    except AmbiguousClassification as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        # DomainError, plus malformed grid numbers
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ThetaError, OverflowError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
