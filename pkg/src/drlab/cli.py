"""Command-line front end: ``drlab verify|kernel|phi|region|strip``."""

from __future__ import annotations

import argparse
import math
import sys
import warnings

from .harness import (
    SUITES,
    ConfigError,
    make_config,
    parse_config_file,
    run_suite,
)
from .model import PRESETS, GroupParams, preset
from .multiplier import (
    MultiplierContext,
    NotInStripClass,
    default_heat_time,
    heat_multiplier,
    parabolic_region_contains,
    resolvent_exp_multiplier,
    strip_class_check,
)
from .spherical import phi

__all__ = ["main", "build_parser", "parse_complex"]

SUITE_HELP = {
    "geometry": "radius, Cayley image, Haar/modular identities, density growth bound",
    "abel": "Abel round trip and evenness",
    "transforms": "Abel round trip, Fourier pair, two-route spherical transform, inverse",
    "spherical": "closed forms, phi_0 and |phi_lambda| envelopes, eigen-equation residual",
    "multiplier": "cutoff partition, kernel supports, derivative bounds, L1 decay, "
                  "reconstruction, local Mihlin-Hormander class",
    "region": "parabolic region, pole/strip equivalence, strip class",
    "kernel": "weighted L1 decay of the dyadic kernels only",
    "paper-core": "union of geometry, transforms, spherical, multiplier and region",
}


class UsageError(ValueError):
    pass


def parse_complex(text: str) -> complex:
    """``RE,IM`` (or a single real) to a complex number."""
    parts = [p.strip() for p in text.split(",")]
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}")


def parse_lambdas(text: str) -> tuple:
    """Comma-separated reals; imaginary parts written Python-style, e.g. ``0,1,0.3j``."""
    try:
        return tuple(complex(x) if "j" in x else float(x) for x in (s.strip() for s in text.split(",")) if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad lambda list {text!r}") from None


def _positive(kind):
    def conv(text):
        v = kind(text)
        if not v > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return v
    return conv


def _add_group(p: argparse.ArgumentParser, default_preset: str | None = None) -> None:
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--preset", choices=sorted(PRESETS), default=default_preset,
                     help="named (m_v, m_z) pair: real-hyp=(2,0), heis=(2,1), quat=(4,3)")
    grp.add_argument("--mv", type=int, help="dimension m_v (positive, even); requires --mz")
    p.add_argument("--mz", type=int, help="dimension m_z (>= 0); requires --mv")


def _add_multiplier(p: argparse.ArgumentParser, defaults: bool) -> None:
    d = (lambda v: v) if defaults else (lambda v: None)
    p.add_argument("--family", choices=("heat", "resolvent-exp"), default=d("heat"),
                   help="test multiplier family")
    p.add_argument("--t", type=_positive(float), help="heat time (default from --hmax)")
    p.add_argument("--c", type=_positive(float), help="resolvent parameter c (default 2W)")
    p.add_argument("--alpha", type=float, default=d(1.0), help="drift alpha (nonzero)")
    p.add_argument("--p", type=float, default=d(4.0), help="exponent p in (1, inf), p != 2")
    p.add_argument("--beta", type=_positive(int), default=d(3), help="regularity order (integer)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="drlab",
        description="Spherical analysis on Damek-Ricci spaces and checks for multipliers "
                    "of Laplacians with drift.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite",
                       description="Suites:\n" + "\n".join(f"  {k}: {h}" for k, h in SUITE_HELP.items()),
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    v.add_argument("suite", help="suite name: " + ", ".join(SUITES))
    _add_group(v)
    _add_multiplier(v, defaults=False)
    v.add_argument("--hmin", type=int, help="first dyadic index (>= 3)")
    v.add_argument("--hmax", type=int, help="last dyadic index")
    v.add_argument("--rmax", type=_positive(float), help="radius range of round-trip checks")
    v.add_argument("--lambdas", type=parse_lambdas, help="spectral parameters, e.g. 0,0.5,1,2,0.3j")
    v.add_argument("--profile", choices=("gaussian",), help="radial test profile")
    v.add_argument("--tol", type=_positive(float), help="override error tolerances")
    v.add_argument("--seed", type=int, help="seed for sampled checks")
    v.add_argument("--config", help="key=value file; command-line flags take precedence")
    v.add_argument("--out", help="write the JSON report here")
    v.add_argument("--csv", help="directory for CSV tables of (h, norm)")
    v.add_argument("--no-timing", action="store_true",
                   help="omit per-check runtimes from JSON (reproducible output)")
    v.set_defaults(func=_cmd_verify)

    k = sub.add_parser("kernel", help="weighted L1 norms of the dyadic kernels and their decay")
    _add_group(k)
    _add_multiplier(k, defaults=False)
    k.add_argument("--hmin", type=int)
    k.add_argument("--hmax", type=int)
    k.add_argument("--config")
    k.add_argument("--out")
    k.add_argument("--csv")
    k.add_argument("--no-timing", action="store_true")
    k.set_defaults(func=_cmd_kernel, suite="kernel")

    ph = sub.add_parser("phi", help="evaluate a spherical function")
    _add_group(ph, default_preset=None)
    ph.add_argument("--lambda", dest="lam", type=parse_complex, required=True, help="RE,IM")
    ph.add_argument("--r", type=float, required=True, help="radius r >= 0")
    ph.set_defaults(func=_cmd_phi)

    rg = sub.add_parser("region", help="membership of x + iy in the parabolic region")
    rg.add_argument("--alpha", type=float, required=True)
    rg.add_argument("--p", type=float, required=True)
    rg.add_argument("--x", type=float, required=True)
    rg.add_argument("--y", type=float, required=True)
    rg.set_defaults(func=_cmd_region)

    st = sub.add_parser("strip", help="fitted strip-class constant of a test multiplier")
    _add_multiplier(st, defaults=True)
    st.add_argument("--hmax", type=int, default=20, help="sets the default heat time")
    st.set_defaults(func=_cmd_strip)
    return parser


def _group(args) -> GroupParams:
    if args.mv is not None or args.mz is not None:
        if args.mv is None or args.mz is None:
            raise UsageError("--mv and --mz must be given together")
        return GroupParams(args.mv, args.mz)
    return preset(args.preset or "real-hyp")


def _context(g, alpha, p, beta) -> MultiplierContext:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return MultiplierContext(g, alpha, p, beta)


def _suite_config(args):
    base = parse_config_file(args.config) if getattr(args, "config", None) else {}
    if args.mv is not None and args.mz is None or args.mz is not None and args.mv is None:
        raise UsageError("--mv and --mz must be given together")
    return make_config(
        base,
        suite=args.suite, preset=args.preset, m_v=args.mv, m_z=args.mz,
        family=args.family, t=args.t, c=args.c, alpha=args.alpha, p=args.p, beta=args.beta,
        h_min=args.hmin, h_max=args.hmax,
        r_max=getattr(args, "rmax", None), lambdas=getattr(args, "lambdas", None),
        profile=getattr(args, "profile", None), tol=getattr(args, "tol", None),
        seed=getattr(args, "seed", None),
    )


def _print_record(rec) -> None:
    print(f"  {'PASS' if rec.passed else 'FAIL'}  {rec.name}  ({rec.runtime:.2f} s)", flush=True)


def _finish(report, args) -> int:
    print(report.format_table())
    if args.out:
        report.write_json(args.out, timing=not args.no_timing)
        print(f"report written to {args.out}")
    if args.csv:
        for path in report.write_csv(args.csv):
            print(f"table written to {path}")
    return report.exit_code


def _cmd_verify(args) -> int:
    cfg = _suite_config(args)
    if cfg.suite not in SUITES:
        raise UsageError(f"unknown suite {cfg.suite!r}; choose from {', '.join(SUITES)}")
    report = run_suite(cfg, progress=_print_record)
    return _finish(report, args)


def _cmd_kernel(args) -> int:
    cfg = _suite_config(args)
    report = run_suite(cfg)
    rec = report.records[0]
    if rec.table:
        print(f"{'h':>4}  {'weighted L1 norm':>18}")
        for h, norm in rec.table:
            print(f"{int(h):>4}  {norm:18.6e}")
    return _finish(report, args)


def _cmd_phi(args) -> int:
    g = _group(args)
    if args.r < 0:
        raise UsageError("--r must be >= 0")
    lam = args.lam
    if abs(lam.imag) > g.Q / 2 + 5:
        raise UsageError(f"|Im lambda| must be <= Q/2 + 5 = {g.Q / 2 + 5:g}")
    value = complex(phi(lam, args.r, g, r_max=max(30.0, args.r)))
    if value.imag == 0 or abs(value.imag) <= 1e-15 * abs(value.real):
        print(f"{value.real:.15g}")
    else:
        print(f"{value.real:.15g},{value.imag:.15g}")
    return 0


def _check_alpha_p(alpha: float, p: float) -> None:
    if alpha == 0 or not math.isfinite(alpha):
        raise UsageError("--alpha must be a nonzero real")
    if not (p > 1 and p != 2 and math.isfinite(p)):
        raise UsageError("--p must lie in (1, inf) minus {2}")


def _cmd_region(args) -> int:
    _check_alpha_p(args.alpha, args.p)
    ctx = _context(GroupParams(2, 0), args.alpha, args.p, 3)
    print("inside" if parabolic_region_contains(args.x, args.y, ctx) else "outside")
    return 0


def _cmd_strip(args) -> int:
    _check_alpha_p(args.alpha, args.p)
    ctx = _context(GroupParams(2, 0), args.alpha, args.p, args.beta)
    if args.family == "heat":
        M = heat_multiplier(args.t or default_heat_time(args.hmax), args.alpha)
    else:
        M = resolvent_exp_multiplier(args.c or 2 * ctx.W, args.alpha)
    try:
        C = strip_class_check(M, ctx, beta=args.beta)
    except NotInStripClass as exc:
        print(f"not in class: {exc}")
        return 1
    print(f"in class: C = {C:.6g} (W = {ctx.W:g}, beta = {args.beta})")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ConfigError) as exc:
        parser.print_usage(sys.stderr)
        print(f"drlab: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        # invalid group parameters and similar range errors from the library
        print(f"drlab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
