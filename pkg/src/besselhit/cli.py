"""Command-line front end.

Every subcommand prints a table, as CSV (header row, shortest round-trip
floats) or as a JSON object mapping column names to value lists.  Exit status
is 0 on success, 1 for usage or input errors, 2 for numerical failures.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from .errors import DomainError, EvaluationError, UnsupportedOrderError
from .hitting_kernels import HittingProblem

DEFAULT_RATIO_NU = (0.0, 0.3, -0.3, 0.5, -0.5, 1.0, -1.0, 1.5, -1.5, 2.0, 2.5, 2.6, 3.5)
DEFAULT_RATIO_C = (1.5, 2.0, 5.0)
DEFAULT_RATIO_W = ("0.1", "1", "10", "1+2j", "1-2j")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _finite(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be finite: {text!r}")
    return v


def _positive(text: str) -> float:
    v = _finite(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------

def _cell(v):
    if isinstance(v, (complex, np.complexfloating)):
        v = complex(v)
        return f"{v.real!r}{'-' if math.copysign(1, v.imag) < 0 else '+'}{abs(v.imag)!r}j"
    if isinstance(v, (float, np.floating)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    return v


def emit(columns: dict, fmt: str, out=None) -> None:
    """Write a column table as CSV or JSON."""
    out = sys.stdout if out is None else out
    names = list(columns)
    cols = [[_cell(v) for v in np.atleast_1d(np.asarray(columns[n], dtype=object))] for n in names]
    if fmt == "json":
        json.dump(dict(zip(names, cols)), out)
        out.write("\n")
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(names)
    for row in zip(*cols):
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _problem(args) -> HittingProblem:
    return HittingProblem(args.a, args.b, args.nu)


def _terms_table(p, t):
    from .density import density_terms

    d = density_terms(p, t)
    return {
        "t": np.atleast_1d(t),
        "f": np.atleast_1d(d.f),
        "q_term": np.atleast_1d(d.q_term),
        "phi1": np.atleast_1d(d.phi1),
        "phi2": np.atleast_1d(d.phi2),
        "psi1": np.atleast_1d(d.psi1),
        "psi2": np.atleast_1d(d.psi2),
    }


def cmd_density(args):
    return _terms_table(_problem(args), np.asarray(args.t, dtype=float))


def cmd_table(args):
    p = _problem(args)
    if not args.t_max > args.t_min:
        raise DomainError("--t-max must exceed --t-min")
    if args.points < 1:
        raise DomainError("--points must be at least 1")
    space = np.geomspace if args.log else np.linspace
    return _terms_table(p, space(args.t_min, args.t_max, args.points))


def cmd_zeros(args):
    from .macdonald_zeros import find_zeros

    z = find_zeros(args.nu).as_array()
    return {"re": z.real, "im": z.imag}


def cmd_ratio_check(args):
    from .ratio_theorem import identity_check

    nus = args.nu if args.nu else DEFAULT_RATIO_NU
    cs = args.c if args.c else DEFAULT_RATIO_C
    ws = args.w if args.w else [_complex(w) for w in DEFAULT_RATIO_W]
    rows = []
    for nu in nus:
        for c in cs:
            p = HittingProblem(c, 1.0, nu)
            for w in ws:
                d, r, ae, re = identity_check(p, w)
                rows.append((nu, c, complex(w), d, r, ae, re))
    names = ("nu", "c", "w", "direct", "decomposed", "abs_err", "rel_err")
    return {n: np.array([row[k] for row in rows], dtype=object) for k, n in enumerate(names)}


def cmd_mc(args):
    from .oracles.montecarlo import McConfig, bin_average_density, set_threads, simulate_hitting, z_scores

    p = _problem(args)
    set_threads(args.threads)
    edges = tuple(np.linspace(args.t_min, args.t_max, args.bins + 1))
    cfg = McConfig(
        paths=args.paths, step=args.step, seed=args.seed, t_max=args.t_max, bins=edges,
        bridge=not args.no_bridge,
    )
    res = simulate_hitting(p, cfg)
    exact = bin_average_density(p, res.edges)
    return {
        "bin_lo": res.edges[:-1],
        "bin_hi": res.edges[1:],
        "mc_density": res.density,
        "se": res.se,
        "analytic_density": exact,
        "z": z_scores(res, exact),
    }


def cmd_laplace_check(args):
    from .density import density
    from .oracles.laplace import laplace_check

    p = _problem(args)
    t = args.t if args.t else np.geomspace(0.1, 100, 20)
    return laplace_check(p, t, density)


def cmd_asym(args):
    from .density import asymptotic_table

    return asymptotic_table(_problem(args), args.t, corrected=args.corrected)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    prob = _Parser(add_help=False)
    prob.add_argument("--a", type=_positive, required=True, help="start level")
    prob.add_argument("--b", type=_positive, required=True, help="target level (below a)")
    prob.add_argument("--nu", type=_finite, required=True, help="index of the Bessel process")

    parser = _Parser(prog="besselhit", description="Hitting-time densities of Bessel processes from above.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("density", parents=[common, prob], help="density and its terms at given times")
    s.add_argument("--t", type=_positive, nargs="+", required=True)
    s.set_defaults(func=cmd_density)

    s = sub.add_parser("table", parents=[common, prob], help="density on a time grid")
    s.add_argument("--t-min", type=_positive, required=True)
    s.add_argument("--t-max", type=_positive, required=True)
    s.add_argument("--points", type=int, default=50)
    s.add_argument("--log", action="store_true", help="geometric spacing")
    s.set_defaults(func=cmd_table)

    s = sub.add_parser("zeros", parents=[common], help="zeros of K_nu")
    s.add_argument("--nu", type=_finite, required=True)
    s.set_defaults(func=cmd_zeros)

    s = sub.add_parser("ratio-check", parents=[common], help="decomposed vs direct K-ratio")
    s.add_argument("--nu", type=_finite, nargs="+")
    s.add_argument("--c", type=_finite, nargs="+")
    s.add_argument("--w", type=_complex, nargs="+")
    s.set_defaults(func=cmd_ratio_check)

    s = sub.add_parser("mc", parents=[common, prob], help="Monte Carlo histogram against the density")
    s.add_argument("--paths", type=int, default=100_000)
    s.add_argument("--seed", type=int, default=12345)
    s.add_argument("--bins", type=int, default=30)
    s.add_argument("--t-min", type=_positive, default=0.05)
    s.add_argument("--t-max", type=_positive, default=20.0)
    s.add_argument("--step", type=_positive, default=1e-2)
    s.add_argument("--threads", type=int, default=None, help="default: $BESSELHIT_THREADS or all cores")
    s.add_argument("--no-bridge", action="store_true")
    s.set_defaults(func=cmd_mc)

    s = sub.add_parser("laplace-check", parents=[common, prob], help="density vs numerical Laplace inversion")
    s.add_argument("--t", type=_positive, nargs="+")
    s.set_defaults(func=cmd_laplace_check)

    s = sub.add_parser("asym", parents=[common, prob], help="density vs its large-time law")
    s.add_argument("--t", type=_positive, nargs="+", default=[1e4, 1e6, 1e8])
    s.add_argument("--corrected", action="store_true", help="include the first log correction (nu = 0)")
    s.set_defaults(func=cmd_asym)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if hasattr(args, "a") and not args.a > args.b:
            raise DomainError(
                f"start a={args.a!r} must exceed target b={args.b!r}: "
                "only hitting from above (a > b) is supported"
            )
        table = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except UnsupportedOrderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (EvaluationError, ArithmeticError) as exc:
        print(f"numerical failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return 2
    emit(table, args.format)
    return 0


if __name__ == "__main__":
    sys.exit(main())
