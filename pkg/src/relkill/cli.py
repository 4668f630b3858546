"""Command-line front end.  Every command prints one JSON report to stdout.

Exit codes: 0 pass, 1 fail, 2 indeterminate within the ansatz window,
64 usage error, 65 bad input data, 66 missing input file.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .fixtures import FIXTURES, NUMERIC_FIXTURES, get_fixture
from .geometry import Metric
from .numeric import (
    NumericHamiltonian,
    bessel_integral,
    conservation_report,
    integrate,
    phase_evaluator,
)
from .parser import ParseError, format_ratfn, parse_ratfn
from .phase import (
    MalformedCofactorError,
    NotRelativeKillingError,
    RationalIntegral,
    cofactor_extract,
    poisson_bracket,
    rational_integral_check,
    reduce_rational_integral,
)
from .phasefn import PhaseFn, PhaseSpace
from .solver import Ansatz, default_window, frlin_from_basis, lambda_dim, param_count_n, solve_space
from .spec_io import SCHEMA_ID, SpecError, load_metric_spec
from .suites import FAIL, INDETERMINATE, PASS, SUITES, run_example_suite
from .surface import (
    CofactorProfile,
    ConformalSurface,
    DegenerateBranch,
    classify_dichotomy,
    gap_expression,
    gaussian_curvature,
    ppp_rhs,
    qqq_residual,
)

EXIT = {PASS: 0, FAIL: 1, INDETERMINATE: 2}
EX_USAGE, EX_DATAERR, EX_NOINPUT = 64, 65, 66


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EX_USAGE)


@dataclass
class Context:
    space: PhaseSpace | None
    metric: Metric | None
    H: PhaseFn | None
    numeric: NumericHamiltonian | None
    name: str

    def parse(self, text: str) -> PhaseFn:
        if self.space is None:
            raise UsageError(f"{self.name} has no symbolic phase space")
        try:
            return self.space.parse(text)
        except ParseError as exc:
            raise InputError(f"cannot parse {text!r}: {exc.reason} at offset {exc.position}") from None
        except ValueError as exc:
            raise InputError(str(exc)) from None

    def need_symbolic(self, what: str) -> None:
        if self.H is None:
            raise UsageError(f"{what} needs a rational metric; {self.name} is numeric only")


def resolve_metric(ref: str) -> Context:
    if ref in FIXTURES:
        fx = get_fixture(ref)
        return Context(fx.space, fx.metric, fx.H, None, ref)
    if ref in NUMERIC_FIXTURES:
        from .numeric import bessel_hamiltonian

        return Context(None, None, None, bessel_hamiltonian(), ref)
    path = Path(ref)
    if not path.exists():
        known = ", ".join(sorted(FIXTURES) + sorted(NUMERIC_FIXTURES))
        raise FileNotFoundError(f"{ref!r} is neither a file nor a built-in metric ({known})")
    loaded = load_metric_spec(path)
    if loaded.is_symbolic:
        g = loaded.metric
        return Context(g.space, g, g.hamiltonian, None, ref)
    return Context(None, None, None, loaded.numeric, loaded.fixture_id)


def _floats(text: str, what: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"{what} must be comma-separated numbers, got {text!r}") from None


# ---------------------------------------------------------------------------
# commands: each returns (status, body)
# ---------------------------------------------------------------------------

def cmd_lambda(args):
    if args.m < 1 or args.d < 0:
        raise UsageError("need --m >= 1 and --d >= 0")
    return PASS, {"m": args.m, "d": args.d, "lambda": lambda_dim(args.m, args.d)}


def cmd_param_count(args):
    if args.m < 1 or args.r < 0 or args.s < 0:
        raise UsageError("need --m >= 1 and --r, --s >= 0")
    n = param_count_n(args.m, args.r, args.s)
    return PASS, {"m": args.m, "r": args.r, "s": args.s, "n": n, "bound": n * n}


def cmd_bracket(args):
    ctx = resolve_metric(args.metric)
    ctx.need_symbolic("bracket")
    H = ctx.H
    F = H if args.F == "H" else ctx.parse(args.F)
    G = H if args.G == "H" else ctx.parse(args.G)
    return PASS, {"F": F.format(), "G": G.format(), "bracket": poisson_bracket(F, G).format()}


def cmd_cofactor(args):
    ctx = resolve_metric(args.metric)
    ctx.need_symbolic("cofactor")
    K = ctx.parse(args.k)
    if K.is_zero():
        raise InputError("K must be nonzero")
    try:
        L = cofactor_extract(ctx.H, K)
    except NotRelativeKillingError:
        return FAIL, {"K": K.format(), "relative_killing": False, "reason": "not relative-Killing"}
    except MalformedCofactorError as exc:
        return FAIL, {
            "K": K.format(),
            "relative_killing": False,
            "reason": "malformed: quotient is not linear in momenta",
            "quotient": exc.quotient.format(),
        }
    return PASS, {"K": K.format(), "relative_killing": True, "cofactor": L.format()}


def cmd_is_integral(args):
    ctx = resolve_metric(args.metric)
    ctx.need_symbolic("is-integral")
    P, Q = ctx.parse(args.p), ctx.parse(args.q)
    if Q.is_zero():
        raise InputError("--q must be nonzero")
    for name, F in (("--p", P), ("--q", Q)):
        if not F.is_zero() and not F.is_homogeneous():
            raise InputError(f"{name} must be homogeneous in the momenta")
    F = RationalIntegral(P, Q)
    ok = rational_integral_check(ctx.H, F)
    return (PASS if ok else FAIL), {
        "P": P.format(),
        "Q": Q.format(),
        "bidegree": list(F.bidegree),
        "reduced": reduce_rational_integral(P, Q).format(),
        "integral": ok,
    }


def _window(ctx, d, N, power):
    g = ctx.metric
    base = default_window(g, d, N)
    if power is None:
        return base
    if power < 0:
        raise UsageError("--denominator-power must be >= 0")
    D = g.inverse_denominator
    return Ansatz(g.space, d, base.N, None if D.is_constant() else D, power if not D.is_constant() else 0)


def cmd_killing(args):
    ctx = resolve_metric(args.metric)
    ctx.need_symbolic("killing")
    if args.degree < 0 or args.ansatz < 0:
        raise UsageError("--degree and --ansatz must be nonnegative")
    mode, L = "killing", None
    if args.conformal:
        mode = "conformal"
        if args.degree == 0:
            raise UsageError("--conformal needs --degree >= 1")
    elif args.cofactor is not None:
        mode, L = "relative", ctx.parse(args.cofactor)
        if not L.is_zero() and L.degrees() != {1}:
            raise InputError("--cofactor must be linear in the momenta")
    window = _window(ctx, args.degree, args.ansatz, args.denominator_power)
    basis = solve_space(ctx.metric, args.degree, mode=mode, L=L, ansatz=window)
    body = {
        "mode": mode,
        "degree": args.degree,
        "window": {
            "N": window.N,
            "denominator": format_ratfn(window.D) if window.D is not None else "1",
            "power": window.k,
        },
        "dim": basis.dim,
        "basis": basis.formatted(),
    }
    if mode != "conformal":
        body["lambda_bound"] = lambda_dim(ctx.metric.m, args.degree)
    if L is not None:
        body["cofactor"] = L.format()
    if basis.multipliers:
        body["multipliers"] = [M.format() for M in basis.multipliers]
    if basis.dim == 0:
        body["note"] = "none within ansatz"
        return INDETERMINATE, body
    return PASS, body


def cmd_frlin(args):
    ctx = resolve_metric(args.metric)
    ctx.need_symbolic("frlin")
    L = ctx.parse(args.cofactor) if args.cofactor is not None else None
    mode = "relative" if L is not None and not L.is_zero() else "killing"
    window = _window(ctx, 1, args.ansatz, args.denominator_power)
    basis = solve_space(ctx.metric, 1, mode=mode, L=L if mode == "relative" else None, ansatz=window)
    found = frlin_from_basis(ctx.H, basis)
    body = {"mode": mode, "dim": basis.dim, "basis": basis.formatted(), "integrals": [F.format() for F in found]}
    if found.diagnostic:
        body["note"] = found.diagnostic
        return INDETERMINATE, body
    return PASS, body


def cmd_surface(args):
    try:
        s = ConformalSurface.from_text(args.factor)
    except ParseError as exc:
        raise InputError(f"cannot parse --factor: {exc.reason} at offset {exc.position}") from None
    except ValueError as exc:
        raise InputError(str(exc)) from None
    K = gaussian_curvature(s)
    body = {"factor": format_ratfn(s.phi)}
    if args.action == "curvature":
        body["gaussian_curvature"] = format_ratfn(K)
        body["scalar_curvature"] = format_ratfn(K * 2)
        return PASS, body
    if args.action == "classify":
        body["gaussian_curvature"] = format_ratfn(K)
        body["verdict"] = str(classify_dichotomy(s))
        return PASS, body
    if args.a is None or args.u is None or args.v is None:
        raise UsageError("surface gap needs --a, --u and --v")

    def parse(text, flag):
        try:
            return s.space.parse_coord(text)
        except ParseError as exc:
            raise InputError(f"cannot parse {flag}: {exc.reason} at offset {exc.position}") from None
        except ValueError as exc:
            raise InputError(f"{flag}: {exc}") from None

    prof = CofactorProfile(parse(args.a, "--a"))
    u, v = parse(args.u, "--u"), parse(args.v, "--v")
    res = qqq_residual(s, prof, u, v)
    gap = gap_expression(s, prof, u, v)
    body["qqq_residual"] = [format_ratfn(r) for r in res]
    body["gap"] = format_ratfn(gap)
    solves = all(r.is_zero() for r in res)
    try:
        rhs = ppp_rhs(s, prof, u, v)
        body["ppp_rhs"] = format_ratfn(rhs)
        body["ppp_matches_u_y"] = rhs == u.diff(1)
    except DegenerateBranch:
        body["ppp_rhs"] = None
        body["note"] = "degenerate branch: a_y = 0"
    body["solves_system"] = solves
    ok = solves and gap.is_zero() and body.get("ppp_matches_u_y", True)
    return (PASS if ok else FAIL), body


def cmd_geodesic(args):
    ctx = resolve_metric(args.metric)
    if args.h <= 0 or args.T <= 0:
        raise UsageError("--h and --T must be positive")
    x0, p0 = _floats(args.x0, "--x0"), _floats(args.p0, "--p0")
    Hn = ctx.numeric if ctx.numeric is not None else NumericHamiltonian.from_phase(ctx.H, ctx.name)
    if len(x0) != Hn.m or len(p0) != Hn.m:
        raise UsageError(f"--x0 and --p0 need {Hn.m} values each")
    watches = []
    for w in args.watch or []:
        if ctx.numeric is not None:
            if w != "F":
                raise UsageError(f"{ctx.name} only supports --watch F (its built-in rational integral)")
            watches.append((w, bessel_integral))
        else:
            try:
                f = parse_ratfn(w, ctx.space.vars)
            except ParseError as exc:
                raise InputError(f"cannot parse --watch {w!r}: {exc.reason} at offset {exc.position}") from None
            watches.append((w, phase_evaluator(f)))
    traj = integrate(Hn, x0, p0, args.h, args.T)
    body = {
        "h": args.h,
        "T": args.T,
        "samples": len(traj),
        "energy_drift": float(f"{traj.energy_drift:.6e}") if len(traj) else None,
    }
    if len(traj):
        body["final"] = {"x": [round(float(v), 12) for v in traj.x[-1]], "p": [round(float(v), 12) for v in traj.p[-1]]}
    if traj.truncated:
        body["diagnostic"] = traj.diagnostic
    body["watch"] = []
    for name, fn in watches:
        r = conservation_report(fn, traj)
        body["watch"].append({"expr": name, "max_drift": float(f"{r.max_drift:.6e}"), "masked": r.masked})
    ok = not traj.truncated and all(w["max_drift"] < args.tol for w in body["watch"])
    return (PASS if ok else FAIL), body


def cmd_verify(args):
    rep = run_example_suite(args.example)
    d = rep.to_dict()
    status = d.pop("status")
    d.pop("command")
    return status, d


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="relkill", description="Killing tensors, relative Killing tensors and rational integrals.")
    p.add_argument("--pretty", action="store_true", help="human-readable output instead of JSON")
    common = _Parser(add_help=False)
    common.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS, help=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    def metric_arg(sp):
        sp.add_argument("--metric", required=True, help="built-in name or path to a JSON metric spec")

    s = sub.add_parser("lambda", help="maximal Killing dimension Lambda_{m,d}")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.set_defaults(func=cmd_lambda)

    s = sub.add_parser("param-count", help="parameter count of rational integrals of bidegree (r,s)")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--s", type=int, required=True)
    s.set_defaults(func=cmd_param_count)

    s = sub.add_parser("bracket", help="Poisson bracket {F, G} (use H for the Hamiltonian)")
    metric_arg(s)
    s.add_argument("F")
    s.add_argument("G")
    s.set_defaults(func=cmd_bracket)

    s = sub.add_parser("cofactor", help="cofactor L with {H, K} = L K")
    metric_arg(s)
    s.add_argument("--k", required=True, metavar="EXPR")
    s.set_defaults(func=cmd_cofactor)

    s = sub.add_parser("is-integral", help="check that P/Q is a first integral")
    metric_arg(s)
    s.add_argument("--p", required=True, metavar="EXPR")
    s.add_argument("--q", default="1", metavar="EXPR")
    s.set_defaults(func=cmd_is_integral)

    s = sub.add_parser("killing", help="basis of (relative / conformal) Killing tensors in an ansatz window")
    metric_arg(s)
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--ansatz", type=int, required=True, metavar="N")
    s.add_argument("--denominator-power", type=int, default=None, metavar="K")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--cofactor", metavar="EXPR")
    g.add_argument("--conformal", action="store_true")
    s.set_defaults(func=cmd_killing)

    s = sub.add_parser("frlin", help="fractional-linear integrals from a common-cofactor basis")
    metric_arg(s)
    s.add_argument("--ansatz", type=int, required=True, metavar="N")
    s.add_argument("--denominator-power", type=int, default=None, metavar="K")
    s.add_argument("--cofactor", metavar="EXPR")
    s.set_defaults(func=cmd_frlin)

    s = sub.add_parser("surface", help="isothermal surface tools")
    s.add_argument("action", choices=["classify", "curvature", "gap"])
    s.add_argument("--factor", required=True, metavar="EXPR")
    s.add_argument("--a", metavar="EXPR")
    s.add_argument("--u", metavar="EXPR")
    s.add_argument("--v", metavar="EXPR")
    s.set_defaults(func=cmd_surface)

    s = sub.add_parser("geodesic", help="integrate the geodesic flow with RK4")
    metric_arg(s)
    s.add_argument("--x0", required=True, metavar="X,Y,...")
    s.add_argument("--p0", required=True, metavar="P,Q,...")
    s.add_argument("--h", type=float, required=True)
    s.add_argument("--T", type=float, required=True)
    s.add_argument("--watch", action="append", metavar="EXPR")
    s.add_argument("--tol", type=float, default=1e-6)
    s.set_defaults(func=cmd_geodesic)

    s = sub.add_parser("verify", help="run a built-in example suite")
    s.add_argument("--example", required=True, choices=list(SUITES))
    s.set_defaults(func=cmd_verify)
    return p


def _format_pretty(report: dict, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    for k, v in report.items():
        if k == "checks":
            lines.append(f"{pad}checks:")
            for c in v:
                lines.append(f"{pad}  [{c['status']}] {c['name']}")
                if c["detail"]:
                    lines.append(f"{pad}      {json.dumps(c['detail'])}")
        elif isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.extend(_format_pretty(v, indent + 1))
        elif isinstance(v, list) and v and all(isinstance(x, str) for x in v):
            lines.append(f"{pad}{k}:")
            lines.extend(f"{pad}  {x}" for x in v)
        else:
            lines.append(f"{pad}{k}: {v if not isinstance(v, (list, dict)) else json.dumps(v)}")
    return lines


def _threads_cap() -> None:
    raw = os.environ.get("RELKILL_THREADS")
    if raw is None:
        return
    try:
        if int(raw) < 1:
            raise ValueError
    except ValueError:
        raise UsageError(f"RELKILL_THREADS must be a positive integer, got {raw!r}") from None
    # all work is sequential, so any positive cap is already respected


def _command_echo(argv) -> list[str]:
    return [a for a in argv if a != "--pretty"]


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code if isinstance(exc.code, int) else EX_USAGE
    try:
        _threads_cap()
        status, body = args.func(args)
        code = EXIT[status]
    except UsageError as exc:
        print(f"relkill: error: {exc}", file=sys.stderr)
        return EX_USAGE
    except (SpecError, InputError) as exc:
        print(f"relkill: invalid input: {exc}", file=sys.stderr)
        return EX_DATAERR
    except FileNotFoundError as exc:
        print(f"relkill: {exc}", file=sys.stderr)
        return EX_NOINPUT
    report = {"schema": SCHEMA_ID, "command": _command_echo(argv), "status": status, **body}
    if args.pretty:
        print("\n".join(_format_pretty(report)))
    else:
        print(json.dumps(report, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
