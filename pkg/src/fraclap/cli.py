"""Command-line front end.

Subcommands
-----------
matrix       ring symbol row (and optionally the dense Laplacian matrix)
dispersion   normalized dispersion surface, or the eigenvalue table of a ring
kernel       L-periodic kernel over an x grid
converge     discrete -> continuum convergence table
verify       identity/oracle suite; exit 1 on any failure

Exit codes: 0 success, 1 verification failure, 2 usage or validation error,
3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import math
import os
import sys

import numpy as np

from . import __version__, chain, checks, continuum
from .chain import ChainSpec, Method
from .errors import ConvergenceError, FracLapError
from .specfun import FracOrder

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
THREADS_ENV = "FRACLAP_THREADS"


class UsageError(Exception):
    pass


def _number(tok: str) -> float:
    tok = tok.strip().lower()
    if tok.endswith("pi"):
        coef = tok[:-2].rstrip("*")
        return (float(coef) if coef else 1.0) * math.pi
    return float(tok)


def parse_grid(text: str) -> list[float]:
    """Comma list ``a,b,c`` or inclusive linspace ``start:stop:num``; ``pi`` multiples allowed."""
    try:
        if ":" in text:
            start, stop, num = text.split(":")
            return np.linspace(_number(start), _number(stop), int(num)).tolist()
        return [_number(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse grid {text!r}: {exc}") from None


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % v
    return str(v)


def _jsonable(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.ndarray):
        return v.tolist()
    return v


def emit(meta: dict, columns: list[str], rows: list[list], fmt: str, out: str | None) -> None:
    meta = {"tool": "fraclap", "version": __version__, **meta}
    buf = io.StringIO()
    if fmt == "json":
        data = [{c: _jsonable(v) for c, v in zip(columns, row)} for row in rows]
        json.dump({"meta": {k: _jsonable(v) for k, v in meta.items()}, "data": data}, buf, indent=1, sort_keys=True)
        buf.write("\n")
    else:
        for key in sorted(meta):
            buf.write(f"# {key}: {json.dumps(_jsonable(meta[key]), sort_keys=True)}\n")
        buf.write(",".join(columns) + "\n")
        for row in rows:
            buf.write(",".join(_fmt(v) for v in row) + "\n")
    text = buf.getvalue()
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)


def _cfg_echo(args: argparse.Namespace) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out") and v is not None}


def _single_alpha(args) -> FracOrder:
    grid = parse_grid(args.alpha)
    if len(grid) != 1:
        raise UsageError("this command takes a single --alpha value")
    return FracOrder(grid[0])


def cmd_matrix(args) -> int:
    if args.n is None:
        raise UsageError("matrix needs --n")
    order = _single_alpha(args)
    spec = ChainSpec(args.n, order, omega2=args.omega2, mu=args.mu)
    meta = {"command": "matrix", "config": _cfg_echo(args), "alpha": order.alpha, "n": args.n, "tol": args.tol}
    if args.method == "both":
        spectral = chain.build_symbol_row(spec, Method.SPECTRAL)
        image = chain.build_symbol_row(spec, Method.IMAGE_SUM, args.tol)
        diff = np.abs(spectral.values - image.values)
        meta.update(method="both", max_abs_diff=float(np.max(diff)), row_sum_residual=spectral.row_sum_residual)
        columns = ["p", "spectral", "imagesum", "abs_diff"]
        rows = [[p, spectral.values[p], image.values[p], diff[p]] for p in range(args.n)]
        row = spectral
    else:
        row = chain.build_symbol_row(spec, Method(args.method), args.tol)
        meta.update(method=args.method, row_sum_residual=row.row_sum_residual)
        columns = ["p", "f"]
        rows = [[p, row.values[p]] for p in range(args.n)]
    if args.full:
        mat = chain.laplacian_matrix(spec, row)
        columns = ["p"] + [f"q{q}" for q in range(args.n)]
        rows = [[p, *mat[p]] for p in range(args.n)]
        meta["content"] = "laplacian_matrix"
    emit(meta, columns, rows, args.format, args.out)
    return EXIT_OK


def cmd_dispersion(args) -> int:
    alphas = parse_grid(args.alpha)
    for a in alphas:
        FracOrder(a)
    meta = {"command": "dispersion", "config": _cfg_echo(args)}
    if args.n is not None:
        columns = ["alpha", "l", "kappa", "omega2"]
        rows = []
        for a in alphas:
            table = chain.dispersion(ChainSpec(args.n, a, omega2=args.omega2))
            rows.extend([a, *r] for r in table.rows())
        meta["content"] = "chain eigenvalues omega2(kappa_l)"
    else:
        kappas = parse_grid(args.kappa_grid)
        columns = ["alpha", "kappa", "omega_over_omega0"]
        rows = [[a, k, float(chain.normalized_frequency(a, k))] for a in alphas for k in kappas]
        meta["content"] = "omega/omega0 = 0.5*2^(alpha/2)*|sin(kappa/2)|^(alpha/2)"
    emit(meta, columns, rows, args.format, args.out)
    return EXIT_OK


def cmd_kernel(args) -> int:
    alphas = parse_grid(args.alpha)
    xs = parse_grid(args.x_grid)
    length = args.length
    if not length > 0:
        raise UsageError(f"--length must be positive, got {length}")
    if args.eps is not None and not args.eps > 0:
        raise UsageError(f"--eps must be positive, got {args.eps}")
    meta = {"command": "kernel", "config": _cfg_echo(args), "length": length}
    if args.eps is None:
        for x in xs:
            xi = math.fmod(x / length, 1.0)
            if min(abs(xi), abs(1.0 - abs(xi))) < continuum.SINGULAR_TOL:
                raise UsageError(f"x={x} is a lattice point of the periodic kernel; pass --eps to regularize")
        meta["representation"] = "hypersingular (Hurwitz zeta)"
    else:
        meta["representation"] = "regularized"
        meta["eps"] = args.eps
    rows = []
    for a in alphas:
        order = FracOrder(a)
        spec = continuum.KernelSpec(order, length, eps=args.eps or 0.0)
        for x in xs:
            if args.eps is None:
                k = continuum.periodic_kernel_zeta(spec, x)
            else:
                k = continuum.periodic_kernel_regularized(spec, x)
            rows.append([a, x, k])
    emit(meta, ["alpha", "x", "kernel"], rows, args.format, args.out)
    return EXIT_OK


def cmd_converge(args) -> int:
    order = _single_alpha(args)
    try:
        lo, hi = (int(t) for t in args.levels.split(":"))
    except ValueError:
        raise UsageError(f"--levels must look like 'lo:hi', got {args.levels!r}") from None
    if hi <= lo:
        raise UsageError("--levels needs hi > lo")
    hs = [2.0**-k for k in range(lo, hi + 1)]
    rep = continuum.convergence_study(order, args.length, args.rho0, args.a_alpha, args.x, hs)
    meta = {
        "command": "converge",
        "config": _cfg_echo(args),
        "fitted_order": rep.fitted_order,
        "monotone": rep.monotone,
    }
    columns = ["h", "n", "x", "discrete", "continuum", "abs_error"]
    rows = [[r.h, r.n, r.x, r.discrete, r.continuum, r.abs_error] for r in rep.rows]
    emit(meta, columns, rows, args.format, args.out)
    return EXIT_OK


def _workers() -> int:
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None


def cmd_verify(args) -> int:
    if args.list:
        sys.stdout.write("\n".join(checks.CHECKS) + "\n")
        return EXIT_OK
    try:
        results = checks.run_checks(args.only, fault=args.inject_fault, workers=_workers())
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    ok = all(r.passed for r in results)
    report = {
        "meta": {"tool": "fraclap", "version": __version__, "command": "verify", "config": _cfg_echo(args)},
        "passed": ok,
        "checks": [r.as_dict() for r in results],
    }
    text = json.dumps(report, indent=1, sort_keys=True) + "\n"
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    for r in results:
        sys.stderr.write(f"{'PASS' if r.passed else 'FAIL'}  {r.name}  max_err={r.max_abs_error:.3g}  err/bound={r.worst_ratio:.3g}\n")
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fraclap",
        description="Fractional Laplacian on periodic chains and strings",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, alpha_default=None):
        p.add_argument("--alpha", default=alpha_default, required=alpha_default is None,
                       help="exponent; list 'a,b' or linspace 'start:stop:num' where allowed")
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--tol", type=float, default=chain.DEFAULT_TOL)

    p = sub.add_parser("matrix", help="symbol row / Laplacian matrix of the N-ring")
    common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--method", choices=["spectral", "imagesum", "both"], default="spectral")
    p.add_argument("--omega2", type=float, default=1.0)
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--full", action="store_true", help="write the dense Laplacian matrix")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("dispersion", help="dispersion surface (figure 1 data) or ring table")
    common(p, alpha_default="0.25:4:16")
    p.add_argument("--kappa-grid", default="0:pi:33")
    p.add_argument("--n", type=int)
    p.add_argument("--omega2", type=float, default=1.0)
    p.set_defaults(func=cmd_dispersion)

    p = sub.add_parser("kernel", help="L-periodic kernel (figure 2 data)")
    common(p, alpha_default="0.5:3.5:7")
    p.add_argument("--length", type=float, default=1.0)
    p.add_argument("--x-grid", default="0.0125:1.9875:80")
    p.add_argument("--eps", type=float)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("converge", help="discrete to continuum convergence table")
    common(p, alpha_default="1")
    p.add_argument("--length", type=float, default=1.0)
    p.add_argument("--x", type=float, default=0.5)
    p.add_argument("--levels", default="3:8", help="h = 2^-k for k in lo:hi")
    p.add_argument("--rho0", type=float, default=1.0)
    p.add_argument("--a-alpha", type=float, default=1.0)
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("verify", help="run the identity and oracle suite")
    p.add_argument("--only", action="append", help="run only this check (repeatable)")
    p.add_argument("--list", action="store_true", help="list check names")
    p.add_argument("--inject-fault", type=float, default=0.0, metavar="REL",
                   help="perturb tested values by this relative amount (self-test)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"fraclap: error: {exc}\n")
        return EXIT_USAGE
    except ConvergenceError as exc:
        sys.stderr.write(f"fraclap: no convergence: {exc}\n")
        return EXIT_NUMERIC
    except FracLapError as exc:
        sys.stderr.write(f"fraclap: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
