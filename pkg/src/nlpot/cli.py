"""Command-line interface: ``nlpot <subcommand> [flags]``.

Tables are written as CSV (one header row, floats with 17 significant
digits, LF line endings) and reports as JSON.  Exit codes: 0 on success,
1 on invalid input, 2 when a verification fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import Optional, Sequence

import numpy as np

from . import acceptance, closedform
from .bernstein import BernsteinError, parse_spec
from .kernels import JumpKernel, KernelError, SigmaKernel, sigma_mass_report
from .operator import (
    Gaussian,
    HarmonicWeighted,
    OperatorError,
    PolyDecay,
    QuadratureConfig,
    ScalarField,
    StretchedExp,
    apply_nonlocal_detailed,
)
from .potential import (
    PotentialError,
    classify_sign,
    criterion_K,
    criterion_threshold_search,
    decay_grid,
    fit_decay_exponent,
    lp_tail_report,
    nondecay_demo,
    pinning_compare,
    predicted_decay,
    reconstruct_potential,
)
from .specfun import SpecialFunctionError

__all__ = ["main", "build_parser", "parse_field", "UsageError"]

_INPUT_ERRORS = (
    BernsteinError,
    KernelError,
    OperatorError,
    PotentialError,
    SpecialFunctionError,
    closedform.ClosedFormError,
    ValueError,
)


class UsageError(Exception):
    """Bad command line; reported with exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _harmonic_polynomial(l: int, d: int) -> closedform.HarmonicPolynomial:
    if l == 0:
        return closedform.one(d)
    if l == 1:
        return closedform.coordinate(0, d)
    if l == 2:
        return closedform.traceless_quadratic(0, 1, d)
    raise ValueError("motiv fields support l in {0, 1, 2}")


def parse_field(text: str, d: int) -> ScalarField:
    """Parse ``polydecay:<kappa>``, ``stretched:<eta>,<gamma>,<delta>``, ``gaussian:<s>`` or ``motiv:<kappa>,<l>``."""
    kind, _, rest = text.strip().partition(":")
    args = [a.strip() for a in rest.split(",")] if rest else []
    try:
        if kind == "polydecay" and len(args) == 1:
            return PolyDecay(float(args[0]), d)
        if kind == "gaussian" and len(args) == 1:
            return Gaussian(float(args[0]), d)
        if kind == "stretched" and len(args) == 3:
            return StretchedExp(float(args[0]), float(args[1]), float(args[2]), d)
        if kind == "motiv" and len(args) == 2:
            return HarmonicWeighted(_harmonic_polynomial(int(args[1]), d), float(args[0]), d)
    except ValueError as exc:
        raise ValueError(f"cannot parse field {text!r}: {exc}") from exc
    raise ValueError(f"cannot parse field {text!r}")


def _parse_grid(text: str) -> np.ndarray:
    """``lo:hi:n`` (evenly spaced) or a comma-separated list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError("grid must be lo:hi:n")
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        if n < 1 or not hi >= lo:
            raise ValueError("grid needs n >= 1 and hi >= lo")
        return np.linspace(lo, hi, n)
    return np.array([float(v) for v in text.split(",") if v.strip()])


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    # adding 0.0 turns -0.0 into 0.0
    return f"{float(v) + 0.0:.17g}"


def _write(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_csv(args, header: Sequence[str], rows) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    _write(args, buf.getvalue())


def _json_safe(obj):
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _write_json(args, payload: dict) -> None:
    _write(args, json.dumps(_json_safe(payload), indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _config(args) -> QuadratureConfig:
    return QuadratureConfig(split_radius_R=args.split_R, rel_tol=args.tol, tail_factor=args.tail_factor)


def _threads(args) -> int:
    if args.threads is not None:
        value = args.threads
    else:
        env = os.environ.get("NLPOT_THREADS", "1")
        try:
            value = int(env)
        except ValueError as exc:
            raise ValueError(f"NLPOT_THREADS must be an integer, got {env!r}") from exc
    if value < 1:
        raise ValueError("thread count must be positive")
    return value


def _cmd_kernel(args) -> int:
    k = JumpKernel(parse_spec(args.model), args.d)
    closed = k.closed_form
    rows = []
    for r in np.geomspace(args.rmin, args.rmax, args.n):
        q = k.quadrature(r, rel_tol=min(args.tol, 1e-10))
        c = float(closed(r)) if closed is not None else float("nan")
        rows.append((r, q, c, abs(q / c - 1.0) if closed is not None else float("nan")))
    _write_csv(args, ["r", "j_quadrature", "j_closed_form", "rel_err"], rows)
    return 0


def _cmd_sigma(args) -> int:
    s = SigmaKernel(args.m, args.alpha, args.d)
    if args.mass:
        rep = sigma_mass_report(s, R=args.R, p=args.p)
        _write_json(args, dict(vars(rep)))
        return 0
    rows = []
    for r in np.geomspace(args.rmin, args.rmax, args.n):
        v = float(s(np.array([r]))[0])
        t = s.t_integral_form(r)
        rows.append((r, v, t, abs(v / t - 1.0)))
    _write_csv(args, ["r", "sigma", "sigma_t_integral", "rel_err"], rows)
    return 0


def _cmd_apply(args) -> int:
    spec = parse_spec(args.model)
    f = parse_field(args.field, args.d)
    cfg = _config(args)
    rows = []
    for x in _parse_grid(args.grid):
        res = apply_nonlocal_detailed(spec, f, x, cfg)
        rows.append((x, res.value, res.est_error))
    _write_csv(args, ["x", "value", "est_err"], rows)
    return 0


def _cmd_reconstruct(args) -> int:
    spec = parse_spec(args.model)
    f = parse_field(args.field, args.d)
    table = reconstruct_potential(spec, f, _parse_grid(args.grid), _config(args), _threads(args))
    _write_csv(args, ["x", "V", "est_err"], zip(table.grid, table.values, table.est_errors))
    return 0


def _cmd_decay_fit(args) -> int:
    spec = parse_spec(args.model)
    f = parse_field(args.field, args.d)
    window = (args.window[0], args.window[1])
    pred = predicted_decay(spec, f, args.d)
    with_log = args.with_log or pred.with_log
    table = reconstruct_potential(spec, f, decay_grid(*window, per_decade=args.per_decade), _config(args), _threads(args))
    rep = fit_decay_exponent(table, window, with_log, pred.exponent)
    _write_json(args, rep.to_json())
    return 0


def _cmd_sign(args) -> int:
    spec = parse_spec(args.model)
    f = parse_field(args.field, args.d)
    grid = np.linspace(args.r_tail, args.rmax, args.n)
    table = reconstruct_potential(spec, f, grid, _config(args), _threads(args))
    _write_json(args, {"sign": classify_sign(table, args.r_tail), "R_tail": args.r_tail, "r_max": args.rmax})
    return 0


def _cmd_kregion(args) -> int:
    crit = criterion_K(args.mode, args.d, args.alpha, args.kappa, args.eta)
    _write_json(args, crit.to_json())
    return 0


def _cmd_threshold(args) -> int:
    if args.mode == "plus":
        if args.alpha is None:
            raise ValueError("plus threshold needs --alpha")
        fixed = {"alpha": args.alpha}
    else:
        if args.kappa is None or args.eta is None:
            raise ValueError("minus threshold needs --kappa and --eta")
        fixed = {"kappa": args.kappa, "eta": args.eta}
    res = criterion_threshold_search(args.mode, args.d, fixed)
    _write_json(args, {"mode": res.mode, "value": res.value, "found": res.found, "message": res.message})
    return 0


def _cmd_lp(args) -> int:
    spec = parse_spec(args.model)
    f = parse_field(args.field, args.d)
    table = reconstruct_potential(spec, f, decay_grid(args.window[0], args.window[1]), _config(args), _threads(args))
    kappa = getattr(f, "kappa", None)
    alpha = getattr(spec, "alpha", None)
    rep = lp_tail_report(table, _floats(args.p), kappa, alpha, args.d, M=args.window[0])
    payload = {k: v for k, v in vars(rep).items() if k != "entries"}
    payload["entries"] = [dict(vars(e)) for e in rep.entries]
    _write_json(args, payload)
    return 0


def _cmd_pinning(args) -> int:
    spec = parse_spec(args.model)
    rec = pinning_compare(spec, parse_field(args.field_plus, args.d), parse_field(args.field_minus, args.d), R=args.R)
    payload = dict(vars(rec))
    payload["balance"] = rec.balance
    _write_json(args, payload)
    return 0


def _cmd_closedform(args) -> int:
    P = _harmonic_polynomial(args.l, args.d)
    grid = _parse_grid(args.grid)
    if args.verify:
        resid = closedform.verify_eigen_identity(P, args.kappa, args.alpha, args.d, list(grid), _config(args))
        payload = {
            "max_residual": resid,
            "V0": closedform.V_at_origin(args.kappa, args.alpha, args.d, args.l),
            "l2_member": closedform.l2_member(P, args.kappa),
            "decay_exponent": None,
            "with_log": None,
            "sign": None,
        }
        # the decay table covers kappa in (l, (delta+alpha)/2) only
        delta = args.d + 2 * args.l
        if args.kappa < 0.5 * (delta + args.alpha):
            case = closedform.decay_case(args.kappa, args.alpha, args.d, args.l)
            payload.update(decay_exponent=case.exponent, with_log=case.with_log, sign=case.sign)
        _write_json(args, payload)
        return 0
    rows = []
    for r in grid:
        point = r
        if args.d > 1:
            point = np.zeros(args.d)
            point[0] = r
        rows.append((r, closedform.phi_kappa(P, args.kappa, point), closedform.V_kappa_alpha(P, args.kappa, args.alpha, args.d, point)))
    _write_csv(args, ["x", "phi", "V"], rows)
    return 0


def _cmd_nondecay(args) -> int:
    spec = parse_spec(args.model)
    f = parse_field(args.field, args.d)
    rep = nondecay_demo(spec, f, _parse_grid(args.grid), _config(args))
    _write_csv(args, ["x", "V"], zip(rep.grid, rep.values))
    return 0


def _cmd_verify(args) -> int:
    ok = True
    lines = []
    for check in acceptance.CRITERIA.values():
        res = check()
        ok &= res.passed
        lines.append(acceptance.format_line(res))
        if not args.out:
            print(lines[-1], flush=True)
    if args.out:
        _write(args, "\n".join(lines) + "\n")
    return 0 if ok else 2


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _add_model(p, default: str = "frac:1.0") -> None:
    p.add_argument("--model", default=default, help="frac:<alpha>, rel:<m>,<alpha>, sum:<alpha>,<beta>")


def _add_field(p, default: str = "polydecay:1.0") -> None:
    p.add_argument("--field", default=default, help="polydecay:<kappa>, stretched:<eta>,<gamma>,<delta>, gaussian:<s>, motiv:<kappa>,<l>")


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with the global flags and every subcommand."""
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-8, help="relative quadrature tolerance")
    common.add_argument("--split-R", dest="split_R", type=float, default=1.0, help="split radius of the operator integral")
    common.add_argument("--tail-factor", type=float, default=50.0, help="tail truncation factor")
    common.add_argument("--threads", type=int, default=None, help="worker threads (falls back to NLPOT_THREADS)")
    common.add_argument("--d", type=int, default=1, help="space dimension")
    common.add_argument("--out", default=None, help="output file (default: standard output)")

    parser = _Parser(prog="nlpot", description="Potentials of nonlocal Schrodinger operators with a given zero-energy eigenfunction.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("kernel", parents=[common], help="jump kernel by quadrature and closed form")
    _add_model(p)
    p.add_argument("--rmin", type=float, default=0.1)
    p.add_argument("--rmax", type=float, default=100.0)
    p.add_argument("--n", type=int, default=64)
    p.set_defaults(run=_cmd_kernel)

    p = sub.add_parser("sigma", parents=[common], help="correction kernel of the relativistic operator")
    p.add_argument("--m", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--rmin", type=float, default=0.01)
    p.add_argument("--rmax", type=float, default=100.0)
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--mass", action="store_true", help="print the mass report as JSON instead")
    p.add_argument("--R", type=float, default=100.0)
    p.add_argument("--p", type=float, default=2.0)
    p.set_defaults(run=_cmd_sigma)

    p = sub.add_parser("apply", parents=[common], help="apply the nonlocal operator to a field")
    _add_model(p)
    _add_field(p)
    p.add_argument("--grid", default="0:5:11", help="lo:hi:n or a comma-separated list")
    p.set_defaults(run=_cmd_apply)

    p = sub.add_parser("reconstruct", parents=[common], help="potential V = -L phi / phi on a grid")
    _add_model(p)
    _add_field(p)
    p.add_argument("--grid", default="0:10:21")
    p.set_defaults(run=_cmd_reconstruct)

    p = sub.add_parser("decay-fit", parents=[common], help="fit the decay exponent of V")
    _add_model(p)
    _add_field(p, "polydecay:0.75")
    p.add_argument("--window", type=float, nargs=2, default=[30.0, 300.0], metavar=("LO", "HI"))
    p.add_argument("--with-log", action="store_true")
    p.add_argument("--per-decade", type=int, default=64)
    p.set_defaults(run=_cmd_decay_fit)

    p = sub.add_parser("sign", parents=[common], help="sign of V at infinity")
    _add_model(p)
    _add_field(p, "polydecay:0.8")
    p.add_argument("--r-tail", type=float, default=20.0)
    p.add_argument("--rmax", type=float, default=200.0)
    p.add_argument("--n", type=int, default=30)
    p.set_defaults(run=_cmd_sign)

    for name, helptext in (("kregion", "extremal value of a criterion function"), ("threshold", "threshold of a criterion function")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--mode", choices=("plus", "minus"), required=True)
        p.add_argument("--alpha", type=float, default=None if name == "threshold" else 1.0)
        p.add_argument("--kappa", type=float, default=None if name == "threshold" else 0.49)
        p.add_argument("--eta", type=float, default=None)
        p.set_defaults(run=_cmd_kregion if name == "kregion" else _cmd_threshold)

    p = sub.add_parser("lp", parents=[common], help="L^p integrability of V outside a ball")
    _add_model(p)
    _add_field(p, "polydecay:0.75")
    p.add_argument("--p", default="1.5,3")
    p.add_argument("--window", type=float, nargs=2, default=[10.0, 1000.0], metavar=("M", "RMAX"))
    p.set_defaults(run=_cmd_lp)

    p = sub.add_parser("pinning", parents=[common], help="compare V(0) of two eigenfunctions")
    _add_model(p)
    p.add_argument("--field-plus", default="polydecay:1.0")
    p.add_argument("--field-minus", default="polydecay:0.5")
    p.add_argument("--R", type=float, default=None)
    p.set_defaults(run=_cmd_pinning)

    p = sub.add_parser("closedform", parents=[common], help="explicit eigenpairs of the fractional Laplacian")
    p.add_argument("--kappa", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--l", type=int, default=0)
    p.add_argument("--grid", default="0:5:11")
    p.add_argument("--verify", action="store_true", help="report the eigen-identity residual as JSON")
    p.set_defaults(run=_cmd_closedform)

    p = sub.add_parser("nondecay", parents=[common], help="potential of a fast-decaying field")
    _add_model(p)
    _add_field(p, "gaussian:1.0")
    p.add_argument("--grid", default="2:20:19")
    p.set_defaults(run=_cmd_nondecay)

    p = sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    p.set_defaults(run=_cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return int(args.run(args))
    except UsageError as exc:
        print(f"nlpot: error: {exc}", file=sys.stderr)
        return 1
    except _INPUT_ERRORS as exc:
        print(f"nlpot: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
