"""Acceptance checks with fixed parameters, windows and tolerances.

Each check returns a :class:`CriterionResult` holding the measured quantity,
the requirement and the verdict.  They are shared by ``nlpot verify`` and the
test suite, so the thresholds below live in one place.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import closedform
from ._spectral import spectral_apply
from .bernstein import FractionalPower, Relativistic
from .kernels import JumpKernel, SigmaKernel, asymptote_validate, sigma_total_mass
from .operator import (
    Gaussian,
    PolyDecay,
    QuadratureConfig,
    apply_g_operator,
    apply_nonlocal,
)
from .potential import (
    classify_sign,
    criterion_K_scan,
    decay_grid,
    fit_decay_exponent,
    local_shape_check,
    pinning_compare,
    reconstruct_potential,
)

__all__ = ["CriterionResult", "CRITERIA", "run_all", "format_line"]


@dataclass(frozen=True)
class CriterionResult:
    """Outcome of one acceptance check.

    Attributes
    ----------
    number : int
        Position in the suite.
    title : str
        Short description.
    measured : str
        Measured values, formatted.
    required : str
        Requirement, formatted.
    passed : bool
        Verdict.
    """

    number: int
    title: str
    measured: str
    required: str
    passed: bool


def format_line(res: CriterionResult) -> str:
    """One line ``[PASS] 3 sigma mass: measured ... | required ...``."""
    tag = "PASS" if res.passed else "FAIL"
    return f"[{tag}] {res.number:2d} {res.title}: measured {res.measured} | required {res.required}"


def _fractional_kernel() -> CriterionResult:
    k = JumpKernel(FractionalPower(1.0), 1)
    radii = [0.5, 1.0, 5.0, 20.0]
    err = max(abs(k.quadrature(r) * math.pi * r * r - 1.0) for r in radii)
    return CriterionResult(1, "fractional kernel vs 1/(pi r^2)", f"max rel err {err:.3e}", "< 1e-6", err < 1e-6)


def _relativistic_kernel() -> CriterionResult:
    k = JumpKernel(Relativistic(1.0, 1.0), 1)
    radii = [0.5, 2.0, 10.0]
    err = max(abs(k.quadrature(r) / float(k(r)) - 1.0) for r in radii)
    return CriterionResult(2, "relativistic kernel Bessel vs quadrature", f"max rel err {err:.3e}", "< 1e-8", err < 1e-8)


def _sigma_mass() -> CriterionResult:
    errs = []
    for d, alpha, m in [(1, 1.0, 1.0), (3, 0.5, 2.0)]:
        errs.append(abs(sigma_total_mass(SigmaKernel(m, alpha, d)) / m - 1.0))
    err = max(errs)
    return CriterionResult(3, "sigma total mass equals m", f"max rel err {err:.3e}", "< 1e-3", err < 1e-3)


def _decomposition() -> CriterionResult:
    f = Gaussian(1.0)
    rel, frac = Relativistic(1.0, 1.0), FractionalPower(1.0)
    resid = max(
        abs(apply_nonlocal(rel, f, x) - (apply_nonlocal(frac, f, x) - apply_g_operator(1.0, 1.0, f, x)))
        for x in (0.0, 1.0, 3.0)
    )
    g_sup = max(abs(apply_g_operator(1.0, 1.0, f, x)) for x in np.linspace(-10.0, 10.0, 41))
    ok = resid < 1e-6 and g_sup <= 2.0 * f.sup_norm
    return CriterionResult(
        4,
        "massive = massless - G, and |G f| <= 2 m |f|",
        f"residual {resid:.3e}, sup|Gf| {g_sup:.4f}",
        "< 1e-6, <= 2",
        ok,
    )


def _spectral() -> CriterionResult:
    f = Gaussian(1.0)
    xs = np.linspace(-5.0, 5.0, 11)
    errs = []
    for spec in (FractionalPower(1.0), Relativistic(1.0, 1.0)):
        oracle = spectral_apply(spec, f, xs)
        quad = np.array([apply_nonlocal(spec, f, x) for x in xs])
        errs.append(float(np.max(np.abs(quad / oracle - 1.0))))
    err = max(errs)
    return CriterionResult(5, "quadrature vs Fourier multiplier", f"max rel err {err:.3e}", "< 1e-3", err < 1e-3)


def _closed_form() -> CriterionResult:
    P = closedform.one(1)
    xs = [0.0, 0.5, 1.0, 2.0, 5.0]
    r1 = closedform.verify_eigen_identity(P, 1.0, 1.0, 1, xs)
    r2 = closedform.verify_eigen_identity(P, 0.6, 0.5, 1, xs)
    v0 = closedform.V_kappa_alpha(P, 1.0, 1.0, 1, 0.0)
    ok = r1 < 1e-3 and r2 < 1e-3 and abs(v0 + 1.0) < 1e-6
    return CriterionResult(
        6,
        "explicit eigen identity",
        f"residuals {r1:.2e}, {r2:.2e}; V(0) {v0:.12f}",
        "< 1e-3, < 1e-3; -1 within 1e-6",
        ok,
    )


_DECAY_CASES = [
    # (alpha, kappa, window, with_log, predicted, tolerance)
    (1.0, 0.75, (30.0, 300.0), False, -0.5, 0.1),
    (1.0, 0.25, (100.0, 1000.0), False, -1.0, 0.1),
    (1.0, 0.5, (30.0, 300.0), True, -1.0, 0.15),
    (0.5, 0.25, (30.0, 300.0), False, -1.0, 0.2),
]


def _decay() -> CriterionResult:
    parts, ok = [], True
    for alpha, kappa, window, with_log, predicted, tol in _DECAY_CASES:
        spec = FractionalPower(alpha)
        table = reconstruct_potential(spec, PolyDecay(kappa), decay_grid(*window))
        rep = fit_decay_exponent(table, window, with_log, predicted)
        ok &= abs(rep.fitted_exponent - predicted) <= tol
        parts.append(f"{rep.fitted_exponent:.3f}")
    required = ", ".join(f"{p:g}+-{t:g}" for *_, p, t in _DECAY_CASES)
    return CriterionResult(7, "decay exponents under the fractional power", ", ".join(parts), required, ok)


def _light_decay() -> CriterionResult:
    window = (10.0, 60.0)
    table = reconstruct_potential(Relativistic(1.0, 1.0), PolyDecay(0.75), decay_grid(*window))
    rep = fit_decay_exponent(table, window, False, -2.0)
    ok = abs(rep.fitted_exponent + 2.0) <= 0.15
    return CriterionResult(8, "decay exponent under the relativistic kernel", f"{rep.fitted_exponent:.4f}", "-2+-0.15", ok)


def _signs() -> CriterionResult:
    grid = np.linspace(20.0, 200.0, 30)
    cases = [(0.5, 0.2, "negative"), (0.5, 0.6, "positive"), (1.0, 0.8, "positive")]
    found = [classify_sign(reconstruct_potential(FractionalPower(a), PolyDecay(k), grid), 20.0) for a, k, _ in cases]
    ok = all(f == want for f, (*_, want) in zip(found, cases))
    return CriterionResult(9, "sign at infinity", ", ".join(found), ", ".join(c[2] for c in cases), ok)


def _criteria() -> CriterionResult:
    plus = criterion_K_scan("plus", 1, np.arange(0.01, 0.5, 0.01), alpha=1.0)
    minus = criterion_K_scan("minus", 1, np.arange(0.01, 2.0, 0.01), kappa=0.2, eta=1.0)
    ok_plus = plus.found and all(
        k > 0 for v, k in zip(plus.parameters, plus.K_values) if v > plus.threshold
    )
    ok_minus = minus.found and all(
        k < 0 for v, k in zip(minus.parameters, minus.K_values) if v < minus.threshold
    )
    return CriterionResult(
        10,
        "criterion scans",
        f"kappa* {plus.threshold:.3f}, alpha* {minus.threshold:.3f}",
        "K+ > 0 above kappa*, K- < 0 below alpha*",
        bool(ok_plus and ok_minus),
    )


def _pinning() -> CriterionResult:
    frac = FractionalPower(1.0)
    k_minus, k_plus = 0.5, 1.0
    phi_p, phi_m = PolyDecay(k_plus), PolyDecay(k_minus)
    v_p = reconstruct_potential(frac, phi_p, [0.0]).values[0]
    v_m = reconstruct_potential(frac, phi_m, [0.0]).values[0]
    ratio = math.gamma(k_minus) * math.gamma(0.5 + k_plus) / (math.gamma(k_plus) * math.gamma(0.5 + k_minus))
    order_ok = (v_m > v_p) == (ratio > 1.0)
    rec = pinning_compare(frac, phi_p, phi_m, R=1.0)
    gap = abs(rec.delta_V0 - (v_m - v_p))
    return CriterionResult(
        11,
        "pinning at the origin",
        f"V-(0) > V+(0) {bool(v_m > v_p)}, Gamma ratio {ratio:.4f}, delta_V0 gap {gap:.2e}",
        "order matches ratio > 1; gap < 1e-4",
        bool(order_ok and gap < 1e-4),
    )


def _nondecay() -> CriterionResult:
    v10, v20 = reconstruct_potential(FractionalPower(1.0), Gaussian(1.0), [10.0, 20.0]).values
    return CriterionResult(
        12, "Gaussian field gives a growing potential", f"V(10) {v10:.3e}, V(20) {v20:.3e}", "V(20) > V(10) > 10", bool(v20 > v10 > 10)
    )


def _properties() -> CriterionResult:
    frac = FractionalPower(1.0)
    f = Gaussian(1.0)
    base = QuadratureConfig()
    values = [apply_nonlocal(frac, f, 1.0, QuadratureConfig(split_radius_R=R)) for R in (0.5, 1.0, 2.0)]
    spread = max(values) - min(values)
    split_ok = spread <= 10.0 * base.rel_tol * max(1.0, abs(values[0]))

    phi = PolyDecay(1.0)
    grid = np.round(np.arange(-0.5, 0.5 + 1e-9, 0.05), 12)
    table = reconstruct_potential(frac, phi, grid)
    asym = float(np.max(np.abs(table.values - table.values[::-1])))
    shape = local_shape_check(table, phi)

    sigma = SigmaKernel(1.0, 1.0, 1)
    r_dec = sigma.decreasing_radius()
    tail = np.geomspace(r_dec, 1e3, 200)
    sigma_ok = bool(np.all(np.diff(sigma(tail)) < 0))

    rep = asymptote_validate(JumpKernel(frac, 1))
    ratio_alternate, ratio_exact = rep.limit_ratio_alternate, rep.limit_ratio_exact
    ok = (
        split_ok
        and asym < 1e-8
        and shape.V0_nonpositive
        and shape.zero_is_local_min
        and sigma_ok
        and abs(ratio_alternate - 2.0) <= 0.05
        and abs(ratio_exact - 1.0) <= 0.05
    )
    measured = (
        f"split spread {spread:.1e}, asymmetry {asym:.1e}, V(0) {shape.V0:.4f}, "
        f"local min {shape.zero_is_local_min}, sigma decreasing from r={r_dec:.3g} {sigma_ok}, "
        f"kernel ratio halved-constant {ratio_alternate:.4f} exact {ratio_exact:.4f}"
    )
    required = "spread <= 10 rel_tol, symmetric, V(0) <= 0, local min, decreasing, ratios 2+-0.05 and 1+-0.05"
    return CriterionResult(13, "property suite", measured, required, bool(ok))


CRITERIA: dict[int, Callable[[], CriterionResult]] = {
    1: _fractional_kernel,
    2: _relativistic_kernel,
    3: _sigma_mass,
    4: _decomposition,
    5: _spectral,
    6: _closed_form,
    7: _decay,
    8: _light_decay,
    9: _signs,
    10: _criteria,
    11: _pinning,
    12: _nondecay,
    13: _properties,
}


def run_all() -> list[CriterionResult]:
    """Run every check in order."""
    return [check() for check in CRITERIA.values()]
