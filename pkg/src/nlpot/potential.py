"""Potentials reconstructed from zero-energy eigenfunctions and their large-distance behavior.

Given a positive field ``phi`` with ``Phi(-Delta) phi + V phi = 0`` the
potential is

    V(x) = -Phi(-Delta) phi(x) / phi(x) = (1 / (2 phi(x))) int D_h phi(x) j(|h|) dh.

This module tabulates ``V`` on grids, fits decay exponents against the
predicted rates, classifies the sign at infinity, evaluates the explicit
criterion functions that certify a sign, and runs the ``L^p`` tail, pinning
and local-shape analyses.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import integrate, optimize

from .bernstein import (
    BernsteinSpec,
    ExponentiallyLight,
    FractionalPower,
    Relativistic,
    RegularlyVarying,
)
from . import _quad
from .kernels import RadialKernelMixin, nu_tail, second_moment_J, sphere_area
from .operator import (
    Gaussian,
    HarmonicWeighted,
    PolyDecay,
    QuadratureConfig,
    ScalarField,
    StretchedExp,
    apply_nonlocal_detailed,
    estimate_zygmund_L,
    kernel_for,
)

__all__ = [
    "PotentialError",
    "PotentialTable",
    "AsymptoteReport",
    "SignCriterion",
    "reconstruct_potential",
    "predicted_decay",
    "fit_decay_exponent",
    "decay_grid",
    "DecayPrediction",
    "classify_sign",
    "H_plus",
    "H_minus",
    "G_plus",
    "G_minus",
    "criterion_K",
    "criterion_K_scan",
    "criterion_threshold_search",
    "p_star",
    "lp_tail_report",
    "pinning_compare",
    "local_shape_check",
    "nondecay_demo",
    "massive_sign_demo",
    "massive_pinning_demo",
    "boundedness_check",
    "continuity_proxy",
    "zygmund_shape_check",
    "excess_envelope",
]


class PotentialError(ArithmeticError):
    """Invalid input to a potential analysis (vanishing field, bad window, domain violation)."""


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PotentialTable:
    """Samples of ``V`` on a strictly increasing grid.

    Attributes
    ----------
    grid : numpy.ndarray
        Points on the line (signed) or radii ``|x|`` of a radial field.
    values : numpy.ndarray
        ``V`` at the grid points.
    est_errors : numpy.ndarray
        Error estimates propagated from the operator quadrature.
    spec : BernsteinSpec
        Bernstein function of the operator.
    field_id : str
        Descriptor of the eigenfunction.
    d : int
        Space dimension.
    """

    grid: np.ndarray
    values: np.ndarray
    est_errors: np.ndarray
    spec: object
    field_id: str
    d: int = 1

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        errs = np.asarray(self.est_errors, dtype=float)
        if grid.ndim != 1 or grid.shape != values.shape or grid.shape != errs.shape:
            raise PotentialError("grid, values and est_errors must be 1-D arrays of equal length")
        if grid.size > 1 and np.any(np.diff(grid) <= 0):
            raise PotentialError("grid must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise PotentialError("non-finite potential values")
        if np.any(errs < 0):
            raise PotentialError("error estimates must be nonnegative")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "est_errors", errs)

    def at(self, x: float) -> float:
        idx = np.flatnonzero(np.isclose(self.grid, x, rtol=0.0, atol=1e-12 * max(1.0, abs(x))))
        if idx.size == 0:
            raise PotentialError(f"{x} is not a grid point")
        return float(self.values[idx[0]])

    def restrict(self, lo: float, hi: float) -> "PotentialTable":
        keep = (self.grid >= lo) & (self.grid <= hi)
        return PotentialTable(self.grid[keep], self.values[keep], self.est_errors[keep], self.spec, self.field_id, self.d)


def _threads(threads: Optional[int]) -> int:
    if threads is None:
        return 1
    if int(threads) < 1:
        raise PotentialError("threads must be a positive integer")
    return int(threads)


def reconstruct_potential(
    spec,
    phi: ScalarField,
    grid: Sequence[float],
    cfg: Optional[QuadratureConfig] = None,
    threads: Optional[int] = None,
) -> PotentialTable:
    """Tabulate ``V = -Phi(-Delta) phi / phi`` on ``grid``.

    Parameters
    ----------
    spec : BernsteinSpec or JumpKernel
        Operator symbol (or a prebuilt kernel).
    phi : ScalarField
        Positive eigenfunction.
    grid : sequence of float
        Strictly increasing points (signed on the line, radii for radial fields).
    cfg : QuadratureConfig, optional
        Quadrature controls.
    threads : int, optional
        Worker threads; points are independent and results are ordered by grid index.

    Raises
    ------
    PotentialError
        If ``phi`` is not positive on the grid.
    """
    cfg = cfg or QuadratureConfig()
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1:
        raise PotentialError("grid must be one-dimensional")
    phis = np.array([_field_at(phi, x) for x in grid])
    if np.any(~(phis > 0)):
        bad = grid[~(phis > 0)][0]
        raise PotentialError(f"phi must be positive on the grid (fails at {bad})")
    kernel = kernel_for(spec, phi.d)

    def one(x):
        res = apply_nonlocal_detailed(kernel, phi, x, cfg)
        return res.value, res.est_error

    n = _threads(threads)
    if n == 1:
        out = [one(x) for x in grid]
    else:
        with ThreadPoolExecutor(max_workers=n) as pool:
            out = list(pool.map(one, grid))
    lphi = np.array([o[0] for o in out])
    errs = np.array([o[1] for o in out])
    label = spec.label() if isinstance(spec, BernsteinSpec) else type(spec).__name__
    return PotentialTable(grid, -lphi / phis, errs / phis, spec, f"{phi.describe()}|{label}", phi.d)


def _field_at(phi: ScalarField, x: float) -> float:
    if phi.d == 1:
        return float(phi.value(np.asarray(x, dtype=float)))
    point = np.zeros(phi.d)
    point[0] = x
    return float(phi.value(point))


# ---------------------------------------------------------------------------
# Decay exponents
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AsymptoteReport:
    """Fitted decay exponent against its prediction.

    The verdict passes iff ``|fitted - predicted| <= 3 stderr + 0.1``.
    """

    fitted_exponent: float
    exponent_stderr: float
    predicted_exponent: float
    window: tuple
    verdict: str
    log_correction: bool

    def __post_init__(self):
        if not self.window[0] < self.window[1]:
            raise PotentialError("window must satisfy r_lo < r_hi")

    @property
    def deviation(self) -> float:
        return abs(self.fitted_exponent - self.predicted_exponent)

    def to_json(self) -> dict:
        return {
            "fitted": self.fitted_exponent,
            "stderr": self.exponent_stderr,
            "predicted": self.predicted_exponent,
            "window": [float(self.window[0]), float(self.window[1])],
            "verdict": self.verdict,
            "log_correction": self.log_correction,
        }


@dataclass(frozen=True)
class DecayPrediction:
    exponent: float
    with_log: bool
    case: str


def predicted_decay(spec, phi: ScalarField, d: Optional[int] = None) -> DecayPrediction:
    """Predicted power ``p`` in ``V(x) ~ c |x|^p`` (times ``log |x|`` when flagged).

    Regularly varying symbols with ``phi ~ |x|^{-2 kappa}``:

    * ``kappa < d/2``: ``-alpha`` (``-2 alpha`` for the pure fractional
      power at ``kappa = (d - alpha)/2``, where the leading term cancels);
    * ``kappa = d/2``: ``-alpha`` with a logarithmic factor;
    * ``d/2 < kappa < (d + alpha)/2``: ``2 kappa - d - alpha``.

    Exponentially light symbols give ``-2`` for polynomially decaying fields
    and ``-2 (1 - gamma)`` for stretched exponentials with ``gamma < 1``.
    """
    d = phi.d if d is None else d
    kernel = kernel_for(spec, d)
    tail = kernel.tail_class
    if isinstance(phi, (PolyDecay, HarmonicWeighted)):
        delta = d + 2 * (phi.P.degree if isinstance(phi, HarmonicWeighted) else 0)
        if isinstance(tail, ExponentiallyLight):
            return DecayPrediction(-2.0, False, "exponentially light kernel")
        if not isinstance(tail, RegularlyVarying):
            raise PotentialError("no decay prediction for an unclassified kernel")
        a = tail.alpha
        k_eff = phi.kappa
        if isinstance(spec, FractionalPower) and math.isclose(k_eff, 0.5 * (delta - a), abs_tol=1e-12):
            return DecayPrediction(-2.0 * a, False, "kappa = (delta - alpha)/2, leading term cancels")
        if math.isclose(k_eff, 0.5 * delta, abs_tol=1e-12):
            return DecayPrediction(-a, True, "kappa = delta/2")
        if k_eff < 0.5 * delta:
            return DecayPrediction(-a, False, "kappa < delta/2")
        if k_eff < 0.5 * (delta + a):
            return DecayPrediction(2.0 * k_eff - delta - a, False, "delta/2 < kappa < (delta + alpha)/2")
        raise PotentialError("kappa >= (delta + alpha)/2 lies outside the decay table")
    if isinstance(phi, StretchedExp):
        if isinstance(tail, ExponentiallyLight) and phi.gamma < 1:
            return DecayPrediction(-2.0 * (1.0 - phi.gamma), False, "stretched exponential field")
        raise PotentialError("stretched exponential fields decay only under exponentially light kernels with gamma < 1")
    raise PotentialError(f"no decay prediction for {type(phi).__name__}")


def fit_decay_exponent(
    table: PotentialTable,
    window: Optional[tuple] = None,
    with_log: bool = False,
    predicted: Optional[float] = None,
) -> AsymptoteReport:
    """Least-squares slope of ``log |V|`` (minus ``log log r`` when ``with_log``) against ``log r``.

    Parameters
    ----------
    table : PotentialTable
        Tabulated potential.
    window : (float, float), optional
        Fit window, default ``[r_max / 10, r_max]``.
    with_log : bool
        Remove a ``log r`` factor before fitting.
    predicted : float, optional
        Predicted exponent; taken from :func:`predicted_decay` when the table's
        field descriptor is not enough, so it is usually passed explicitly.

    Raises
    ------
    PotentialError
        If the window leaves the grid or ``V`` changes sign inside it.
    """
    r = np.abs(table.grid)
    r_max = float(np.max(r))
    lo, hi = window if window is not None else (r_max / 10.0, r_max)
    if not lo < hi:
        raise PotentialError("window must satisfy r_lo < r_hi")
    sel = (r >= lo * (1 - 1e-12)) & (r <= hi * (1 + 1e-12))
    if lo < np.min(r) * (1 - 1e-12) or hi > r_max * (1 + 1e-12) or np.count_nonzero(sel) < 3:
        raise PotentialError(f"window [{lo}, {hi}] is not inside the grid")
    v = table.values[sel]
    rs = r[sel]
    if np.any(v == 0) or (np.any(v > 0) and np.any(v < 0)):
        raise PotentialError("V changes sign inside the fit window; not fitting")
    x = np.log(rs)
    y = np.log(np.abs(v))
    if with_log:
        if lo <= 1.0:
            raise PotentialError("log-corrected fits need r_lo > 1")
        y = y - np.log(np.log(rs))
    fit = np.polyfit(x, y, 1, cov=True) if x.size > 3 else (np.polyfit(x, y, 1), np.zeros((2, 2)))
    coef, cov = fit
    slope = float(coef[0])
    stderr = float(math.sqrt(max(cov[0, 0], 0.0)))
    if predicted is None:
        raise PotentialError("pass the predicted exponent (see predicted_decay)")
    verdict = "pass" if abs(slope - predicted) <= 3.0 * stderr + 0.1 else "fail"
    return AsymptoteReport(slope, stderr, float(predicted), (float(lo), float(hi)), verdict, bool(with_log))


def decay_grid(r_lo: float, r_hi: float, per_decade: int = 64) -> np.ndarray:
    """Geometric grid with ``per_decade`` points per decade (the default fit grid)."""
    n = int(round(math.log10(r_hi / r_lo) * per_decade)) + 1
    return np.geomspace(r_lo, r_hi, n)


def classify_sign(table: PotentialTable, R_tail: float) -> str:
    """Sign of ``V`` beyond ``R_tail``: ``"positive"``, ``"negative"`` or ``"mixed"``.

    Samples with ``|V|`` below ten times their error estimate are ignored.
    """
    r = np.abs(table.grid)
    if R_tail > np.max(r):
        raise PotentialError("R_tail lies beyond the grid")
    sel = r > R_tail
    v = table.values[sel]
    e = table.est_errors[sel]
    trusted = np.abs(v) >= 10.0 * e
    v = v[trusted]
    if v.size == 0:
        return "mixed"
    if np.all(v > 0):
        return "positive"
    if np.all(v < 0):
        return "negative"
    return "mixed"


# ---------------------------------------------------------------------------
# Sign criterion functions
# ---------------------------------------------------------------------------


def H_plus(t, d: int, alpha: float, kappa: float):
    """Criterion function whose positive maximum certifies ``V > 0`` at infinity.

    Balances the mass of ``phi`` seen from far away against the local
    second-difference term, for ``phi ~ |x|^{-2 kappa}`` and ``t`` the
    fraction of ``|x|`` used as inner radius.
    """
    t = np.asarray(t, dtype=float)
    a, k = alpha, kappa
    s = 2.0 * k + a
    gain = (1.0 - t) ** (d - 2.0 * k) / ((2.0 - t) ** (d + a) * (d - 2.0 * k)) + (s / ((1.0 + t) * (s + 1.0))) ** s
    loss = (
        (1.0 - t) ** d / (d * t ** (d + a))
        + 1.0 / (a * t**a)
        + 2.0 * k * (2.0 * k + 1.0) * d * d * t ** (2.0 - a) / ((2.0 - a) * (1.0 - t) ** (2.0 * k + 2.0))
    )
    return gain - loss


def H_minus(t, d: int, alpha: float, kappa: float, eta: float):
    """Criterion function whose negative minimum certifies ``V < 0`` at infinity.

    ``eta > 0`` fixes the Hoelder exponent ``p = (d + eta) / (2 kappa)`` used
    for the far-field term.
    """
    t = np.asarray(t, dtype=float)
    a, k, e = alpha, kappa, eta
    q = 2.0 * d * k + (d + e) * a
    holder = (q / ((d + e - 2.0 * k) * e)) ** (2.0 * k / (d + e)) * (d + e - 2.0 * k) / q
    return (
        1.0 / ((d - 2.0 * k) * t ** (d + a))
        + 2.0 * k * (2.0 * k + 1.0) * d * d * t ** (2.0 - a) / ((2.0 - a) * (1.0 - t) ** (2.0 * k + 2.0))
        + holder * t ** (-q / (d + e))
        - (1.0 / (a * (1.0 + t) ** a) + (1.0 - t) ** d / (d * (2.0 - t) ** (d + a)))
    )


def G_plus(kappa: float, d: int, alpha: float) -> float:
    """``H_plus(1/2)`` as a function of ``kappa``."""
    return float(H_plus(0.5, d, alpha, kappa))


def G_minus(alpha: float, d: int, kappa: float, eta: float) -> float:
    """``H_minus(1/2)`` as a function of ``alpha``."""
    return float(H_minus(0.5, d, alpha, kappa, eta))


@dataclass(frozen=True)
class SignCriterion:
    """Extremum of a criterion function over ``t in (0, 1)``."""

    mode: str
    d: int
    alpha: float
    kappa: float
    eta: Optional[float]
    K_value: float
    argopt_t: float

    def __post_init__(self):
        if not 0.0 < self.argopt_t < 1.0:
            raise PotentialError("argopt_t must lie in (0, 1)")

    @property
    def certifies(self) -> bool:
        return self.K_value > 0 if self.mode == "plus" else self.K_value < 0

    def to_json(self) -> dict:
        return {"K_value": self.K_value, "argopt_t": self.argopt_t}


def _check_criterion_domain(mode: str, d: int, alpha: float, kappa: float, eta: Optional[float]) -> None:
    if mode not in ("plus", "minus"):
        raise PotentialError("mode must be 'plus' or 'minus'")
    if int(d) != d or d < 1:
        raise PotentialError("d must be a positive integer")
    if not 0 < alpha < 2:
        raise PotentialError("alpha must lie in (0, 2)")
    if mode == "plus" and not 0.5 * (d - 1) < kappa < 0.5 * d:
        raise PotentialError("plus criterion needs kappa in ((d-1)/2, d/2)")
    if mode == "minus":
        if not 0 < kappa < 0.5 * d:
            raise PotentialError("minus criterion needs kappa in (0, d/2)")
        if eta is None or not eta > 0:
            raise PotentialError("minus criterion needs eta > 0")


def criterion_K(mode: str, d: int, alpha: float, kappa: float, eta: Optional[float] = None) -> SignCriterion:
    """``K_+ = max_t H_plus`` or ``K_- = min_t H_minus`` over ``t in (0, 1)``.

    A ``1e-3`` grid scan locates the best sample, which is then refined by
    golden-section search to ``1e-8`` inside its neighboring grid bracket.
    """
    _check_criterion_domain(mode, d, alpha, kappa, eta)
    if mode == "plus":

        def objective(t):
            return -float(H_plus(t, d, alpha, kappa))

    else:

        def objective(t):
            return float(H_minus(t, d, alpha, kappa, eta))

    grid = np.arange(1, 1000) * 1e-3
    with np.errstate(all="ignore"):
        vals = np.array([objective(t) for t in grid])
    vals = np.where(np.isfinite(vals), vals, np.inf)
    i = int(np.argmin(vals))
    if 0 < i < grid.size - 1:
        t_opt = float(optimize.golden(objective, brack=(grid[i - 1], grid[i], grid[i + 1]), tol=1e-8))
        if not (grid[i - 1] < t_opt < grid[i + 1]) or objective(t_opt) > vals[i]:
            t_opt = float(grid[i])
    else:
        t_opt = float(grid[i])
    best = objective(t_opt)
    K = -best if mode == "plus" else best
    return SignCriterion(mode, int(d), float(alpha), float(kappa), None if eta is None else float(eta), float(K), t_opt)


@dataclass(frozen=True)
class ThresholdScan:
    """Grid scan of ``K_+`` over ``kappa`` or ``K_-`` over ``alpha``."""

    mode: str
    parameters: np.ndarray
    K_values: np.ndarray
    threshold: Optional[float]

    @property
    def found(self) -> bool:
        return self.threshold is not None


def criterion_K_scan(mode: str, d: int, values: Sequence[float], **fixed) -> ThresholdScan:
    """Evaluate ``K`` along a parameter grid and locate the certified region.

    ``plus`` scans ``kappa`` (with ``alpha`` fixed) and returns the smallest
    grid value beyond which every sample has ``K_+ > 0``.  ``minus`` scans
    ``alpha`` (with ``kappa`` and ``eta`` fixed) and returns the largest grid
    value below which every sample has ``K_- < 0``.
    """
    values = np.asarray(values, dtype=float)
    if mode == "plus":
        K = np.array([criterion_K("plus", d, fixed["alpha"], k).K_value for k in values])
        good = K > 0
        bad = np.flatnonzero(~good)
        if good.all():
            return ThresholdScan(mode, values, K, float(values[0]))
        start = bad[-1] + 1
        return ThresholdScan(mode, values, K, float(values[start]) if start < values.size else None)
    if mode == "minus":
        K = np.array([criterion_K("minus", d, a, fixed["kappa"], fixed["eta"]).K_value for a in values])
        good = K < 0
        bad = np.flatnonzero(~good)
        if good.all():
            return ThresholdScan(mode, values, K, float(values[-1]))
        stop = bad[0] - 1
        return ThresholdScan(mode, values, K, float(values[stop]) if stop >= 0 else None)
    raise PotentialError("mode must be 'plus' or 'minus'")


@dataclass(frozen=True)
class ThresholdResult:
    """Parameter threshold from the sign of ``G_+`` or ``G_-``."""

    mode: str
    value: Optional[float]
    message: str

    @property
    def found(self) -> bool:
        return self.value is not None


def criterion_threshold_search(mode: str, d: int, fixed: dict) -> ThresholdResult:
    """Threshold parameter from the closed-form probes ``G_+`` and ``G_-``.

    ``plus``: smallest ``kappa`` in ``((d-1)/2, d/2)`` with ``G_+(kappa) > 0``
    (``fixed = {"alpha": ...}``).  ``minus``: largest ``alpha`` in ``(0, 2)``
    with ``G_-(alpha) < 0`` (``fixed = {"kappa": ..., "eta": ...}``).  The
    sign change is located on a ``1e-3`` grid and refined by bisection.  A
    missing sign change is reported in the result, not raised.
    """
    if mode == "plus":
        alpha = fixed["alpha"]
        lo, hi = 0.5 * (d - 1), 0.5 * d
        grid = np.arange(lo + 1e-3, hi - 1e-12, 1e-3)

        def g(k):
            return G_plus(k, d, alpha)

        vals = np.array([g(k) for k in grid])
        pos = vals > 0
        if not pos.any():
            return ThresholdResult(mode, None, "G_+ has no positive sample in ((d-1)/2, d/2)")
        first = int(np.argmax(pos))
        # the certified region must extend to the right end of the grid
        if not pos[first:].all():
            first = int(np.flatnonzero(~pos)[-1] + 1)
        if first == 0:
            return ThresholdResult(mode, float(grid[0]), "G_+ positive on the whole grid")
        root = optimize.bisect(g, grid[first - 1], grid[first], xtol=1e-12)
        return ThresholdResult(mode, float(root), "sign change located")
    if mode == "minus":
        kappa, eta = fixed["kappa"], fixed["eta"]
        _check_criterion_domain("minus", d, 1.0, kappa, eta)
        grid = np.arange(1e-3, 2.0 - 1e-12, 1e-3)

        def g(a):
            return G_minus(a, d, kappa, eta)

        vals = np.array([g(a) for a in grid])
        neg = vals < 0
        if not neg.any():
            return ThresholdResult(mode, None, "G_- has no negative sample in (0, 2)")
        if neg.all():
            return ThresholdResult(mode, float(grid[-1]), "G_- negative on the whole grid")
        last = int(np.flatnonzero(~neg)[0] - 1)
        if last < 0:
            return ThresholdResult(mode, None, "G_- is not negative near alpha = 0")
        root = optimize.bisect(g, grid[last], grid[last + 1], xtol=1e-12)
        return ThresholdResult(mode, float(root), "sign change located")
    raise PotentialError("mode must be 'plus' or 'minus'")


# ---------------------------------------------------------------------------
# L^p tails
# ---------------------------------------------------------------------------


def p_star(spec, phi: ScalarField, d: Optional[int] = None) -> float:
    """Critical exponent: ``V`` lies in ``L^p`` away from the origin iff ``p > p*``."""
    pred = predicted_decay(spec, phi, d)
    d = phi.d if d is None else d
    return d / -pred.exponent


@dataclass(frozen=True)
class LpEntry:
    p: float
    partial_integral: float
    partial_integral_half: float
    tail_exponent: float
    verdict: str


@dataclass(frozen=True)
class LpReport:
    """Numeric ``int_{|x| > M} |V|^p`` on the tabulated range with finite or divergent verdicts."""

    M: float
    r_max: float
    fitted_exponent: float
    p_star_predicted: float
    p_star_fitted: float
    entries: list = field(default_factory=list)


def lp_tail_report(
    table: PotentialTable,
    p_values: Sequence[float],
    kappa: Optional[float] = None,
    alpha: Optional[float] = None,
    d: Optional[int] = None,
    M: Optional[float] = None,
    p_star_predicted: Optional[float] = None,
) -> LpReport:
    """``L^p`` behavior of the tail of ``V``.

    For each ``p`` the integral ``d omega_d int_M^{r} s^{d-1} |V(s)|^p ds``
    is computed on the table at ``r = sqrt(M r_max)`` and ``r = r_max``.  The
    verdict uses the decay exponent fitted on the last decade: ``finite`` when
    ``|V|^p r^{d-1}`` decays faster than ``r^{-1}``.  The critical exponent is
    ``d / (alpha + d - 2 kappa)`` for ``kappa > d/2`` and ``d / alpha`` for
    ``kappa <= d/2`` unless given explicitly.
    """
    d = table.d if d is None else d
    r = np.abs(table.grid)
    order = np.argsort(r)
    r, v = r[order], np.abs(table.values[order])
    M = float(r[0]) if M is None else float(M)
    r_max = float(r[-1])
    keep = r >= M
    r, v = r[keep], v[keep]
    if np.any(v == 0):
        raise PotentialError("V vanishes on the tail; L^p report needs a decaying table")
    fit = np.polyfit(np.log(r[r >= r_max / 10]), np.log(v[r >= r_max / 10]), 1)
    slope = float(fit[0])
    if p_star_predicted is None:
        if kappa is None or alpha is None:
            raise PotentialError("pass kappa and alpha or p_star_predicted")
        p_star_predicted = d / (alpha + d - 2 * kappa) if kappa > 0.5 * d else d / alpha
    area = sphere_area(d)
    mid = math.sqrt(M * r_max)
    entries = []
    for p in p_values:
        integrand = r ** (d - 1) * v**p
        full = area * float(integrate.trapezoid(integrand * r, np.log(r)))
        half_sel = r <= mid
        half = area * float(integrate.trapezoid(integrand[half_sel] * r[half_sel], np.log(r[half_sel])))
        tail_exp = d - 1 + p * slope
        entries.append(LpEntry(float(p), full, half, tail_exp, "finite" if tail_exp < -1 else "divergent"))
    return LpReport(M, r_max, slope, float(p_star_predicted), d / -slope if slope < 0 else math.inf, entries)


# ---------------------------------------------------------------------------
# Pinning at the origin
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PinningRecord:
    """Split of ``V_-(0) - V_+(0)`` at a radius ``R``.

    ``I_pm`` are regularized by the common value ``a = phi_pm(0)``:
    ``I_pm = int_0^R r^{d-1} (rho_pm - a) j dr``.  Each plain integral
    ``int_0^R r^{d-1} rho_pm j dr`` diverges at the origin, but the
    regularization cancels in ``I_- - I_+``.
    """

    I_plus: float
    I_minus: float
    J_plus: float
    J_minus: float
    delta_V0: float
    R: float
    a: float

    @property
    def balance(self) -> float:
        return (self.I_minus - self.I_plus) - (self.J_plus - self.J_minus)


def _crossing_radius(phi_plus: ScalarField, phi_minus: ScalarField, r_max: float = 1e4) -> float:
    radii = np.geomspace(1e-6, r_max, 20001)
    signs = np.sign(phi_plus.profile(radii) - phi_minus.profile(radii))
    nonzero = np.flatnonzero(signs != 0)
    flips = nonzero[1:][np.diff(signs[nonzero]) != 0]
    if flips.size == 0:
        raise PotentialError("the two fields do not cross")
    if flips.size > 1:
        raise PotentialError("the two fields cross more than once")
    hi = int(flips[0])
    lo = int(nonzero[np.searchsorted(nonzero, hi) - 1])
    return float(
        optimize.bisect(
            lambda r: float(phi_plus.profile(r) - phi_minus.profile(r)), radii[lo], radii[hi], xtol=1e-14
        )
    )


def _regularized_head(kernel: RadialKernelMixin, phi: ScalarField, a: float, R: float) -> float:
    """``int_0^R r^{d-1} (rho(r) - a) j(r) dr`` with a quadratic model below ``1e-3 R``."""
    d = phi.d
    h0 = 1e-3 * min(R, phi.scale)
    probe = np.array([h0, 0.5 * h0])
    q = (phi.profile(probe) - a) / probe**2
    q2 = (q[0] - q[1]) / (0.75 * h0 * h0)
    q0 = q[1] - q2 * 0.25 * h0 * h0
    inner = q0 * kernel.radial_head_moment(2.0, h0) + q2 * kernel.radial_head_moment(4.0, h0)

    def f(r):
        return r ** (d - 1) * (float(phi.profile(r)) - a) * float(kernel(np.array([r]))[0])

    outer, _ = integrate.quad(f, h0, R, epsabs=0.0, epsrel=1e-12, limit=500)
    return inner + outer


def _tail_moment(kernel: RadialKernelMixin, phi: ScalarField, R: float) -> float:
    """``int_R^inf r^{d-1} rho(r) j(r) dr``: Gauss-Kronrod on [R, 4^12 R], power-law remainder beyond."""
    d = phi.d

    def f(r):
        r = np.asarray(r, dtype=float)
        return r ** (d - 1) * phi.profile(r) * kernel(r)

    edges = R * 4.0 ** np.arange(13)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        total += integrate.quad(lambda r: float(f(r)), lo, hi, epsabs=0.0, epsrel=1e-12, limit=200)[0]
    rest, _ = _quad.integrate_outward(f, float(edges[-1]), rel_tol=1e-13)
    return total + rest


def pinning_compare(spec, phi_plus: ScalarField, phi_minus: ScalarField, R: Optional[float] = None) -> PinningRecord:
    """Compare the depths ``V_pm(0)`` through inner and outer kernel moments.

    ``V_-(0) - V_+(0) = (d omega_d / a) ((I_- - I_+) - (J_+ - J_-))`` with the
    inner moments ``I`` on ``[0, R]`` and the outer moments ``J`` on
    ``[R, inf)``.  When ``R`` is omitted the single crossing radius of the
    two profiles is located by bisection.  The moments are computed with
    adaptive Gauss-Kronrod quadrature, independently of the operator code.

    Raises
    ------
    PotentialError
        If the fields are not radial, differ at the origin, or do not cross
        exactly once when ``R`` is omitted.
    """
    if not (phi_plus.radial and phi_minus.radial) or phi_plus.d != phi_minus.d:
        raise PotentialError("pinning needs two radial fields in the same dimension")
    a_plus = float(phi_plus.profile(0.0))
    a_minus = float(phi_minus.profile(0.0))
    if not math.isclose(a_plus, a_minus, rel_tol=1e-12):
        raise PotentialError("fields must agree at the origin")
    a = a_plus
    if R is None:
        R = _crossing_radius(phi_plus, phi_minus)
    if not R > 0:
        raise PotentialError("R must be positive")
    kernel = kernel_for(spec, phi_plus.d)
    I_p = _regularized_head(kernel, phi_plus, a, R)
    I_m = _regularized_head(kernel, phi_minus, a, R)
    J_p = _tail_moment(kernel, phi_plus, R)
    J_m = _tail_moment(kernel, phi_minus, R)
    area = sphere_area(phi_plus.d)
    delta = area / a * ((I_m - I_p) - (J_p - J_m))
    record = PinningRecord(float(I_p), float(I_m), float(J_p), float(J_m), float(delta), float(R), a)
    if np.sign(record.delta_V0) != np.sign(record.balance):
        raise PotentialError("sign of delta_V0 disagrees with the moment balance")
    return record


# ---------------------------------------------------------------------------
# Shape near the origin
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LocalShape:
    V0: float
    V0_nonpositive: bool
    zero_is_local_min: bool
    r5: Optional[float]


def local_shape_check(table: PotentialTable, phi: ScalarField, tolerance: Optional[float] = None) -> LocalShape:
    """Flags for ``V(0) <= 0`` and a strict local minimum of ``V`` at the origin.

    ``V0_nonpositive`` is only asserted for radial fields that are maximal at
    the origin (the hypothesis of the statement); otherwise it is ``False``.
    ``r5`` is the largest sampled radius such that ``V(0) < V(x)`` for every
    sample with ``0 < |x| <= r5``.
    """
    grid = table.grid
    zero = np.flatnonzero(np.abs(grid) < 1e-14)
    if zero.size != 1:
        raise PotentialError("table must contain the origin")
    i0 = int(zero[0])
    V0 = float(table.values[i0])
    tol = 10.0 * float(table.est_errors[i0]) if tolerance is None else tolerance
    probe = np.linspace(0.0, 10.0 * phi.scale, 201)
    prof = phi.profile(probe) if phi.radial else phi.value(probe)
    max_at_origin = bool(phi.radial and np.all(prof <= prof[0] + 1e-15))
    nonpositive = max_at_origin and V0 <= tol
    r = np.abs(grid)
    order = np.argsort(r)
    r5 = None
    for j in order:
        if j == i0:
            continue
        if table.values[j] > V0:
            r5 = float(r[j])
        else:
            break
    return LocalShape(V0, bool(nonpositive), r5 is not None, r5)


# ---------------------------------------------------------------------------
# Growth, thresholds and bounds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NondecayReport:
    grid: np.ndarray
    values: np.ndarray
    increasing_from: Optional[float]
    envelope_constant: float
    exceeds_envelope: bool


def nondecay_demo(
    spec,
    phi: ScalarField,
    grid: Sequence[float],
    cfg: Optional[QuadratureConfig] = None,
    C1: float = 0.5,
) -> NondecayReport:
    """Growth of ``V`` for fields decaying faster than the kernel.

    Locates the radius beyond which the sampled ``V`` is increasing and fits
    the constant ``C`` of the lower envelope
    ``C |x|^{-alpha} exp(eta (1 - (1 - C1)^beta) |x|^beta)`` for Gaussian
    (``eta = 1/(2 s^2)``, ``beta = 2``) and stretched exponential fields.
    """
    table = reconstruct_potential(spec, phi, grid, cfg)
    v = table.values
    inc = np.diff(v) > 0
    increasing_from = None
    if inc.size and inc[-1]:
        k = inc.size - 1
        while k > 0 and inc[k - 1]:
            k -= 1
        increasing_from = float(table.grid[k])
    if isinstance(phi, Gaussian):
        eta, beta = 0.5 / phi.s**2, 2.0
    elif isinstance(phi, StretchedExp):
        eta, beta = phi.eta_phi, phi.gamma
    else:
        return NondecayReport(table.grid, v, increasing_from, 0.0, False)
    tail = kernel_for(spec, phi.d).tail_class
    a = tail.alpha
    r = np.abs(table.grid)
    sel = (r >= (increasing_from if increasing_from is not None else r[-1])) & (r > 0)
    shape = np.ones_like(r)
    shape[sel] = r[sel] ** (-a) * np.exp(eta * (1.0 - (1.0 - C1) ** beta) * r[sel] ** beta)
    C = float(np.min(v[sel] / shape[sel])) if np.any(sel) else 0.0
    return NondecayReport(table.grid, v, increasing_from, C, C > 0)


@dataclass(frozen=True)
class MassiveSignDemo:
    c: float
    m_star: float
    m_used: float
    min_V_massive: float
    positive: bool


def massive_sign_demo(
    phi: ScalarField,
    alpha: float,
    annulus: tuple = (10.0, 12.0),
    n_points: int = 9,
    cfg: Optional[QuadratureConfig] = None,
) -> MassiveSignDemo:
    """Positivity of the massive potential on an annulus for small mass.

    With ``c = min -L_0 phi`` on the annulus, every mass below
    ``m* = c / (2 ||phi||_inf)`` keeps ``V_m > 0`` there, since
    ``|G_m phi| <= 2 m ||phi||_inf``.  The check runs at ``m = m*/2``.
    """
    xs = np.linspace(annulus[0], annulus[1], n_points)
    frac = FractionalPower(alpha)
    l0 = np.array([apply_nonlocal_detailed(frac, phi, x, cfg).value for x in xs])
    c = float(np.min(-l0))
    if not c > 0:
        raise PotentialError("-L_0 phi is not positive on the annulus")
    m_star = c / (2.0 * phi.sup_norm)
    m = 0.5 * m_star
    table = reconstruct_potential(Relativistic(m, alpha), phi, xs, cfg)
    return MassiveSignDemo(c, m_star, m, float(np.min(table.values)), bool(np.all(table.values > 0)))


@dataclass(frozen=True)
class MassivePinningDemo:
    m_star: float
    m_used: float
    V0_plus: float
    V0_minus: float
    ordered: bool


def massive_pinning_demo(
    phi_plus: ScalarField, phi_minus: ScalarField, alpha: float, cfg: Optional[QuadratureConfig] = None
) -> MassivePinningDemo:
    """Keep the massless order ``V_-(0) > V_+(0)`` for small mass.

    With ``a`` the common value at 0 and ``a (V_-(0) - V_+(0))`` the massless
    gap, the bound ``|G_m phi| <= 2 m a`` at the origin gives the threshold
    ``m* = (V_-(0) - V_+(0)) / 4``; the check runs at ``m = m*/2``.
    """
    frac = FractionalPower(alpha)
    a = float(phi_plus.profile(0.0))
    v_p = -apply_nonlocal_detailed(frac, phi_plus, 0.0, cfg).value / a
    v_m = -apply_nonlocal_detailed(frac, phi_minus, 0.0, cfg).value / a
    if not v_m > v_p:
        raise PotentialError("massless potentials do not satisfy V_-(0) > V_+(0)")
    m_star = (v_m - v_p) / 4.0
    m = 0.5 * m_star
    rel = Relativistic(m, alpha)
    w_p = -apply_nonlocal_detailed(rel, phi_plus, 0.0, cfg).value / a
    w_m = -apply_nonlocal_detailed(rel, phi_minus, 0.0, cfg).value / a
    return MassivePinningDemo(m_star, m, w_p, w_m, bool(w_m > w_p))


def boundedness_check(
    table: PotentialTable, phi: ScalarField, R: float = 1.0, n_samples: int = 200
) -> tuple[np.ndarray, np.ndarray]:
    """``|V|`` against ``(2 ||phi|| nu(B_R^c) + L_phi(x) J(R) / 2) / phi(x)`` on the table grid.

    Returns the pair ``(|V|, envelope)``.
    """
    kernel = kernel_for(table.spec, phi.d)
    nu = nu_tail(kernel, R)
    J = second_moment_J(kernel, R)
    env = []
    for x in table.grid:
        L = estimate_zygmund_L(phi, x, R, n_samples)
        env.append((2.0 * phi.sup_norm * nu + 0.5 * L * J) / _field_at(phi, x))
    return np.abs(table.values), np.array(env)


def continuity_proxy(spec, phi: ScalarField, lo: float, hi: float, levels=(11, 21, 41), cfg=None) -> list:
    """Largest adjacent jump of ``V`` on uniform grids of increasing density."""
    jumps = []
    for n in levels:
        t = reconstruct_potential(spec, phi, np.linspace(lo, hi, n), cfg)
        jumps.append(float(np.max(np.abs(np.diff(t.values)))))
    return jumps


@dataclass(frozen=True)
class ZygmundShape:
    radii: np.ndarray
    scaled: np.ndarray
    bound: float

    @property
    def bound_holds(self) -> bool:
        return bool(np.all(self.scaled <= self.bound))


def zygmund_shape_check(kappa: float, d: int = 1, radii=(10.0, 20.0, 50.0, 100.0), C1: float = 0.5) -> ZygmundShape:
    """``L_phi(x) |x|^{2 kappa + 2}`` for ``phi = (1+|x|^2)^{-kappa}`` against ``4 kappa (2 kappa + 1) d^2 / (1 - C1)^{2 kappa + 2}``.

    ``L_phi(x)`` is sampled over ``|h| <= C1 |x|``.  The constant is an
    upper bound for the scaled values, which converge to a smaller limit.
    """
    phi = PolyDecay(kappa, d)
    radii = np.asarray(radii, dtype=float)
    scaled = np.array([estimate_zygmund_L(phi, r, C1 * r, 400) * r ** (2 * kappa + 2) for r in radii])
    bound = 4.0 * kappa * (2.0 * kappa + 1.0) * d * d / (1.0 - C1) ** (2.0 * kappa + 2.0)
    return ZygmundShape(radii, scaled, bound)


def excess_envelope(table: PotentialTable, r_lo: float) -> float:
    """``min |V(x)| |x|^2`` over ``|x| >= r_lo``: positive values confirm two-sided ``|x|^{-2}`` decay."""
    r = np.abs(table.grid)
    sel = r >= r_lo
    if not np.any(sel):
        raise PotentialError("no samples beyond r_lo")
    return float(np.min(np.abs(table.values[sel]) * r[sel] ** 2))
