"""Radial jump kernels of subordinate Laplacians and the relativistic correction kernel.

For a Bernstein function with Levy density ``mu`` the jump kernel in
dimension ``d`` is

    j(r) = (4 pi)^{-d/2} int_0^inf t^{-d/2} exp(-r^2 / (4t)) mu(t) dt.

:class:`JumpKernel` evaluates it in closed form for the fractional and
relativistic catalog entries and by adaptive quadrature otherwise.
:class:`SigmaKernel` is the positive difference ``j_{0,alpha} - j_{m,alpha}``
between the massless and massive relativistic kernels; its total mass is
exactly ``m``.
"""

from __future__ import annotations

import math
import threading
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import integrate
from scipy.interpolate import CubicSpline

from . import _quad
from .bernstein import (
    BernsteinSpec,
    ExponentiallyLight,
    FractionalPower,
    LevyDensity,
    LogTempered,
    RegularlyVarying,
    Relativistic,
    levy_density,
)
from .specfun import bessel_k, bessel_k_scaled, upper_incomplete_gamma

__all__ = [
    "KernelError",
    "DivergenceError",
    "sphere_area",
    "fractional_kernel_constant",
    "halved_fractional_constant",
    "light_tail_constant",
    "alternate_light_constant",
    "JumpKernel",
    "SigmaKernel",
    "KernelAsymptoteReport",
    "jump_kernel_eval",
    "nu_tail",
    "second_moment_J",
    "moment_J_beta",
    "lp_tail_norm",
    "sigma_eval",
    "sigma_total_mass",
    "sigma_mass_report",
    "SigmaMassReport",
    "SecondMomentBracket",
    "asymptote_validate",
    "light_second_moment_bracket",
]


class KernelError(ArithmeticError):
    """Quadrature failure or inconsistent kernel representations."""


class DivergenceError(KernelError):
    """A requested moment is not integrable at the origin."""


def sphere_area(d: int) -> float:
    """Surface area ``d * omega_d`` of the unit sphere in ``R^d`` (2 for d = 1)."""
    return 2.0 * math.pi ** (0.5 * d) / math.gamma(0.5 * d)


def fractional_kernel_constant(d: int, alpha: float) -> float:
    """Exact constant in ``j(r) = C r^{-d-alpha}`` for ``Phi(u) = u^{alpha/2}``.

    Obtained by substituting ``s = r^2/(4t)`` in the subordination integral,
    which turns it into a complete Gamma integral.
    """
    return (
        alpha
        * 2.0 ** (alpha - 1.0)
        * math.gamma(0.5 * (d + alpha))
        / (math.pi ** (0.5 * d) * math.gamma(1.0 - 0.5 * alpha))
    )


def halved_fractional_constant(d: int, alpha: float) -> float:
    """The constant ``alpha 2^{alpha-2} Gamma((d+alpha)/2) / (pi^{d/2} Gamma(1-alpha/2))``.

    It is half of :func:`fractional_kernel_constant`; it is kept so that
    validators can report the ratio against both values.
    """
    return 0.5 * fractional_kernel_constant(d, alpha)


def light_tail_constant(d: int, alpha: float, eta: float, theta: float) -> float:
    """Exact constant ``c`` in ``j(r) ~ c r^{-(d+alpha+1)/2} exp(-sqrt(eta) r)``.

    Follows from the Bessel representation of the tail integral and the
    large-argument law ``K_nu(z) ~ sqrt(pi/(2z)) e^{-z}``.
    """
    return (
        theta
        * math.pi ** (0.5 * (1.0 - d))
        * 2.0 ** (0.5 * (1.0 + alpha - d))
        * eta ** (0.25 * (d + alpha - 1.0))
    )


def alternate_light_constant(d: int, alpha: float, eta: float, theta: float) -> float:
    """``theta pi^{(1-d)/2} 2^{(alpha-1-d)/2} eta^{(d+alpha+2)/4}``, an alternate normalization.

    Differs from :func:`light_tail_constant` by the factor ``2 eta^{-3/4}``.
    """
    return (
        theta
        * math.pi ** (0.5 * (1.0 - d))
        * 2.0 ** (0.5 * (alpha - 1.0 - d))
        * eta ** (0.25 * (d + alpha + 2.0))
    )


class _RadialCaches:
    """Thread-safe memo of tail masses and head moments for a radial kernel."""

    def __init__(self):
        self._lock = threading.Lock()
        self._tail: dict = {}
        self._head: dict = {}

    def tail(self, key, compute):
        with self._lock:
            if key in self._tail:
                return self._tail[key]
        value = compute()
        with self._lock:
            self._tail[key] = value
        return value

    def head(self, key, compute):
        with self._lock:
            if key in self._head:
                return self._head[key]
        value = compute()
        with self._lock:
            self._head[key] = value
        return value


class RadialKernelMixin:
    """Shared integrals of a positive radial kernel ``k`` on ``R^d``.

    Subclasses provide ``d`` and a vectorized ``__call__``.
    """

    d: int
    _caches: _RadialCaches

    def radial_tail(self, R: float, rel_tol: float = 1e-13) -> float:
        """``int_R^inf r^{d-1} k(r) dr`` (no sphere factor)."""
        d = self.d

        def compute():
            value, _ = _quad.integrate_outward(lambda r: r ** (d - 1) * self(r), R, rel_tol=rel_tol)
            return value

        return self._caches.tail((float(R), rel_tol), compute)

    def radial_head_moment(self, power: float, b: float, rel_tol: float = 1e-13) -> float:
        """``int_0^b r^{d-1+power} k(r) dr``."""
        d = self.d

        def compute():
            value, _ = _quad.integrate_inward(lambda r: r ** (d - 1 + power) * self(r), b, rel_tol=rel_tol)
            return value

        return self._caches.head((float(power), float(b), rel_tol), compute)

    def origin_exponent(self) -> float:
        """Local power of ``k`` at ``r -> 0`` (for example ``-d-alpha``)."""
        return _quad.local_exponent(self, 1e-9)


# ---------------------------------------------------------------------------
# Jump kernel
# ---------------------------------------------------------------------------


class JumpKernel(RadialKernelMixin):
    """Radial jump kernel ``j`` of ``Phi(-Delta)`` in dimension ``d``.

    Parameters
    ----------
    spec : BernsteinSpec
        Bernstein function.  ``LogTempered`` specs have no density and are rejected.
    d : int
        Space dimension.

    Notes
    -----
    Specs without a closed form are tabulated once at construction on a
    log-spaced grid of radii by adaptive quadrature and interpolated with a
    cubic spline in ``(log r, log j)``; beyond the table the end slopes are
    extrapolated as power laws.
    """

    TABLE_RANGE = (1e-5, 1e5)
    TABLE_PER_DECADE = 24

    def __init__(self, spec: BernsteinSpec, d: int = 1):
        if int(d) != d or d < 1:
            raise KernelError(f"dimension must be a positive integer, got {d}")
        if isinstance(spec, LogTempered):
            raise KernelError("log-tempered specs have no tabulated Levy density")
        self.spec = spec
        self.d = int(d)
        self.levy: LevyDensity = levy_density(spec)
        self._caches = _RadialCaches()
        self.closed_form: Optional[Callable] = self._closed_form()
        self._table: Optional[CubicSpline] = None
        self._table_ends: tuple = ()
        if self.closed_form is None:
            self._build_table()

    # -- closed forms -------------------------------------------------------

    def _closed_form(self) -> Optional[Callable]:
        spec, d = self.spec, self.d
        if isinstance(spec, FractionalPower):
            c = fractional_kernel_constant(d, spec.alpha)
            p = d + spec.alpha

            def frac(r, c=c, p=p):
                return c * np.asarray(r, dtype=float) ** (-p)

            return frac
        if isinstance(spec, Relativistic):
            a, m = spec.alpha, spec.m
            nu = 0.5 * (d + a)
            pref = a * 2.0 ** (0.5 * (a - d)) * m ** (nu / a) / (math.pi ** (0.5 * d) * math.gamma(1.0 - 0.5 * a))
            scale = m ** (1.0 / a)

            def rel(r, pref=pref, nu=nu, scale=scale):
                r = np.asarray(r, dtype=float)
                z = scale * r
                return pref * bessel_k_scaled(nu, z) * np.exp(-z) * r ** (-nu)

            return rel
        return None

    # -- quadrature route ---------------------------------------------------

    def quadrature(self, r: float, rel_tol: float = 1e-12) -> float:
        """Evaluate the subordination integral with ``s = r^2/(4t)`` by adaptive Gauss-Kronrod."""
        r = float(r)
        if not r > 0:
            raise KernelError("jump kernel needs r > 0")
        d = self.d
        mu = self.levy.density
        r2q = 0.25 * r * r

        def integrand(s):
            t = r2q / s
            return t ** (-0.5 * d) * math.exp(-s) * float(mu(t)) * r2q / (s * s)

        # the integrand peaks where the Gamma weight meets the mu decay; split there
        peak = max(1.0, 0.5 * (d + 2))
        tail = self.levy.tail_class
        if isinstance(tail, ExponentiallyLight):
            peak = max(peak, math.sqrt(tail.eta) * r * 0.5)
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                lo, _ = integrate.quad(integrand, 0.0, peak, epsabs=0.0, epsrel=rel_tol, limit=500)
                hi, _ = integrate.quad(integrand, peak, math.inf, epsabs=0.0, epsrel=rel_tol, limit=500)
            except integrate.IntegrationWarning as exc:
                raise KernelError(f"jump kernel quadrature failed at r={r}: {exc}") from exc
        return (lo + hi) / (4.0 * math.pi) ** (0.5 * d)

    def _build_table(self) -> None:
        lo, hi = self.TABLE_RANGE
        n = int(round(math.log10(hi / lo) * self.TABLE_PER_DECADE)) + 1
        radii = np.geomspace(lo, hi, n)
        values = np.array([self.quadrature(r, rel_tol=1e-11) for r in radii])
        if np.any(values <= 0):
            keep = values > 0
            radii, values = radii[keep], values[keep]
        x, y = np.log(radii), np.log(values)
        self._table = CubicSpline(x, y)
        slope_lo = (y[1] - y[0]) / (x[1] - x[0])
        slope_hi = (y[-1] - y[-2]) / (x[-1] - x[-2])
        self._table_ends = (x[0], y[0], slope_lo, x[-1], y[-1], slope_hi)

    def _from_table(self, r):
        r = np.asarray(r, dtype=float)
        x = np.log(r)
        x0, y0, s0, x1, y1, s1 = self._table_ends
        inside = np.clip(x, x0, x1)
        y = self._table(inside)
        y = np.where(x < x0, y0 + s0 * (x - x0), y)
        y = np.where(x > x1, y1 + s1 * (x - x1), y)
        return np.exp(y)

    # -- public -------------------------------------------------------------

    def __call__(self, r):
        if self.closed_form is not None:
            return self.closed_form(r)
        return self._from_table(r)

    @property
    def tail_class(self):
        return self.levy.tail_class

    def slowly_varying_hat(self, t):
        tail = self.tail_class
        if isinstance(tail, RegularlyVarying):
            return np.vectorize(tail.slowly_varying, otypes=[float])(t)
        return np.ones_like(np.asarray(t, dtype=float))


def jump_kernel_eval(k: JumpKernel, r):
    """Kernel value at ``r > 0`` (closed form when available, quadrature table otherwise)."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(~(r_arr > 0)):
        raise KernelError("jump kernel needs r > 0")
    out = k(r_arr)
    return float(out) if np.ndim(out) == 0 else out


def nu_tail(k: RadialKernelMixin, R: float) -> float:
    """Levy measure of the complement of the ball of radius ``R``."""
    if not R > 0:
        raise KernelError("R must be positive")
    return sphere_area(k.d) * k.radial_tail(R)


def moment_J_beta(k: RadialKernelMixin, beta_exponent: float, R: float) -> float:
    """``int_{B_R} |h|^omega k(|h|) dh`` for ``omega = beta_exponent``.

    Raises
    ------
    DivergenceError
        When ``r^{omega+d-1} k(r)`` is not integrable at 0.
    """
    if not R > 0:
        raise KernelError("R must be positive")
    p0 = k.origin_exponent()
    if beta_exponent + k.d - 1 + p0 <= -1.0 + 1e-6:
        raise DivergenceError(
            f"|h|^{beta_exponent} k(|h|) is not integrable at 0 (kernel behaves like r^{p0:.4g})"
        )
    try:
        value = k.radial_head_moment(beta_exponent, R)
    except ArithmeticError as exc:
        raise KernelError(str(exc)) from exc
    return sphere_area(k.d) * value


def second_moment_J(k: RadialKernelMixin, R: float) -> float:
    """``J(R) = int_{B_R} |x|^2 k(|x|) dx``."""
    return moment_J_beta(k, 2.0, R)


def lp_tail_norm(k: RadialKernelMixin, p: float, R: float) -> float:
    """``||k||_{L^p(B_R^c)}``."""
    if not p > 1:
        raise KernelError("p must exceed 1")
    if not R > 0:
        raise KernelError("R must be positive")
    d = k.d
    value, _ = _quad.integrate_outward(lambda r: r ** (d - 1) * k(r) ** p, R, rel_tol=1e-13)
    return (sphere_area(d) * value) ** (1.0 / p)


# ---------------------------------------------------------------------------
# Relativistic correction kernel
# ---------------------------------------------------------------------------

_W_CAP = 60.0  # beyond this the w-integrand is below 1e-22 of the total


def _graded_unit_nodes(levels: int = 32, n: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Nodes on [0, 1] graded geometrically towards 0 (ratio 2)."""
    edges = np.concatenate(([0.0], 2.0 ** -np.arange(levels, -1, -1, dtype=float)))
    return _quad.panel_nodes(edges, n)


class SigmaKernel(RadialKernelMixin):
    """``sigma_{m,alpha} = j_{0,alpha} - j_{m,alpha}`` in dimension ``d``.

    Evaluated from

        sigma(r) = c r^{-d-alpha} int_0^{m^{1/alpha} r} w^{(d+alpha)/2} K_{(d+alpha)/2-1}(w) dw,
        c = alpha 2^{(alpha-d)/2} / (Gamma(1 - alpha/2) pi^{d/2}),

    which has no cancellation for small ``r``.  Once ``W = m^{1/alpha} r > 1``
    the closed Bessel difference ``c r^{-d-alpha} (2^{nu} Gamma(nu+1) - W^{nu+1} K_{nu+1}(W))``
    is used instead, and a few radii of every batch are cross-checked
    against the integral form.
    """

    CROSSCHECK_TOL = 1e-6

    def __init__(self, m: float, alpha: float, d: int = 1):
        if not m > 0:
            raise KernelError("m must be positive")
        if not 0 < alpha < 2:
            raise KernelError("alpha must lie in (0, 2)")
        if int(d) != d or d < 1:
            raise KernelError(f"dimension must be a positive integer, got {d}")
        self.m = float(m)
        self.alpha = float(alpha)
        self.d = int(d)
        self.nu = 0.5 * (self.d + self.alpha) - 1.0
        self.prefactor = (
            self.alpha
            * 2.0 ** (0.5 * (self.alpha - self.d))
            / (math.gamma(1.0 - 0.5 * self.alpha) * math.pi ** (0.5 * self.d))
        )
        self.scale = self.m ** (1.0 / self.alpha)
        self.full_w_integral = 2.0**self.nu * math.gamma(self.nu + 1.0)
        self._caches = _RadialCaches()
        self._unit_nodes, self._unit_weights = _graded_unit_nodes()

    def w_integral(self, W):
        """``int_0^W w^{nu+1} K_nu(w) dw``, vectorized in ``W``.

        The sorted distinct upper limits are chained: each gap
        ``[W_{k-1}, W_k]`` with ratio at most 2 gets a 10-point Gauss-Legendre
        rule, while the first gap and any wider one are covered by panels
        graded geometrically towards their left end.  Partial sums are then
        accumulated.
        """
        W = np.asarray(W, dtype=float)
        Wc = np.minimum(W.ravel(), _W_CAP)
        limits, inverse = np.unique(Wc, return_inverse=True)
        lefts = np.concatenate(([0.0], limits[:-1]))
        narrow = (lefts > 0) & (limits <= 2.0 * lefts)
        nodes, weights, owner = [], [], []
        idx = np.flatnonzero(narrow)
        if idx.size:
            x, w = _quad.gl_rule(10)
            half = 0.5 * (limits[idx] - lefts[idx])
            mid = 0.5 * (limits[idx] + lefts[idx])
            nodes.append((mid[:, None] + half[:, None] * x[None, :]).ravel())
            weights.append((half[:, None] * w[None, :]).ravel())
            owner.append(np.repeat(idx, x.size))
        for k in np.flatnonzero(~narrow):
            lo, hi = lefts[k], limits[k]
            if lo == 0.0:
                n_k, w_k = self._unit_nodes * hi, self._unit_weights * hi
            else:
                n_k, w_k = _quad.panel_nodes(np.geomspace(lo, hi, int(math.ceil(math.log2(hi / lo))) + 1), 16)
            nodes.append(n_k)
            weights.append(w_k)
            owner.append(np.full(n_k.size, k))
        nodes = np.concatenate(nodes)
        vals = nodes ** (self.nu + 1.0) * bessel_k(self.nu, nodes) * np.concatenate(weights)
        pieces = np.bincount(np.concatenate(owner), weights=vals, minlength=limits.size)
        return np.cumsum(pieces)[inverse].reshape(W.shape)

    def w_form(self, r):
        r = np.asarray(r, dtype=float)
        return self.prefactor * r ** (-self.d - self.alpha) * self.w_integral(self.scale * np.atleast_1d(r)).reshape(
            r.shape
        )

    def difference_form(self, r):
        r = np.asarray(r, dtype=float)
        z = self.scale * r
        tail = z ** (self.nu + 1.0) * bessel_k_scaled(self.nu + 1.0, z) * np.exp(-z)
        return self.prefactor * r ** (-self.d - self.alpha) * (self.full_w_integral - tail)

    def t_integral_form(self, r: float) -> float:
        """Direct subordination integral with ``1 - exp(-eta t)`` written via ``expm1``."""
        d, a = self.d, self.alpha
        eta = self.scale**2
        c = 0.5 * a / math.gamma(1.0 - 0.5 * a)
        r2q = 0.25 * r * r

        # in u = log t the integrand is smooth with two exponential ends
        def integrand(u):
            t = math.exp(u)
            return t ** (-0.5 * d - 0.5 * a) * math.exp(-r2q / t) * (-math.expm1(-eta * t))

        lower = math.log(r2q) - 6.0
        upper = max(math.log(r2q), -math.log(eta)) + 72.0 / (d + a)
        edges = sorted({lower, math.log(r2q), max(lower, -math.log(eta)), upper})
        total = 0.0
        for lo, hi in zip(edges[:-1], edges[1:]):
            total += integrate.quad(integrand, lo, hi, epsabs=0.0, epsrel=1e-13, limit=500)[0]
        return c * total / (4.0 * math.pi) ** (0.5 * d)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        flat = np.atleast_1d(r).ravel()
        out = np.empty_like(flat)
        big = self.scale * flat > 1.0
        small = ~big
        if np.any(small):
            out[small] = self.w_form(flat[small])
        if np.any(big):
            rb = flat[big]
            out[big] = self.difference_form(rb)
            # spot-check the two representations on a few radii of this batch
            probe = rb[np.unique(np.linspace(0, rb.size - 1, min(rb.size, 3)).astype(int))]
            mismatch = np.abs(self.w_form(probe) / self.difference_form(probe) - 1.0)
            if np.max(mismatch) > self.CROSSCHECK_TOL:
                raise KernelError(f"sigma representations disagree by {np.max(mismatch):.3g}")
        return out.reshape(r.shape) if r.ndim else out[0]

    # exact large-r constant: sigma ~ j_{0,alpha}
    def asymptotic_constant(self) -> float:
        return fractional_kernel_constant(self.d, self.alpha)

    def doubled_asymptotic_constant(self) -> float:
        """``alpha 2^alpha Gamma((alpha+d)/2) / (pi^{d/2} Gamma(1-alpha/2))``, twice the exact value."""
        return 2.0 * fractional_kernel_constant(self.d, self.alpha)

    def near_origin_bound_constant(self, radii) -> float:
        """Smallest ``C`` with ``sigma(r) <= C m^{2/alpha} r^{2-alpha-d}`` on ``radii``."""
        radii = np.asarray(radii, dtype=float)
        return float(np.max(self(radii) * radii ** (self.alpha + self.d - 2.0)) / self.m ** (2.0 / self.alpha))

    def decreasing_radius(self, r_lo: float | None = None, r_hi: float | None = None, n: int = 400) -> float:
        """Smallest sampled radius beyond which sigma is strictly decreasing on the sample."""
        r_lo = r_lo if r_lo is not None else 1e-3 / self.scale
        r_hi = r_hi if r_hi is not None else 1e3 / self.scale
        radii = np.geomspace(r_lo, r_hi, n)
        vals = self(radii)
        rising = np.flatnonzero(np.diff(vals) >= 0)
        if rising.size == 0:
            return float(radii[0])
        idx = rising[-1] + 1
        if idx >= n - 1:
            raise KernelError("sigma is not decreasing on the sampled tail")
        return float(radii[idx])


def sigma_eval(s: SigmaKernel, r):
    """``sigma_{m,alpha}(r)`` for ``r > 0`` from the cancellation-free representation."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(~(r_arr > 0)):
        raise KernelError("sigma needs r > 0")
    out = s(r_arr)
    return float(out) if np.ndim(out) == 0 else out


@dataclass
class SigmaMassReport:
    """Masses of the correction kernel and ratios to their large-radius laws."""

    total_mass: float
    tail_mass: float
    second_moment: float
    lp_norm: float
    R: float
    p: float
    tail_ratio_exact: float
    second_moment_ratio_exact: float
    lp_ratio_exact: float
    tail_ratio_alternate: float
    second_moment_ratio_alternate: float
    lp_ratio_alternate: float


def sigma_total_mass(s: SigmaKernel) -> float:
    """Total mass ``int sigma(|x|) dx`` (equals ``m``)."""
    r0 = 1.0 / s.scale
    head, _ = _quad.integrate_inward(lambda r: r ** (s.d - 1) * s(r), r0, rel_tol=1e-12)
    tail = s.radial_tail(r0, rel_tol=1e-12)
    return sphere_area(s.d) * (head + tail)


def sigma_mass_report(s: SigmaKernel, R: float = 100.0, p: float = 2.0) -> SigmaMassReport:
    """Tail mass, truncated second moment and ``L^p`` tail norm with their asymptotic ratios."""
    d, a = s.d, s.alpha
    area = sphere_area(d)
    total = sigma_total_mass(s)
    tail = area * s.radial_tail(R)
    second = area * s.radial_head_moment(2.0, R)
    lp_val, _ = _quad.integrate_outward(lambda r: r ** (d - 1) * s(r) ** p, R)
    lp = (area * lp_val) ** (1.0 / p)
    c = fractional_kernel_constant(d, a)
    q = p / (p - 1.0)
    tail_law = area * c * R ** (-a) / a
    second_law = area * c * R ** (2.0 - a) / (2.0 - a)
    lp_law = (area / ((p - 1.0) * d + p * a)) ** (1.0 / p) * c * R ** (-d / q - a)
    return SigmaMassReport(
        total_mass=total,
        tail_mass=tail,
        second_moment=second,
        lp_norm=lp,
        R=R,
        p=p,
        tail_ratio_exact=tail / tail_law,
        second_moment_ratio_exact=second / second_law,
        lp_ratio_exact=lp / lp_law,
        # alternate laws with an extra factor 2 (and alpha in the tail law)
        tail_ratio_alternate=tail / (2.0 * tail_law * a),
        second_moment_ratio_alternate=second / (2.0 * second_law),
        lp_ratio_alternate=lp / (2.0 * lp_law),
    )


# ---------------------------------------------------------------------------
# Asymptotic validators
# ---------------------------------------------------------------------------


@dataclass
class KernelAsymptoteReport:
    """Scaled kernel values against the exact and the alternate large-``r`` constants."""

    tail: str
    radii: list
    scaled_values: list
    exact_constant: float
    alternate_constant: float
    ratios_exact: list = field(default_factory=list)
    ratios_alternate: list = field(default_factory=list)

    @property
    def limit_ratio_exact(self) -> float:
        return self.ratios_exact[-1]

    @property
    def limit_ratio_alternate(self) -> float:
        return self.ratios_alternate[-1]


def asymptote_validate(k: JumpKernel, radii=None) -> KernelAsymptoteReport:
    """Compare ``j`` with its large-``r`` law.

    Regularly varying tails report ``j(r) r^{d+alpha} / lhat(r^2)`` at
    ``r in {10, 30, 100}``; exponentially light tails report
    ``j(r) r^{(d+alpha+1)/2} e^{sqrt(eta) r}`` at ``r = 40``.  Each is divided
    by the exact constant and by an alternate normalization (half the exact
    value for regular variation, :func:`alternate_light_constant` otherwise).
    """
    tail = k.tail_class
    d = k.d
    if isinstance(tail, RegularlyVarying):
        radii = list(radii) if radii is not None else [10.0, 30.0, 100.0]
        a = tail.alpha
        r = np.asarray(radii)
        scaled = k(r) * r ** (d + a) / k.slowly_varying_hat(r**2)
        exact = fractional_kernel_constant(d, a)
        alternate = halved_fractional_constant(d, a)
        kind = "regularly-varying"
    elif isinstance(tail, ExponentiallyLight):
        radii = list(radii) if radii is not None else [40.0]
        a, eta, theta = tail.alpha, tail.eta, tail.theta
        r = np.asarray(radii)
        z = math.sqrt(eta) * r
        scaled = k(r) * r ** (0.5 * (d + a + 1.0)) * np.exp(z)
        exact = light_tail_constant(d, a, eta, theta)
        alternate = alternate_light_constant(d, a, eta, theta)
        kind = "exponentially-light"
    else:
        raise KernelError("asymptote_validate needs a classified tail")
    scaled = [float(v) for v in np.atleast_1d(scaled)]
    return KernelAsymptoteReport(
        tail=kind,
        radii=[float(v) for v in radii],
        scaled_values=scaled,
        exact_constant=exact,
        alternate_constant=alternate,
        ratios_exact=[v / exact for v in scaled],
        ratios_alternate=[v / alternate for v in scaled],
    )


@dataclass
class SecondMomentBracket:
    """Bracket for the full second moment of an exponentially light kernel."""

    M: float
    head: float
    tail: float
    exact_C: float
    alternate_C: float
    eps: float

    @property
    def total(self) -> float:
        return self.head + self.tail

    def holds(self, C: float) -> bool:
        return (1.0 - self.eps) * C <= self.tail <= (1.0 + self.eps) * C


def light_second_moment_bracket(k: JumpKernel, M: float, eps: float = 0.1) -> SecondMomentBracket:
    """Second moment split at ``M`` with the tail compared to its incomplete-Gamma law.

    The exact tail law is ``d omega_d c eta^{-(d-alpha+3)/4} Gamma((d-alpha+3)/2, sqrt(eta) M)``
    with ``c`` from :func:`light_tail_constant`.  The alternate variant uses
    ``eta^{(2 alpha - 1)/4} pi^{-(d-1)/2} 2^{-(d+1-alpha)/2}`` in place of
    ``c eta^{-(d-alpha+3)/4}``.
    """
    tail_class = k.tail_class
    if not isinstance(tail_class, ExponentiallyLight):
        raise KernelError("bracket applies to exponentially light kernels")
    d = k.d
    a, eta, theta = tail_class.alpha, tail_class.eta, tail_class.theta
    area = sphere_area(d)
    head = area * k.radial_head_moment(2.0, M)
    tail_val, _ = _quad.integrate_outward(lambda r: r ** (d + 1) * k(r), M)
    tail = area * tail_val
    s = 0.5 * (d - a + 3.0)
    G = upper_incomplete_gamma(s, math.sqrt(eta) * M)
    exact_C = area * light_tail_constant(d, a, eta, theta) * eta ** (-0.25 * (d - a + 3.0)) * G
    alternate_C = (
        area * eta ** (0.25 * (2.0 * a - 1.0)) * math.pi ** (-0.5 * (d - 1.0)) * 2.0 ** (-0.5 * (d + 1.0 - a)) * G
    )
    return SecondMomentBracket(M=M, head=head, tail=tail, exact_C=exact_C, alternate_C=alternate_C, eps=eps)
