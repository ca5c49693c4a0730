"""Bernstein functions given by a Levy density, with a small catalog of closed forms.

A Bernstein function with zero drift and zero killing is written as

    Phi(u) = int_0^inf (1 - exp(-y u)) mu(y) dy,

where ``mu`` is a nonnegative Levy density with ``int min(t, 1) mu(t) dt``
finite.  The catalog covers the fractional power, the massive relativistic
symbol, sums of two powers and log-tempered powers; anything else can be
supplied as a :class:`Custom` density.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np
from scipy import integrate

__all__ = [
    "BernsteinError",
    "RegularlyVarying",
    "ExponentiallyLight",
    "Unclassified",
    "LevyDensity",
    "BernsteinSpec",
    "FractionalPower",
    "Relativistic",
    "SumOfPowers",
    "LogTempered",
    "Custom",
    "phi_eval",
    "levy_density",
    "mu_small_t_bound_check",
    "tail_constant_ratio",
    "parse_spec",
]


class BernsteinError(ValueError):
    """Invalid parameters, non-admissible densities or failed quadrature."""


def _unit(_t):
    return 1.0


@dataclass(frozen=True)
class RegularlyVarying:
    """Tail ``mu(t) ~ c t^{-1-alpha/2} lhat(t)`` as ``t -> inf`` with ``lhat`` slowly varying."""

    alpha: float
    slowly_varying: Callable[[float], float] = _unit


@dataclass(frozen=True)
class ExponentiallyLight:
    """Tail ``mu(t) ~ theta t^{-1-alpha/2} exp(-eta t)`` as ``t -> inf``."""

    alpha: float
    eta: float
    theta: float


@dataclass(frozen=True)
class Unclassified:
    """No tail information is available."""


TailClass = Union[RegularlyVarying, ExponentiallyLight, Unclassified]


def _local_exponent(f: Callable, t: float) -> float:
    """Logarithmic slope d log f / d log t estimated by a centered difference."""
    q = 1.01
    lo, hi = float(f(t / q)), float(f(t * q))
    if lo <= 0 or hi <= 0:
        return -math.inf
    return (math.log(hi) - math.log(lo)) / (2.0 * math.log(q))


class LevyDensity:
    """A Levy density ``mu`` on ``(0, inf)`` together with its tail class.

    Construction checks numerically that ``int_0^1 t mu(t) dt`` and
    ``int_1^inf mu(t) dt`` are finite on ``[1e-8, 1e8]``, and that the local
    power-law exponents at both ends allow extrapolation beyond that range.

    Parameters
    ----------
    density : callable
        Vectorized function ``t -> mu(t)``.
    tail_class : TailClass
        Known large-``t`` behaviour.
    verify : bool
        Skip the admissibility check when False.
    """

    def __init__(self, density: Callable, tail_class: TailClass | None = None, verify: bool = True):
        self.density = density
        self.tail_class = tail_class if tail_class is not None else Unclassified()
        if verify:
            self._verify()

    def __call__(self, t):
        return self.density(t)

    def _verify(self) -> None:
        samples = np.geomspace(1e-8, 1e8, 161)
        values = np.asarray(self.density(samples), dtype=float)
        if np.any(~np.isfinite(values)) or np.any(values < 0):
            raise BernsteinError("Levy density must be finite and nonnegative on (0, inf)")
        # t mu(t) must be integrable at 0 and mu(t) at infinity
        p0 = _local_exponent(self.density, 1e-8)
        if p0 + 1.0 <= -1.0 + 1e-9:
            raise BernsteinError(f"t*mu(t) is not integrable at 0 (local exponent {p0 + 1.0:.3g})")
        tail_value = float(self.density(1e8))
        if tail_value > 0:
            pinf = _local_exponent(self.density, 1e8)
            if pinf >= -1.0 - 1e-9:
                raise BernsteinError(f"mu(t) is not integrable at infinity (local exponent {pinf:.3g})")
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            near, _ = integrate.quad(lambda t: t * self.density(t), 1e-8, 1.0, limit=200, points=[1e-4])
            far, _ = integrate.quad(self.density, 1.0, 1e8, limit=200, points=[1e2, 1e4, 1e6])
        if not (math.isfinite(near) and math.isfinite(far)):
            raise BernsteinError("Levy integrability check failed")


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------


def _frac_coefficient(alpha: float) -> float:
    return 0.5 * alpha / math.gamma(1.0 - 0.5 * alpha)


@dataclass(frozen=True)
class BernsteinSpec:
    """Base class of all Bernstein function descriptions (drift fixed to 0)."""

    def phi(self, u: float) -> float:  # pragma: no cover - overridden
        raise NotImplementedError

    def label(self) -> str:  # pragma: no cover - overridden
        raise NotImplementedError


def _check_alpha(alpha: float, hi_closed: bool = True) -> None:
    if not (alpha > 0 and (alpha <= 2 if hi_closed else alpha < 2)):
        raise BernsteinError(f"alpha out of range: {alpha}")


@dataclass(frozen=True)
class FractionalPower(BernsteinSpec):
    """``Phi(u) = u^{alpha/2}`` with ``alpha`` in ``(0, 2]``."""

    alpha: float

    def __post_init__(self):
        _check_alpha(self.alpha)

    def phi(self, u):
        return np.asarray(u, dtype=float) ** (0.5 * self.alpha)

    def label(self) -> str:
        return f"frac:{self.alpha:g}"


@dataclass(frozen=True)
class Relativistic(BernsteinSpec):
    """``Phi(u) = (u + m^{2/alpha})^{alpha/2} - m`` with ``m > 0``."""

    m: float
    alpha: float

    def __post_init__(self):
        if not self.m > 0:
            raise BernsteinError(f"relativistic mass must be positive, got {self.m}")
        _check_alpha(self.alpha)

    @property
    def eta(self) -> float:
        return self.m ** (2.0 / self.alpha)

    def phi(self, u):
        u = np.asarray(u, dtype=float)
        # (u + eta)^{a} - eta^{a} written as eta^a * expm1(a log1p(u/eta)) to avoid cancellation
        a = 0.5 * self.alpha
        return self.m * np.expm1(a * np.log1p(u / self.eta))

    def label(self) -> str:
        return f"rel:{self.m:g},{self.alpha:g}"


@dataclass(frozen=True)
class SumOfPowers(BernsteinSpec):
    """``Phi(u) = u^{alpha/2} + u^{beta/2}``."""

    alpha: float
    beta: float

    def __post_init__(self):
        _check_alpha(self.alpha)
        _check_alpha(self.beta)

    def phi(self, u):
        u = np.asarray(u, dtype=float)
        return u ** (0.5 * self.alpha) + u ** (0.5 * self.beta)

    def label(self) -> str:
        return f"sum:{self.alpha:g},{self.beta:g}"


@dataclass(frozen=True)
class LogTempered(BernsteinSpec):
    """``Phi(u) = u^{alpha/2} (log(1+u))^{s beta/2}`` with ``s = -1`` or ``+1``.

    For ``sign='-'`` the admissible range is ``alpha in (0, 2)``,
    ``beta in [0, alpha)``; for ``sign='+'`` it is ``beta in (0, 2 - alpha)``.
    """

    alpha: float
    beta: float
    sign: str = "-"

    def __post_init__(self):
        _check_alpha(self.alpha, hi_closed=False)
        if self.sign == "-":
            ok = 0 <= self.beta < self.alpha
        elif self.sign == "+":
            ok = 0 < self.beta < 2 - self.alpha
        else:
            raise BernsteinError(f"sign must be '+' or '-', got {self.sign!r}")
        if not ok:
            raise BernsteinError(f"beta={self.beta} outside the admissible range for sign {self.sign}")

    @property
    def exponent(self) -> float:
        return (0.5 if self.sign == "+" else -0.5) * self.beta

    def phi(self, u):
        u = np.asarray(u, dtype=float)
        return u ** (0.5 * self.alpha) * np.log1p(u) ** self.exponent

    def slowly_varying_hat(self, t):
        """``lhat(t) = (log(1+t))^{+-beta/2}`` used in the kernel asymptotics."""
        return np.log1p(np.asarray(t, dtype=float)) ** self.exponent

    def label(self) -> str:
        return f"logt:{self.alpha:g},{self.beta:g},{self.sign}"


@dataclass(frozen=True)
class Custom(BernsteinSpec):
    """Bernstein function defined only through its Levy density."""

    levy: LevyDensity = field(compare=False)
    name: str = "custom"

    def phi(self, u):
        return phi_eval(self, u)

    def label(self) -> str:
        return self.name


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def _phi_quadrature(mu: Callable, u: float) -> float:
    def integrand(y):
        return -math.expm1(-y * u) * float(mu(y))

    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            # the split at y = 1 isolates the small-y singularity of mu
            head, _ = integrate.quad(integrand, 0.0, 1.0, epsabs=0.0, epsrel=1e-11, limit=400)
            tail, _ = integrate.quad(integrand, 1.0, math.inf, epsabs=0.0, epsrel=1e-11, limit=400)
        except integrate.IntegrationWarning as exc:
            raise BernsteinError(f"quadrature for Phi({u}) did not converge: {exc}") from exc
    return head + tail


def phi_eval(spec: BernsteinSpec, u):
    """Evaluate ``Phi(u)`` for ``u > 0``.

    Catalog kinds use their closed form; :class:`Custom` specs integrate
    ``(1 - e^{-yu}) mu(y)`` over ``(0, 1)`` and ``(1, inf)`` separately.
    """
    u_arr = np.asarray(u, dtype=float)
    if np.any(~(u_arr > 0)):
        raise BernsteinError("phi_eval requires u > 0")
    if isinstance(spec, Custom):
        values = np.array([_phi_quadrature(spec.levy.density, float(v)) for v in u_arr.ravel()])
        values = values.reshape(u_arr.shape)
        return float(values) if values.ndim == 0 else values
    out = spec.phi(u_arr)
    return float(out) if np.ndim(out) == 0 else out


def levy_density(spec: BernsteinSpec) -> LevyDensity:
    """Levy density of a catalog spec, with its tail class.

    ``LogTempered`` has no density available in closed form and raises.
    """
    if isinstance(spec, Custom):
        return spec.levy
    if isinstance(spec, FractionalPower):
        if spec.alpha >= 2:
            raise BernsteinError("alpha = 2 is a pure drift and has no Levy density")
        c = _frac_coefficient(spec.alpha)
        e = 1.0 + 0.5 * spec.alpha

        def density(t, c=c, e=e):
            return c * np.asarray(t, dtype=float) ** (-e)

        return LevyDensity(density, RegularlyVarying(spec.alpha), verify=False)
    if isinstance(spec, Relativistic):
        if spec.alpha >= 2:
            raise BernsteinError("alpha = 2 is a pure drift and has no Levy density")
        c = _frac_coefficient(spec.alpha)
        e = 1.0 + 0.5 * spec.alpha
        eta = spec.eta

        def density(t, c=c, e=e, eta=eta):
            t = np.asarray(t, dtype=float)
            return c * t ** (-e) * np.exp(-eta * t)

        return LevyDensity(density, ExponentiallyLight(spec.alpha, eta, c), verify=False)
    if isinstance(spec, SumOfPowers):
        parts = [a for a in (spec.alpha, spec.beta)]
        if max(parts) >= 2:
            raise BernsteinError("alpha = 2 components are drifts and have no Levy density")
        coefs = [(_frac_coefficient(a), 1.0 + 0.5 * a) for a in parts]

        def density(t, coefs=coefs):
            t = np.asarray(t, dtype=float)
            return sum(c * t ** (-e) for c, e in coefs)

        # the smaller exponent dominates at large t
        return LevyDensity(density, RegularlyVarying(min(parts)), verify=False)
    raise BernsteinError(f"no Levy density available for {type(spec).__name__}")


def mu_small_t_bound_check(levy: LevyDensity, C: float, n_samples: int = 2001, t_min: float = 1e-10) -> float:
    """Largest sampled ``t0 < 1`` with ``mu(t) <= C t^{-2}`` for every sampled ``t < t0``.

    Raises
    ------
    BernsteinError
        If the bound already fails at the smallest sample.
    """
    if not C > 0:
        raise BernsteinError("C must be positive")
    t = np.geomspace(t_min, 1.0, n_samples)[:-1]
    ok = np.asarray(levy(t), dtype=float) <= C * t ** -2
    if not ok[0]:
        raise BernsteinError("mu(t) <= C t^-2 fails at the smallest sample: density is not admissible")
    bad = np.flatnonzero(~ok)
    if bad.size == 0:
        return float(t[-1])
    return float(t[bad[0]])


def tail_constant_ratio(spec: BernsteinSpec, t: float = 1e4) -> float:
    """Ratio ``mu(t) t^{1+alpha/2} / lhat(t)`` over ``alpha / (2 Gamma(1 - alpha/2))``.

    Tends to 1 as ``t -> inf`` for regularly varying densities.  Custom
    densities without complete monotonicity only trigger a warning when the
    ratio is off by more than 2 percent.
    """
    levy = levy_density(spec)
    tail = levy.tail_class
    if not isinstance(tail, RegularlyVarying):
        raise BernsteinError("tail_constant_ratio needs a regularly varying density")
    a = tail.alpha
    ratio = float(levy(t)) * t ** (1.0 + 0.5 * a) / float(tail.slowly_varying(t)) / _frac_coefficient(a)
    if isinstance(spec, Custom) and abs(ratio - 1.0) > 0.02:
        warnings.warn(f"tail ratio {ratio:.4g} deviates from 1 for a custom density", RuntimeWarning, stacklevel=2)
    return ratio


def parse_spec(text: str) -> BernsteinSpec:
    """Parse ``frac:<alpha>``, ``rel:<m>,<alpha>``, ``sum:<alpha>,<beta>`` or ``logt:<alpha>,<beta>,<+|->``."""
    try:
        kind, _, rest = text.strip().partition(":")
        args = [a.strip() for a in rest.split(",")] if rest else []
        if kind == "frac" and len(args) == 1:
            return FractionalPower(float(args[0]))
        if kind == "rel" and len(args) == 2:
            return Relativistic(float(args[0]), float(args[1]))
        if kind == "sum" and len(args) == 2:
            return SumOfPowers(float(args[0]), float(args[1]))
        if kind == "logt" and len(args) == 3 and args[2] in {"+", "-"}:
            return LogTempered(float(args[0]), float(args[1]), args[2])
    except ValueError as exc:
        raise BernsteinError(f"cannot parse spec {text!r}: {exc}") from exc
    raise BernsteinError(f"cannot parse spec {text!r}")
