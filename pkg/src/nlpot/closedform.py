"""Explicit zero-energy eigenpairs of the fractional Laplacian.

For a harmonic polynomial ``P`` of degree ``l`` in dimension ``d`` put
``delta = d + 2 l``.  The field

    phi_kappa(x) = P(x) / (1 + |x|^2)^kappa

solves ``(-Delta)^{alpha/2} phi_kappa + V_{kappa,alpha} phi_kappa = 0`` with

    V_{kappa,alpha}(x) = -(2^alpha / Gamma(kappa)) Gamma((delta+alpha)/2) Gamma(alpha/2 + kappa)
                         (1 + |x|^2)^kappa  2F1~((delta+alpha)/2, alpha/2 + kappa; delta/2; -|x|^2),

where ``2F1~`` is the regularized Gauss hypergeometric function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .bernstein import FractionalPower
from .operator import HarmonicWeighted, QuadratureConfig, apply_nonlocal
from .specfun import gamma, gauss_2f1_regularized

__all__ = [
    "ClosedFormError",
    "HarmonicPolynomial",
    "one",
    "coordinate",
    "traceless_quadratic",
    "phi_kappa",
    "l2_member",
    "V_kappa_alpha",
    "V_at_origin",
    "DecayCase",
    "decay_case",
    "predicted_sign",
    "eigenfunction_field",
    "verify_eigen_identity",
]


class ClosedFormError(ValueError):
    """Parameters outside the admissible range of the explicit family."""


@dataclass(frozen=True)
class HarmonicPolynomial:
    """Homogeneous harmonic polynomial on ``R^d``.

    Attributes
    ----------
    degree : int
        Homogeneity degree ``l``.
    d : int
        Space dimension.
    evaluator : callable
        Vectorized map from points (scalars when ``d = 1``, trailing axis of
        length ``d`` otherwise) to values.
    name : str
        Short label.
    sphere_max : float
        ``max |P|`` on the unit sphere.
    """

    degree: int
    d: int
    evaluator: Callable
    name: str
    sphere_max: float = 1.0

    def __call__(self, x):
        return self.evaluator(np.asarray(x, dtype=float))


def one(d: int = 1) -> HarmonicPolynomial:
    """The constant polynomial 1 (degree 0)."""

    def ev(x):
        shape = x.shape if d == 1 else x.shape[:-1]
        return np.ones(shape)

    return HarmonicPolynomial(0, d, ev, "one", 1.0)


def coordinate(i: int = 0, d: int = 1) -> HarmonicPolynomial:
    """The coordinate ``x_i`` (degree 1)."""
    if not 0 <= i < d:
        raise ClosedFormError("coordinate index out of range")

    def ev(x):
        return x if d == 1 else x[..., i]

    return HarmonicPolynomial(1, d, ev, f"x{i}", 1.0)


def traceless_quadratic(i: int, j: int, d: int) -> HarmonicPolynomial:
    """``x_i x_j`` for ``i != j`` (degree 2, needs ``d >= 2``)."""
    if d < 2 or i == j or not (0 <= i < d and 0 <= j < d):
        raise ClosedFormError("need d >= 2 and distinct indices in range")

    def ev(x):
        return x[..., i] * x[..., j]

    return HarmonicPolynomial(2, d, ev, f"x{i}x{j}", 0.5)


def _norm2(x, d: int):
    x = np.asarray(x, dtype=float)
    return x * x if d == 1 else np.sum(x * x, axis=-1)


def phi_kappa(P: HarmonicPolynomial, kappa: float, x):
    """``P(x) / (1 + |x|^2)^kappa``."""
    if not kappa > 0:
        raise ClosedFormError("kappa must be positive")
    out = P(x) * (1.0 + _norm2(x, P.d)) ** (-kappa)
    return float(out) if np.ndim(out) == 0 else out


def l2_member(P: HarmonicPolynomial, kappa: float) -> bool:
    """Whether ``phi_kappa`` is square integrable: ``kappa > delta / 4``.

    At ``kappa = delta / 4`` the integrand of ``|phi|^2`` decays like
    ``r^{-1}`` in the radial variable, so the integral diverges
    logarithmically and the boundary case is excluded.
    """
    delta = P.d + 2 * P.degree
    return kappa > 0.25 * delta


def _check(P: HarmonicPolynomial, kappa: float, alpha: float, d: int) -> int:
    if P.d != d:
        raise ClosedFormError("polynomial dimension does not match d")
    if not 0 < alpha < 2:
        raise ClosedFormError("alpha must lie in (0, 2)")
    if not kappa > P.degree:
        raise ClosedFormError("need kappa > l")
    return d + 2 * P.degree


def V_kappa_alpha(P: HarmonicPolynomial, kappa: float, alpha: float, d: int, x):
    """Potential of the explicit eigenpair at ``x`` (depends on ``|x|`` only)."""
    delta = _check(P, kappa, alpha, d)
    a = 0.5 * (delta + alpha)
    b = 0.5 * alpha + kappa
    c = 0.5 * delta
    pref = -(2.0**alpha) / gamma(kappa) * gamma(a) * gamma(b)
    r2 = np.atleast_1d(_norm2(x, d))
    vals = np.array([pref * (1.0 + s) ** kappa * gauss_2f1_regularized(a, b, c, -s) for s in r2.ravel()])
    vals = vals.reshape(r2.shape)
    return float(vals[0]) if np.ndim(_norm2(x, d)) == 0 else vals


def V_at_origin(kappa: float, alpha: float, d: int, l: int = 0) -> float:
    """``-2^alpha Gamma((delta+alpha)/2) Gamma(alpha/2 + kappa) / (Gamma(kappa) Gamma(delta/2))``."""
    delta = d + 2 * l
    return -(2.0**alpha) * gamma(0.5 * (delta + alpha)) * gamma(0.5 * alpha + kappa) / (gamma(kappa) * gamma(0.5 * delta))


@dataclass(frozen=True)
class DecayCase:
    """Large-``|x|`` law ``V ~ c |x|^exponent`` (times ``log |x|`` when ``with_log``)."""

    exponent: float
    with_log: bool
    sign: str


def predicted_sign(kappa: float, alpha: float, d: int, l: int = 0) -> str:
    """``negative`` for ``kappa in (l, (delta-alpha)/2]``, ``positive`` on ``((delta-alpha)/2, (delta+alpha)/2)``."""
    delta = d + 2 * l
    if not l < kappa < 0.5 * (delta + alpha):
        raise ClosedFormError("kappa outside (l, (delta+alpha)/2)")
    return "negative" if kappa <= 0.5 * (delta - alpha) + 1e-12 else "positive"


def decay_case(kappa: float, alpha: float, d: int, l: int = 0) -> DecayCase:
    """Four-case decay table of the explicit potentials.

    * ``kappa in (l, delta/2)``, ``kappa != (delta-alpha)/2``: exponent ``-alpha``;
    * ``kappa = (delta-alpha)/2``: the leading term cancels, exponent ``-2 alpha``;
    * ``kappa = delta/2``: exponent ``-alpha`` with a logarithmic factor;
    * ``kappa in (delta/2, (delta+alpha)/2)``: exponent ``2 kappa - delta - alpha``.
    """
    delta = d + 2 * l
    sign = predicted_sign(kappa, alpha, d, l)
    if math.isclose(kappa, 0.5 * (delta - alpha), abs_tol=1e-12):
        return DecayCase(-2.0 * alpha, False, sign)
    if math.isclose(kappa, 0.5 * delta, abs_tol=1e-12):
        return DecayCase(-alpha, True, sign)
    if kappa < 0.5 * delta:
        return DecayCase(-alpha, False, sign)
    return DecayCase(2.0 * kappa - delta - alpha, False, sign)


def eigenfunction_field(P: HarmonicPolynomial, kappa: float) -> HarmonicWeighted:
    """``phi_kappa`` as a :class:`~nlpot.operator.ScalarField`."""
    return HarmonicWeighted(P, kappa, P.d)


def verify_eigen_identity(
    P: HarmonicPolynomial,
    kappa: float,
    alpha: float,
    d: int,
    sample_xs: Sequence,
    cfg: Optional[QuadratureConfig] = None,
    eps_floor: Optional[float] = None,
) -> float:
    """Largest relative residual of ``(-Delta)^{alpha/2} phi + V phi = 0`` over the samples.

    The operator side is computed by :func:`nlpot.operator.apply_nonlocal`;
    the residual at ``x`` is ``|L phi(x) + V(x) phi(x)| / (|V(x) phi(x)| + eps_floor)``.
    The default floor is ``cfg.rel_tol * sup|phi|``, the absolute accuracy of
    the quadrature, so zeros of ``V`` (for instance ``|x| = 1`` when
    ``kappa = alpha = d = 1``) do not turn rounding noise into a large
    relative residual.
    """
    _check(P, kappa, alpha, d)
    cfg = cfg or QuadratureConfig()
    field = eigenfunction_field(P, kappa)
    if eps_floor is None:
        eps_floor = cfg.rel_tol * field.sup_norm
    spec = FractionalPower(alpha)
    worst = 0.0
    for x in sample_xs:
        point = x
        if d > 1 and np.ndim(x) == 0:
            point = np.zeros(d)
            point[0] = float(x)
        lphi = apply_nonlocal(spec, field, point, cfg)
        vphi = V_kappa_alpha(P, kappa, alpha, d, point) * float(field.value(np.asarray(point)))
        worst = max(worst, abs(lphi + vphi) / (abs(vphi) + eps_floor))
    return worst
