"""Special functions used by the kernel, operator and closed-form modules.

Everything here works on real arguments in double precision.  The Gamma
function itself comes from :mod:`math`; the incomplete Gammas, the
modified Bessel function of the second kind, the regularized Gauss
hypergeometric function and the Lerch transcendent are implemented
directly so that each routine has a known algorithm and error behaviour.

References
----------
.. [DLMF] NIST Digital Library of Mathematical Functions, chapters 8, 10, 15, 25.
.. [NR] Press, Teukolsky, Vetterling, Flannery, *Numerical Recipes*, 3rd ed., 6.2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Precision",
    "DEFAULT_PRECISION",
    "SpecialFunctionError",
    "log_gamma",
    "gamma",
    "rgamma",
    "digamma",
    "upper_incomplete_gamma",
    "lower_incomplete_gamma",
    "bessel_k",
    "bessel_k_scaled",
    "gauss_2f1_regularized",
    "lerch_phi",
]

EULER_GAMMA = 0.57721566490153286061


class SpecialFunctionError(ValueError):
    """Raised for arguments outside a function's domain or on non-convergence."""


@dataclass(frozen=True)
class Precision:
    """Target accuracy for the series and continued-fraction evaluators.

    Parameters
    ----------
    rel_tol : float
        Relative truncation tolerance.
    max_terms : int
        Maximum number of series terms or continued-fraction levels.
    """

    rel_tol: float = 1e-12
    max_terms: int = 10_000

    def __post_init__(self) -> None:
        if not self.rel_tol > 0:
            raise SpecialFunctionError("rel_tol must be positive")
        if self.max_terms < 1:
            raise SpecialFunctionError("max_terms must be at least 1")


DEFAULT_PRECISION = Precision()

# series use a tighter internal cutoff than the advertised tolerance so that
# the accumulated rounding stays below rel_tol
_SERIES_EPS = 1e-17


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


# ---------------------------------------------------------------------------
# Gamma family
# ---------------------------------------------------------------------------


def log_gamma(x: float) -> float:
    """Natural logarithm of the Gamma function for ``x > 0``."""
    x = float(x)
    if not x > 0:
        raise SpecialFunctionError(f"log_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def gamma(x: float) -> float:
    """Gamma function on the real line (poles raise)."""
    x = float(x)
    if _is_nonpositive_integer(x):
        raise SpecialFunctionError(f"Gamma has a pole at {x!r}")
    return math.gamma(x)


def rgamma(x: float) -> float:
    """Reciprocal Gamma function ``1/Gamma(x)``, equal to zero at the poles."""
    x = float(x)
    if _is_nonpositive_integer(x):
        return 0.0
    if x > 171.0:
        return math.exp(-math.lgamma(x))
    return 1.0 / math.gamma(x)


def digamma(x: float) -> float:
    """Logarithmic derivative of Gamma.

    Uses reflection for negative arguments, upward recurrence to ``x >= 10``
    and the asymptotic Bernoulli series there.
    """
    x = float(x)
    if _is_nonpositive_integer(x):
        raise SpecialFunctionError(f"digamma has a pole at {x!r}")
    if x < 0.5:
        return digamma(1.0 - x) - math.pi / math.tan(math.pi * x)
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    series = inv2 * (
        1.0 / 12
        - inv2
        * (1.0 / 120 - inv2 * (1.0 / 252 - inv2 * (1.0 / 240 - inv2 * (1.0 / 132 - inv2 * 691.0 / 32760))))
    )
    return acc + math.log(x) - 0.5 * inv - series


def _psi_times_rgamma(x: float) -> float:
    """``digamma(x)/Gamma(x)`` with its finite limit at the poles of Gamma."""
    if _is_nonpositive_integer(x):
        n = int(-x)
        return (-1.0) ** (n + 1) * math.factorial(n)
    return digamma(x) * rgamma(x)


def _lower_gamma_series(s: float, x: float, prec: Precision) -> float:
    """gamma(s, x) by the series x^s e^{-x} sum x^n / (s (s+1) ... (s+n))."""
    term = 1.0 / s
    total = term
    for n in range(1, prec.max_terms + 1):
        term *= x / (s + n)
        total += term
        if abs(term) <= _SERIES_EPS * abs(total):
            return total * math.exp(s * math.log(x) - x)
    raise SpecialFunctionError(f"lower incomplete Gamma series did not converge for s={s}, x={x}")


def _upper_gamma_cf(s: float, x: float, prec: Precision) -> float:
    """Gamma(s, x) by the Legendre continued fraction (modified Lentz), x > 0."""
    tiny = 1e-300
    b = x + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b if b != 0 else 1.0 / tiny
    h = d
    for i in range(1, prec.max_terms + 1):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) <= _SERIES_EPS * 10:
            return math.exp(s * math.log(x) - x) * h
    raise SpecialFunctionError(f"upper incomplete Gamma continued fraction did not converge for s={s}, x={x}")


def _exp_integral_e1(x: float, prec: Precision) -> float:
    """E_1(x) = Gamma(0, x) for x > 0."""
    if x >= 1.0:
        return _upper_gamma_cf(0.0, x, prec)
    total = 0.0
    term = 1.0
    for k in range(1, prec.max_terms + 1):
        term *= -x / k
        contrib = term / k
        total += contrib
        if abs(contrib) <= _SERIES_EPS * max(abs(total), 1e-300):
            break
    return -EULER_GAMMA - math.log(x) - total


def lower_incomplete_gamma(s: float, x: float, prec: Precision = DEFAULT_PRECISION) -> float:
    """Lower incomplete Gamma function ``gamma(s, x) = int_0^x t^{s-1} e^{-t} dt``.

    Parameters
    ----------
    s : float
        Positive order.
    x : float
        Nonnegative upper limit.
    """
    s = float(s)
    x = float(x)
    if not s > 0 or not x >= 0:
        raise SpecialFunctionError(f"lower_incomplete_gamma requires s > 0 and x >= 0, got s={s}, x={x}")
    if x == 0.0:
        return 0.0
    if x < s + 1.0:
        return _lower_gamma_series(s, x, prec)
    return math.gamma(s) - _upper_gamma_cf(s, x, prec)


def upper_incomplete_gamma(s: float, x: float, prec: Precision = DEFAULT_PRECISION) -> float:
    """Upper incomplete Gamma function ``Gamma(s, x) = int_x^inf t^{s-1} e^{-t} dt``.

    Negative and zero orders are supported for ``x > 0``.  They are reached
    from an order in ``(0, 1]`` (or from ``E_1`` when ``s`` is an integer)
    through ``Gamma(s, x) = (Gamma(s + 1, x) - x^s e^{-x}) / s``.
    """
    s = float(s)
    x = float(x)
    if x < 0:
        raise SpecialFunctionError(f"upper_incomplete_gamma requires x >= 0, got {x}")
    if x == 0.0:
        if s <= 0:
            raise SpecialFunctionError("Gamma(s, 0) diverges for s <= 0")
        return math.gamma(s)
    if s > 0:
        if x < s + 1.0:
            return math.gamma(s) - _lower_gamma_series(s, x, prec)
        return _upper_gamma_cf(s, x, prec)
    if x >= 1.0:
        # the continued fraction converges for any real order once x is not small
        return _upper_gamma_cf(s, x, prec)
    n = int(math.floor(-s)) + 1
    start = s + n
    if start > 1.0 or _is_nonpositive_integer(s):
        start -= 1.0
        n -= 1
    if start == 0.0:
        value = _exp_integral_e1(x, prec)
    else:
        value = upper_incomplete_gamma(start, x, prec)
    order = start
    for _ in range(n):
        order -= 1.0
        value = (value - math.exp(order * math.log(x) - x)) / order
    return value


# ---------------------------------------------------------------------------
# Modified Bessel function of the second kind
# ---------------------------------------------------------------------------

_BESSEL_NODES = 160
_BESSEL_DECAY = 46.0


def bessel_k_scaled(rho: float, z):
    """Exponentially scaled Bessel function ``e^z K_rho(z)``.

    Evaluates ``int_0^inf exp(-z (cosh t - 1)) cosh(rho t) dt`` with the
    trapezoidal rule.  The integrand is analytic in the strip
    ``|Im t| < pi/2`` and decays doubly exponentially, so the rule converges
    geometrically in the number of nodes; the cut-off ``T`` is chosen per
    argument so that the neglected tail is below ``e^{-46}`` of the peak.
    Vectorized over ``z``.
    """
    nu = abs(float(rho))
    z_arr = np.asarray(z, dtype=float)
    scalar = z_arr.ndim == 0
    z_flat = np.atleast_1d(z_arr).ravel()
    if np.any(~(z_flat > 0)):
        raise SpecialFunctionError("bessel_k requires z > 0")
    # solve z (cosh T - 1) = DECAY + nu T by fixed-point iteration
    T = np.arccosh(1.0 + _BESSEL_DECAY / z_flat)
    for _ in range(4):
        T = np.arccosh(1.0 + (_BESSEL_DECAY + nu * T) / z_flat)
    T = np.maximum(T, 1e-3)
    h = T / _BESSEL_NODES
    k = np.arange(_BESSEL_NODES + 1, dtype=float)
    out = np.empty_like(z_flat)
    chunk = 4096
    weights = np.ones(_BESSEL_NODES + 1)
    weights[0] = 0.5
    weights[-1] = 0.5
    for start in range(0, z_flat.size, chunk):
        sl = slice(start, start + chunk)
        t = h[sl, None] * k[None, :]
        # cosh(t) - 1 = 2 sinh(t/2)^2 avoids cancellation for small t
        integrand = np.exp(-z_flat[sl, None] * 2.0 * np.sinh(0.5 * t) ** 2) * np.cosh(nu * t)
        out[sl] = h[sl] * (integrand @ weights)
    if scalar:
        return float(out[0])
    return out.reshape(z_arr.shape)


def bessel_k(rho: float, z):
    """Modified Bessel function of the second kind ``K_rho(z)`` for real order, ``z > 0``.

    Examples
    --------
    >>> round(bessel_k(0.5, 1.0), 7)
    0.4610685
    """
    scaled = bessel_k_scaled(rho, z)
    if np.ndim(z):
        return scaled * np.exp(-np.asarray(z, dtype=float))
    return scaled * math.exp(-float(z))


# ---------------------------------------------------------------------------
# Gauss hypergeometric function
# ---------------------------------------------------------------------------


def _2f1_series(a: float, b: float, c: float, z: float, prec: Precision) -> float:
    """Plain (non-regularized) Maclaurin series of 2F1, requires |z| < 1."""
    term = 1.0
    total = 1.0
    for n in range(prec.max_terms):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z
        total += term
        if term == 0.0:
            return total
        if abs(term) <= _SERIES_EPS * abs(total):
            # require two consecutive small terms to avoid a lucky zero crossing
            nxt = term * (a + n + 1) * (b + n + 1) / ((c + n + 1) * (n + 2.0)) * z
            if abs(nxt) <= _SERIES_EPS * abs(total):
                return total
    raise SpecialFunctionError(f"2F1 series did not converge: a={a}, b={b}, c={c}, z={z}")


def _2f1_regularized_series(a: float, b: float, c: float, z: float, prec: Precision) -> float:
    """Regularized series valid for |z| < 1, including c at a pole of Gamma."""
    if not _is_nonpositive_integer(c):
        return _2f1_series(a, b, c, z, prec) * rgamma(c)
    # F(a,b;-n;z)/Gamma(-n) = (a)_{n+1}(b)_{n+1}/(n+1)! z^{n+1} F(a+n+1, b+n+1; n+2; z)
    n = int(-c)
    coef = 1.0
    for k in range(n + 1):
        coef *= (a + k) * (b + k) / (k + 1.0)
    return coef * z ** (n + 1) * _2f1_series(a + n + 1, b + n + 1, n + 2.0, z, prec) * rgamma(n + 2.0)


def _2f1_pfaff(a: float, b: float, c: float, z: float, prec: Precision) -> float:
    """Regularized 2F1 through Pfaff: (1-z)^{-a} F(a, c-b; c; z/(z-1))."""
    w = z / (z - 1.0)
    return (1.0 - z) ** (-a) * _2f1_regularized_series(a, c - b, c, w, prec)


def _2f1_large_negative(a: float, b: float, c: float, z: float, prec: Precision) -> float:
    """Regularized 2F1 for z < -1 from the connection formula at infinity."""
    mz = -z
    inv = 1.0 / z
    diff = b - a
    m = round(diff)
    if abs(diff - m) < 1e-9:
        if m < 0:
            a, b = b, a
            m = -m
        return _2f1_degenerate(a, int(m), c, z, prec)
    # Gamma(b-a)/(Gamma(b)Gamma(c-a)) (-z)^{-a} F(a, a-c+1; a-b+1; 1/z) + (a <-> b)
    first = (
        math.gamma(b - a)
        * rgamma(b)
        * rgamma(c - a)
        * mz ** (-a)
        * _2f1_regularized_series(a, a - c + 1.0, a - b + 1.0, inv, prec)
        * math.gamma(a - b + 1.0)
    )
    second = (
        math.gamma(a - b)
        * rgamma(a)
        * rgamma(c - b)
        * mz ** (-b)
        * _2f1_regularized_series(b, b - c + 1.0, b - a + 1.0, inv, prec)
        * math.gamma(b - a + 1.0)
    )
    return first + second


def _2f1_degenerate(a: float, m: int, c: float, z: float, prec: Precision) -> float:
    """Regularized F(a, a+m; c; z) for z < -1 and integer m >= 0 (logarithmic case).

    Implements the expansion in powers of 1/z with the digamma corrections
    (DLMF 15.8.8).
    """
    mz = -z
    log_mz = math.log(mz)
    finite = 0.0
    if m > 0:
        poch = 1.0
        for k in range(m):
            finite += poch * math.factorial(m - k - 1) / math.factorial(k) * rgamma(c - a - k) * z ** (-k)
            poch *= a + k
        finite *= rgamma(a + m)
    infinite = 0.0
    poch = 1.0  # (a+m)_k
    fact_k = 1.0
    fact_km = float(math.factorial(m))
    for k in range(prec.max_terms):
        arg = c - a - k - m
        bracket = (log_mz + digamma(1.0 + m + k) + digamma(1.0 + k) - digamma(a + m + k)) * rgamma(arg)
        bracket -= _psi_times_rgamma(arg)
        term = poch / (fact_k * fact_km) * (-1.0) ** k * z ** (-k - m) * bracket
        infinite += term
        if k > 2 and abs(term) <= _SERIES_EPS * max(abs(infinite), 1e-300):
            break
        poch *= a + m + k
        fact_k *= k + 1.0
        fact_km *= k + m + 1.0
    else:
        raise SpecialFunctionError("logarithmic 2F1 expansion did not converge")
    infinite *= rgamma(a) if not _is_nonpositive_integer(a) else 0.0
    return mz ** (-a) * (finite + infinite)


def gauss_2f1_regularized(a: float, b: float, c: float, z: float, prec: Precision = DEFAULT_PRECISION) -> float:
    """Regularized Gauss hypergeometric function ``2F1(a, b; c; z) / Gamma(c)`` for ``z <= 0``.

    The Maclaurin series is summed directly for ``-1/2 <= z <= 0``.  For
    ``-2 <= z < -1/2`` the Pfaff transformation maps the argument to
    ``z/(z-1)`` in ``[1/3, 2/3]``.  Below ``-2`` the connection formula at
    infinity is used, with the logarithmic expansion when ``b - a`` is an
    integer.

    Examples
    --------
    >>> round(gauss_2f1_regularized(1, 1, 2, -1), 12) == round(math.log(2), 12)
    True
    """
    a, b, c, z = float(a), float(b), float(c), float(z)
    if not c > 0:
        raise SpecialFunctionError(f"gauss_2f1_regularized requires c > 0, got {c}")
    if z > 0:
        raise SpecialFunctionError(f"gauss_2f1_regularized supports z <= 0 only, got {z}")
    if z == 0.0:
        return rgamma(c)
    if z >= -0.5:
        return _2f1_regularized_series(a, b, c, z, prec)
    if z >= -2.0:
        return _2f1_pfaff(a, b, c, z, prec)
    return _2f1_large_negative(a, b, c, z, prec)


# ---------------------------------------------------------------------------
# Lerch transcendent
# ---------------------------------------------------------------------------


def lerch_phi(z: float, s: float, zeta: float, prec: Precision = DEFAULT_PRECISION) -> float:
    """Lerch transcendent ``sum_{n>=0} z^n / (n + zeta)^s`` for ``|z| < 1``, ``zeta > 0``."""
    z, s, zeta = float(z), float(s), float(zeta)
    if not abs(z) < 1:
        raise SpecialFunctionError(f"lerch_phi requires |z| < 1, got {z}")
    if not zeta > 0:
        raise SpecialFunctionError(f"lerch_phi requires zeta > 0, got {zeta}")
    if _is_nonpositive_integer(s) and s != 0:
        raise SpecialFunctionError("lerch_phi is not defined for negative integer s")
    total = zeta ** (-s)
    if z == 0.0:
        return total
    power = 1.0
    for n in range(1, prec.max_terms + 1):
        power *= z
        term = power * (n + zeta) ** (-s)
        total += term
        if abs(term) <= prec.rel_tol * 1e-3 * abs(total):
            return total
    raise SpecialFunctionError(f"lerch_phi did not converge within {prec.max_terms} terms")
