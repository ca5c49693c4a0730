"""Fourier-multiplier oracle for ``Phi(-Delta)`` on the line.

Independent second route for the quadrature in :mod:`nlpot.operator`: the
field is sampled on a periodic box, transformed with the FFT, multiplied by
``Phi(xi^2)`` and summed back as a trigonometric series at the requested
points.  Private helper shared by the acceptance checks and the tests.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import zeta

from .bernstein import BernsteinSpec, FractionalPower, phi_eval
from .kernels import fractional_kernel_constant
from .operator import ScalarField


def spectral_apply(
    spec: BernsteinSpec,
    f: ScalarField,
    xs,
    half_width: float = 40.0,
    n_nodes: int = 2**16,
) -> np.ndarray:
    """``Phi(-Delta) f`` at ``xs`` through the Fourier multiplier on ``[-half_width, half_width)``.

    The periodic multiplier acts on the periodized field, which adds the
    images ``sum_{n != 0} (Phi(-Delta) f)(x + n P)`` with period ``P``.  Far
    from the support these images equal ``-||f||_1 j(|x + n P|)``.  For the
    fractional power they decay algebraically and are added back through the
    Hurwitz zeta function; for other kernels they are exponentially small and
    left out.
    """
    if f.d != 1:
        raise ValueError("the spectral oracle works on the line only")
    period = 2.0 * half_width
    step = period / n_nodes
    grid = -half_width + step * np.arange(n_nodes)
    samples = np.asarray(f.value(grid), dtype=float)
    coeffs = np.fft.fft(samples) * step
    freqs = 2.0 * math.pi * np.fft.fftfreq(n_nodes, d=step)
    # Phi(0) = 0 for every Bernstein function without killing term
    symbol = np.zeros(n_nodes)
    nonzero = freqs != 0.0
    symbol[nonzero] = phi_eval(spec, freqs[nonzero] ** 2)
    weighted = symbol * coeffs
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    out = np.empty(xs.shape)
    for i, x in enumerate(xs):
        phase = np.exp(1j * freqs * (x - grid[0]))
        out[i] = float(np.real(np.sum(weighted * phase))) / period
    if isinstance(spec, FractionalPower):
        mass = float(np.sum(samples) * step)
        a = spec.alpha
        c = fractional_kernel_constant(1, a)
        s = 1.0 + a
        images = period**-s * (zeta(s, 1.0 + xs / period) + zeta(s, 1.0 - xs / period))
        out = out + mass * c * images
    return out
