"""Composite Gauss-Legendre helpers shared by the kernel and operator code."""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Callable

import numpy as np


@lru_cache(maxsize=None)
def gl_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def panel_nodes(edges: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Flattened nodes and weights of an n-point rule on every panel of ``edges``."""
    x, w = gl_rule(n)
    a = edges[:-1, None]
    b = edges[1:, None]
    half = 0.5 * (b - a)
    nodes = (a + b) * 0.5 + half * x[None, :]
    weights = half * w[None, :]
    return nodes.ravel(), weights.ravel()


def integrate_on_edges(f: Callable, edges: np.ndarray, n: int = 24) -> float:
    nodes, weights = panel_nodes(np.asarray(edges, dtype=float), n)
    return float(np.dot(weights, f(nodes)))


def local_exponent(f: Callable, x: float, q: float = 1.05) -> float:
    """Logarithmic slope of a positive function at ``x``."""
    lo, hi = float(f(np.array([x / q]))[0]), float(f(np.array([x * q]))[0])
    if lo <= 0 or hi <= 0 or not math.isfinite(lo) or not math.isfinite(hi):
        return -math.inf
    return (math.log(hi) - math.log(lo)) / (2.0 * math.log(q))


def integrate_outward(
    f: Callable,
    a: float,
    rel_tol: float = 1e-13,
    ratio: float = 2.0,
    n: int = 24,
    max_panels: int = 4000,
    batch: int = 16,
) -> tuple[float, float]:
    """Integral of a positive, eventually decaying ``f`` over ``[a, inf)``.

    Panels grow geometrically in batches.  After each batch the remainder
    ``X f(X) / (-p - 1)`` of a pure power law with the local exponent ``p``
    is formed; it is accepted once it is below ``rel_tol`` of the total, or
    once ``p`` has settled so that the drift between batches moves the
    remainder by less than ``rel_tol`` of the total.
    """
    total = 0.0
    p_prev = None
    left = a
    used = 0
    while used < max_panels:
        edges = left * ratio ** np.arange(batch + 1)
        nodes, weights = panel_nodes(edges, n)
        vals = f(nodes)
        total += float(np.dot(weights, vals))
        left = float(edges[-1])
        used += batch
        end_val = float(f(np.array([left]))[0])
        if end_val == 0.0:
            return total, 0.0
        p = local_exponent(f, left)
        if p < -1.0:
            rem = left * end_val / (-p - 1.0)
            drift = abs(rem) * abs(p - p_prev) / (-p - 1.0) if p_prev is not None else math.inf
            if abs(rem) <= rel_tol * abs(total) or drift <= rel_tol * abs(total + rem):
                return total + rem, min(abs(rem), drift) + 1e-16 * abs(total)
        p_prev = p
    raise ArithmeticError(f"outward integral from {a} did not converge")


def integrate_inward(
    f: Callable,
    b: float,
    rel_tol: float = 1e-13,
    ratio: float = 2.0,
    n: int = 24,
    max_panels: int = 4000,
    batch: int = 16,
) -> tuple[float, float]:
    """Integral of ``f`` over ``(0, b]`` for integrands with a power-law endpoint at 0.

    Mirror image of :func:`integrate_outward`, with the remainder
    ``X f(X) / (p + 1)`` of the power law on ``(0, X]``.
    """
    total = 0.0
    p_prev = None
    right = b
    used = 0
    while used < max_panels:
        edges = right * ratio ** (-np.arange(batch + 1, dtype=float))[::-1]
        nodes, weights = panel_nodes(edges, n)
        total += float(np.dot(weights, f(nodes)))
        right = float(edges[0])
        used += batch
        end_val = float(f(np.array([right]))[0])
        if end_val == 0.0:
            return total, 0.0
        p = local_exponent(f, right)
        if p > -1.0:
            rem = right * end_val / (p + 1.0)
            drift = abs(rem) * abs(p - p_prev) / (p + 1.0) if p_prev is not None else math.inf
            if abs(rem) <= rel_tol * abs(total) or drift <= rel_tol * abs(total + rem):
                return total + rem, min(abs(rem), drift) + 1e-16 * abs(total)
        p_prev = p
    raise ArithmeticError(f"inward integral to {b} did not converge (non-integrable singularity?)")
