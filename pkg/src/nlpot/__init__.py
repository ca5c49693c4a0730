"""Nonlocal Schrodinger operators with a prescribed zero-energy eigenfunction.

Given a Bernstein function ``Phi`` and a positive field ``phi``, the package
evaluates ``Phi(-Delta) phi`` by quadrature of the jump kernel and returns the
potential ``V = -Phi(-Delta) phi / phi``, together with decay, sign and
integrability diagnostics.

Modules
-------
specfun
    Gamma, incomplete Gamma, Bessel K and regularized hypergeometric functions.
bernstein
    Bernstein functions, Levy densities and tail classes.
kernels
    Jump kernels and the correction kernel of the relativistic operator.
operator
    Fields and the nonlocal operator.
potential
    Potential reconstruction and its asymptotic analysis.
closedform
    Explicit eigenpairs of the fractional Laplacian.
cli
    Command-line interface.
"""

from __future__ import annotations

from .bernstein import FractionalPower, Relativistic, SumOfPowers, parse_spec
from .operator import Gaussian, PolyDecay, QuadratureConfig, StretchedExp, apply_nonlocal
from .potential import reconstruct_potential

__all__ = [
    "FractionalPower",
    "Relativistic",
    "SumOfPowers",
    "parse_spec",
    "Gaussian",
    "PolyDecay",
    "StretchedExp",
    "QuadratureConfig",
    "apply_nonlocal",
    "reconstruct_potential",
]

__version__ = "0.1.0"
