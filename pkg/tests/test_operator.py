from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nlpot import closedform
from nlpot.bernstein import FractionalPower, Relativistic, SumOfPowers
from nlpot.kernels import JumpKernel, SigmaKernel
from nlpot.operator import (
    Gaussian,
    HarmonicWeighted,
    LineField,
    OperatorError,
    PolyDecay,
    QuadratureConfig,
    RadialField,
    StretchedExp,
    apply_g_operator,
    apply_g_operator_detailed,
    apply_nonlocal,
    apply_nonlocal_detailed,
    estimate_zygmund_L,
    kernel_for,
    second_difference,
)

# Phi(-Delta) phi_kappa = -V_{kappa,alpha} phi_kappa with V from mpmath.hyp2f1 at 30
# digits: (d, alpha, kappa, |x|, value)
RADIAL_REFERENCE = [
    (2, 1.0, 1.0, 0.0, 1.5707963267948966),
    (2, 1.0, 1.0, 1.5, 0.0730987893111767),
    (2, 0.5, 0.8, 3.0, 0.0504768924365589),
    (3, 1.0, 1.25, 0.0, 2.2882792905054394),
    (3, 1.0, 1.25, 1.0, 0.4434161988139815),
    (3, 1.5, 1.0, 4.0, -0.0016568077671435802),
    (3, 0.3, 2.0, 0.7, 0.5195780252404558),
]


def test_second_difference_example():
    assert second_difference(PolyDecay(1.0), 0.0, 1.0) == pytest.approx(-1.0, rel=1e-15)


@given(x=st.floats(-20.0, 20.0))
def test_half_laplacian_of_lorentzian(x):
    # (-Delta)^{1/2} (1 + x^2)^{-1} = (1 - x^2) / (1 + x^2)^2 on the line
    expected = (1.0 - x * x) / (1.0 + x * x) ** 2
    assert apply_nonlocal(FractionalPower(1.0), PolyDecay(1.0), x) == pytest.approx(expected, rel=1e-9, abs=1e-13)


@pytest.mark.parametrize("d, alpha, kappa, r, expected", RADIAL_REFERENCE)
def test_radial_fields_in_higher_dimensions(d, alpha, kappa, r, expected):
    value = apply_nonlocal(FractionalPower(alpha), PolyDecay(kappa, d), r)
    assert value == pytest.approx(expected, rel=1e-8)


def test_radial_point_may_be_given_as_vector():
    f = PolyDecay(1.25, 3)
    a = apply_nonlocal(FractionalPower(1.0), f, 1.0)
    b = apply_nonlocal(FractionalPower(1.0), f, np.array([0.0, 0.6, -0.8]))
    assert a == pytest.approx(b, rel=1e-12)


def test_non_radial_harmonic_weight_in_two_dimensions():
    P = closedform.coordinate(1, 2)
    f = HarmonicWeighted(P, 1.3, 2)
    x = np.array([0.4, -1.1])
    expected = -closedform.V_kappa_alpha(P, 1.3, 0.8, 2, x) * float(f.value(x))
    assert apply_nonlocal(FractionalPower(0.8), f, x) == pytest.approx(expected, rel=1e-8)


@pytest.mark.parametrize("spec", [FractionalPower(1.0), FractionalPower(0.4), Relativistic(1.0, 1.0), Relativistic(2.0, 1.5)], ids=str)
@given(x=st.floats(-5.0, 5.0))
def test_quadrature_matches_fourier_multiplier(spectral_oracle, spec, x):
    f = Gaussian(1.0)
    expected = float(spectral_oracle(spec, f, [x])[0])
    # the oracle's periodic box limits it to about 5e-7 absolute accuracy
    assert abs(apply_nonlocal(spec, f, x) - expected) <= 1e-6 * f.sup_norm


@pytest.mark.parametrize("spec", [FractionalPower(1.0), Relativistic(1.0, 1.0)], ids=str)
def test_spectral_box_is_converged(spectral_oracle, spec):
    xs = [0.0, 2.5, 5.0]
    small = spectral_oracle(spec, Gaussian(1.0), xs)
    large = spectral_oracle(spec, Gaussian(1.0), xs, half_width=80.0, n_nodes=2**17)
    np.testing.assert_allclose(small, large, rtol=0, atol=1e-6)


@given(R=st.floats(0.05, 20.0))
def test_split_radius_invariance(R):
    f = Gaussian(0.7)
    base = apply_nonlocal(FractionalPower(1.3), f, 0.8)
    moved = apply_nonlocal(FractionalPower(1.3), f, 0.8, QuadratureConfig(split_radius_R=R))
    assert moved == pytest.approx(base, rel=1e-9)


@given(a=st.floats(-3.0, 3.0), b=st.floats(-3.0, 3.0), x=st.floats(-4.0, 4.0))
def test_linearity(a, b, x):
    f, g = Gaussian(1.0), PolyDecay(0.75)
    combo = LineField(lambda y: a * f.value(y) + b * g.value(y), sup_norm=abs(a) + abs(b) + 1e-300)
    spec = FractionalPower(0.9)
    expected = a * apply_nonlocal(spec, f, x) + b * apply_nonlocal(spec, g, x)
    scale = abs(a) + abs(b)
    assert abs(apply_nonlocal(spec, combo, x) - expected) <= 1e-8 * max(scale, 1e-12)


def test_operator_annihilates_constants():
    one = LineField(lambda y: np.ones_like(y), sup_norm=1.0)
    assert abs(apply_nonlocal(FractionalPower(1.0), one, 3.0)) < 1e-12


def test_detailed_result_splits_into_parts():
    res = apply_nonlocal_detailed(Relativistic(1.0, 1.0), Gaussian(1.0), 1.0)
    assert res.value == pytest.approx(res.singular_part + res.tail_part, rel=1e-14)
    assert 0 < res.est_error < 1e-8
    assert res.split_R == 1.0


def test_sum_of_powers_operator_is_additive():
    f = Gaussian(1.0)
    total = apply_nonlocal(SumOfPowers(0.5, 1.5), f, 0.5)
    parts = apply_nonlocal(FractionalPower(0.5), f, 0.5) + apply_nonlocal(FractionalPower(1.5), f, 0.5)
    assert total == pytest.approx(parts, rel=1e-6)


@pytest.mark.parametrize("x", [0.0, 1.0, 3.0])
def test_massive_operator_decomposes(x):
    f = Gaussian(1.0)
    massive = apply_nonlocal(Relativistic(1.0, 1.0), f, x)
    massless = apply_nonlocal(FractionalPower(1.0), f, x)
    assert abs(massive - (massless - apply_g_operator(1.0, 1.0, f, x))) < 1e-10


@given(x=st.floats(-10.0, 10.0))
def test_correction_operator_bound(x):
    f = StretchedExp(0.5, 1.5)
    assert abs(apply_g_operator(2.0, 0.7, f, x)) <= 2.0 * 2.0 * f.sup_norm


def test_correction_operator_accepts_prebuilt_kernel():
    s = SigmaKernel(1.0, 1.0, 1)
    a = apply_g_operator_detailed(1.0, 1.0, Gaussian(1.0), 0.5, sigma=s)
    b = apply_g_operator_detailed(1.0, 1.0, Gaussian(1.0), 0.5)
    assert a.value == pytest.approx(b.value, rel=1e-14)
    with pytest.raises(OperatorError):
        apply_g_operator(2.0, 1.0, Gaussian(1.0), 0.5, sigma=s)


def test_kernel_cache_and_dimension_check():
    spec = FractionalPower(1.0)
    assert kernel_for(spec, 1) is kernel_for(FractionalPower(1.0), 1)
    with pytest.raises(OperatorError):
        kernel_for(JumpKernel(spec, 2), 1)


def test_zygmund_constant():
    # D_h f(0) / h^2 for the Lorentzian peaks at h -> 0 with value |f''(0)| = 2
    assert estimate_zygmund_L(PolyDecay(1.0), 0.0, 1.0) == pytest.approx(2.0, rel=1e-3)
    kink = LineField(lambda y: np.exp(-np.abs(y)), sup_norm=1.0)
    # a kink gives 2 / h at the smallest sampled step h = 1e-6 R
    assert estimate_zygmund_L(kink, 0.0, 1.0) == pytest.approx(2e6, rel=1e-3)
    jump = LineField(lambda y: np.where(y > 0, 1.0, 0.0), sup_norm=1.0)
    assert estimate_zygmund_L(jump, 0.0, 0.5) == math.inf
    window = LineField(lambda y: np.minimum(y * y, 100.0), sup_norm=100.0)
    # the smallest step h = 1e-6 carries a cancellation error of about eps x^2 / h^2
    assert estimate_zygmund_L(window, 1.5, 1.0) == pytest.approx(2.0, rel=1e-3)
    assert estimate_zygmund_L(PolyDecay(1.0, 2), np.zeros(2), 1.0) == pytest.approx(2.0, rel=1e-3)


@pytest.mark.parametrize(
    "make",
    [
        lambda: QuadratureConfig(split_radius_R=0.0),
        lambda: QuadratureConfig(rel_tol=float("nan")),
        lambda: QuadratureConfig(angular_nodes=7),
        lambda: PolyDecay(0.0),
        lambda: Gaussian(-1.0),
        lambda: StretchedExp(1.0, 0.0),
        lambda: RadialField(lambda r: np.exp(r), d=1, sup_norm=math.inf),
        lambda: HarmonicWeighted(closedform.coordinate(0, 1), 0.4, 1),
    ],
)
def test_invalid_configurations_and_fields(make):
    with pytest.raises(OperatorError):
        make()


def test_point_dimension_mismatch():
    with pytest.raises(OperatorError):
        apply_nonlocal(FractionalPower(1.0), PolyDecay(1.0, 3), np.zeros(2))
    with pytest.raises(OperatorError):
        apply_nonlocal(FractionalPower(1.0), PolyDecay(1.0, 1), np.zeros(2))


def test_field_envelopes_bound_the_field():
    r = np.geomspace(1e-3, 1e3, 200)
    for f in (PolyDecay(0.6), Gaussian(2.0), StretchedExp(0.3, 0.5, 2.0)):
        assert np.all(np.abs(f.value(r)) <= f.envelope(r) * (1 + 1e-12))
        assert f.envelope(np.array([0.0]))[0] <= f.sup_norm * (1 + 1e-12)
