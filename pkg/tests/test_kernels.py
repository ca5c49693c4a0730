from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nlpot.bernstein import Custom, FractionalPower, LevyDensity, Relativistic, SumOfPowers
from nlpot.kernels import (
    DivergenceError,
    JumpKernel,
    KernelError,
    SigmaKernel,
    asymptote_validate,
    fractional_kernel_constant,
    jump_kernel_eval,
    light_second_moment_bracket,
    lp_tail_norm,
    moment_J_beta,
    nu_tail,
    halved_fractional_constant,
    second_moment_J,
    sigma_eval,
    sigma_mass_report,
    sigma_total_mass,
    sphere_area,
)

# sigma = j_0 - j_m from the single subordination integral with weight
# 1 - exp(-m^{2/alpha} t), evaluated with mpmath at 30 digits: (m, alpha, d, r, value)
SIGMA = [
    (1.0, 1.0, 1, 0.01, 0.8309760233848916),
    (1.0, 1.0, 1, 0.5, 0.21871637597835977),
    (1.0, 1.0, 1, 2.0, 0.05731712508494128),
    (1.0, 1.0, 1, 20.0, 0.0007957747060962991),
    (2.0, 0.5, 3, 0.01, 252.55818774288505),
    (2.0, 0.5, 3, 0.5, 0.29102360664228416),
    (2.0, 0.5, 3, 2.0, 0.004190896627617877),
    (2.0, 0.5, 3, 20.0, 1.3310258070711204e-06),
    (0.7, 1.5, 2, 0.01, 35.44331312669474),
    (0.7, 1.5, 2, 0.5, 0.08811041937620126),
    (0.7, 1.5, 2, 2.0, 0.0062488234932347305),
    (0.7, 1.5, 2, 20.0, 4.784247848384091e-06),
]
# relativistic jump kernel from the subordination integral (mpmath): (m, alpha, d, r, value)
RELATIVISTIC = [
    (1.0, 1.0, 1, 0.5, 1.0545231687568029),
    (1.0, 1.0, 2, 3.0, 0.001173904893748102),
    (0.5, 1.5, 3, 1.0, 0.11051741416367995),
    (2.0, 0.3, 1, 10.0, 2.3149073564020133e-46),
]


@pytest.mark.parametrize("d, expected", [(1, 2.0), (2, 2 * math.pi), (3, 4 * math.pi)])
def test_sphere_area(d, expected):
    assert sphere_area(d) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize(
    "d, alpha, expected",
    [
        (1, 1.0, 1.0 / math.pi),
        (3, 1.0, 1.0 / math.pi**2),
        (2, 1.0, 1.0 / (2.0 * math.pi)),
    ],
)
def test_fractional_constant_known_values(d, alpha, expected):
    assert fractional_kernel_constant(d, alpha) == pytest.approx(expected, rel=1e-14)


def test_alternate_constant_is_half_of_exact():
    assert halved_fractional_constant(2, 0.7) == pytest.approx(0.5 * fractional_kernel_constant(2, 0.7), rel=1e-15)


@pytest.mark.parametrize("d", [1, 2, 3])
@given(alpha=st.floats(0.1, 1.9), r=st.floats(0.05, 50.0))
def test_fractional_quadrature_matches_closed_form(d, alpha, r):
    k = JumpKernel(FractionalPower(alpha), d)
    assert k.quadrature(r) == pytest.approx(float(k(r)), rel=1e-9)


@pytest.mark.parametrize("m, alpha, d, r, expected", RELATIVISTIC)
def test_relativistic_kernel_reference(m, alpha, d, r, expected):
    k = JumpKernel(Relativistic(m, alpha), d)
    assert jump_kernel_eval(k, r) == pytest.approx(expected, rel=1e-10)
    assert k.quadrature(r) == pytest.approx(expected, rel=1e-8)


@given(r=st.floats(1e-3, 1e3))
def test_sum_of_powers_kernel_is_the_sum_of_its_parts(r):
    # the tabulated quadrature route against two closed forms
    k = JumpKernel(SumOfPowers(0.5, 1.5), 1)
    parts = JumpKernel(FractionalPower(0.5), 1)(r) + JumpKernel(FractionalPower(1.5), 1)(r)
    assert float(k(r)) == pytest.approx(float(parts), rel=1e-6)


def test_custom_kernel_extrapolates_power_laws():
    levy = LevyDensity(lambda t: 0.5 / math.gamma(0.5) * np.asarray(t, dtype=float) ** -1.5)
    k = JumpKernel(Custom(levy, "frac-copy"), 1)
    for r in (1e-7, 1e7):
        assert float(k(r)) == pytest.approx(1.0 / (math.pi * r * r), rel=1e-4)


@pytest.mark.parametrize("alpha, d, R", [(1.0, 1, 1.0), (0.5, 3, 2.0), (1.5, 2, 0.3)])
def test_tail_and_second_moment_of_fractional_kernel(alpha, d, R):
    k = JumpKernel(FractionalPower(alpha), d)
    c = fractional_kernel_constant(d, alpha)
    area = sphere_area(d)
    assert nu_tail(k, R) == pytest.approx(area * c * R**-alpha / alpha, rel=1e-10)
    assert second_moment_J(k, R) == pytest.approx(area * c * R ** (2 - alpha) / (2 - alpha), rel=1e-10)
    assert moment_J_beta(k, 1.0 + alpha / 2, R) == pytest.approx(area * c * R ** (1 - alpha / 2) / (1 - alpha / 2), rel=1e-9)


def test_lp_tail_norm_of_fractional_kernel():
    k = JumpKernel(FractionalPower(1.0), 1)
    # ||c r^{-2}||_{L^2(|r| > 2)}^2 = 2 c^2 int_2^inf r^{-4} dr = 2 c^2 / 24
    expected = math.sqrt(2.0 / 24.0) / math.pi
    assert lp_tail_norm(k, 2.0, 2.0) == pytest.approx(expected, rel=1e-10)


@pytest.mark.parametrize("omega", [0.5, 1.0])
def test_moment_diverges_below_the_kernel_order(omega):
    with pytest.raises(DivergenceError):
        moment_J_beta(JumpKernel(FractionalPower(1.0), 1), omega, 1.0)


def test_argument_validation():
    k = JumpKernel(FractionalPower(1.0), 1)
    with pytest.raises(KernelError):
        jump_kernel_eval(k, 0.0)
    with pytest.raises(KernelError):
        nu_tail(k, -1.0)
    with pytest.raises(KernelError):
        lp_tail_norm(k, 1.0, 1.0)


@pytest.mark.parametrize("alpha, d", [(1.0, 1), (0.5, 2), (1.5, 3)])
def test_regularly_varying_asymptote_ratios(alpha, d):
    rep = asymptote_validate(JumpKernel(FractionalPower(alpha), d))
    assert rep.limit_ratio_exact == pytest.approx(1.0, rel=1e-12)
    assert rep.limit_ratio_alternate == pytest.approx(2.0, rel=1e-12)


def test_sum_of_powers_ratio_approaches_exact_constant():
    rep = asymptote_validate(JumpKernel(SumOfPowers(0.5, 1.5), 1), radii=[10.0, 100.0, 1000.0])
    errs = [abs(v - 1.0) for v in rep.ratios_exact]
    assert errs == sorted(errs, reverse=True)
    assert errs[-1] < 0.05


def test_exponentially_light_asymptote_ratios():
    rep = asymptote_validate(JumpKernel(Relativistic(1.0, 1.0), 1))
    # next-order Bessel correction (4 nu^2 - 1)/(8 z) = 3/320 at z = 40
    assert rep.limit_ratio_exact == pytest.approx(1.0 + 3.0 / 320.0, rel=2e-4)
    assert rep.limit_ratio_alternate == pytest.approx(2.0 * rep.limit_ratio_exact, rel=1e-12)


def test_light_second_moment_bracket():
    b = light_second_moment_bracket(JumpKernel(Relativistic(1.0, 1.0), 1), M=40.0)
    assert b.holds(b.exact_C)
    assert b.total == pytest.approx(b.head + b.tail)
    with pytest.raises(KernelError):
        light_second_moment_bracket(JumpKernel(FractionalPower(1.0), 1), M=10.0)


@pytest.mark.parametrize("m, alpha, d, r, expected", SIGMA)
def test_sigma_reference(m, alpha, d, r, expected):
    s = SigmaKernel(m, alpha, d)
    assert sigma_eval(s, r) == pytest.approx(expected, rel=1e-10)


@pytest.mark.parametrize("m, alpha, d", [(1.0, 1.0, 1), (2.0, 0.5, 3), (0.7, 1.5, 2)])
@given(r=st.floats(1e-3, 1e3))
def test_sigma_series_route_matches_t_integral(m, alpha, d, r):
    s = SigmaKernel(m, alpha, d)
    assert sigma_eval(s, r) == pytest.approx(s.t_integral_form(r), rel=1e-9)


@pytest.mark.parametrize("m, alpha, d", [(1.0, 1.0, 1), (2.0, 0.5, 3), (0.3, 1.8, 2), (5.0, 1.2, 1)])
def test_sigma_total_mass_is_m(m, alpha, d):
    assert sigma_total_mass(SigmaKernel(m, alpha, d)) == pytest.approx(m, rel=1e-9)


def test_sigma_equals_difference_of_jump_kernels():
    r = np.array([0.3, 1.0, 4.0])
    s = SigmaKernel(1.0, 1.0, 1)
    diff = JumpKernel(FractionalPower(1.0), 1)(r) - JumpKernel(Relativistic(1.0, 1.0), 1)(r)
    np.testing.assert_allclose(s(r), diff, rtol=1e-10)


def test_sigma_is_positive_decreasing_and_has_the_fractional_tail():
    s = SigmaKernel(1.0, 1.0, 1)
    r0 = s.decreasing_radius()
    tail = np.geomspace(r0, 1e3, 100)
    vals = s(tail)
    assert np.all(vals > 0) and np.all(np.diff(vals) < 0)
    assert float(s(1e4)) * 1e8 == pytest.approx(s.asymptotic_constant(), rel=1e-6)
    assert s.doubled_asymptotic_constant() == pytest.approx(2.0 * s.asymptotic_constant())
    # near the origin sigma is bounded by C m^{2/alpha} r^{2-alpha-d}
    assert math.isfinite(s.near_origin_bound_constant(np.geomspace(1e-4, 1.0, 20)))


def test_sigma_mass_report_ratios():
    rep = sigma_mass_report(SigmaKernel(1.0, 1.0, 1), R=100.0)
    assert rep.total_mass == pytest.approx(1.0, rel=1e-10)
    assert rep.tail_ratio_exact == pytest.approx(1.0, rel=1e-3)
    assert rep.lp_ratio_exact == pytest.approx(1.0, rel=1e-3)
    assert rep.tail_ratio_alternate == pytest.approx(0.5, rel=1e-3)
    # the truncated second moment carries a log-sized head correction at R = 100
    assert rep.second_moment_ratio_exact == pytest.approx(1.0, abs=0.02)


@pytest.mark.parametrize("bad", [(0.0, 1.0, 1), (1.0, 2.0, 1), (1.0, 1.0, 0)])
def test_sigma_parameter_validation(bad):
    with pytest.raises(KernelError):
        SigmaKernel(*bad)
