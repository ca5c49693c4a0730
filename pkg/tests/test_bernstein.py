from __future__ import annotations

import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nlpot.bernstein import (
    BernsteinError,
    Custom,
    ExponentiallyLight,
    FractionalPower,
    LevyDensity,
    LogTempered,
    RegularlyVarying,
    Relativistic,
    SumOfPowers,
    Unclassified,
    levy_density,
    mu_small_t_bound_check,
    parse_spec,
    phi_eval,
    tail_constant_ratio,
)

CATALOG = [
    FractionalPower(1.0),
    FractionalPower(0.5),
    Relativistic(1.0, 1.0),
    Relativistic(2.0, 0.5),
    SumOfPowers(0.5, 1.5),
    LogTempered(1.0, 0.5, "+"),
    LogTempered(1.0, 0.5, "-"),
]


@pytest.mark.parametrize(
    "spec, u, expected",
    [
        (FractionalPower(1.0), 4.0, 2.0),
        (FractionalPower(2.0), 3.0, 3.0),
        (Relativistic(1.0, 1.0), 3.0, 1.0),
        (SumOfPowers(1.0, 2.0), 4.0, 6.0),
        (LogTempered(1.0, 0.5, "+"), math.e - 1.0, math.sqrt(math.e - 1.0)),
    ],
)
def test_phi_closed_forms(spec, u, expected):
    assert phi_eval(spec, u) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("spec", [FractionalPower(1.0), FractionalPower(1.5), Relativistic(1.0, 1.0), Relativistic(0.5, 0.8), SumOfPowers(0.5, 1.5)])
@pytest.mark.parametrize("u", [0.01, 1.0, 30.0])
def test_phi_from_levy_density_matches_closed_form(spec, u):
    # second route: Phi(u) = int (1 - e^{-y u}) mu(y) dy by quadrature
    custom = Custom(levy_density(spec), "levy-route")
    assert phi_eval(custom, u) == pytest.approx(phi_eval(spec, u), rel=1e-8)


@pytest.mark.parametrize("spec", CATALOG, ids=lambda s: s.label())
@given(u=st.floats(1e-4, 1e4), ratio=st.floats(1.01, 10.0))
def test_bernstein_functions_increase_and_are_concave(spec, u, ratio):
    lo, mid, hi = phi_eval(spec, np.array([u / ratio, u, u * ratio]))
    assert 0 < lo < mid < hi
    # concavity through the chord slopes on a geometric triple
    assert (mid - lo) / (u - u / ratio) >= (hi - mid) / (u * ratio - u) * (1 - 1e-12)


@pytest.mark.parametrize("spec", CATALOG, ids=lambda s: s.label())
def test_label_round_trips_through_parser(spec):
    assert parse_spec(spec.label()) == spec


@pytest.mark.parametrize("text", ["frac:0", "frac:2.5", "rel:-1,1", "rel:1", "sum:1", "logt:1,0.5,*", "nope:1", "frac:x"])
def test_parse_spec_rejects_bad_input(text):
    with pytest.raises(BernsteinError):
        parse_spec(text)


def test_tail_classes():
    assert isinstance(levy_density(FractionalPower(1.0)).tail_class, RegularlyVarying)
    light = levy_density(Relativistic(2.0, 1.0)).tail_class
    assert isinstance(light, ExponentiallyLight)
    assert light.eta == pytest.approx(4.0)
    assert levy_density(SumOfPowers(0.5, 1.5)).tail_class.alpha == 0.5
    assert isinstance(LevyDensity(lambda t: np.exp(-t) / t**1.5).tail_class, Unclassified)


def test_log_tempered_has_no_density():
    with pytest.raises(BernsteinError):
        levy_density(LogTempered(1.0, 0.5, "+"))


@pytest.mark.parametrize("alpha", [0.3, 1.0, 1.7])
def test_fractional_tail_constant_is_exact(alpha):
    assert tail_constant_ratio(FractionalPower(alpha)) == pytest.approx(1.0, rel=1e-13)


def test_sum_of_powers_tail_ratio_tends_to_one():
    near = tail_constant_ratio(SumOfPowers(0.5, 1.5), t=1e2)
    far = tail_constant_ratio(SumOfPowers(0.5, 1.5), t=1e8)
    assert abs(far - 1) < abs(near - 1)
    assert far == pytest.approx(1.0, abs=1e-3)


def test_tail_ratio_needs_regular_variation():
    with pytest.raises(BernsteinError):
        tail_constant_ratio(Relativistic(1.0, 1.0))


def test_custom_tail_ratio_warns_when_off():
    levy = LevyDensity(lambda t: 3.0 * 0.5 / math.gamma(0.5) * np.asarray(t) ** -1.5, RegularlyVarying(1.0))
    with pytest.warns(RuntimeWarning):
        assert tail_constant_ratio(Custom(levy, "tripled")) == pytest.approx(3.0)


@pytest.mark.parametrize(
    "density",
    [
        lambda t: np.asarray(t, dtype=float) ** -3.0,  # t mu(t) not integrable at 0
        lambda t: np.asarray(t, dtype=float) ** -0.5,  # mu not integrable at infinity
        lambda t: -np.ones_like(np.asarray(t, dtype=float)),  # negative
    ],
)
def test_inadmissible_densities_are_rejected(density):
    with pytest.raises(BernsteinError):
        LevyDensity(density)


def test_small_t_bound_check():
    levy = levy_density(FractionalPower(1.0))
    # mu(t) = c t^{-3/2} <= C t^{-2} holds for every t < 1 once C >= c
    assert mu_small_t_bound_check(levy, 1.0) == pytest.approx(np.geomspace(1e-10, 1.0, 2001)[-2])
    heavy = LevyDensity(lambda t: np.asarray(t, dtype=float) ** -1.9 * 10.0, verify=False)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        t0 = mu_small_t_bound_check(heavy, 1.0)
    # 10 t^{-1.9} <= t^{-2} iff t <= 1e-10
    assert t0 < 1e-9
    with pytest.raises(BernsteinError):
        mu_small_t_bound_check(LevyDensity(lambda t: np.asarray(t, dtype=float) ** -2.5, verify=False), 1.0)


@pytest.mark.parametrize("bad", [lambda: Relativistic(0.0, 1.0), lambda: LogTempered(1.0, 0.5, "x"), lambda: SumOfPowers(0.5, 3.0)])
def test_parameter_validation(bad):
    with pytest.raises(BernsteinError):
        bad()


def test_phi_eval_rejects_nonpositive_argument():
    with pytest.raises(BernsteinError):
        phi_eval(FractionalPower(1.0), 0.0)
