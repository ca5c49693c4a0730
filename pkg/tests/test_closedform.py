from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nlpot import closedform
from nlpot.closedform import ClosedFormError, DecayCase

# mpmath.hyp2f1 at 30 digits: (kappa, alpha, d, degree, |x|, V)
POTENTIAL_REFERENCE = [
    (1.0, 1.0, 1, 0, 0.0, -1.0),
    (1.0, 1.0, 1, 0, 2.0, 0.6),
    (0.75, 1.0, 1, 0, 5.0, 0.42217657875335292),
    (0.6, 0.5, 1, 0, 3.0, -0.021645024902889162),
    (1.25, 1.0, 3, 0, 1.0, -1.0546273970740959),
    (1.5, 0.7, 2, 1, 2.0, -0.72865737598756266),
    (2.5, 1.2, 3, 2, 0.8, -4.4821135644890323),
    (0.3, 1.5, 1, 0, 50.0, 0.0027275224140076629),
]


def _poly(d, degree):
    if degree == 0:
        return closedform.one(d)
    if degree == 1:
        return closedform.coordinate(0, d)
    return closedform.traceless_quadratic(0, 1, d)


def test_field_examples():
    P = closedform.one(1)
    assert closedform.phi_kappa(P, 1.0, 0.0) == 1.0
    assert closedform.phi_kappa(P, 1.0, 1.0) == 0.5
    assert closedform.phi_kappa(P, 1.0, -1.0) == 0.5
    Q = closedform.traceless_quadratic(0, 2, 3)
    assert closedform.phi_kappa(Q, 3.0, np.array([1.0, 5.0, 2.0])) == pytest.approx(2.0 / 31.0**3)


@pytest.mark.parametrize("kappa, alpha, d, degree, r, expected", POTENTIAL_REFERENCE)
def test_potential_reference_values(kappa, alpha, d, degree, r, expected):
    P = _poly(d, degree)
    x = r if d == 1 else np.concatenate(([r], np.zeros(d - 1)))
    assert closedform.V_kappa_alpha(P, kappa, alpha, d, x) == pytest.approx(expected, rel=1e-10, abs=1e-14)


@given(r=st.floats(0.0, 20.0), theta=st.floats(0.0, 2 * math.pi))
def test_potential_is_radial(r, theta):
    P = closedform.coordinate(1, 2)
    a = closedform.V_kappa_alpha(P, 1.4, 0.9, 2, np.array([r, 0.0]))
    b = closedform.V_kappa_alpha(P, 1.4, 0.9, 2, r * np.array([math.cos(theta), math.sin(theta)]))
    assert a == pytest.approx(b, rel=1e-12, abs=1e-14)


@pytest.mark.parametrize("kappa, alpha, d, degree", [(1.0, 1.0, 1, 0), (0.3, 1.5, 1, 0), (1.5, 0.7, 2, 1), (2.5, 1.2, 3, 2)])
def test_value_at_origin(kappa, alpha, d, degree):
    P = _poly(d, degree)
    origin = 0.0 if d == 1 else np.zeros(d)
    assert closedform.V_kappa_alpha(P, kappa, alpha, d, origin) == pytest.approx(
        closedform.V_at_origin(kappa, alpha, d, degree), rel=1e-13
    )


def test_depth_at_origin_grows_with_kappa():
    depths = [abs(closedform.V_at_origin(k, 1.0, 1)) for k in (0.3, 0.5, 0.75, 1.0, 1.5)]
    assert all(a < b for a, b in zip(depths, depths[1:]))


def test_vectorized_evaluation():
    P = closedform.one(1)
    xs = np.array([0.0, 1.0, 2.0])
    vals = closedform.V_kappa_alpha(P, 1.0, 1.0, 1, xs)
    assert vals.shape == (3,)
    # kappa = alpha = d = 1 gives V = (x^2 - 1) / (1 + x^2)
    np.testing.assert_allclose(vals, (xs**2 - 1) / (1 + xs**2), rtol=1e-13, atol=1e-15)


def test_square_integrability_boundary_is_excluded():
    P = closedform.one(1)
    assert not closedform.l2_member(P, 0.25)
    assert closedform.l2_member(P, 0.2500001)
    assert closedform.l2_member(closedform.coordinate(0, 2), 1.01)
    assert not closedform.l2_member(closedform.coordinate(0, 2), 1.0)


@pytest.mark.parametrize(
    "kappa, alpha, d, expected",
    [
        (0.75, 1.0, 1, DecayCase(-0.5, False, "positive")),
        (0.25, 0.5, 1, DecayCase(-1.0, False, "negative")),
        (0.5, 1.0, 1, DecayCase(-1.0, True, "positive")),
        (0.2, 0.5, 1, DecayCase(-0.5, False, "negative")),
        (1.0, 1.0, 3, DecayCase(-2.0, False, "negative")),
        (0.6, 1.0, 3, DecayCase(-1.0, False, "negative")),
        (1.7, 1.0, 3, DecayCase(-0.6, False, "positive")),
    ],
)
def test_decay_table(kappa, alpha, d, expected):
    case = closedform.decay_case(kappa, alpha, d)
    assert case.exponent == pytest.approx(expected.exponent)
    assert case.with_log == expected.with_log
    assert case.sign == expected.sign


@pytest.mark.parametrize("kappa, alpha", [(0.75, 1.0), (0.2, 0.5), (0.6, 0.5), (0.3, 1.5)])
def test_far_field_follows_decay_table(kappa, alpha):
    P = closedform.one(1)
    case = closedform.decay_case(kappa, alpha, 1)
    # the next-order term lies only 0.2 below the leading one for kappa = 0.6, alpha = 0.5
    r = np.array([1e6, 2e6])
    v = closedform.V_kappa_alpha(P, kappa, alpha, 1, r)
    slope = math.log(abs(v[1] / v[0])) / math.log(2.0)
    assert slope == pytest.approx(case.exponent, abs=0.02)
    assert np.all(np.sign(v) == (1 if case.sign == "positive" else -1))


@pytest.mark.parametrize(
    "call",
    [
        lambda: closedform.V_kappa_alpha(closedform.one(1), 1.0, 2.0, 1, 0.0),
        lambda: closedform.V_kappa_alpha(closedform.one(1), 1.0, 1.0, 2, np.zeros(2)),
        lambda: closedform.V_kappa_alpha(closedform.coordinate(0, 1), 0.8, 1.0, 1, 0.0),
        lambda: closedform.decay_case(1.0, 1.0, 1),
        lambda: closedform.predicted_sign(0.0, 1.0, 1),
        lambda: closedform.phi_kappa(closedform.one(1), 0.0, 1.0),
        lambda: closedform.coordinate(2, 2),
        lambda: closedform.traceless_quadratic(0, 0, 3),
        lambda: closedform.traceless_quadratic(0, 1, 1),
    ],
)
def test_inadmissible_parameters(call):
    with pytest.raises(ClosedFormError):
        call()


@pytest.mark.parametrize("kappa, alpha", [(1.0, 1.0), (0.6, 0.5), (1.5, 1.5), (0.8, 0.3)])
def test_eigen_identity_on_the_line(kappa, alpha):
    residual = closedform.verify_eigen_identity(closedform.one(1), kappa, alpha, 1, [0.0, 0.5, 1.0, 2.0, 5.0])
    assert residual < 1e-5


def test_eigen_identity_with_odd_polynomial():
    residual = closedform.verify_eigen_identity(closedform.coordinate(0, 1), 1.5, 1.0, 1, [0.3, 1.0, 4.0])
    assert residual < 1e-6


def test_eigen_identity_radial_in_three_dimensions():
    residual = closedform.verify_eigen_identity(closedform.one(3), 1.25, 1.0, 3, [0.0, 1.0, 3.0])
    assert residual < 1e-2


def test_eigen_identity_non_radial_in_two_dimensions():
    P = closedform.coordinate(0, 2)
    xs = [np.array([0.5, 0.0]), np.array([1.0, 1.0]), np.array([-2.0, 0.5])]
    assert closedform.verify_eigen_identity(P, 1.5, 0.7, 2, xs) < 1e-2


def test_eigen_identity_non_radial_in_three_dimensions():
    P = closedform.traceless_quadratic(0, 1, 3)
    xs = [np.array([0.6, 0.8, 0.0]), np.array([1.0, -0.5, 0.3])]
    assert closedform.verify_eigen_identity(P, 2.5, 1.2, 3, xs) < 1e-2
