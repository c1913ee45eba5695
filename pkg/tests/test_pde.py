import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sle_spectrum import pde
from sle_spectrum.errors import DomainError
from sle_spectrum.exponents import SleParams, beta_exponent, t_star
from sle_spectrum.loewner import drift_terms

PAIRS = [SleParams(6, 1), SleParams(2, -1), SleParams(8 / 3, 0.5)]


@st.composite
def valid_params(draw):
    k = draw(st.floats(0.5, 12))
    t = draw(st.floats(-1 - 3 * k / 8 + 0.01, t_star(k) - 0.01))
    return SleParams(k, t)


@given(valid_params(), st.floats(-3, 3), st.floats(0.01, 3))
def test_chordal_solution_is_exact(p, x, y):
    assert abs(pde.chordal_operator_residual(p, x, y)) < 1e-8


@pytest.mark.parametrize("p", PAIRS)
def test_chordal_negative_control(p):
    worst = max(
        abs(pde.chordal_operator_residual(p, x, y, beta=beta_exponent(p) + 0.01))
        for x in np.linspace(-1, 1, 5)
        for y in np.linspace(0.1, 1, 5)
    )
    assert worst > 1e-3


def test_chordal_needs_upper_half_plane():
    with pytest.raises(DomainError):
        pde.chordal_operator_residual(PAIRS[0], 0.3, 0.0)


def test_constant_field_gives_potential_term():
    p = SleParams(6, 1.3)
    a = drift_terms(1.2, 0.7)[0]
    val = pde.radial_operator(pde.constant_field(2.0), 1.2, 0.7, p)
    assert val == pytest.approx(1.3 * (a - 1) * 2.0)


def test_field_derivatives_match_finite_differences():
    p = PAIRS[0]
    f = pde.ansatz_field(p, delta=0.5)
    r, th, e = 1.05, 1.1, 1e-5
    F, Fr, Ft, Ftt = f(r, th)
    assert Fr == pytest.approx((f(r + e, th)[0] - f(r - e, th)[0]) / (2 * e), rel=1e-6)
    assert Ft == pytest.approx((f(r, th + e)[0] - f(r, th - e)[0]) / (2 * e), rel=1e-6)
    assert Ftt == pytest.approx((f(r, th + e)[2] - f(r, th - e)[2]) / (2 * e), rel=1e-5)


@pytest.mark.parametrize("p", PAIRS)
def test_ansatz_ratio_vanishes_linearly(p):
    hs = [1e-2, 1e-3, 1e-4, 1e-5]
    samples = pde.ansatz_scaling(p, math.pi / 2, hs)
    assert pde.loglog_slope(hs, [s.ratio for s in samples]) >= 0.9


def test_ansatz_with_wrong_profile_does_not_vanish():
    # a constant boundary factor leaves an order-one remainder
    p = PAIRS[0]
    g = lambda D: (1.0, 0.0, 0.0)
    ratios = [s.ratio for s in pde.ansatz_scaling(p, math.pi / 2, [1e-3, 1e-5], g)]
    assert abs(ratios[-1]) > 0.1
    assert ratios[-1] == pytest.approx(ratios[0], rel=0.05)


def test_ansatz_scaling_argument_check():
    with pytest.raises(DomainError):
        pde.ansatz_scaling(PAIRS[0], 0.0, [1e-3])


@pytest.mark.parametrize("p", PAIRS)
def test_tangency_ratio_is_linear_in_scale(p):
    lams = [1e-2, 1e-3, 1e-4]
    ratios = [s.ratio for s in pde.tangency_samples(p, 0.4, 0.7, lams)]
    assert pde.loglog_slope(lams, ratios) == pytest.approx(1, abs=0.05)


@pytest.mark.parametrize("p", PAIRS)
@pytest.mark.parametrize("delta", [1.0, -1.0, 0.5, -0.5])
def test_log_corrected_ansatz_signs(p, delta):
    check = pde.subsupersolution_sign(p, delta, math.pi / 2)
    assert check.passed
    want = -math.copysign(1, delta)
    assert all(math.copysign(1, s.ratio) == want for s in check.samples if s.location[0] - 1 <= check.h0)


def test_sign_examples_at_fixed_scale():
    p = PAIRS[0]
    assert pde.ansatz_sample(p, math.pi / 2, 1e-4, delta=1).residual < 0
    assert pde.ansatz_sample(p, math.pi / 2, 1e-4, delta=-1).residual > 0


def test_sign_check_arguments():
    with pytest.raises(DomainError):
        pde.subsupersolution_sign(PAIRS[0], 0, 1.0)
    with pytest.raises(DomainError):
        pde.subsupersolution_sign(PAIRS[0], 1, 0.0)


def test_sign_check_reports_failure():
    # constant profile: the log factor no longer dominates the remainder
    g = lambda D: (1.0, 0.0, 0.0)
    checks = [pde.subsupersolution_sign(PAIRS[0], d, math.pi / 2, g=g) for d in (1, -1)]
    assert not all(c.passed for c in checks)


def test_ladder_is_dyadic_and_decreasing():
    assert pde.DYADIC_LADDER[0] == 2**-6
    assert all(b == a / 2 for a, b in zip(pde.DYADIC_LADDER, pde.DYADIC_LADDER[1:]))
