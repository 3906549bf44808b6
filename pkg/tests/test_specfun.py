import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pssbounds import specfun
from pssbounds.specfun import entropy_kernel, g_ef, hyp2f1_int, hyp2f1_int_exact, log_hyp2f1_int

from oracles import hyp2f1_direct, hyp2f1_series, thermal_entropy_series


def test_geometric_series():
    assert hyp2f1_int(1, 1, 1, 0.36) == pytest.approx(1.5625, rel=1e-15)


def test_terminating_square_binomials():
    assert hyp2f1_int(-2, -2, 1, 0.25) == pytest.approx(2.0625, rel=1e-15)
    for k in range(8):
        x = 0.3
        expected = sum(math.comb(k, j) ** 2 * x**j for j in range(k + 1))
        assert hyp2f1_int(-k, -k, 1, x) == pytest.approx(expected, rel=1e-14)


def test_positive_parameters_match_direct_series():
    assert hyp2f1_int(3, 3, 1, 0.49) == pytest.approx(hyp2f1_direct(3, 3, 1, 0.49), rel=1e-13)


@pytest.mark.parametrize("a,b,c", [(2, 2, 1), (4, 5, 1), (6, 6, 2), (11, 12, 1), (1, 3, 2), (-3, 5, 1)])
@pytest.mark.parametrize("x", [0.0, 0.1, 0.5, 0.9, 0.99])
def test_against_high_precision(a, b, c, x):
    assert hyp2f1_int(a, b, c, x) == pytest.approx(hyp2f1_series(a, b, c, x), rel=1e-12)


def test_large_parameters_use_log_space():
    log_f, sign = log_hyp2f1_int(801, 801, 1, 0.9998)
    assert sign == 1
    import mpmath

    with mpmath.workdps(60):
        ref = float(mpmath.log(mpmath.hyp2f1(801, 801, 1, mpmath.mpf(0.9998))))
    assert log_f == pytest.approx(ref, rel=1e-12)
    assert math.isinf(hyp2f1_int(801, 801, 1, 0.9998))


def test_exact_matches_float():
    x = Fraction(9, 25)
    exact = hyp2f1_int_exact(3, 4, 1, x)
    assert isinstance(exact, Fraction)
    assert float(exact) == pytest.approx(hyp2f1_int(3, 4, 1, 0.36), rel=1e-14)


def test_exact_terminating_is_polynomial():
    assert hyp2f1_int_exact(-2, -2, 1, Fraction(1, 4)) == Fraction(33, 16)


@pytest.mark.parametrize(
    "args",
    [(0.5, 1, 1, 0.2), (1, 1, 0, 0.2), (1, 1, 1, 1.0), (1, 1, 1, -0.1), (1, 1, 2, 0.3)],
)
def test_rejects_unsupported(args):
    with pytest.raises(ValueError):
        hyp2f1_int(*args)


def test_binomials():
    assert specfun.binom(10, 3) == 120.0
    assert specfun.log_binom(50, 25) == pytest.approx(math.log(math.comb(50, 25)), rel=1e-13)


def test_g_ef_values():
    assert g_ef(1.0) == 0.0
    c2, s2 = math.cosh(1) ** 2, math.sinh(1) ** 2
    assert g_ef(math.exp(-2)) == pytest.approx(c2 * math.log(c2) - s2 * math.log(s2), rel=1e-13)
    assert g_ef(0.5) == pytest.approx(g_ef(2.0), rel=1e-15)


def test_g_ef_rejects_nonpositive():
    with pytest.raises(ValueError):
        g_ef(0.0)


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=1e-8, max_value=0.999))
def test_g_ef_monotone_and_symmetric(x):
    assert g_ef(x) > g_ef(min(1.0, x * 1.001)) or x * 1.001 >= 1.0
    assert g_ef(x) == pytest.approx(g_ef(1 / x), rel=1e-9)


def test_g_ef_log_divergence():
    # g(x) ~ -ln x + 1 - 2 ln 2 as x -> 0
    x = 1e-10
    assert g_ef(x) == pytest.approx(-math.log(x) + 1 - 2 * math.log(2), rel=1e-8)


def test_entropy_kernel_values():
    assert entropy_kernel(1.0) == 0.0
    assert entropy_kernel(3.0) == pytest.approx(2 * math.log(2), rel=1e-15)
    lam = math.tanh(1.0)
    assert entropy_kernel(math.cosh(2.0)) == pytest.approx(thermal_entropy_series(lam), rel=1e-12)
    assert entropy_kernel(math.cosh(2.0)) == pytest.approx(1.6198220928977, rel=1e-12)


def test_entropy_kernel_rejects_unphysical():
    with pytest.raises(ValueError):
        entropy_kernel(0.9)


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=0.01, max_value=5.0))
def test_twin_beam_entropy_identity(r):
    # symplectic eigenvalue cosh 2r of one arm and g of the EPR variance e^(-2r) agree
    assert entropy_kernel(math.cosh(2 * r)) == pytest.approx(g_ef(math.exp(-2 * r)), rel=1e-9, abs=1e-12)


def test_entropy_kernel_vectorizes_consistently():
    values = [entropy_kernel(v) for v in np.linspace(1.0, 50.0, 7)]
    assert all(b > a for a, b in zip(values, values[1:]))
