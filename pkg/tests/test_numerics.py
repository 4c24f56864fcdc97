from __future__ import annotations

import cmath
import math
from fractions import Fraction as Fr

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from partialtheta.errors import ConvergenceError, DomainError
from partialtheta.numerics import (
    Tolerance,
    bernoulli_number,
    bernoulli_poly,
    bernoulli_poly_exact,
    erf_cplx,
    erf_with_error,
    erfc_asym,
    exp_sq_one_plus_erf,
    f_aux,
    f_aux_prediction,
    gamma_half,
)

SQRT_PI = math.sqrt(math.pi)

small_complex = st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False)


# Bernoulli


def test_bernoulli_small_cases():
    assert bernoulli_poly(0, 0.37) == 1
    assert bernoulli_poly(1, 0.25) == pytest.approx(-0.25)
    assert bernoulli_poly(5, Fr(1, 2)) == 0
    assert bernoulli_poly(5, 0.5) == pytest.approx(0, abs=1e-15)
    assert bernoulli_poly_exact(4, 0) == Fr(-1, 30)


def test_bernoulli_against_generating_function():
    # coefficients of t e^{xt}/(e^t - 1), expanded independently by mpmath
    for n in range(9):
        for x in (Fr(0), Fr(1, 3), Fr(3, 4)):
            with mpmath.workdps(30):
                ref = mpmath.taylor(lambda t: t * mpmath.exp(x.numerator * t / x.denominator) / mpmath.expm1(t)
                                    if t != 0 else 1, 0, n)[n] * mpmath.factorial(n)
            assert float(bernoulli_poly_exact(n, x)) == pytest.approx(float(ref), abs=1e-12)


def test_bernoulli_exact_stays_rational():
    assert isinstance(bernoulli_poly(6, Fr(1, 5)), Fr)
    assert bernoulli_number(12) == Fr(-691, 2730)


def test_bernoulli_index_checks():
    with pytest.raises(DomainError):
        bernoulli_poly(-1, 0.5)


@given(st.integers(min_value=1, max_value=12), st.floats(min_value=-2, max_value=2))
def test_bernoulli_difference_equation(n, x):
    lhs = bernoulli_poly(n, x + 1) - bernoulli_poly(n, x)
    assert lhs == pytest.approx(n * x ** (n - 1), abs=1e-9, rel=1e-12)


# erf


def test_erf_values():
    assert erf_cplx(0) == 0
    assert erf_cplx(1).real == pytest.approx(0.842700792949715, abs=1e-14)
    w = 0.3 + 0.7j
    assert erf_cplx(-w) == pytest.approx(-erf_cplx(w), abs=1e-15)


@pytest.mark.parametrize("w", [0.5 + 0.5j, 2.5 - 1j, -3 + 0.2j, 0.1j, 6 + 6j, -1.5 - 4j])
def test_erf_matches_mpmath(w):
    val, err = erf_with_error(w)
    ref = complex(mpmath.erf(w))
    assert abs(val - ref) <= max(1e-13 * abs(ref), 1e-14)
    assert err >= 0


@given(small_complex)
def test_erf_odd_and_conjugate(w):
    assert erf_cplx(w.conjugate()) == pytest.approx(erf_cplx(w).conjugate(), abs=1e-12)
    assert erf_cplx(-w) == pytest.approx(-erf_cplx(w), abs=1e-12)


def test_erfc_asym():
    assert erfc_asym(5, 0) == pytest.approx(math.exp(-25) / (5 * SQRT_PI), rel=1e-14)
    assert erfc_asym(5, 3) == pytest.approx(1.53745979442803485e-12, rel=1e-6)
    with pytest.raises(DomainError):
        erfc_asym(-5, 0)
    with pytest.raises(ConvergenceError):
        erfc_asym(0.5, 10)


@given(small_complex)
def test_split_sum_identity(w):
    with mpmath.workdps(40):
        wm = mpmath.mpc(w)
        lhs = complex(mpmath.fsum((2 * wm) ** n * mpmath.gamma(mpmath.mpf(n + 1) / 2) / mpmath.factorial(n)
                                  for n in range(201)))
    assert abs(lhs - SQRT_PI * exp_sq_one_plus_erf(w)) < 1e-10 * max(1.0, abs(lhs))


# auxiliary function


def test_f_aux_imaginary_axis():
    # independent mpmath value at w = i, t = 1/100
    assert f_aux(0.01, 1j) == pytest.approx(-0.567053942328875940, abs=1e-12)
    assert abs(f_aux(0.01, 1j) + (1 + 0.01 / 2) / SQRT_PI) < 10 * 0.01**2


def test_f_aux_negative_w_limit():
    for t in (1e-2, 1e-3):
        kind, c = f_aux_prediction(t, -1)
        assert kind == "decaying"
        assert abs(f_aux(t, -1) - c) < 5 * t * t


def test_f_aux_positive_w_limit():
    t = 1e-2
    kind, c = f_aux_prediction(t, 1)
    assert kind == "growing"
    growing = 2 / math.sqrt(t) * math.exp(1 / t)
    assert abs(f_aux(t, 1) - growing - c) < 1e-12 * growing + 5 * t


def _dps(t, w):
    return 40 + int(max(0.0, (w * w).real) / t / math.log(10))


def _f_aux_mp(t, w):
    with mpmath.workdps(_dps(t, w)):
        u = mpmath.mpc(w) / mpmath.sqrt(t)
        return u * mpmath.exp(u * u) * (1 + mpmath.erf(u))


@pytest.mark.parametrize("sign", [1, -1])
def test_f_aux_regimes_near_anti_stokes(sign):
    # rays just outside (decaying) and inside (growing) |Arg w| = pi/4; the
    # growing side leaves binary64 at t = 1e-4, so F is taken from mpmath there
    w = cmath.exp(1j * (math.pi / 4 + sign * 0.1))
    ts = (1e-2, 1e-3, 1e-4)
    resid = []
    for t in ts:
        kind, c = f_aux_prediction(t, w)
        if kind == "growing":
            with mpmath.workdps(_dps(t, w)):
                wm = mpmath.mpc(w)
                lead = 2 * wm / mpmath.sqrt(t) * mpmath.exp(wm * wm / t)
                resid.append(float(abs(_f_aux_mp(t, w) - lead - c)))
        else:
            assert f_aux(t, w) == pytest.approx(complex(_f_aux_mp(t, w)), abs=1e-12)
            resid.append(abs(f_aux(t, w) - c))
    assert kind == ("decaying" if sign > 0 else "growing")
    slope = (math.log(resid[-1]) - math.log(resid[0])) / (math.log(ts[-1]) - math.log(ts[0]))
    expected = 2.0 if sign > 0 else 1.0
    assert abs(slope - expected) < 0.3


def test_f_aux_rejects_bad_t():
    with pytest.raises(DomainError):
        f_aux(0.0, 1)


# Gamma at half integers


def test_gamma_half():
    assert gamma_half(0) == pytest.approx(SQRT_PI)
    assert gamma_half(1) == pytest.approx(SQRT_PI / 2)
    assert gamma_half(5) == pytest.approx(945 * SQRT_PI / 32, rel=1e-15)


def test_tolerance_validation():
    with pytest.raises(DomainError):
        Tolerance(abs_tol=0)
    with pytest.raises(DomainError):
        Tolerance(max_terms=0)
