"""Direct summation of the partial theta function

    F_{d,l}(z; tau) = sum_{n >= 0} zeta^(l n + d) q^((l n + d)^2),

its false-theta difference G_{d,l} = F_{d,l} - F_{-d,l}, the two-sided sum
M_{d,l} and the Jacobi theta function.  These sums are the ground truth
for every asymptotic statement elsewhere in the package, so each loop
stops on an explicit tail bound rather than a term count.

Two evaluation paths exist for each function: binary64 (``f_partial`` ...)
and multiprecision (``f_partial_mp`` ...).  The latter sizes its working
precision from the largest term, so that its absolute error is about
10**-digits even when the terms themselves are astronomically large.
"""

from __future__ import annotations

import cmath
import math
import warnings
from fractions import Fraction

import mpmath

from .args import EllipticArg, TauArg, ThetaParams
from .errors import ConvergenceError, DomainError, InexactWarning
from .numerics import DEFAULT_TOL, Tolerance

__all__ = [
    "ThetaParams",
    "EllipticArg",
    "TauArg",
    "f_partial",
    "g_false",
    "m_full",
    "jacobi_theta",
    "jacobi_theta_transformed",
    "jacobi_theta_mp",
    "jacobi_theta_transformed_mp",
    "m_full_poisson",
    "shift_identity_residual",
    "f_partial_mp",
    "g_false_mp",
    "m_full_mp",
    "oracle_dps",
]

_TWO_PI = 2.0 * math.pi
_LN2 = math.log(2.0)
_LN10 = math.log(10.0)
_EXP_MAX = 709.0
DEFAULT_DIGITS = 30


def _coerce(params, z, tau) -> tuple[ThetaParams, EllipticArg, TauArg]:
    if not isinstance(params, ThetaParams):
        params = ThetaParams(*params)
    z = EllipticArg.of(z)
    tau = TauArg.of(tau)
    tau.check_oracle_range()
    return params, z, tau


def _log_mag(m: float, y: float, s: float) -> float:
    # log |zeta^m q^(m^2)| with y = Im z, s = Im tau
    return -_TWO_PI * (y * m + s * m * m)


def _peak_log_mag(m0: Fraction, step: int, y: float, s: float) -> tuple[float, float]:
    """Largest log-magnitude over the progression and the n where it sits."""
    # continuous vertex of -2 pi (y m + s m^2) is at m = -y / (2 s)
    n_star = (-y / (2.0 * s) - float(m0)) / step
    n_star = max(0.0, n_star)
    best = max(_log_mag(float(m0 + step * n), y, s) for n in {0, math.floor(n_star), math.ceil(n_star)})
    return best, n_star


def _progression_sum(
    m0: Fraction, step: int, z: EllipticArg, tau: TauArg, tol: Tolerance
) -> complex:
    """sum_{n >= 0} exp(2 pi i (z m + tau m^2)), m = m0 + step n, in binary64."""
    zc, tc = z.value, tau.value
    y, s = zc.imag, tc.imag
    peak, _ = _peak_log_mag(m0, step, y, s)
    if peak > _EXP_MAX:
        raise OverflowError(
            f"terms reach exp({peak:.4g}); use the multiprecision path for this (z, tau)"
        )
    total = 0j
    n = 0
    while True:
        m = m0 + step * n
        mf = float(m)
        total += cmath.exp(2j * math.pi * (zc * mf + tc * mf * mf))
        # past the peak the Gaussian factor makes term ratios shrink, so once
        # one ratio drops below 1/2 the tail is at most twice the next term
        if step * (y + 2.0 * s * mf) > 0:
            g_cur = _log_mag(mf, y, s)
            g_next = _log_mag(mf + step, y, s)
            if g_next - g_cur < -_LN2:
                tail = 2.0 * math.exp(g_next)
                if tail <= max(tol.abs_tol, tol.rel_tol * abs(total)):
                    return total
        n += 1
        if n > tol.max_terms:
            raise ConvergenceError(
                f"no certified tail after {tol.max_terms} terms (Im z = {y:.3g}, Im tau = {s:.3g})"
            )


def oracle_dps(z: EllipticArg, tau: TauArg, digits: int = DEFAULT_DIGITS, two_sided: bool = False) -> int:
    """Working precision that gives about 10**-digits absolute error.

    The largest term has log-magnitude at most pi Im(z)^2 / (2 Im tau).
    A sum over n >= 0 only reaches it when Im z < 0; a two-sided sum
    reaches it for either sign.  That peak is what the extra digits pay for.
    """
    y = float(z.im)
    s = float(tau.im)
    peak = math.pi * y * y / (2.0 * s) if (y < 0 or two_sided) else 0.0
    count = abs(y) / (2.0 * s) + math.sqrt((digits + 20) * _LN10 / (_TWO_PI * s)) + 2
    return int(digits + peak / _LN10 + math.log10(count) + 15)


def _progression_sum_mp(
    m0: Fraction, step: int, z: EllipticArg, tau: TauArg, digits: int, max_terms: int
) -> mpmath.mpc:
    y, s = float(z.im), float(tau.im)
    target = -digits * _LN10
    zm = z.mp()
    tm = tau.mp()
    two_pi_i = 2j * mpmath.pi
    total = mpmath.mpc(0)
    n = 0
    while True:
        m = m0 + step * n
        mm = mpmath.mpf(m.numerator) / m.denominator
        total += mpmath.exp(two_pi_i * (zm * mm + tm * mm * mm))
        mf = float(m)
        if step * (y + 2.0 * s * mf) > 0:
            g_cur = _log_mag(mf, y, s)
            g_next = _log_mag(mf + step, y, s)
            if g_next - g_cur < -_LN2 and g_next + _LN2 < target:
                return total
        n += 1
        if n > max_terms:
            raise ConvergenceError(f"no certified tail after {max_terms} terms")


def _mp_call(z: EllipticArg, tau: TauArg, digits: int, fn, two_sided: bool = False):
    dps = oracle_dps(z, tau, digits, two_sided)
    with mpmath.workdps(dps):
        return fn()


# --------------------------------------------------------------------------
# binary64 paths


def _warn_cancellation(total: complex, progressions, z: EllipticArg, tau: TauArg) -> complex:
    """Warn when binary64 rounding of the largest term swamps the result."""
    y, s = float(z.im), float(tau.im)
    peak = max(_peak_log_mag(m0, step, y, s)[0] for m0, step in progressions)
    floor = 2.0**-52 * math.exp(peak)
    if floor > 1e-6 * max(1.0, abs(total)):
        warnings.warn(
            f"terms up to exp({peak:.3g}) cancel to |value| = {abs(total):.3g}, below the binary64 "
            "rounding floor of the largest term; use the *_mp functions",
            InexactWarning,
            stacklevel=3,
        )
    return total


def f_partial(params, z, tau, tol: Tolerance = DEFAULT_TOL) -> complex:
    """F_{d,l}(z; tau) by direct summation with a certified tail."""
    params, z, tau = _coerce(params, z, tau)
    total = _progression_sum(params.d, params.ell, z, tau, tol)
    return _warn_cancellation(total, [(params.d, params.ell)], z, tau)


def g_false(params, z, tau, tol: Tolerance = DEFAULT_TOL) -> complex:
    """G_{d,l} = F_{d,l} - F_{-d,l}; identically zero for d = 0."""
    params, z, tau = _coerce(params, z, tau)
    if params.d == 0:
        return 0j
    total = _progression_sum(params.d, params.ell, z, tau, tol) - _progression_sum(
        -params.d, params.ell, z, tau, tol
    )
    return _warn_cancellation(total, [(params.d, params.ell), (-params.d, params.ell)], z, tau)


def m_full(params, z, tau, tol: Tolerance = DEFAULT_TOL) -> complex:
    """Two-sided sum over all n in Z of zeta^(l n + d) q^((l n + d)^2)."""
    params, z, tau = _coerce(params, z, tau)
    d, ell = params.d, params.ell
    total = _progression_sum(d, ell, z, tau, tol) + _progression_sum(d - ell, -ell, z, tau, tol)
    return _warn_cancellation(total, [(d, ell), (d - ell, -ell)], z, tau)


def jacobi_theta(z, tau, tol: Tolerance = DEFAULT_TOL) -> complex:
    """Theta(z; tau) = sum_n (-1)^n zeta^n q^(n^2)."""
    z = EllipticArg.of(z)
    # (-1)^n zeta^n = e^{2 pi i n (z + 1/2)}
    return m_full(ThetaParams(0, 1), z + Fraction(1, 2), tau, tol)


def jacobi_theta_transformed(z, tau, tol: Tolerance = DEFAULT_TOL) -> complex:
    """Right-hand side of the inversion formula for Theta:

        (-2 i tau)^(-1/2) sum_{n odd} exp(-pi i (n + 2z)^2 / (8 tau)).
    """
    zc = EllipticArg.of(z).value
    tc = TauArg.of(tau).value
    sigma = -1j * math.pi / (8.0 * tc)
    # Re(sigma (n + 2z)^2) is a downward parabola in n with this vertex
    n_star = -(2.0 * sigma * zc).real / sigma.real
    start = 2 * math.floor((n_star - 1.0) / 2.0) + 1
    total = 0j
    for direction in (1, -1):
        n = start if direction == 1 else start - 2
        while True:
            expo = sigma * (n + 2.0 * zc) ** 2
            if expo.real > _EXP_MAX:
                raise OverflowError("transformed theta overflows")
            term = cmath.exp(expo)
            total += term
            moving_away = (n - n_star) * direction >= 0
            if moving_away and abs(term) <= max(tol.abs_tol, tol.rel_tol * abs(total)) * 0.25:
                break
            n += 2 * direction
            if abs(n - start) > 2 * tol.max_terms:
                raise ConvergenceError("transformed theta did not converge")
    return cmath.sqrt(-2j * tc) ** -1 * total


def _decompose(z: EllipticArg, ell: int) -> tuple[int, Fraction, Fraction]:
    lz_re = z.re * ell
    j = math.ceil(lz_re - Fraction(1, 2))
    return j, lz_re - j, z.im * ell


def m_full_poisson(params, z, tau, tol: Tolerance = DEFAULT_TOL) -> complex:
    """M_{d,l}(z; i t) from its Poisson-summed form

        (2 l^2 t)^(-1/2) sum_n e^{2 pi i (j - n) d / l} e^{-pi (z0 + n)^2 / (2 l^2 t)},

    where z = (z0 + j)/l.  Only tau = i t is supported.
    """
    params, z, tau = _coerce(params, z, tau)
    if tau.re != 0:
        raise DomainError("the Poisson form is implemented for tau = i t only")
    d, ell = params.d, params.ell
    t = float(tau.im)
    j, x0, y0 = _decompose(z, ell)
    z0 = complex(float(x0), float(y0))
    scale = 2.0 * ell * ell * t
    total = 0j
    for direction in (1, -1):
        n = 0 if direction == 1 else -1
        while True:
            expo = -math.pi * (z0 + n) ** 2 / scale + 2j * math.pi * (j - n) * float(d) / ell
            if expo.real > _EXP_MAX:
                raise OverflowError("Poisson form overflows; use the multiprecision oracle")
            term = cmath.exp(expo)
            total += term
            away = (n + float(x0)) * direction > 0
            if away and abs(term) <= max(tol.abs_tol, tol.rel_tol * abs(total)) * 0.25:
                break
            n += direction
            if abs(n) > tol.max_terms:
                raise ConvergenceError("Poisson form did not converge")
    return total / math.sqrt(scale)


# --------------------------------------------------------------------------
# multiprecision paths


def f_partial_mp(params, z, tau, digits: int = DEFAULT_DIGITS, max_terms: int = 10_000_000) -> mpmath.mpc:
    """F_{d,l}(z; tau) with absolute error about 10**-digits."""
    params, z, tau = _coerce(params, z, tau)
    return _mp_call(
        z, tau, digits, lambda: _progression_sum_mp(params.d, params.ell, z, tau, digits, max_terms)
    )


def g_false_mp(params, z, tau, digits: int = DEFAULT_DIGITS, max_terms: int = 10_000_000) -> mpmath.mpc:
    params, z, tau = _coerce(params, z, tau)
    if params.d == 0:
        return mpmath.mpc(0)

    def run():
        return _progression_sum_mp(params.d, params.ell, z, tau, digits, max_terms) - _progression_sum_mp(
            -params.d, params.ell, z, tau, digits, max_terms
        )

    return _mp_call(z, tau, digits, run)


def m_full_mp(params, z, tau, digits: int = DEFAULT_DIGITS, max_terms: int = 10_000_000) -> mpmath.mpc:
    params, z, tau = _coerce(params, z, tau)
    d, ell = params.d, params.ell

    def run():
        return _progression_sum_mp(d, ell, z, tau, digits, max_terms) + _progression_sum_mp(
            d - ell, -ell, z, tau, digits, max_terms
        )

    return _mp_call(z, tau, digits, run, two_sided=True)


def jacobi_theta_mp(z, tau, digits: int = DEFAULT_DIGITS) -> mpmath.mpc:
    """Theta(z; tau) with absolute error about 10**-digits."""
    z = EllipticArg.of(z)
    return m_full_mp(ThetaParams(0, 1), z + Fraction(1, 2), tau, digits)


def jacobi_theta_transformed_mp(z, tau, digits: int = DEFAULT_DIGITS, max_terms: int = 10_000_000) -> mpmath.mpc:
    """Multiprecision version of ``jacobi_theta_transformed``."""
    z = EllipticArg.of(z)
    tau = TauArg.of(tau)
    zc, tc = z.value, tau.value
    sigma = -1j * math.pi / (8.0 * tc)
    n_star = -(2.0 * sigma * zc).real / sigma.real
    peak = max(0.0, (sigma * (n_star + 2.0 * zc) ** 2).real)
    dps = int(digits + peak / _LN10 + 20)
    with mpmath.workdps(dps):
        zm, tm = z.mp(), tau.mp()
        sig = -1j * mpmath.pi / (8 * tm)
        target = -(digits + 5) * _LN10
        start = 2 * math.floor((n_star - 1.0) / 2.0) + 1
        total = mpmath.mpc(0)
        for direction in (1, -1):
            n = start if direction == 1 else start - 2
            while True:
                expo = sig * (n + 2 * zm) ** 2
                total += mpmath.exp(expo)
                if (n - n_star) * direction >= 0 and float(mpmath.re(expo)) < target:
                    break
                n += 2 * direction
                if abs(n - start) > 2 * max_terms:
                    raise ConvergenceError("transformed theta did not converge")
        return total / mpmath.sqrt(-2j * tm)


# --------------------------------------------------------------------------
# shift identity


def shift_identity_residual(params, m: int, z, tau, K: int) -> complex:
    """F_{d+m l} - F_d + sum_{a <= K} D^{2a}(zeta^d (1 - zeta^{l m})/(1 - zeta^l)) (2 pi i tau)^a / a!.

    The full a-sum makes this vanish identically; truncating at K leaves
    a remainder that shrinks rapidly with K.
    """
    from .deriv_engine import expr_eval, expr_from_terms, expr_apply_Dz

    params, z, tau = _coerce(params, z, tau)
    if not isinstance(m, int) or isinstance(m, bool):
        raise DomainError("m must be an integer")
    if K < 0:
        raise DomainError("K must be nonnegative")
    if m == 0:
        return 0j
    d, ell = params.d, params.ell
    lhs = f_partial(ThetaParams(d + m * ell, ell), z, tau) - f_partial(params, z, tau)
    expr = expr_from_terms(d, ell, {(0, 1): 1, (m, 1): -1})
    x = 2j * math.pi * tau.value
    corr = 0j
    weight = 1.0 + 0j
    for a in range(K + 1):
        if a > 0:
            expr = expr_apply_Dz(expr_apply_Dz(expr))
            weight *= x / a
        corr += expr_eval(expr, z) * weight
    return lhs + corr
