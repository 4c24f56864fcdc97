"""Scalar special functions: Bernoulli polynomials, complex erf, Gamma at
half integers and the scaled error-function combination

    F(t, w) = (w / sqrt(t)) * exp(w**2 / t) * (1 + erf(w / sqrt(t))).

Everything here works in binary64 complex arithmetic.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .errors import ConvergenceError, DomainError

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "bernoulli_number",
    "bernoulli_poly",
    "bernoulli_poly_exact",
    "erf_cplx",
    "erf_with_error",
    "erfc_asym",
    "gamma_half",
    "f_aux",
    "f_aux_prediction",
    "exp_sq_one_plus_erf",
    "BERNOULLI_MAX",
]

Number = Union[int, float, complex, Fraction]

BERNOULLI_MAX = 64
_EPS = 2.0**-52
_SQRT_PI = math.sqrt(math.pi)
# exp() overflows a little above this
_EXP_MAX = 709.0


@dataclass(frozen=True)
class Tolerance:
    """Stopping rule for adaptive loops."""

    abs_tol: float = 1e-15
    rel_tol: float = 1e-15
    max_terms: int = 10_000_000

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("tolerances must be positive")
        if self.max_terms < 1:
            raise DomainError("max_terms must be a positive integer")


DEFAULT_TOL = Tolerance()


# --------------------------------------------------------------------------
# Bernoulli numbers and polynomials


@lru_cache(maxsize=None)
def _bernoulli_table() -> tuple[Fraction, ...]:
    # Akiyama-Tanigawa gives B_1 = +1/2; flip it to the t/(e^t - 1) convention.
    a = [Fraction(0)] * (BERNOULLI_MAX + 1)
    out = []
    for m in range(BERNOULLI_MAX + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    out[1] = Fraction(-1, 2)
    return tuple(out)


def bernoulli_number(n: int) -> Fraction:
    """B_n with B_1 = -1/2."""
    _check_bernoulli_index(n)
    return _bernoulli_table()[n]


@lru_cache(maxsize=None)
def _bernoulli_coeffs(n: int) -> tuple[Fraction, ...]:
    # coefficients of x^n, x^(n-1), ..., x^0 (Horner order)
    table = _bernoulli_table()
    return tuple(math.comb(n, k) * table[k] for k in range(n + 1))


def _check_bernoulli_index(n: int) -> None:
    if not isinstance(n, int) or n < 0 or n > BERNOULLI_MAX:
        raise DomainError(f"Bernoulli index must be an integer in [0, {BERNOULLI_MAX}], got {n!r}")


def bernoulli_poly_exact(n: int, x: Fraction | int) -> Fraction:
    """B_n(x) for rational x, computed exactly."""
    _check_bernoulli_index(n)
    x = Fraction(x)
    acc = Fraction(0)
    for c in _bernoulli_coeffs(n):
        acc = acc * x + c
    return acc


def bernoulli_poly(n: int, x: Number) -> complex | float | Fraction:
    """Bernoulli polynomial B_n(x), generating function t e^{xt} / (e^t - 1).

    Rational input returns an exact Fraction; anything else is evaluated by
    Horner's rule on the exact coefficients.
    """
    _check_bernoulli_index(n)
    if isinstance(x, (int, Fraction)):
        return bernoulli_poly_exact(n, x)
    acc: complex | float = 0.0
    for c in _bernoulli_coeffs(n):
        acc = acc * x + float(c)
    return acc


# --------------------------------------------------------------------------
# Gamma at half integers


def gamma_half(n: int) -> float:
    """Gamma(n + 1/2) = (2n)! sqrt(pi) / (4^n n!)."""
    if not isinstance(n, int) or n < 0:
        raise DomainError(f"gamma_half needs a nonnegative integer, got {n!r}")
    if n > 170:
        raise OverflowError(f"Gamma({n} + 1/2) overflows binary64")
    ratio = Fraction(math.factorial(2 * n), 4**n * math.factorial(n))
    return float(ratio) * _SQRT_PI


# --------------------------------------------------------------------------
# Error function


def _erf_series(w: complex, tol: Tolerance) -> tuple[complex, float]:
    """Convergent series for erf; returns (value, error estimate).

    Near the real axis the form e^{-w^2} sum w^{2n-1} / Gamma(n + 1/2) is
    used, near the imaginary axis the Maclaurin series; each choice keeps
    the terms from cancelling more than the other would.
    """
    w2 = w * w
    if abs(w.real) >= abs(w.imag):
        term = w / (0.5 * _SQRT_PI)  # w^1 / Gamma(3/2)
        total = term
        mag = abs(term)
        n = 1
        while True:
            term = term * w2 / (n + 0.5)
            total += term
            mag += abs(term)
            n += 1
            if abs(term) <= _EPS * abs(total) and n > abs(w2):
                break
            if n > tol.max_terms:
                raise ConvergenceError(f"erf series did not converge for w={w}")
        pref = cmath.exp(-w2)
        value = pref * total
        err = abs(pref) * (mag * 4 * _EPS + abs(term))
        return value, err

    coef = 2.0 / _SQRT_PI
    power = w  # w^(2n+1)/n!
    total = power
    mag = abs(power)
    n = 0
    while True:
        n += 1
        power = -power * w2 / n
        term = power / (2 * n + 1)
        total += term
        mag += abs(term)
        if abs(term) <= _EPS * abs(total) and n > abs(w2):
            break
        if n > tol.max_terms:
            raise ConvergenceError(f"erf series did not converge for w={w}")
    return coef * total, coef * (mag * 4 * _EPS + abs(term))


def _scaled_erfc_asym(w: complex) -> tuple[complex, float]:
    # e^{w^2} erfc(w) ~ (1/sqrt(pi)) sum (-1)^m (1/2)_m / w^{2m+1}
    inv2 = 1.0 / (w * w)
    term = 1.0 / (w * _SQRT_PI)
    total = term
    m = 0
    while True:
        nxt = -term * (m + 0.5) * inv2
        if abs(nxt) >= abs(term) or abs(nxt) <= _EPS * abs(total):
            break
        total += nxt
        term = nxt
        m += 1
    return total, abs(nxt) + 4 * _EPS * abs(total)


def _scaled_erfc_cf(v: complex, tol: Tolerance) -> tuple[complex, float]:
    # Laplace continued fraction, modified Lentz; needs Re(v) > 0
    tiny = 1e-300
    f = v
    c = v
    d = 0j
    n = 1
    while True:
        a = 0.5 * n
        d = v + a * d
        d = tiny if d == 0 else d
        d = 1.0 / d
        c = v + a / c
        c = tiny if c == 0 else c
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < _EPS:
            break
        n += 1
        if n > min(tol.max_terms, 100_000):
            raise ConvergenceError(f"erfc continued fraction stalled at v={v}")
    value = 1.0 / (_SQRT_PI * f)
    return value, 8 * n * _EPS * abs(value)


# |v|^2 above which the optimally cut asymptotic series is at rounding level
_ASYM_R2 = 38.0


def _scaled_erfc(v: complex, tol: Tolerance) -> tuple[complex, float]:
    """e^{v^2} erfc(v) for Re(v) >= 0, with an error estimate."""
    r2 = abs(v) ** 2
    if r2 >= _ASYM_R2:
        return _scaled_erfc_asym(v)
    if r2 < 4.0 or abs(cmath.phase(v)) > 1.2:
        erf, err = _erf_series(v, tol)
        pref = _safe_exp(v * v)
        return pref * (1.0 - erf), abs(pref) * err
    return _scaled_erfc_cf(v, tol)


def _use_series(w: complex) -> bool:
    # cancellation in the series costs about e^{2 min(x^2, y^2)}
    r2 = abs(w) ** 2
    if r2 >= _ASYM_R2:
        return False
    return r2 < 4.0 or 2.0 * min(w.real**2, w.imag**2) <= 7.0


def _safe_exp(x: complex) -> complex:
    if x.real > _EXP_MAX:
        raise OverflowError(f"exp overflow at {x}")
    return cmath.exp(x)


def erf_with_error(w: Number, tol: Tolerance = DEFAULT_TOL) -> tuple[complex, float]:
    """erf(w) together with an absolute error estimate."""
    w = complex(w)
    if w == 0:
        return 0j, 0.0
    if w.real < 0 or (w.real == 0 and w.imag < 0):
        value, err = erf_with_error(-w, tol)
        return -value, err
    if _use_series(w):
        return _erf_series(w, tol)
    scaled, err = _scaled_erfc(w, tol)
    pref = _safe_exp(-w * w)
    return 1.0 - pref * scaled, abs(pref) * err


def erf_cplx(w: Number, tol: Tolerance = DEFAULT_TOL) -> complex:
    """Complex error function.

    After reflecting to ``Re(w) >= 0`` by oddness: the convergent series
    where its terms do not cancel badly (always for ``|w| < 2``, and near
    the axes), erfc asymptotics cut at the smallest term for large ``|w|``,
    and the Laplace continued fraction for erfc in the band between.
    """
    return erf_with_error(w, tol)[0]


def erfc_asym(w: Number, N: int) -> complex:
    """Truncated asymptotic sum e^{-w^2}/sqrt(pi) * sum_{m<=N} (-1)^m (1/2)_m / w^{2m+1}."""
    w = complex(w)
    if w == 0 or abs(cmath.phase(w)) >= 0.75 * math.pi:
        raise DomainError(f"erfc asymptotics need |Arg(w)| < 3pi/4, got w={w}")
    if N < 0:
        raise DomainError("N must be nonnegative")
    inv2 = 1.0 / (w * w)
    term = 1.0 / w
    total = term
    for m in range(N):
        nxt = -term * (m + 0.5) * inv2
        if abs(nxt) > abs(term):
            raise ConvergenceError(
                f"asymptotic erfc terms grow before m={m + 1} at |w|={abs(w):.3g}"
            )
        total += nxt
        term = nxt
    return _safe_exp(-w * w) * total / _SQRT_PI


# --------------------------------------------------------------------------
# the auxiliary integral F(t, w)


def exp_sq_one_plus_erf(u: Number, tol: Tolerance = DEFAULT_TOL) -> complex:
    """e^{u^2} (1 + erf(u)) without forming huge intermediates."""
    u = complex(u)
    if u.real < 0:
        # 1 + erf(u) = erfc(-u)
        return _scaled_erfc(-u, tol)[0]
    return 2.0 * _safe_exp(u * u) - _scaled_erfc(u, tol)[0]


def f_aux(t: float, w: Number, tol: Tolerance = DEFAULT_TOL) -> complex:
    """F(t, w) = (w/sqrt t) e^{w^2/t} (1 + erf(w/sqrt t))."""
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    u = complex(w) / math.sqrt(t)
    return u * exp_sq_one_plus_erf(u, tol)


def f_aux_prediction(t: float, w: Number) -> tuple[str, complex]:
    """Small-t behaviour of F(t, w) on either side of |Arg w| = pi/4.

    Returns ``("growing", c)`` with ``F - (2w/sqrt t) e^{w^2/t} = c + O(t)``
    or ``("decaying", c)`` with ``F = c + O(t^2)``.
    """
    w = complex(w)
    if w == 0:
        raise DomainError("w must be nonzero")
    if abs(cmath.phase(w)) <= 0.25 * math.pi:
        return "growing", complex(-1.0 / _SQRT_PI)
    return "decaying", -(1.0 - t / (2.0 * w * w)) / _SQRT_PI
