"""Derivative towers D^{2a}(zeta^d / (1 - zeta^l)), D = (1/(2 pi i)) d/dz.

Every function in the D-orbit of zeta^d/(1 - zeta^l) is a finite sum

    sum_{k, m} c_{k,m} zeta^(d + k l) (1 - zeta^l)^(-m)

with Gaussian-rational c_{k,m}.  ``ZetaRationalExpr`` stores exactly that,
so towers of any height are exact until the final evaluation.  Close to a
pole z in (1/l)Z the rational form suffers from cancellation and the
Bernoulli-polynomial Laurent expansion is used instead.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Optional

import mpmath

from .args import EllipticArg, _mpf
from .errors import DomainError, NearPoleWarning, PoleAtLattice
from .numerics import BERNOULLI_MAX, bernoulli_poly, bernoulli_poly_exact

__all__ = [
    "ZetaRationalExpr",
    "LaurentCoeffs",
    "expr_base",
    "expr_from_terms",
    "expr_apply_Dz",
    "expr_add",
    "expr_scale",
    "expr_eval",
    "dz_tower",
    "dz_tower_regularized",
    "dz_limit_lattice",
    "dz_sin_tower",
    "laurent_coeffs",
    "finite_tower",
    "LAURENT_RADIUS",
]

GaussQ = tuple[Fraction, Fraction]

# switch to the Laurent form when |2 pi l w| < LAURENT_RADIUS, w = offset from (1/l)Z
LAURENT_RADIUS = 0.1
_POLE_FLOAT = 1e-8
_NEAR_POLE = 1e-4
_MASS_RATIO = 1e3


def _gq(c) -> GaussQ:
    if isinstance(c, tuple):
        return Fraction(c[0]), Fraction(c[1])
    if isinstance(c, complex):
        return Fraction(c.real), Fraction(c.imag)
    return Fraction(c), Fraction(0)


@dataclass(frozen=True)
class ZetaRationalExpr:
    """sum of c_{k,m} zeta^(d + k l) (1 - zeta^l)^(-m) with exact c."""

    d: Fraction
    ell: int
    coeffs: tuple[tuple[tuple[int, int], GaussQ], ...] = field(default=())

    def as_dict(self) -> dict[tuple[int, int], GaussQ]:
        return dict(self.coeffs)

    @property
    def max_m(self) -> int:
        return max((km[1] for km, _ in self.coeffs), default=0)

    def __len__(self) -> int:
        return len(self.coeffs)


def _normalize(d: Fraction, ell: int, table: Mapping[tuple[int, int], GaussQ]) -> ZetaRationalExpr:
    items = tuple(sorted((km, c) for km, c in table.items() if c[0] != 0 or c[1] != 0))
    return ZetaRationalExpr(Fraction(d), ell, items)


def expr_from_terms(d, ell: int, table: Mapping[tuple[int, int], object]) -> ZetaRationalExpr:
    """Build an expression from {(k, m): coefficient}."""
    if ell < 1:
        raise DomainError("ell must be a positive integer")
    for k, m in table:
        if m < 0:
            raise DomainError("pole orders m must be nonnegative")
    return _normalize(Fraction(d), ell, {km: _gq(c) for km, c in table.items()})


def expr_base(d, ell: int) -> ZetaRationalExpr:
    """zeta^d / (1 - zeta^l)."""
    return expr_from_terms(d, ell, {(0, 1): 1})


def expr_apply_Dz(e: ZetaRationalExpr) -> ZetaRationalExpr:
    """Apply D once.

    D[zeta^a (1 - zeta^l)^(-m)] = a zeta^a (1-zeta^l)^(-m) + m l zeta^(a+l) (1-zeta^l)^(-m-1).
    """
    out: dict[tuple[int, int], GaussQ] = {}

    def bump(key, re, im):
        r0, i0 = out.get(key, (Fraction(0), Fraction(0)))
        out[key] = (r0 + re, i0 + im)

    for (k, m), (re, im) in e.coeffs:
        a = e.d + k * e.ell
        bump((k, m), a * re, a * im)
        if m:
            bump((k + 1, m + 1), m * e.ell * re, m * e.ell * im)
    return _normalize(e.d, e.ell, out)


def expr_add(e1: ZetaRationalExpr, e2: ZetaRationalExpr) -> ZetaRationalExpr:
    if (e1.d, e1.ell) != (e2.d, e2.ell):
        # shift indices so both share a base exponent when d differs by a multiple of l
        diff = (e2.d - e1.d) / e1.ell
        if e1.ell != e2.ell or diff.denominator != 1:
            raise DomainError("expressions live in different (d, ell) families")
        shift = int(diff)
        e2 = ZetaRationalExpr(e1.d, e1.ell, tuple(((k + shift, m), c) for (k, m), c in e2.coeffs))
    out = e1.as_dict()
    for km, (re, im) in e2.coeffs:
        r0, i0 = out.get(km, (Fraction(0), Fraction(0)))
        out[km] = (r0 + re, i0 + im)
    return _normalize(e1.d, e1.ell, out)


def expr_scale(e: ZetaRationalExpr, c) -> ZetaRationalExpr:
    cr, ci = _gq(c)
    out = {km: (re * cr - im * ci, re * ci + im * cr) for km, (re, im) in e.coeffs}
    return _normalize(e.d, e.ell, out)


@lru_cache(maxsize=512)
def _tower_expr(d: Fraction, ell: int, order: int) -> ZetaRationalExpr:
    if order == 0:
        return expr_base(d, ell)
    return expr_apply_Dz(_tower_expr(d, ell, order - 1))


def _pole_check(z: EllipticArg, ell: int, zeta_l_gap: float) -> None:
    if z.exact:
        if z.im == 0 and (z.re * ell).denominator == 1:
            raise PoleAtLattice(f"z = {z} lies in (1/{ell})Z")
    elif zeta_l_gap < _POLE_FLOAT:
        raise PoleAtLattice(f"|1 - zeta^{ell}| = {zeta_l_gap:.3g} at z = {z.value}")


def _eval_mp(e: ZetaRationalExpr, z: EllipticArg) -> mpmath.mpc:
    zm = z.mp()
    two_pi_i = 2j * mpmath.pi
    zeta_l = mpmath.exp(two_pi_i * e.ell * zm)
    u = 1 / (1 - zeta_l)
    base = mpmath.exp(two_pi_i * _mpf(e.d) * zm)
    total = mpmath.mpc(0)
    for (k, m), (re, im) in e.coeffs:
        total += mpmath.mpc(_mpf(re), _mpf(im)) * base * zeta_l**k * u**m
    return total


def expr_eval(e: ZetaRationalExpr, z, dps: Optional[int] = None):
    """Numeric value of ``e`` at z.

    With ``dps`` the value is computed by mpmath at that precision and an
    ``mpc`` is returned.  Otherwise the result is a Python complex; if the
    individual terms are much larger than their sum the evaluation is
    repeated at enough extra precision to absorb the cancellation.
    """
    z = EllipticArg.of(z)
    zc = z.value
    zeta_l = cmath.exp(2j * math.pi * e.ell * zc)
    gap = abs(1 - zeta_l)
    _pole_check(z, e.ell, gap)
    if dps is not None:
        with mpmath.workdps(dps):
            return _eval_mp(e, z)
    if gap < _NEAR_POLE:
        warnings.warn(
            f"|1 - zeta^l| = {gap:.2e}; the Laurent form (dz_tower) is more accurate here",
            NearPoleWarning,
            stacklevel=2,
        )
    u = 1 / (1 - zeta_l)
    base = cmath.exp(2j * math.pi * float(e.d) * zc)
    total = 0j
    mass = 0.0
    for (k, m), (re, im) in e.coeffs:
        term = complex(float(re), float(im)) * base * zeta_l**k * u**m
        total += term
        mass += abs(term)
    if mass > _MASS_RATIO * abs(total) and mass > 0:
        ratio = mass / max(abs(total), 1e-300)
        work = 20 + int(math.log10(ratio)) + 1
        with mpmath.workdps(work):
            total = complex(_eval_mp(e, z))
    return total


# --------------------------------------------------------------------------
# Laurent form near the poles


@dataclass(frozen=True)
class LaurentCoeffs:
    """D^{2a}(zeta^d/(1-zeta^l)) near z = 0 as

        -l^{2a} [ (2a)! x^(-2a-1) + sum_b taylor[b] x^b ],   x = 2 pi i l z,

    where taylor[b] = B_{2a+b+1}(d/l) / (b! (2a+b+1)).
    """

    d: Fraction
    ell: int
    a: int
    pole_coeff: int
    taylor: tuple[Fraction, ...]

    @property
    def order(self) -> int:
        return len(self.taylor) - 1


def laurent_coeffs(d, ell: int, a: int, order: int) -> LaurentCoeffs:
    d = Fraction(d)
    if 2 * a + order + 1 > BERNOULLI_MAX:
        raise DomainError(f"Laurent order {order} at a={a} exceeds the Bernoulli table")
    x = d / ell
    taylor = tuple(
        bernoulli_poly_exact(2 * a + b + 1, x) / (math.factorial(b) * (2 * a + b + 1))
        for b in range(order + 1)
    )
    return LaurentCoeffs(d, ell, a, math.factorial(2 * a), taylor)


def _nearest_lattice(z: complex, ell: int) -> tuple[int, complex]:
    J = round(z.real * ell)
    return J, z - J / ell


def _taylor_part(d: Fraction, ell: int, a: int, x: complex) -> complex:
    """sum_b B_{2a+b+1}(d/l) x^b / (b! (2a+b+1)), summed until negligible."""
    dl = float(d / ell)
    total = 0j
    xb = 1.0 + 0j
    fact = 1.0
    prev = math.inf
    for b in range(0, BERNOULLI_MAX - 2 * a):
        n = 2 * a + b + 1
        term = complex(bernoulli_poly(n, dl)) * xb / (fact * n)
        total += term
        # B_n(1/2) and B_n(0) vanish for odd n, so one small term is not enough
        small = 1e-17 * max(abs(total), 1e-300)
        if b >= 2 and abs(term) < small and prev < small:
            break
        prev = abs(term)
        xb *= x
        fact *= b + 1
    return total


def _taylor_part_mp(d: Fraction, ell: int, a: int, x) -> mpmath.mpc:
    dl = _mpf(d) / ell
    total = mpmath.mpc(0)
    eps = mpmath.mpf(10) ** (-mpmath.mp.dps - 3)
    b = 0
    xb = mpmath.mpc(1)
    prev = mpmath.inf
    while True:
        n = 2 * a + b + 1
        term = mpmath.bernpoly(n, dl) * xb / (mpmath.factorial(b) * n)
        total += term
        small = eps * max(abs(total), eps)
        if b >= 2 and abs(term) < small and prev < small:
            return total
        prev = abs(term)
        xb *= x
        b += 1


def _use_laurent(x: complex, path: str) -> bool:
    if path == "auto":
        return abs(x) < LAURENT_RADIUS
    if path not in ("laurent", "algebra"):
        raise DomainError(f"unknown path {path!r}")
    if path == "laurent" and abs(x) >= 2 * math.pi:
        raise DomainError("the Laurent series only converges for |2 pi l w| < 2 pi")
    return path == "laurent"


def _tower_float(d: Fraction, ell: int, a: int, z: EllipticArg, path: str = "auto") -> complex:
    zc = z.value
    J, w = _nearest_lattice(zc, ell)
    x = 2j * math.pi * ell * w
    if _use_laurent(x, path):
        if z.exact and z.im == 0 and (z.re * ell).denominator == 1:
            raise PoleAtLattice(f"z = {z} lies in (1/{ell})Z")
        if not z.exact and abs(x) < _POLE_FLOAT:
            raise PoleAtLattice(f"z = {zc} is within {abs(w):.2e} of {J}/{ell}")
        phase = cmath.exp(2j * math.pi * float(d) * J / ell)
        core = math.factorial(2 * a) * x ** (-(2 * a + 1)) + _taylor_part(d, ell, a, x)
        return -phase * float(ell) ** (2 * a) * core
    return expr_eval(_tower_expr(d, ell, 2 * a), z)


def _tower_mp(d: Fraction, ell: int, a: int, z: EllipticArg, path: str = "auto") -> mpmath.mpc:
    zc = z.value
    J, _ = _nearest_lattice(zc, ell)
    zm = z.mp()
    w = zm - mpmath.mpf(J) / ell
    x = 2j * mpmath.pi * ell * w
    if _use_laurent(complex(x), path):
        if z.exact and z.im == 0 and (z.re * ell).denominator == 1:
            raise PoleAtLattice(f"z = {z} lies in (1/{ell})Z")
        phase = mpmath.expjpi(2 * _mpf(d) * J / ell)
        core = mpmath.factorial(2 * a) * x ** (-(2 * a + 1)) + _taylor_part_mp(d, ell, a, x)
        return -phase * mpmath.mpf(ell) ** (2 * a) * core
    return _eval_mp(_tower_expr(d, ell, 2 * a), z)


def dz_tower(d, ell: int, a: int, z, dps: Optional[int] = None, path: str = "auto"):
    """D^{2a}(zeta^d / (1 - zeta^l)) at z.

    Uses the exact rational form away from (1/l)Z and the Laurent form
    within |2 pi l w| < 0.1 of a lattice point.  ``path`` forces one of
    the two ("algebra" or "laurent") for cross-checks.
    """
    d = Fraction(d)
    if a < 0:
        raise DomainError("a must be nonnegative")
    z = EllipticArg.of(z)
    if dps is None:
        return _tower_float(d, ell, a, z, path)
    with mpmath.workdps(dps):
        return _tower_mp(d, ell, a, z, path)


def dz_tower_regularized(d, ell: int, a: int, z, dps: Optional[int] = None):
    """dz_tower + (2a)! / (l (2 pi i z)^(2a+1)), which is analytic at z = 0.

    At z = 0 this is the lattice limit; near 0 it is summed from the
    Taylor part directly so that no cancellation occurs.
    """
    d = Fraction(d)
    z = EllipticArg.of(z)
    if z.exact and z.re == 0 and z.im == 0:
        value = dz_limit_lattice(d, ell, a)
        if dps is None:
            return complex(float(value))
        with mpmath.workdps(dps):
            return mpmath.mpc(_mpf(value))
    if dps is None:
        zc = z.value
        x = 2j * math.pi * ell * zc
        if abs(x) < LAURENT_RADIUS:
            return -float(ell) ** (2 * a) * _taylor_part(d, ell, a, x)
        return _tower_float(d, ell, a, z) + math.factorial(2 * a) / (ell * (2j * math.pi * zc) ** (2 * a + 1))
    with mpmath.workdps(dps):
        zm = z.mp()
        x = 2j * mpmath.pi * ell * zm
        if abs(complex(x)) < LAURENT_RADIUS:
            return -mpmath.mpf(ell) ** (2 * a) * _taylor_part_mp(d, ell, a, x)
        pole = mpmath.factorial(2 * a) / (ell * (2j * mpmath.pi * zm) ** (2 * a + 1))
        return _tower_mp(d, ell, a, z) + pole


def dz_limit_lattice(d, ell: int, a: int) -> Fraction:
    """-l^{2a} B_{2a+1}(d/l) / (2a+1): the pole-subtracted value at z = 0."""
    d = Fraction(d)
    return -Fraction(ell) ** (2 * a) * bernoulli_poly_exact(2 * a + 1, d / ell) / (2 * a + 1)


def dz_sin_tower(d, ell: int, a: int, z, dps: Optional[int] = None):
    """D^{2a}(sin(2 pi d z) / (1 - zeta^l)) via sin = (zeta^d - zeta^-d)/(2i)."""
    d = Fraction(d)
    if d == 0:
        return 0j if dps is None else mpmath.mpc(0)
    return (dz_tower(d, ell, a, z, dps) - dz_tower(-d, ell, a, z, dps)) / 2j


def finite_tower(d, ell: int, a: int, m: int, z, dps: Optional[int] = None):
    """D^{2a}(zeta^d (1 - zeta^(l m)) / (1 - zeta^l)) as a finite sum.

    For m > 0 this is sum_{n=0}^{m-1} (d + l n)^{2a} zeta^(d + l n); for m < 0
    it is minus the sum over n = m..-1.  It is entire in z.
    """
    d = Fraction(d)
    z = EllipticArg.of(z)
    if m >= 0:
        ns, sign = range(0, m), 1
    else:
        ns, sign = range(m, 0), -1
    if dps is None:
        zc = z.value
        return sign * sum(
            float(d + ell * n) ** (2 * a) * cmath.exp(2j * math.pi * float(d + ell * n) * zc) for n in ns
        )
    with mpmath.workdps(dps):
        zm = z.mp()
        total = mpmath.mpc(0)
        for n in ns:
            e = _mpf(d + ell * n)
            total += e ** (2 * a) * mpmath.exp(2j * mpmath.pi * e * zm)
        return sign * total
