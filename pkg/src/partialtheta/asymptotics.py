"""Small-t asymptotics of F_{d,l}(z; it) and G_{d,l}(z; it).

The shape of the expansion depends on where z sits.  Write
l z = z0 + j with j an integer and z0 = x0 + i y0, -1/2 < x0 <= 1/2.
Above the real axis, and below it when |x0| > |y0|, the expansion is a
pure power series in t.  Below the axis with |x0| <= |y0| a finite number
of exponentially large Gaussian terms join the power series; on the
lattice (1/l)Z a t^(-1/2) term appears and the power coefficients become
Bernoulli values.

An expansion is a list of ``ExpTerm``s, each coeff * t^t_pow * e^(rate/t).
Terms also carry a closure that recomputes (coeff, rate) in mpmath, so a
residual against the multiprecision oracle can be formed even when the
terms are of size e^250.
"""

from __future__ import annotations

import cmath
import enum
import json
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import mpmath

from .args import EllipticArg, ThetaParams, _mpf
from .deriv_engine import dz_limit_lattice, dz_tower, dz_tower_regularized
from .errors import (
    AmbiguousClassification,
    DomainError,
    InexactWarning,
    IntegerInput,
    OutsideDisk,
    ZeroLeadingTerm,
)
from .numerics import bernoulli_poly_exact, exp_sq_one_plus_erf

__all__ = [
    "RegionTag",
    "EllipticPoint",
    "RegionTagG",
    "ExpTerm",
    "AsymptoticExpansion",
    "ErfExpansion",
    "decompose_z",
    "classify_F",
    "classify_G",
    "expand_F",
    "expand_G",
    "leading_F",
    "leading_G",
    "expand_F_erf",
    "rational_cover",
    "eval_expansion",
    "eval_expansion_mp",
    "expansion_to_json",
    "expansion_from_json",
    "BOUNDARY_TOL",
]

BOUNDARY_TOL = 1e-12
_NEGLIGIBLE_RATE = -1e3
_HALF = Fraction(1, 2)


class RegionTag(str, enum.Enum):
    UPPER = "UPPER"
    LOWER_OUT = "LOWER_OUT"
    LOWER_IN = "LOWER_IN"
    LOWER_IN_HALF = "LOWER_IN_HALF"
    REAL_NONLATTICE = "REAL_NONLATTICE"
    REAL_LATTICE = "REAL_LATTICE"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class EllipticPoint:
    """z = (x0 + i y0 + j) / ell with -1/2 < x0 <= 1/2."""

    j: int
    x0: Fraction
    y0: Fraction
    ell: int
    exact: bool

    @property
    def z0(self) -> complex:
        return complex(float(self.x0), float(self.y0))

    def z0_mp(self) -> mpmath.mpc:
        return mpmath.mpc(_mpf(self.x0), _mpf(self.y0))

    def reconstruct(self) -> EllipticArg:
        return EllipticArg((self.x0 + self.j) / self.ell, self.y0 / self.ell)


@dataclass(frozen=True)
class RegionTagG:
    """The F tag plus the divisibility data that splits the G cases.

    ``None`` means the question could not be decided for this input.
    """

    base: RegionTag
    div2d: bool
    div2dj: bool
    int2dz: Optional[bool]

    def __str__(self) -> str:
        flags = [f"div2d={self.div2d}", f"div2dj={self.div2dj}"]
        if self.int2dz is not None:
            flags.append(f"int2dz={self.int2dz}")
        return f"{self.base} " + " ".join(flags)


HPFunc = Callable[[], tuple]


@dataclass(frozen=True)
class ExpTerm:
    """coeff * t^t_pow * exp(rate / t).

    ``hp`` (when present) returns (coeff, rate) as mpmath numbers at the
    ambient precision; it is ignored by equality and serialization.
    """

    coeff: complex
    t_pow: Fraction
    rate: complex = 0j
    hp: Optional[HPFunc] = field(default=None, compare=False, repr=False)

    def value(self, t: float) -> complex:
        expo = self.rate / t
        if expo.real > 709.0:
            raise OverflowError(
                f"e^(rate/t) overflows binary64 at t={t:.3g} (Re rate = {self.rate.real:.4g}); "
                "use eval_expansion_mp"
            )
        return self.coeff * t ** float(self.t_pow) * cmath.exp(expo)

    def mp_parts(self) -> tuple:
        if self.hp is not None:
            return self.hp()
        return mpmath.mpc(self.coeff), mpmath.mpc(self.rate)

    def scaled(self, factor: complex, hp_factor: Optional[Callable[[], object]] = None) -> ExpTerm:
        hp = None
        if self.hp is not None:
            inner = self.hp
            hp_factor = hp_factor or (lambda: mpmath.mpc(factor))

            def hp():
                c, r = inner()
                return c * hp_factor(), r

        return ExpTerm(self.coeff * factor, self.t_pow, self.rate, hp)


def _sort_key(term: ExpTerm):
    return (-term.rate.real, term.t_pow, -term.rate.imag)


def _merge(terms: Sequence[ExpTerm]) -> tuple[ExpTerm, ...]:
    """Combine equal (t_pow, rate) keys and drop negligible exponentials."""
    table: dict[tuple, ExpTerm] = {}
    for term in terms:
        if term.rate.real < _NEGLIGIBLE_RATE:
            continue
        key = (term.t_pow, term.rate)
        if key in table:
            prev = table[key]
            hp = None
            if prev.hp is not None and term.hp is not None:
                h1, h2 = prev.hp, term.hp

                def hp(h1=h1, h2=h2):
                    c1, r1 = h1()
                    c2, _ = h2()
                    return c1 + c2, r1

            table[key] = ExpTerm(prev.coeff + term.coeff, term.t_pow, term.rate, hp)
        else:
            table[key] = term
    return tuple(sorted(table.values(), key=_sort_key))


@dataclass(frozen=True)
class AsymptoticExpansion:
    """sum of ExpTerms with remainder O(t^(order + 1)).

    Leading-term results use the same type with ``case`` naming the
    clause that fired.
    """

    terms: tuple[ExpTerm, ...]
    order: int
    region: str = ""
    case: str = ""

    @classmethod
    def build(cls, terms: Sequence[ExpTerm], order: int, region: str = "", case: str = "") -> AsymptoticExpansion:
        return cls(_merge(terms), order, str(region), case)

    def __len__(self) -> int:
        return len(self.terms)

    def dominant(self) -> ExpTerm:
        """The term of largest size as t -> 0 (largest Re(rate), then smallest t_pow)."""
        live = [tm for tm in self.terms if tm.coeff != 0]
        if not live:
            raise ZeroLeadingTerm("expansion has no nonzero term")
        return min(live, key=lambda tm: (-tm.rate.real, tm.t_pow))


@dataclass(frozen=True)
class ErfExpansion:
    """erf_coeff t^(-1/2) e^(u^2)(1 + erf(u)) + sum_a power[a] (-2 pi t)^a / a!,
    where u = erf_arg_scale / sqrt(t)."""

    erf_coeff: complex
    erf_arg_scale: complex
    power_terms: tuple[tuple[int, complex], ...]
    order: int
    hp: Optional[Callable[[], tuple]] = field(default=None, compare=False, repr=False)


# --------------------------------------------------------------------------
# classification


def decompose_z(z, ell: int) -> EllipticPoint:
    """j = ceil(Re(l z) - 1/2), x0 = Re(l z) - j, y0 = Im(l z)."""
    z = EllipticArg.of(z)
    if ell < 1:
        raise DomainError("ell must be a positive integer")
    lre = z.re * ell
    j = math.ceil(lre - _HALF)
    return EllipticPoint(j, lre - j, z.im * ell, ell, z.exact)


def _near(a: Fraction, b: Fraction) -> bool:
    return abs(float(a - b)) < BOUNDARY_TOL


def _classify_point(z: EllipticArg, ell: int) -> tuple[RegionTag, EllipticPoint]:
    pt = decompose_z(z, ell)
    x0, y0 = pt.x0, pt.y0
    if z.source == "decimal":
        # decimals are exact on a boundary but a near miss is most likely a
        # rounded boundary value
        checks = [(z.im, Fraction(0), "the real axis"), (x0, Fraction(0), "the lattice")]
        if z.im < 0:
            checks += [(abs(x0), abs(y0), "|x0| = |y0|"), (x0, _HALF, "x0 = 1/2"), (x0, -_HALF, "x0 = -1/2")]
        for a, b, what in checks:
            if a != b and _near(a, b):
                raise AmbiguousClassification(f"decimal z = {z.value} lies within {BOUNDARY_TOL} of {what}")
    if not z.exact:
        if z.im != 0 and abs(float(z.im)) < BOUNDARY_TOL:
            raise AmbiguousClassification(f"Im z = {float(z.im):.3g} is within {BOUNDARY_TOL} of the real axis")
        if z.im < 0:
            if _near(abs(x0), abs(y0)):
                raise AmbiguousClassification(
                    f"|x0| = {float(abs(x0)):.15g} and |y0| = {float(abs(y0)):.15g} are within {BOUNDARY_TOL}"
                )
            if _near(x0, _HALF) or _near(x0, -_HALF):
                raise AmbiguousClassification(f"x0 = {float(x0):.15g} is within {BOUNDARY_TOL} of 1/2")
        if z.im == 0:
            if abs(float(x0)) < BOUNDARY_TOL:
                warnings.warn(
                    f"float z = {z.value} treated as the lattice point {pt.j}/{ell}", InexactWarning, stacklevel=3
                )
                return RegionTag.REAL_LATTICE, EllipticPoint(pt.j, Fraction(0), Fraction(0), ell, False)
            return RegionTag.REAL_NONLATTICE, pt
    if z.im > 0:
        return RegionTag.UPPER, pt
    if z.im == 0:
        return (RegionTag.REAL_LATTICE if x0 == 0 else RegionTag.REAL_NONLATTICE), pt
    if abs(x0) > abs(y0):
        return RegionTag.LOWER_OUT, pt
    if x0 == _HALF:
        return RegionTag.LOWER_IN_HALF, pt
    return RegionTag.LOWER_IN, pt


def classify_F(z, ell: int) -> RegionTag:
    """Region of z for the F expansions (exactly one tag per point)."""
    return _classify_point(EllipticArg.of(z), ell)[0]


def _int(x: Fraction) -> bool:
    return x.denominator == 1


def classify_G(params, z) -> RegionTagG:
    if not isinstance(params, ThetaParams):
        params = ThetaParams(*params)
    z = EllipticArg.of(z)
    tag, pt = _classify_point(z, params.ell)
    d, ell = params.d, params.ell
    int2dz = None
    if tag is RegionTag.REAL_LATTICE:
        # ell z = j on the lattice, so 2 d z = 2 d j / ell
        int2dz = _int(2 * d * pt.j / ell)
    elif tag is RegionTag.REAL_NONLATTICE and z.rational:
        int2dz = _int(2 * d * z.re)
    return RegionTagG(tag, _int(2 * d / ell), _int(2 * d * pt.j / ell), int2dz)


def _n_range(pt: EllipticPoint) -> range:
    """All n with |n + x0| <= |y0|."""
    r = abs(pt.y0)
    lo = math.ceil(-r - pt.x0)
    hi = math.floor(r - pt.x0)
    if not pt.exact:
        # float inputs: admit boundary members within tolerance
        if abs(float(-r - pt.x0 - (lo - 1))) < BOUNDARY_TOL:
            lo -= 1
        if abs(float(r - pt.x0 - (hi + 1))) < BOUNDARY_TOL:
            hi += 1
    return range(lo, hi + 1)


# --------------------------------------------------------------------------
# term builders


def _power_term(d: Fraction, ell: int, a: int, z: EllipticArg) -> ExpTerm:
    w = (-2.0 * math.pi) ** a / math.factorial(a)
    coeff = dz_tower(d, ell, a, z) * w

    def hp():
        return dz_tower(d, ell, a, z, mpmath.mp.dps) * (-2 * mpmath.pi) ** a / mpmath.factorial(a), mpmath.mpc(0)

    return ExpTerm(coeff, Fraction(a), 0j, hp)


def _power_term_G(d: Fraction, ell: int, a: int, z: EllipticArg) -> ExpTerm:
    # 2i D^{2a}(sin(2 pi d z)/(1 - zeta^l)) = D^{2a} of the tower difference
    w = (-2.0 * math.pi) ** a / math.factorial(a)
    coeff = (dz_tower(d, ell, a, z) - dz_tower(-d, ell, a, z)) * w

    def hp():
        dps = mpmath.mp.dps
        diff = dz_tower(d, ell, a, z, dps) - dz_tower(-d, ell, a, z, dps)
        return diff * (-2 * mpmath.pi) ** a / mpmath.factorial(a), mpmath.mpc(0)

    return ExpTerm(coeff, Fraction(a), 0j, hp)


def _gauss_rate(pt: EllipticPoint, n: int, variant: str = "l2t") -> complex:
    ell = pt.ell
    z0 = pt.z0
    if variant == "l2t":
        return -math.pi * (z0 + n) ** 2 / (2 * ell * ell)
    return -math.pi * (z0 * z0 + n * n) / (2 * ell * ell) - math.pi * z0 * n / ell


def _gauss_rate_mp(pt: EllipticPoint, n: int, variant: str = "l2t"):
    ell = pt.ell
    z0 = pt.z0_mp()
    if variant == "l2t":
        return -mpmath.pi * (z0 + n) ** 2 / (2 * ell * ell)
    return -mpmath.pi * (z0 * z0 + n * n) / (2 * ell * ell) - mpmath.pi * z0 * n / ell


def _gauss_term_F(d: Fraction, pt: EllipticPoint, n: int) -> ExpTerm:
    ell = pt.ell
    phase = Fraction(2 * (pt.j - n)) * d / ell  # e^{pi i phase}
    coeff = (2 * ell * ell) ** -0.5 * cmath.exp(1j * math.pi * float(phase))

    def hp():
        return mpmath.expjpi(_mpf(phase)) / mpmath.sqrt(2 * ell * ell), _gauss_rate_mp(pt, n)

    return ExpTerm(coeff, Fraction(-1, 2), _gauss_rate(pt, n), hp)


def _gauss_term_G(d: Fraction, pt: EllipticPoint, n: int, variant: str = "l2t") -> Optional[ExpTerm]:
    ell = pt.ell
    arg = Fraction(2 * (pt.j - n)) * d / ell  # sin(pi arg)
    if _int(arg):
        return None
    coeff = 2j * (2 * ell * ell) ** -0.5 * math.sin(math.pi * float(arg))

    def hp():
        return 2j * mpmath.sinpi(_mpf(arg)) / mpmath.sqrt(2 * ell * ell), _gauss_rate_mp(pt, n, variant)

    return ExpTerm(coeff, Fraction(-1, 2), _gauss_rate(pt, n, variant), hp)


def _lattice_phase(d: Fraction, pt: EllipticPoint) -> Fraction:
    # zeta^d at z = j/l is e^{pi i * (2 d j / l)}
    return 2 * d * pt.j / pt.ell


def _expi(phase: Fraction) -> complex:
    return cmath.exp(1j * math.pi * float(phase))


def _lattice_terms_F(d: Fraction, pt: EllipticPoint, N: int) -> list[ExpTerm]:
    ell = pt.ell
    ph = _lattice_phase(d, pt)
    zd = _expi(ph)
    terms = [
        ExpTerm(
            0.5 * (2 * ell * ell) ** -0.5 * zd,
            Fraction(-1, 2),
            0j,
            lambda: (mpmath.expjpi(_mpf(ph)) / (2 * mpmath.sqrt(2 * ell * ell)), mpmath.mpc(0)),
        )
    ]
    for a in range(N + 1):
        bern = bernoulli_poly_exact(2 * a + 1, d / ell)
        exact = -bern * Fraction(-2 * ell * ell) ** a / ((2 * a + 1) * math.factorial(a))
        w = float(exact) * math.pi**a

        def hp(exact=exact, a=a):
            return mpmath.expjpi(_mpf(ph)) * _mpf(exact) * mpmath.pi**a, mpmath.mpc(0)

        terms.append(ExpTerm(zd * w, Fraction(a), 0j, hp))
    return terms


def _lattice_terms_G(d: Fraction, pt: EllipticPoint, N: int) -> list[ExpTerm]:
    ell = pt.ell
    ph = _lattice_phase(d, pt)
    terms = []
    if not _int(ph):
        terms.append(
            ExpTerm(
                1j * math.sin(math.pi * float(ph)) / (ell * math.sqrt(2.0)),
                Fraction(-1, 2),
                0j,
                lambda: (1j * mpmath.sinpi(_mpf(ph)) / (ell * mpmath.sqrt(2)), mpmath.mpc(0)),
            )
        )
    for a in range(N + 1):
        bp = bernoulli_poly_exact(2 * a + 1, d / ell)
        bm = bernoulli_poly_exact(2 * a + 1, -d / ell)
        scale = -Fraction(-2 * ell * ell) ** a / (math.factorial(a) * (2 * a + 1))
        cp, cm = bp * scale, bm * scale
        coeff = (_expi(ph) * float(cp) - _expi(-ph) * float(cm)) * math.pi**a

        def hp(cp=cp, cm=cm, a=a):
            v = mpmath.expjpi(_mpf(ph)) * _mpf(cp) - mpmath.expjpi(-_mpf(ph)) * _mpf(cm)
            return v * mpmath.pi**a, mpmath.mpc(0)

        terms.append(ExpTerm(coeff, Fraction(a), 0j, hp))
    return terms


def _prepare(params, z) -> tuple[ThetaParams, EllipticArg, RegionTag, EllipticPoint]:
    if not isinstance(params, ThetaParams):
        params = ThetaParams(*params)
    z = EllipticArg.of(z)
    tag, pt = _classify_point(z, params.ell)
    return params, z, tag, pt


def _check_N(N: int) -> None:
    if isinstance(N, bool) or not isinstance(N, int) or N < 0:
        raise DomainError(f"N must be a nonnegative integer, got {N!r}")


# --------------------------------------------------------------------------
# expansions


def expand_F(params, z, N: int) -> AsymptoticExpansion:
    """Expansion of F_{d,l}(z; it) to O(t^(N+1))."""
    _check_N(N)
    params, z, tag, pt = _prepare(params, z)
    d, ell = params.d, params.ell
    if tag is RegionTag.REAL_LATTICE:
        return AsymptoticExpansion.build(_lattice_terms_F(d, pt, N), N, tag)
    terms = [_power_term(d, ell, a, z) for a in range(N + 1)]
    if tag in (RegionTag.LOWER_IN, RegionTag.LOWER_IN_HALF):
        terms += [_gauss_term_F(d, pt, n) for n in _n_range(pt)]
    return AsymptoticExpansion.build(terms, N, tag)


def expand_G(params, z, N: int, variant: str = "l2t") -> AsymptoticExpansion:
    """Expansion of G_{d,l}(z; it) to O(t^(N+1)).

    ``variant="lt"`` replaces the Gaussian exponent -pi z0 n/(l^2 t) by
    -pi z0 n/(l t); it exists only so the two readings can be compared
    against the oracle, and is wrong for l > 1.
    """
    _check_N(N)
    if variant not in ("l2t", "lt"):
        raise DomainError(f"unknown exponent variant {variant!r}")
    params, z, tag, pt = _prepare(params, z)
    d, ell = params.d, params.ell
    if d == 0:
        return AsymptoticExpansion((), N, str(tag))
    if tag is RegionTag.REAL_LATTICE:
        return AsymptoticExpansion.build(_lattice_terms_G(d, pt, N), N, tag)
    terms = [_power_term_G(d, ell, a, z) for a in range(N + 1)]
    if tag in (RegionTag.LOWER_IN, RegionTag.LOWER_IN_HALF):
        for n in _n_range(pt):
            term = _gauss_term_G(d, pt, n, variant)
            if term is not None:
                terms.append(term)
    return AsymptoticExpansion.build(terms, N, tag)


def leading_F(params, z) -> AsymptoticExpansion:
    """The dominant behaviour of F_{d,l}(z; it) as t -> 0.

    Returned as a one- or two-term expansion; ``case`` is the roman
    numeral of the clause.  On x0 = 1/2 the two terms are the conjugate
    oscillating pair whose sum is the cosine form.
    """
    params, z, tag, pt = _prepare(params, z)
    d, ell = params.d, params.ell
    if tag is RegionTag.REAL_LATTICE:
        ph = _lattice_phase(d, pt)
        term = ExpTerm(
            _expi(ph) / (2 * ell * math.sqrt(2.0)),
            Fraction(-1, 2),
            0j,
            lambda: (mpmath.expjpi(_mpf(ph)) / (2 * ell * mpmath.sqrt(2)), mpmath.mpc(0)),
        )
        return AsymptoticExpansion.build([term], 0, tag, "iv")
    if tag is RegionTag.LOWER_IN:
        return AsymptoticExpansion.build([_gauss_term_F(d, pt, 0)], 0, tag, "ii")
    if tag is RegionTag.LOWER_IN_HALF:
        return AsymptoticExpansion.build([_gauss_term_F(d, pt, 0), _gauss_term_F(d, pt, -1)], 0, tag, "iii")
    return AsymptoticExpansion.build([_power_term(d, ell, 0, z)], 0, tag, "i")


def leading_G(params, z) -> AsymptoticExpansion:
    """The dominant behaviour of G_{d,l}(z; it) as t -> 0, by clause (i)-(vii)."""
    if not isinstance(params, ThetaParams):
        params = ThetaParams(*params)
    z = EllipticArg.of(z)
    d, ell = params.d, params.ell
    if d == 0:
        raise ZeroLeadingTerm("G_{0,l} vanishes identically")
    gtag = classify_G(params, z)
    tag = gtag.base
    _, pt = _classify_point(z, ell)

    def power() -> list[ExpTerm]:
        return [_power_term_G(d, ell, 0, z)]

    if tag in (RegionTag.UPPER, RegionTag.LOWER_OUT):
        return AsymptoticExpansion.build(power(), 0, gtag, "i")

    if tag in (RegionTag.REAL_NONLATTICE, RegionTag.REAL_LATTICE):
        if gtag.int2dz is None:
            if z.source == "decimal":
                raise DomainError(
                    "whether 2dz is an integer is a divisibility question; give z as an exact fraction p/q"
                )
            warnings.warn("float real z: assuming 2dz is not an integer", InexactWarning, stacklevel=2)
        if tag is RegionTag.REAL_NONLATTICE:
            if not gtag.int2dz:
                return AsymptoticExpansion.build(power(), 0, gtag, "i")
            sign = -1 if _int(d * z.re) else 1  # (-1)^(2dz+1)
            zc = z.value
            zl = cmath.exp(2j * math.pi * ell * zc)
            coeff = sign * 8 * math.pi * ell * float(d) * zl / (1 - zl) ** 2

            def hp():
                zl_mp = mpmath.exp(2j * mpmath.pi * ell * z.mp())
                return sign * 8 * mpmath.pi * ell * _mpf(d) * zl_mp / (1 - zl_mp) ** 2, mpmath.mpc(0)

            return AsymptoticExpansion.build([ExpTerm(coeff, Fraction(1), 0j, hp)], 0, gtag, "vii")
        ph = _lattice_phase(d, pt)
        if gtag.int2dz:
            value = (-1 if _int(ph / 2) else 1) * 2 * d / ell  # (-1)^(2dz+1) 2d/l
            term = ExpTerm(complex(float(value)), Fraction(0), 0j, lambda: (mpmath.mpc(_mpf(value)), mpmath.mpc(0)))
            return AsymptoticExpansion.build([term], 0, gtag, "vi")
        term = ExpTerm(
            1j * math.sin(math.pi * float(ph)) / (ell * math.sqrt(2.0)),
            Fraction(-1, 2),
            0j,
            lambda: (1j * mpmath.sinpi(_mpf(ph)) / (ell * mpmath.sqrt(2)), mpmath.mpc(0)),
        )
        return AsymptoticExpansion.build([term], 0, gtag, "v")

    if tag is RegionTag.LOWER_IN_HALF:
        terms = [tm for tm in (_gauss_term_G(d, pt, 0), _gauss_term_G(d, pt, -1)) if tm is not None]
        if not terms:
            # every Gaussian term carries sin(2 pi d (j-n)/l) = 0 when l | 2d
            return AsymptoticExpansion.build(power(), 0, gtag, "i")
        return AsymptoticExpansion.build(terms, 0, gtag, "iv")

    # LOWER_IN, x0 != 1/2
    if not gtag.div2dj:
        return AsymptoticExpansion.build([_gauss_term_G(d, pt, 0)], 0, gtag, "ii")
    if gtag.div2d or abs(pt.y0) < 1 - abs(pt.x0):
        return AsymptoticExpansion.build(power(), 0, gtag, "i")
    # the n = 0 term vanishes; the next Gaussian sits at n = -sgn(x0), both sides when x0 = 0
    ns = (-1, 1) if pt.x0 == 0 else (-1 if pt.x0 > 0 else 1,)
    terms = [tm for tm in (_gauss_term_G(d, pt, n) for n in ns) if tm is not None]
    return AsymptoticExpansion.build(terms, 0, gtag, "iii")


def expand_F_erf(params, z, N: int) -> ErfExpansion:
    """Error-function form of the F expansion, valid for |z| < 1/(4l).

    It is uniform across the anti-Stokes lines near z = 0: the erf term
    switches the Gaussian contribution on and off smoothly.
    """
    _check_N(N)
    if not isinstance(params, ThetaParams):
        params = ThetaParams(*params)
    z = EllipticArg.of(z)
    d, ell = params.d, params.ell
    r2 = z.re * z.re + z.im * z.im
    if r2 * (4 * ell) ** 2 >= 1:
        raise OutsideDisk(f"|z| = {math.sqrt(float(r2)):.6g} is not below 1/(4 l) = {1 / (4 * ell):.6g}")
    zc = z.value
    power = tuple((a, complex(dz_tower_regularized(d, ell, a, z))) for a in range(N + 1))

    def hp():
        dps = mpmath.mp.dps
        coeff = 1 / (2 * ell * mpmath.sqrt(2))
        scale = mpmath.sqrt(mpmath.pi) * 1j * z.mp() / mpmath.sqrt(2)
        towers = [(a, dz_tower_regularized(d, ell, a, z, dps)) for a in range(N + 1)]
        return coeff, scale, towers

    return ErfExpansion(
        1 / (2 * ell * math.sqrt(2.0)),
        math.sqrt(math.pi) * 1j * zc / math.sqrt(2.0),
        power,
        N,
        hp,
    )


# --------------------------------------------------------------------------
# covering of R \ Z by rational neighbourhoods


def rational_cover(x) -> tuple[int, int, Fraction]:
    """Write x = w0 + c/h with gcd(c, h) = 1, h >= 2, c != 0 and |w0| < 1/(4h).

    The smallest such h is returned, ties broken by the smallest |c|.
    """
    if isinstance(x, float):
        x = Fraction(x)
    x = Fraction(x)
    if x.denominator == 1:
        raise IntegerInput(f"{x} is an integer")
    h = 2
    while True:
        centre = x * h
        best = None
        for c in range(math.floor(centre) - 1, math.ceil(centre) + 2):
            if c == 0 or math.gcd(c, h) != 1:
                continue
            w0 = x - Fraction(c, h)
            if 4 * h * abs(w0) < 1:
                if best is None or abs(c) < abs(best[0]):
                    best = (c, w0)
        if best is not None:
            return best[0], h, best[1]
        h += 1


# --------------------------------------------------------------------------
# evaluation and serialization


def eval_expansion(exp, t: float) -> complex:
    """Numeric value of an expansion at t > 0 in binary64."""
    t = float(t)
    if not t > 0:
        raise DomainError("t must be positive")
    if isinstance(exp, ErfExpansion):
        u = exp.erf_arg_scale / math.sqrt(t)
        total = exp.erf_coeff / math.sqrt(t) * exp_sq_one_plus_erf(u)
        for a, c in exp.power_terms:
            total += c * (-2 * math.pi * t) ** a / math.factorial(a)
        return total
    return sum((term.value(t) for term in exp.terms), 0j)


def eval_expansion_mp(exp, t) -> mpmath.mpc:
    """Same as ``eval_expansion`` at the ambient mpmath precision."""
    tm = mpmath.mpf(t) if not isinstance(t, Fraction) else _mpf(t)
    if isinstance(exp, ErfExpansion):
        coeff, scale, towers = exp.hp()
        u = scale / mpmath.sqrt(tm)
        if mpmath.re(u) < 0:
            core = mpmath.exp(u * u) * mpmath.erfc(-u)
        else:
            core = mpmath.exp(u * u) * (1 + mpmath.erf(u))
        total = coeff / mpmath.sqrt(tm) * core
        for a, c in towers:
            total += c * (-2 * mpmath.pi * tm) ** a / mpmath.factorial(a)
        return total
    total = mpmath.mpc(0)
    for term in exp.terms:
        c, r = term.mp_parts()
        total += c * tm ** _mpf(term.t_pow) * mpmath.exp(r / tm)
    return total


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def expansion_to_json(exp: AsymptoticExpansion) -> dict:
    out = {
        "terms": [
            {
                "coeff_re": term.coeff.real,
                "coeff_im": term.coeff.imag,
                "t_pow": _frac_str(term.t_pow),
                "rate_re": term.rate.real,
                "rate_im": term.rate.imag,
            }
            for term in exp.terms
        ],
        "order": exp.order,
    }
    if exp.region:
        out["region"] = exp.region
    if exp.case:
        out["case"] = exp.case
    return out


def expansion_from_json(data) -> AsymptoticExpansion:
    if isinstance(data, str):
        data = json.loads(data)
    terms = tuple(
        ExpTerm(
            complex(item["coeff_re"], item["coeff_im"]),
            Fraction(item["t_pow"]),
            complex(item["rate_re"], item["rate_im"]),
        )
        for item in data["terms"]
    )
    return AsymptoticExpansion(terms, int(data["order"]), data.get("region", ""), data.get("case", ""))
