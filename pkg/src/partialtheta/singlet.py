"""Characters of the (1,p)-singlet vertex algebra and their quantum dimensions.

Atypical modules M_{r,s} (r in Z, 1 <= s <= p-1) have normalized character

    C_{r,s}(eps; tau) = F_{2p-s-pr, 2p}(z; tau/(4p)) - F_{2p+s-pr, 2p}(z; tau/(4p)),
    z = -i eps / sqrt(2p),

and typical modules F_lambda a single Gaussian term.  Writing
eps = (u0 + i v0 + i k)/sqrt(2p) makes z = (k + v0 - i u0)/(2p) rational
whenever (k, u0, v0) is, so all the divisibility questions below are
decided exactly for such input.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import mpmath

from .args import EllipticArg, TauArg, ThetaParams, _mpf, to_fraction
from .asymptotics import (
    BOUNDARY_TOL,
    AsymptoticExpansion,
    ExpTerm,
    RegionTag,
    classify_F,
    expand_G,
)
from .deriv_engine import finite_tower
from .errors import (
    AmbiguousClassification,
    ConvergenceError,
    DivergentRatio,
    DomainError,
    NoCaseApplies,
    NonConvergent,
    OscillationUnresolved,
    ZeroLeadingTerm,
)
from .numerics import DEFAULT_TOL, Tolerance
from .theta_core import f_partial, f_partial_mp, g_false
from .verify import LimitReport, richardson_limit

__all__ = [
    "Atypical",
    "Typical",
    "EpsilonDecomp",
    "QdimResult",
    "QdimEstimate",
    "decompose_eps",
    "dedekind_eta",
    "char_typical",
    "char_atypical",
    "c_normalized",
    "c_normalized_mp",
    "c_shift_residual",
    "expand_C",
    "leading_C",
    "qdim_closed",
    "qdim_numeric",
    "singlet_z",
    "shift_index",
]


@dataclass(frozen=True)
class Atypical:
    p: int
    r: int
    s: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or self.p < 2:
            raise DomainError(f"p must be an integer >= 2, got {self.p!r}")
        if not isinstance(self.r, int):
            raise DomainError("r must be an integer")
        if not isinstance(self.s, int) or not 1 <= self.s <= self.p - 1:
            raise DomainError(f"s must satisfy 1 <= s <= p-1, got s={self.s!r}, p={self.p}")

    def __str__(self) -> str:
        return f"M:{self.r},{self.s}"


@dataclass(frozen=True)
class Typical:
    p: int
    lam: complex

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or self.p < 2:
            raise DomainError(f"p must be an integer >= 2, got {self.p!r}")
        object.__setattr__(self, "lam", complex(self.lam))

    def __str__(self) -> str:
        return f"F:{self.lam}"


Label = Union[Atypical, Typical]


@dataclass(frozen=True)
class EpsilonDecomp:
    """eps = (u0 + i v0 + i k)/sqrt(2p) with -1/2 < v0 <= 1/2."""

    k: int
    u0: Fraction
    v0: Fraction
    p: int
    exact: bool = True

    def __post_init__(self) -> None:
        if not -Fraction(1, 2) < self.v0 <= Fraction(1, 2):
            raise DomainError(f"v0 = {self.v0} is outside (-1/2, 1/2]")

    @property
    def value(self) -> complex:
        return complex(float(self.u0), float(self.v0) + self.k) / math.sqrt(2 * self.p)

    def mp(self) -> mpmath.mpc:
        return mpmath.mpc(_mpf(self.u0), _mpf(self.v0) + self.k) / mpmath.sqrt(2 * self.p)

    @property
    def eps0(self) -> complex:
        return complex(float(self.u0), float(self.v0))


def decompose_eps(eps, p: int) -> EpsilonDecomp:
    """Accept an EpsilonDecomp, an exact triple (k, u0, v0) or a complex eps."""
    if isinstance(eps, EpsilonDecomp):
        if eps.p != p:
            raise DomainError(f"decomposition was made for p={eps.p}, not p={p}")
        return eps
    if isinstance(eps, tuple) and len(eps) == 3:
        k, u0, v0 = eps
        if isinstance(k, bool) or not isinstance(k, int):
            k_frac, _ = to_fraction(k)
            if k_frac.denominator != 1:
                raise DomainError(f"k must be an integer, got {k!r}")
            k = int(k_frac)
        u, ku = to_fraction(u0)
        v, kv = to_fraction(v0)
        return EpsilonDecomp(k, u, v, p, exact="float" not in (ku, kv))
    if isinstance(eps, str):
        from .args import parse_complex

        re, im, _ = parse_complex(eps)
        eps = complex(float(re), float(im))
    w = complex(eps) * math.sqrt(2 * p)
    k = math.ceil(w.imag - 0.5)
    return EpsilonDecomp(k, Fraction(w.real), Fraction(w.imag) - k, p, exact=False)


def singlet_z(e: EpsilonDecomp) -> EllipticArg:
    """z = -i eps / sqrt(2p) = (k + v0 - i u0)/(2p)."""
    source = "rational" if e.exact else "float"
    return EllipticArg((e.k + e.v0) / (2 * e.p), -e.u0 / (2 * e.p), source)


def shift_index(label: Atypical) -> Fraction:
    """D = s + p(r - 2), the G-index in the shift decomposition of C_{r,s}."""
    return Fraction(label.s + label.p * (label.r - 2))


def _tau_prime(tau: TauArg, p: int) -> TauArg:
    return tau.scale(Fraction(1, 4 * p))


# --------------------------------------------------------------------------
# characters


def dedekind_eta(tau, tol: Tolerance = DEFAULT_TOL) -> complex:
    """eta(tau) = q^(1/24) prod_{n >= 1} (1 - q^n), truncated once |q^n| < tol."""
    tau = TauArg.of(tau)
    tc = tau.value
    q = cmath.exp(2j * math.pi * tc)
    aq = abs(q)
    prod = 1.0 + 0j
    qn = q
    n = 1
    while True:
        prod *= 1 - qn
        # remaining factors change the product by at most sum |q|^m ~ |q^n| |q| / (1 - |q|)
        if abs(qn) * aq / (1 - aq) < tol.abs_tol * 1e-2:
            break
        qn *= q
        n += 1
        if n > tol.max_terms:
            raise ConvergenceError("eta product did not converge")
    return cmath.exp(2j * math.pi * tc / 24) * prod


def _alpha0(p: int) -> float:
    return math.sqrt(2 * p) - math.sqrt(2 / p)


def _typical_numerator(label: Typical, eps: complex, tau: TauArg) -> complex:
    x = label.lam - _alpha0(label.p) / 2
    return cmath.exp(2 * math.pi * complex(eps) * x + 2j * math.pi * tau.value * x * x / 2)


def char_typical(label: Typical, eps, tau) -> complex:
    """e^{2 pi eps (lam - a0/2)} q^{(lam - a0/2)^2 / 2} / eta(tau)."""
    tau = TauArg.of(tau)
    e = decompose_eps(eps, label.p).value if not isinstance(eps, (complex, float, int)) else complex(eps)
    return _typical_numerator(label, e, tau) / dedekind_eta(tau)


def c_normalized(label: Atypical, eps, tau, tol: Tolerance = DEFAULT_TOL) -> complex:
    """C_{r,s}(eps; tau) = eta(tau) ch[M_{r,s}^eps](tau), by direct summation."""
    e = decompose_eps(eps, label.p)
    tau = TauArg.of(tau)
    p, r, s = label.p, label.r, label.s
    z = singlet_z(e)
    tp = _tau_prime(tau, p)
    return f_partial(ThetaParams(2 * p - s - p * r, 2 * p), z, tp, tol) - f_partial(
        ThetaParams(2 * p + s - p * r, 2 * p), z, tp, tol
    )


def c_normalized_mp(label: Atypical, eps, tau, digits: int = 30) -> mpmath.mpc:
    """Multiprecision C_{r,s} with absolute error about 10**-digits."""
    e = decompose_eps(eps, label.p)
    tau = TauArg.of(tau)
    p, r, s = label.p, label.r, label.s
    z = singlet_z(e)
    tp = _tau_prime(tau, p)
    a = f_partial_mp(ThetaParams(2 * p - s - p * r, 2 * p), z, tp, digits)
    b = f_partial_mp(ThetaParams(2 * p + s - p * r, 2 * p), z, tp, digits)
    return a - b


def char_atypical(label: Atypical, eps, tau, tol: Tolerance = DEFAULT_TOL) -> complex:
    tau = TauArg.of(tau)
    return c_normalized(label, eps, tau, tol) / dedekind_eta(tau, tol)


def c_shift_residual(label: Atypical, eps, tau, K: int) -> complex:
    """C_{r,s} - [-G_D(z; tau') + sum_{a <= K} D^{2a}(...) (pi i tau/(2p))^a / a!].

    D = s + p(r-2); the bracketed correction is a finite q-series, so the
    residual tends to zero as K grows.
    """
    e = decompose_eps(eps, label.p)
    tau = TauArg.of(tau)
    p = label.p
    D = shift_index(label)
    z = singlet_z(e)
    tp = _tau_prime(tau, p)
    lhs = c_normalized(label, e, tau)
    x = 1j * math.pi * tau.value / (2 * p)
    corr = sum(
        finite_tower(D, 2 * p, a, 2 - label.r, z) * x**a / math.factorial(a) for a in range(K + 1)
    )
    return lhs - (-g_false(ThetaParams(D, 2 * p), z, tp) + corr)


# --------------------------------------------------------------------------
# asymptotics


def _rescale(term: ExpTerm, p: int, sign: int) -> ExpTerm:
    """A term in t' = t/(4p) rewritten in t, times ``sign``."""
    f = 4 * p
    factor = sign * float(f) ** (-float(term.t_pow))
    hp = None
    if term.hp is not None:
        inner = term.hp
        tp = term.t_pow

        def hp():
            c, r = inner()
            return sign * c * mpmath.mpf(f) ** (-_mpf(tp)), r * f

    return ExpTerm(term.coeff * factor, term.t_pow, term.rate * f, hp)


def _c_case(tag: RegionTag) -> str:
    if tag is RegionTag.REAL_LATTICE:
        return "iii"
    if tag in (RegionTag.LOWER_IN, RegionTag.LOWER_IN_HALF):
        return "ii"
    return "i"


def expand_C(label: Atypical, eps, N: int, variant: str = "l2t") -> AsymptoticExpansion:
    """Expansion of C_{r,s}(eps; it) to O(t^(N+1)).

    Built as -G_D(z; it/(4p)) plus the finite shift correction, each
    expanded in t; ``case`` is (i), (ii) or (iii) by the region of z.
    """
    e = decompose_eps(eps, label.p)
    p = label.p
    D = shift_index(label)
    z = singlet_z(e)
    g = expand_G(ThetaParams(D, 2 * p), z, N, variant)
    terms = [_rescale(tm, p, -1) for tm in g.terms]
    m = 2 - label.r
    if m != 0:
        for a in range(N + 1):
            w = (-math.pi / (2 * p)) ** a / math.factorial(a)
            coeff = finite_tower(D, 2 * p, a, m, z) * w

            def hp(a=a):
                v = finite_tower(D, 2 * p, a, m, z, mpmath.mp.dps)
                return v * (-mpmath.pi / (2 * p)) ** a / mpmath.factorial(a), mpmath.mpc(0)

            terms.append(ExpTerm(coeff, Fraction(a), 0j, hp))
    tag = RegionTag(g.region)
    return AsymptoticExpansion.build(terms, N, tag, _c_case(tag))


def _sgn(x: Fraction) -> int:
    return 1 if x >= 0 else -1


def _check_boundaries(e: EpsilonDecomp) -> None:
    if e.exact:
        return
    u, v = float(e.u0), float(e.v0)
    near = [
        (abs(u) < BOUNDARY_TOL and u != 0, "u0 = 0"),
        (abs(abs(u) - abs(v)) < BOUNDARY_TOL, "|u0| = |v0|"),
        (abs(v - 0.5) < BOUNDARY_TOL and v != 0.5, "v0 = 1/2"),
        (abs(abs(u) - (1 - abs(v))) < BOUNDARY_TOL, "|u0| = 1 - |v0|"),
        (abs(v) < BOUNDARY_TOL and v != 0, "v0 = 0"),
    ]
    for hit, what in near:
        if hit:
            raise AmbiguousClassification(
                f"float eps lies within {BOUNDARY_TOL} of the boundary {what}; pass exact (k, u0, v0)"
            )
    if u == 0 or v == 0.5:
        raise NoCaseApplies("a float eps on u0 = 0 or v0 = 1/2 cannot decide the divisibility clauses; pass exact (k, u0, v0)")


def _region_C(label: Atypical, e: EpsilonDecomp) -> str:
    """Clause (i)-(vii) of the leading behaviour of C_{r,s}."""
    p, s, k = label.p, label.s, e.k
    u0, v0 = e.u0, e.v0
    pks = (k * s) % p == 0
    if u0 < 0:
        return "i"
    if u0 == 0:
        if v0 == 0:
            return "vi" if pks else "v"
        return "vii" if (s * (v0 + k) / p).denominator == 1 else "i"
    if abs(v0) > abs(u0):
        return "i"
    if v0 == Fraction(1, 2):
        return "iv"
    if not pks:
        return "ii"
    return "i" if abs(u0) < 1 - abs(v0) else "iii"


def _hyperbolic_leading(label: Atypical, eps: complex) -> complex:
    """e^{pi sqrt(2p)(1-r) eps} sinh(sqrt(2/p) pi s eps) / sinh(sqrt(2p) pi eps)."""
    p, r, s = label.p, label.r, label.s
    return (
        cmath.exp(math.pi * math.sqrt(2 * p) * (1 - r) * eps)
        * cmath.sinh(math.sqrt(2 / p) * math.pi * s * eps)
        / cmath.sinh(math.sqrt(2 * p) * math.pi * eps)
    )


def _hyperbolic_leading_mp(label: Atypical, eps: mpmath.mpc) -> mpmath.mpc:
    p, r, s = label.p, label.r, label.s
    return (
        mpmath.exp(mpmath.pi * mpmath.sqrt(2 * p) * (1 - r) * eps)
        * mpmath.sinh(mpmath.sqrt(mpmath.mpf(2) / p) * mpmath.pi * s * eps)
        / mpmath.sinh(mpmath.sqrt(2 * p) * mpmath.pi * eps)
    )


def leading_C(label: Atypical, eps) -> AsymptoticExpansion:
    """Dominant behaviour of C_{r,s}(eps; it) as t -> 0, clause (i)-(vii).

    These are the closed forms of the individual clauses; they are
    independent of ``expand_C`` and the two are cross-checked in tests.
    """
    e = decompose_eps(eps, label.p)
    _check_boundaries(e)
    case = _region_C(label, e)
    p, r, s, k = label.p, label.r, label.s, e.k
    u0, v0 = e.u0, e.v0
    eps0 = e.eps0
    region = classify_F(singlet_z(e), 2 * p)
    half = Fraction(-1, 2)
    sq2p = math.sqrt(2 * p)

    def build(terms):
        return AsymptoticExpansion.build(terms, 0, region, case)

    if case == "i":
        val = complex(_hyperbolic_leading(label, e.value))

        def hp():
            return _hyperbolic_leading_mp(label, e.mp()), mpmath.mpc(0)

        return build([ExpTerm(val, Fraction(0), 0j, hp)])

    if case == "ii":
        sign = (-1) ** ((k * r) % 2)
        c = -2j * sign / sq2p * math.sin(math.pi * k * s / p)
        rate = math.pi * eps0 * eps0 / (2 * p)

        def hp():
            e0 = mpmath.mpc(_mpf(u0), _mpf(v0))
            return (
                -2j * sign / mpmath.sqrt(2 * p) * mpmath.sinpi(mpmath.mpf(k * s) / p),
                mpmath.pi * e0 * e0 / (2 * p),
            )

        return build([ExpTerm(c, half, rate, hp)])

    if case == "iii":
        sks = (s * k) // p
        sgns = (-1, 1) if v0 == 0 else (_sgn(v0),)
        terms = []
        for sg in sgns:
            sign = (-1) ** ((r * (k + 1) + sks) % 2)
            c = -2j * sign / sq2p * sg * math.sin(math.pi * s / p)
            rate = math.pi * eps0 * eps0 / (2 * p) - math.pi / (2 * p) - 1j * math.pi * sg * eps0 / p

            def hp(sg=sg, sign=sign):
                e0 = mpmath.mpc(_mpf(u0), _mpf(v0))
                pi = mpmath.pi
                coeff = -2j * sign / mpmath.sqrt(2 * p) * sg * mpmath.sinpi(mpmath.mpf(s) / p)
                return coeff, pi * e0 * e0 / (2 * p) - pi / (2 * p) - 1j * pi * sg * e0 / p

            terms.append(ExpTerm(c, half, rate, hp))
        return build(terms)

    if case == "iv":
        # -2 (2pt)^(-1/2) e^{-pi/(8pt) + pi u0^2/(2pt)} sum_pm pm cos(a -+ T) e^{pm i phi},
        # a = pi (s + pr)/(2p), T = pi u0/(2 p t), phi = pi (2k+1)(s+pr)/(2p);
        # each cosine is split into its two exponentials
        base_rate = -math.pi / (8 * p) + math.pi * float(u0) ** 2 / (2 * p)
        a_ph = Fraction(s + p * r, 2 * p)
        phi = Fraction((2 * k + 1) * (s + p * r), 2 * p)
        terms = []
        for sg in (1, -1):
            for rho in (1, -1):
                ph = rho * a_ph + sg * phi  # in units of pi
                c = -2 / sq2p * sg * 0.5 * cmath.exp(1j * math.pi * float(ph))
                rate = base_rate - 1j * rho * sg * math.pi * float(u0) / (2 * p)

                def hp(sg=sg, rho=rho, ph=ph):
                    pi = mpmath.pi
                    u = _mpf(u0)
                    coeff = -sg / mpmath.sqrt(2 * p) * mpmath.expjpi(_mpf(ph))
                    rt = -pi / (8 * p) + pi * u * u / (2 * p) - 1j * rho * sg * pi * u / (2 * p)
                    return coeff, rt

                terms.append(ExpTerm(c, half, rate, hp))
        return build(terms)

    if case == "v":
        sign = (-1) ** ((k * r) % 2)
        c = -1j * sign / sq2p * math.sin(math.pi * k * s / p)

        def hp():
            return -1j * sign / mpmath.sqrt(2 * p) * mpmath.sinpi(mpmath.mpf(k * s) / p), mpmath.mpc(0)

        return build([ExpTerm(c, half, 0j, hp)])

    if case == "vi":
        sign = (-1) ** ((k * r + (k * s) // p) % 2)
        val = Fraction(sign * s, p)
        return build([ExpTerm(complex(float(val)), Fraction(0), 0j, lambda: (mpmath.mpc(_mpf(val)), mpmath.mpc(0)))])

    # case vii: u0 = 0, v0 != 0, s (v0 + k)/p integer
    if r == 1 and v0 == Fraction(1, 2):
        # r - 1 - i cot(pi v0) vanishes; the t^1 term is not the leading one
        raise ZeroLeadingTerm(f"clause (vii) coefficient vanishes for r=1, v0=1/2 ({label})")
    n_int = s * (v0 + k) / p
    sign = (-1) ** int((n_int + k * r) % 2)
    vf = float(v0)
    c = (
        2 * math.pi * s * sign * cmath.exp(-1j * math.pi * r * vf)
        * (r - 1 - 1j / math.tan(math.pi * vf))
        / (1 - cmath.exp(-2j * math.pi * vf))
    )

    def hp():
        v = _mpf(v0)
        pi = mpmath.pi
        val = 2 * pi * s * sign * mpmath.expjpi(-r * v) * (r - 1 - 1j * mpmath.cot(pi * v)) / (1 - mpmath.expjpi(-2 * v))
        return val, mpmath.mpc(0)

    return build([ExpTerm(c, Fraction(1), 0j, hp)])


# --------------------------------------------------------------------------
# quantum dimensions


@dataclass(frozen=True)
class QdimResult:
    exists: bool
    value: Optional[complex]
    case_tag: str
    condition_residual: Optional[float] = None


def _tan_condition(p: int, r: int, s: int, k: int) -> float:
    """sin A sin B cos C cos D - sin C sin D cos A cos B for the clause (iv) test.

    This is the tangent identity tan A tan B = tan C tan D multiplied
    through by the cosines, so it stays finite when a tangent is infinite.
    """
    with mpmath.workdps(50):
        pi = mpmath.pi
        A = pi * s / (2 * p) + pi * r / 2
        B = pi / (2 * p)
        C = pi * (2 * k + 1) * s / (2 * p) + pi * r / 2
        D = pi * (2 * k + 1) / (2 * p)
        res = mpmath.sin(A) * mpmath.sin(B) * mpmath.cos(C) * mpmath.cos(D) - mpmath.sin(C) * mpmath.sin(
            D
        ) * mpmath.cos(A) * mpmath.cos(B)
        return float(abs(res))


CONDITION_TOL = 1e-10


def _qdim_case(e: EpsilonDecomp) -> str:
    """Quantum-dimension clause for eps (module independent)."""
    p, k = e.p, e.k
    u0, v0 = e.u0, e.v0
    if u0 < 0:
        return "i"
    if u0 == 0:
        if v0 != 0:
            return "i"
        if k % p != 0:
            return "v/vi"
        return "vi-b" if (k // p) % 2 == 0 else "vi-c"
    if abs(v0) > abs(u0):
        return "i"
    if v0 == Fraction(1, 2):
        return "iv"
    if k % p != 0:
        return "ii"
    return "i" if abs(u0) < 1 - abs(v0) else "iii"


def qdim_closed(label: Label, eps) -> QdimResult:
    """Closed-form quantum dimension of M_{r,s}^eps or F_lambda^eps."""
    e = decompose_eps(eps, label.p)
    _check_boundaries(e)
    p, k = label.p, e.k
    case = _qdim_case(e)
    typical = isinstance(label, Typical)
    if case == "v/vi":
        s = 1 if typical else label.s
        case = "vi-a" if (k * s) % p == 0 else "v"
        if typical:
            # F_lambda: zero in both (v) and (vi)(a)
            case = "v"
    if case == "i":
        ev = e.value
        if typical:
            x = label.lam - math.sqrt(p / 2) + math.sqrt(1 / (2 * p))
            val = cmath.exp(2 * math.pi * ev * x) * cmath.sinh(math.sqrt(2 * p) * math.pi * ev) / cmath.sinh(
                math.sqrt(2) * math.pi * ev / math.sqrt(p)
            )
        else:
            r, s = label.r, label.s
            val = (
                cmath.exp(math.pi * ev * math.sqrt(2 * p) * (1 - r))
                * cmath.sinh(math.sqrt(2) * math.pi * s * ev / math.sqrt(p))
                / cmath.sinh(math.sqrt(2) * math.pi * ev / math.sqrt(p))
            )
        return QdimResult(True, val, "i")
    if typical:
        if case in ("vi-b", "vi-c"):
            lam = label.lam
            return QdimResult(True, cmath.exp(2j * math.pi * k * lam / math.sqrt(2 * p)) * p, case)
        return QdimResult(True, 0j, case)
    r, s = label.r, label.s
    if case in ("ii", "v"):
        sign = (-1) ** ((k * (r + 1)) % 2)
        return QdimResult(True, complex(sign * math.sin(math.pi * k * s / p) / math.sin(math.pi * k / p)), case)
    if case == "iii":
        sign = (-1) ** (((r + 1) * (k + 1) + k * (s + 1) // p) % 2)
        return QdimResult(True, complex(sign * math.sin(math.pi * s / p) / math.sin(math.pi / p)), case)
    if case == "vi-a":
        return QdimResult(True, 0j, case)
    if case == "vi-b":
        return QdimResult(True, complex(s), case)
    if case == "vi-c":
        sign = (-1) ** (((s + 1) + p * (r + 1)) % 2)
        return QdimResult(True, complex(sign * s), case)
    # case iv
    residual = _tan_condition(p, r, s, k)
    if residual >= CONDITION_TOL:
        return QdimResult(False, None, "iv", residual)
    sign = (-1) ** (((r + 1) * k + 1) % 2)
    num = math.sin(math.pi * s / (2 * p) + math.pi * r / 2) * math.cos(math.pi * (2 * k + 1) * s / (2 * p) + math.pi * r / 2)
    den = math.cos(math.pi / (2 * p)) * math.sin(math.pi * (2 * k + 1) / (2 * p))
    return QdimResult(True, complex(sign * num / den), "iv", residual)


@dataclass(frozen=True)
class QdimEstimate:
    value: complex
    error: float
    report: LimitReport


def _ratio_mp(label: Label, e: EpsilonDecomp, t: Fraction, digits: int) -> mpmath.mpc:
    unit = Atypical(e.p, 1, 1)
    tau = TauArg.it(t)
    den = c_normalized_mp(unit, e, tau, digits)
    if isinstance(label, Typical):
        x = mpmath.mpc(label.lam) - (mpmath.sqrt(2 * e.p) - mpmath.sqrt(mpmath.mpf(2) / e.p)) / 2
        num = mpmath.exp(2 * mpmath.pi * e.mp() * x - mpmath.pi * _mpf(t) * x * x)
    else:
        num = c_normalized_mp(label, e, tau, digits)
    return num / den


def _ratios(label: Label, e: EpsilonDecomp, ts: Sequence[Fraction], digits: int) -> list[tuple[float, complex]]:
    out = []
    for t in ts:
        # the oracle sizes its own precision; the quotient needs the same
        from .theta_core import oracle_dps

        dps = oracle_dps(singlet_z(e), TauArg.it(t / (4 * e.p)), digits)
        with mpmath.workdps(dps):
            out.append((float(t), complex(_ratio_mp(label, e, t, digits))))
    return out


def _best_limit(samples: list[tuple[float, complex]]) -> LimitReport:
    """Limit of the ratio samples with the smallest error indicator.

    Candidates are Richardson in t^(1/2), Richardson in t, and the raw tail
    (exponentially fast convergence, where power-law extrapolation only
    amplifies the early samples).
    """
    pts = sorted(samples, key=lambda tv: -tv[0])
    tail = abs(pts[-1][1] - pts[-2][1])
    best = LimitReport(pts, pts[-1][1], tail)
    for power in (0.5, 1.0):
        try:
            rep = richardson_limit(pts, power)
        except NonConvergent:
            continue
        if rep.error < best.error:
            best = rep
    if not math.isfinite(best.error) or best.error > 1e-2 * max(1.0, abs(best.value)):
        raise NonConvergent(f"ratio samples do not settle (best error {best.error:.3g})")
    return best


def _default_grid(n: int = 8, t0: float = 0.02) -> list[Fraction]:
    return [Fraction(t0).limit_denominator(10**9) / 2**j for j in range(n)]


def qdim_numeric(
    label: Label,
    eps,
    t_grid: Optional[Sequence] = None,
    digits: int = 30,
    agree_tol: float = 1e-4,
) -> QdimEstimate:
    """Quantum dimension as the t -> 0 limit of the character ratio.

    The ratio C(module)/C_{1,1} (eta cancels) is evaluated with the
    multiprecision oracle on a grid and extrapolated (see ``_best_limit``).
    When v0 = 1/2 and u0 > 0 the ratio oscillates like a Moebius function of
    tan(pi u0/(2 p t)); the limit is then taken separately along the
    subsequences where the tangent is 0 and infinite, and the two must agree.
    """
    e = decompose_eps(eps, label.p)
    p = e.p
    if e.u0 > 0 and e.v0 == Fraction(1, 2) and t_grid is None:
        u0 = e.u0
        j0 = math.ceil(u0 / (2 * p * Fraction(1, 100)))  # start near t = 0.01
        grid_a = [u0 / (2 * p * (j0 + 2**m)) for m in range(7)]
        grid_b = [u0 / (2 * p * (j0 + 2**m + Fraction(1, 2))) for m in range(7)]
        rep_a = _best_limit(_ratios(label, e, grid_a, digits))
        rep_b = _best_limit(_ratios(label, e, grid_b, digits))
        if abs(rep_a.value - rep_b.value) > agree_tol:
            raise OscillationUnresolved(
                f"subsequence limits differ: {rep_a.value:.10g} (tan T = 0) vs {rep_b.value:.10g} (tan T = inf)"
            )
        return QdimEstimate(rep_b.value, max(rep_b.error, abs(rep_a.value - rep_b.value)), rep_b)
    ts = [Fraction(t).limit_denominator(10**12) if not isinstance(t, Fraction) else t for t in (t_grid or _default_grid())]
    if any(t * 1 <= 0 for t in ts):
        raise DomainError("t_grid must be positive")
    try:
        rep = _best_limit(_ratios(label, e, ts, digits))
    except NonConvergent as exc:
        raise DivergentRatio(str(exc)) from exc
    if not math.isfinite(abs(rep.value)) or abs(rep.value) > 1e12:
        raise DivergentRatio(f"ratio estimate {rep.value} has no finite limit")
    return QdimEstimate(rep.value, rep.error, rep)
