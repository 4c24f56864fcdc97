"""Value types for the parameters (d, ell), the elliptic variable z and the
modular variable tau.

Every real coordinate is kept as an exact ``Fraction``.  Python floats are
converted through their exact binary value, so the multiprecision oracle
and the double-precision paths see the same number.  The ``source`` field
records where the value came from:

``rational``  written as p/q (or int / Fraction); exact in every sense.
``decimal``   written as a decimal literal; exact for region decisions but
              not accepted where a divisibility question is asked.
``float``     a binary float; region boundaries are decided with a
              tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import mpmath

from .errors import DomainError

__all__ = [
    "ThetaParams",
    "EllipticArg",
    "TauArg",
    "to_fraction",
    "parse_complex",
    "MIN_IM_TAU",
]

# the direct-summation oracle refuses anything closer to the real axis
MIN_IM_TAU = Fraction(1, 10**6)

SOURCES = ("rational", "decimal", "float")


def to_fraction(x: Union[int, float, str, Fraction]) -> tuple[Fraction, str]:
    """Convert a scalar to an exact Fraction and report its source kind."""
    if isinstance(x, bool):
        raise DomainError("booleans are not numbers here")
    if isinstance(x, (int, Fraction)):
        return Fraction(x), "rational"
    if isinstance(x, float):
        if not math.isfinite(x):
            raise DomainError(f"non-finite value {x!r}")
        return Fraction(x), "float"
    if isinstance(x, str):
        s = x.strip()
        if not s:
            raise DomainError("empty number")
        try:
            value = Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"cannot read {x!r} as a rational number") from exc
        kind = "decimal" if any(ch in s for ch in ".eE") else "rational"
        return value, kind
    raise DomainError(f"unsupported scalar type {type(x).__name__}")


def _weakest(*kinds: str) -> str:
    return max(kinds, key=SOURCES.index)


def parse_complex(text: str) -> tuple[Fraction, Fraction, str]:
    """Read ``a``, ``a+bi``, ``-bi``, ``1/3-2/5i`` or ``a,b`` into exact parts."""
    s = text.strip().replace(" ", "")
    if "," in s:
        left, _, right = s.partition(",")
        a, ka = to_fraction(left)
        b, kb = to_fraction(right)
        return a, b, _weakest(ka, kb)
    if s.endswith(("i", "j")):
        body = s[:-1]
        # split at the last sign that is not part of an exponent
        cut = -1
        for idx in range(len(body) - 1, 0, -1):
            if body[idx] in "+-" and body[idx - 1] not in "eE":
                cut = idx
                break
        if cut == -1:
            real_txt, imag_txt = "0", body
        else:
            real_txt, imag_txt = body[:cut], body[cut:]
        if imag_txt in ("", "+"):
            imag_txt = "1"
        elif imag_txt == "-":
            imag_txt = "-1"
        a, ka = to_fraction(real_txt)
        b, kb = to_fraction(imag_txt)
        return a, b, _weakest(ka, kb)
    a, ka = to_fraction(s)
    return a, Fraction(0), ka


def _mpf(x: Fraction) -> mpmath.mpf:
    return mpmath.mpf(x.numerator) / x.denominator


@dataclass(frozen=True)
class ThetaParams:
    """The pair (d, ell): d rational, ell a positive integer."""

    d: Fraction
    ell: int

    def __init__(self, d, ell) -> None:
        if isinstance(d, float):
            d = repr(d)
        value, _ = to_fraction(d)
        if isinstance(ell, bool) or not isinstance(ell, int) or ell < 1:
            raise DomainError(f"ell must be a positive integer, got {ell!r}")
        object.__setattr__(self, "d", value)
        object.__setattr__(self, "ell", ell)

    def with_d(self, d) -> ThetaParams:
        return ThetaParams(d, self.ell)


@dataclass(frozen=True)
class EllipticArg:
    """The elliptic variable z = re + i*im with exact coordinates."""

    re: Fraction
    im: Fraction
    source: str = "rational"

    def __post_init__(self) -> None:
        if self.source not in SOURCES:
            raise DomainError(f"unknown source kind {self.source!r}")
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def of(cls, z) -> EllipticArg:
        """Coerce int, Fraction, float, complex, str or a (re, im) pair."""
        if isinstance(z, EllipticArg):
            return z
        if isinstance(z, complex):
            return cls(Fraction(z.real), Fraction(z.imag), "float")
        if isinstance(z, str):
            a, b, kind = parse_complex(z)
            return cls(a, b, kind)
        if isinstance(z, tuple) and len(z) == 2:
            a, ka = to_fraction(z[0])
            b, kb = to_fraction(z[1])
            return cls(a, b, _weakest(ka, kb))
        a, kind = to_fraction(z)
        return cls(a, Fraction(0), kind)

    @property
    def exact(self) -> bool:
        """True unless the value came from a binary float."""
        return self.source != "float"

    @property
    def rational(self) -> bool:
        return self.source == "rational"

    @property
    def value(self) -> complex:
        return complex(float(self.re), float(self.im))

    def mp(self) -> mpmath.mpc:
        """The exact value at the current mpmath precision."""
        return mpmath.mpc(_mpf(self.re), _mpf(self.im))

    def __add__(self, other) -> EllipticArg:
        o = EllipticArg.of(other)
        return EllipticArg(self.re + o.re, self.im + o.im, _weakest(self.source, o.source))

    def __neg__(self) -> EllipticArg:
        return EllipticArg(-self.re, -self.im, self.source)

    def scale(self, factor: Fraction | int) -> EllipticArg:
        f = Fraction(factor)
        return EllipticArg(self.re * f, self.im * f, self.source)

    def __str__(self) -> str:
        sign = "-" if self.im < 0 else "+"
        return f"{self.re}{sign}{abs(self.im)}i"


@dataclass(frozen=True)
class TauArg:
    """tau in the upper half-plane, stored exactly; ``TauArg.it(t)`` gives tau = i t."""

    re: Fraction
    im: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))
        if self.im <= 0:
            raise DomainError(f"Im(tau) must be positive, got {float(self.im)}")

    @classmethod
    def it(cls, t) -> TauArg:
        value, _ = to_fraction(t)
        return cls(Fraction(0), value)

    @classmethod
    def of(cls, tau) -> TauArg:
        if isinstance(tau, TauArg):
            return tau
        if isinstance(tau, complex):
            return cls(Fraction(tau.real), Fraction(tau.imag))
        if isinstance(tau, str):
            a, b, _ = parse_complex(tau)
            if b == 0:
                return cls.it(a)
            return cls(a, b)
        # a bare real number means t with tau = i t
        return cls.it(tau)

    @property
    def t(self) -> Fraction:
        """Im(tau)."""
        return self.im

    @property
    def value(self) -> complex:
        return complex(float(self.re), float(self.im))

    def mp(self) -> mpmath.mpc:
        return mpmath.mpc(_mpf(self.re), _mpf(self.im))

    def scale(self, factor: Fraction | int) -> TauArg:
        f = Fraction(factor)
        return TauArg(self.re * f, self.im * f)

    def check_oracle_range(self) -> None:
        if self.im < MIN_IM_TAU:
            raise DomainError(
                f"Im(tau) = {float(self.im):.3g} is below the oracle floor {float(MIN_IM_TAU):.0e}"
            )
