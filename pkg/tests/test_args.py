from __future__ import annotations

from fractions import Fraction as Fr

import pytest

from partialtheta.args import EllipticArg, TauArg, ThetaParams, parse_complex, to_fraction
from partialtheta.errors import DomainError


@pytest.mark.parametrize(
    "text, expected",
    [
        ("1/3-2/5i", (Fr(1, 3), Fr(-2, 5), "rational")),
        ("0.3+0.2i", (Fr(3, 10), Fr(1, 5), "decimal")),
        ("-i", (Fr(0), Fr(-1), "rational")),
        ("2/7", (Fr(2, 7), Fr(0), "rational")),
        ("1e-3-2e-2i", (Fr(1, 1000), Fr(-1, 50), "decimal")),
        ("1/2,-3/4", (Fr(1, 2), Fr(-3, 4), "rational")),
    ],
)
def test_parse_complex(text, expected):
    assert parse_complex(text) == expected


def test_to_fraction_kinds():
    assert to_fraction(0.5) == (Fr(1, 2), "float")
    assert to_fraction("0.1") == (Fr(1, 10), "decimal")
    assert to_fraction(Fr(2, 3)) == (Fr(2, 3), "rational")
    for bad in (True, float("nan"), "", "abc"):
        with pytest.raises(DomainError):
            to_fraction(bad)


def test_elliptic_arg_coercion():
    z = EllipticArg.of(0.1 + 0.2j)
    assert z.source == "float" and not z.exact
    assert EllipticArg.of("1/3").rational
    assert EllipticArg.of((Fr(1, 2), "0.25")).source == "decimal"
    s = EllipticArg.of("1/3") + EllipticArg.of(0.5)
    assert s.source == "float"
    assert str(EllipticArg.of("1/3-1/2i")) == "1/3-1/2i"


def test_theta_params():
    p = ThetaParams("1/3", 2)
    assert p.d == Fr(1, 3) and p.ell == 2
    assert ThetaParams(0.1, 1).d == Fr(1, 10)
    for bad_ell in (0, -1, 1.5, True):
        with pytest.raises(DomainError):
            ThetaParams(1, bad_ell)


def test_tau():
    assert TauArg.of("1/10") == TauArg(0, Fr(1, 10))
    assert TauArg.of(0.1).im == Fr(0.1)
    assert TauArg.of("1/2+1i").re == Fr(1, 2)
    with pytest.raises(DomainError):
        TauArg(0, 0)
    with pytest.raises(DomainError):
        TauArg.it(Fr(1, 10**8)).check_oracle_range()
