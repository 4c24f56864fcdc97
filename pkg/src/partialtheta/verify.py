"""Numerical verification harness.

``slope_fit`` turns an O(t^(N+1)) remainder claim into a number: the
least-squares slope of log|oracle - expansion| against log t.
``richardson_limit`` estimates t -> 0 limits.  ``sweep_cases`` runs a
fixed matrix of both over every region and clause and emits a
deterministic JSON-lines report.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

import mpmath

from .errors import DomainError, NonConvergent, OracleFailure, ThetaError

__all__ = [
    "SlopeReport",
    "LimitReport",
    "slope_fit",
    "richardson_limit",
    "geometric_grid",
    "sweep_cases",
    "report_lines",
    "ORACLE_FLOOR",
]

ORACLE_FLOOR = 1e-5
_LN10 = math.log(10.0)


@dataclass
class SlopeReport:
    case_id: str
    samples: list
    fitted_slope: Optional[float]
    expected: float
    passed: bool
    tol: float = 0.3
    saturated: bool = False
    params: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "case_id": self.case_id,
            "params": self.params,
            "slope": None if self.fitted_slope is None else round(self.fitted_slope, 6),
            "expected": self.expected,
            "pass": self.passed,
        }


@dataclass
class LimitReport:
    samples: list
    value: complex
    error: float
    target: Optional[complex] = None
    passed: Optional[bool] = None
    case_id: str = ""
    params: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "case_id": self.case_id,
            "params": self.params,
            "limit": [round(self.value.real, 10), round(self.value.imag, 10)],
            "expected": None if self.target is None else [round(self.target.real, 10), round(self.target.imag, 10)],
            "pass": self.passed,
        }
        return out


def geometric_grid(t_min: float, t_max: float, n_pts: int) -> list[Fraction]:
    """n_pts values from t_max down to t_min, equally spaced in log t, as exact fractions."""
    if n_pts < 2:
        raise DomainError("need at least two grid points")
    out = []
    for i in range(n_pts):
        x = math.log(t_max) + (math.log(t_min) - math.log(t_max)) * i / (n_pts - 1)
        out.append(Fraction(math.exp(x)).limit_denominator(10**12))
    return out


def _max_rate(expansion) -> float:
    terms = getattr(expansion, "terms", None)
    if terms is None:
        return 0.0
    return max([0.0] + [tm.rate.real for tm in terms])


def slope_fit(
    direct: Callable[[Fraction], object],
    expansion,
    t_min: float = 1e-3,
    t_max: float = 1e-1,
    n_pts: int = 12,
    *,
    expected: Optional[float] = None,
    tol: float = 0.3,
    digits: int = 30,
    case_id: str = "",
) -> SlopeReport:
    """Fit the decay rate of |direct(t) - expansion(t)|.

    ``direct`` receives an exact t and should return the oracle value with
    absolute error about 10**-digits (the ``*_mp`` functions do).  Both
    sides are compared at a precision large enough for the biggest
    exponential in the expansion, so residuals far below the size of the
    values themselves are resolved.  Residuals under 10**-(digits-5) are
    treated as saturated and left out of the fit.
    """
    from .asymptotics import eval_expansion_mp

    if t_min < ORACLE_FLOOR:
        raise DomainError(f"t_min = {t_min} is below the oracle floor {ORACLE_FLOOR}")
    if n_pts < 8:
        raise DomainError("slope fits need at least 8 points")
    if expected is None:
        expected = float(expansion.order + 1)
    floor = 10.0 ** (-(digits - 5))
    samples = []
    for t in geometric_grid(t_min, t_max, n_pts):
        dps = digits + 15 + int(max(0.0, _max_rate(expansion)) / float(t) / _LN10)
        with mpmath.workdps(dps):
            try:
                value = direct(t)
            except ThetaError as exc:
                raise OracleFailure(f"oracle failed at t={float(t)}: {exc}") from exc
            approx = eval_expansion_mp(expansion, t)
            resid = abs(value - approx)
            # the log is taken here: a wrong expansion can leave a residual
            # beyond the float range
            samples.append((float(t), float(resid), float(mpmath.log(resid)) if resid > 0 else -math.inf))
    live = [(t, lr) for t, r, lr in samples if r > floor]
    samples = [(t, r) for t, r, _ in samples]
    if len(live) < 3:
        return SlopeReport(case_id, samples, None, expected, True, tol, saturated=True)
    xs = [math.log(t) for t, _ in live]
    ys = [lr for _, lr in live]
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sum((x - mx) ** 2 for x in xs)
    return SlopeReport(case_id, samples, slope, expected, slope >= expected - tol, tol)


def richardson_limit(
    values: Sequence[tuple[float, complex]],
    power: float = 1.0,
    target: Optional[complex] = None,
    tol: float = 1e-6,
) -> LimitReport:
    """Extrapolate v(t) -> t = 0 assuming v = L + c1 t^p + c2 t^(2p) + ...

    Neville's recursion in s = t^p gives the successive extrapolants on
    the diagonal; the estimate is the last one and the error indicator
    its distance from the one before.
    """
    if len(values) < 4:
        raise DomainError("Richardson extrapolation needs at least 4 samples")
    pts = sorted(((float(t), v) for t, v in values), key=lambda tv: -tv[0])
    with mpmath.workdps(40):
        s = [mpmath.mpf(t) ** power for t, _ in pts]
        P = [mpmath.mpc(v) for _, v in pts]
        n = len(P)
        diag = [P[0]]
        for m in range(1, n):
            for i in range(n - m):
                P[i] = (s[i] * P[i + 1] - s[i + m] * P[i]) / (s[i] - s[i + m])
            diag.append(P[0])
        value = complex(diag[-1])
        error = float(abs(diag[-1] - diag[-2]))
        first = float(abs(diag[1] - diag[0]))
    if not (math.isfinite(value.real) and math.isfinite(value.imag) and math.isfinite(error)):
        raise NonConvergent("extrapolation produced a non-finite value")
    if error > 10 * first and error > 1e-12 * max(1.0, abs(value)):
        raise NonConvergent(f"extrapolants do not settle (first step {first:.3g}, last {error:.3g})")
    passed = None if target is None else abs(value - target) < tol
    return LimitReport([(t, complex(v)) for t, v in pts], value, error, target, passed)


# --------------------------------------------------------------------------
# fixture sweep


def _fx(x) -> str:
    return str(Fraction(x))


def _theta_fixtures():
    """(case_id, kind, (d, ell), z, N range) for the theta suite.

    Points stay away from anti-Stokes lines and poles so that the
    asymptotic regime is reached inside t in [1e-3, 1e-1].
    """
    F = [
        ("F-UPPER", (1, 2), "1/10+3/10i"),
        ("F-UPPER", (Fraction(1, 2), 1), "1/4+1/5i"),
        ("F-LOWER_OUT", (1, 1), "2/5-1/10i"),
        ("F-LOWER_OUT", (Fraction(1, 3), 2), "1/5-1/20i"),
        ("F-LOWER_IN", (1, 1), "1/10-2/5i"),
        ("F-LOWER_IN", (1, 2), "3/20-9/20i"),
        ("F-LOWER_IN_HALF", (1, 1), "1/2-7/10i"),
        ("F-LOWER_IN_HALF", (Fraction(1, 3), 1), "1/2-3/5i"),
        ("F-REAL_NONLATTICE", (Fraction(1, 3), 1), "1/2"),
        ("F-REAL_NONLATTICE", (1, 2), "1/4"),
        ("F-REAL_LATTICE", (Fraction(1, 3), 2), "0"),
        ("F-REAL_LATTICE", (1, 3), "1/3"),
    ]
    G = [
        ("G-UPPER", (Fraction(1, 2), 3), "1/10+1/5i"),
        ("G-LOWER_OUT", (1, 1), "2/5-1/10i"),
        ("G-LOWER_IN", (1, 3), "1/10-1/2i"),
        ("G-LOWER_IN", (1, 2), "3/20-9/20i"),
        ("G-LOWER_IN_HALF", (1, 3), "1/2-3/5i"),
        ("G-REAL_NONLATTICE", (Fraction(1, 3), 1), "1/2"),
        ("G-REAL_LATTICE", (1, 2), "1/2"),
    ]
    return F, G


def _singlet_fixtures():
    # (case_id, (p, r, s), (k, u0, v0))
    return [
        ("C-i-Re<0", (2, 1, 1), (0, Fraction(-1, 5), Fraction(1, 10))),
        ("C-i-Re<0", (3, 2, 1), (1, Fraction(-3, 5), Fraction(0))),
        ("C-i-|v0|>|u0|", (2, 3, 1), (1, Fraction(1, 10), Fraction(3, 10))),
        ("C-ii", (2, 1, 1), (1, Fraction(3, 5), Fraction(1, 10))),
        ("C-ii", (3, 1, 2), (1, Fraction(1, 2), Fraction(-1, 5))),
        ("C-iii", (2, 1, 1), (0, 0, 0)),
        ("C-iii", (3, 2, 1), (1, 0, 0)),
    ]


def _slope_cases(suite: str, rng: random.Random, perturb: bool):
    from .args import ThetaParams
    from .asymptotics import AsymptoticExpansion, expand_F, expand_G
    from .singlet import Atypical, c_normalized_mp, expand_C
    from .theta_core import f_partial_mp, g_false_mp

    jobs = []
    if suite in ("all", "theta"):
        F, G = _theta_fixtures()
        for case_id, dl, z in F:
            N = rng.randrange(4)
            params = ThetaParams(*dl)
            jobs.append(
                (case_id, {"d": _fx(dl[0]), "ell": dl[1], "z": z, "N": N}, expand_F(params, z, N),
                 lambda t, params=params, z=z: f_partial_mp(params, z, t))
            )
        for case_id, dl, z in G:
            N = rng.randrange(4)
            params = ThetaParams(*dl)
            jobs.append(
                (case_id, {"d": _fx(dl[0]), "ell": dl[1], "z": z, "N": N}, expand_G(params, z, N),
                 lambda t, params=params, z=z: g_false_mp(params, z, t))
            )
    if suite in ("all", "singlet"):
        for case_id, (p, r, s), eps in _singlet_fixtures():
            N = rng.randrange(3)
            label = Atypical(p, r, s)
            jobs.append(
                (case_id, {"p": p, "r": r, "s": s, "eps": [eps[0], _fx(eps[1]), _fx(eps[2])], "N": N},
                 expand_C(label, eps, N),
                 lambda t, label=label, eps=eps: c_normalized_mp(label, eps, t))
            )
    for case_id, params, exp, direct in jobs:
        if perturb and exp.terms:
            # negative control: drop the highest nonzero power term, which
            # leaves a t^N remainder that must fail the N+1 slope test
            idx = max(
                range(len(exp.terms)),
                key=lambda i: (exp.terms[i].rate == 0 and exp.terms[i].coeff != 0, exp.terms[i].t_pow),
            )
            terms = exp.terms[:idx] + exp.terms[idx + 1 :]
            exp = AsymptoticExpansion(tuple(terms), exp.order, exp.region, exp.case)
        yield case_id, params, exp, direct


def _limit_cases(suite: str):
    from .singlet import Atypical, qdim_closed, qdim_numeric

    if suite not in ("all", "singlet"):
        return
    draws = [
        ("qdim-i", (3, 2, 2), (0, Fraction(-1, 5), Fraction(1, 10))),
        ("qdim-ii", (3, 2, 2), (1, Fraction(1, 2), Fraction(0))),
        ("qdim-iv", (3, 2, 2), (0, Fraction(3, 5), Fraction(1, 2))),
        ("qdim-vi-b", (4, 2, 3), (8, 0, 0)),
    ]
    for case_id, (p, r, s), eps in draws:
        label = Atypical(p, r, s)
        closed = qdim_closed(label, eps)
        est = qdim_numeric(label, eps)
        rep = est.report
        rep.case_id = case_id
        rep.params = {"p": p, "r": r, "s": s, "eps": [eps[0], _fx(eps[1]), _fx(eps[2])]}
        rep.target = closed.value
        rep.passed = abs(est.value - closed.value) < 1e-6
        yield rep


def sweep_cases(suite: str = "all", seed: int = 0, perturb: bool = False) -> list:
    """Run the fixture matrix; never raises on an individual failing case."""
    if suite not in ("all", "theta", "singlet"):
        raise DomainError(f"unknown suite {suite!r}")
    rng = random.Random(seed)
    reports: list = []
    for case_id, params, exp, direct in _slope_cases(suite, rng, perturb):
        try:
            rep = slope_fit(direct, exp, case_id=case_id)
        except ThetaError as exc:
            rep = SlopeReport(case_id, [], None, float(exp.order + 1), False)
            rep.params = {**params, "error": type(exc).__name__}
        rep.params = {**params, **rep.params}
        reports.append(rep)
    if not perturb:
        for rep in _limit_cases(suite):
            reports.append(rep)
    return reports


def report_lines(reports: Iterable) -> list[str]:
    """One JSON object per case, keys sorted, for byte-stable output."""
    return [json.dumps(rep.to_json(), sort_keys=True) for rep in reports]
