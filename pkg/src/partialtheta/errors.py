"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class ThetaError(Exception):
    """Base class for all package errors."""


class DomainError(ThetaError, ValueError):
    """An input violates the precondition of an operation."""


class ConvergenceError(ThetaError, ArithmeticError):
    """An adaptive series did not reach its tolerance within ``max_terms``."""


class PoleAtLattice(DomainError):
    """Evaluation requested at a pole ``z in (1/ell)Z``."""


class NearPoleWarning(UserWarning):
    """Evaluation close to a pole; a Laurent form is more accurate there."""


class InexactWarning(UserWarning):
    """A float-only input was classified with a tolerance."""


class AmbiguousClassification(DomainError):
    """A float-only input lies within tolerance of a region boundary."""


class OutsideDisk(DomainError):
    """The erf-form expansion needs ``|z| < 1/(4 ell)``."""


class IntegerInput(DomainError):
    """The rational covering is undefined for integers."""


class ZeroLeadingTerm(ThetaError):
    """The closed-form leading coefficient vanishes identically."""


class NoCaseApplies(DomainError):
    """No quantum-dimension clause covers the input."""


class OracleFailure(ThetaError):
    """The direct summation could not certify its result."""


class DivergentRatio(ThetaError):
    """A character ratio has no finite limit."""


class OscillationUnresolved(ThetaError):
    """Subsequence limits of an oscillating ratio disagree."""


class NonConvergent(ThetaError):
    """Richardson extrapolation did not settle."""
