"""Partial and false Jacobi theta functions near t = 0.

Direct certified evaluation (``theta_core``), the exact derivative
towers behind the asymptotic coefficients (``deriv_engine``), Stokes-region
classification and expansions (``asymptotics``), singlet characters and
quantum dimensions (``singlet``) and the numerical checks that tie them
together (``verify``).
"""

from __future__ import annotations

from .args import EllipticArg, TauArg, ThetaParams
from .asymptotics import (
    RegionTag,
    classify_F,
    classify_G,
    eval_expansion,
    expand_F,
    expand_F_erf,
    expand_G,
    leading_F,
    leading_G,
)
from .singlet import Atypical, Typical, expand_C, leading_C, qdim_closed, qdim_numeric
from .theta_core import f_partial, g_false, jacobi_theta, m_full

__version__ = "0.1.0"

__all__ = [
    "EllipticArg",
    "TauArg",
    "ThetaParams",
    "RegionTag",
    "classify_F",
    "classify_G",
    "eval_expansion",
    "expand_F",
    "expand_F_erf",
    "expand_G",
    "leading_F",
    "leading_G",
    "Atypical",
    "Typical",
    "expand_C",
    "leading_C",
    "qdim_closed",
    "qdim_numeric",
    "f_partial",
    "g_false",
    "jacobi_theta",
    "m_full",
]
