"""Exact genus-zero LG/CY correspondence computations.

Cross-validates the hypergeometric series, Picard-Fuchs annihilation, mirror
maps, state-space gradings, moduli selection rules, Yukawa couplings, and the
numeric connection matrix for the Calabi-Yau complete intersections X_{3,3}
in P^5 and X_{2,2,2,2} in P^7, with the quintic in P^4 as a GW-side sanity
case.  All series arithmetic is exact rational; numerics enter only in the
arbitrary-precision continuation and the closed-form cross-checks.
"""

from .ring import CASES, HPoly, ModelCase, Rational, get_case
from .series import FreqSeries, ZLaurent

__version__ = "0.1.0"

__all__ = [
    "CASES",
    "HPoly",
    "ModelCase",
    "Rational",
    "get_case",
    "FreqSeries",
    "ZLaurent",
    "__version__",
]
