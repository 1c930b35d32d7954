"""Generators for the explicit hypergeometric series on both sides.

LG side (sector ring Q[H]/(H^s), delta = d):

    I_lg = sum over d >= 0, d not= -1 mod delta, of
        z * e^{(d+1+H/z)t} * delta^{-E*floor(d/delta)}
          * prod_{1<=b<=d, b = d+1 mod delta} (H + b z)^num
          / prod_{1<=b<=d, b != d+1 mod delta} (H + b z)^den

with (E, num, den) = (6, 4, 2) for the cubic case and (8, 4, 4) for the
quadric case; the term of index d sits at frequency d+1 in the narrow sector
(d+1) mod delta.  Broad indices (d = -1 mod delta) are structurally absent.

GW side (ring Q[H]/(H^4)):

    I_gw = sum over d >= 0 of
        z * e^{(d+H/z)t} * prod_{1<=k<=d*deg} (deg*H + k z)^r
          / prod_{1<=k<=d} (H + k z)^N .

The same LG series is assembled a second, independent way from the projective
line/space small-J contributions and the specialized twisting factors
``m_theta``; the exact coefficientwise equality of the two routes is the
package's main internal consistency oracle.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .ring import HPoly, ModelCase, StructureError, UnsupportedCaseError, get_case
from .series import FreqSeries, ZLaurent

__all__ = [
    "i_hybrid",
    "i_gw",
    "givental_j_contribution",
    "m_theta",
    "assemble_hybrid_via_mtheta",
]


def _require_lg(case: ModelCase) -> None:
    if not case.has_lg_side:
        raise UnsupportedCaseError(f"case {case.name!r} has no LG side")


def _hybrid_coeff(case: ModelCase, d: int) -> ZLaurent:
    """Coefficient of the index-d LG term (without the exponential)."""
    s = case.lg_nilpotency
    delta = case.d
    num = ZLaurent.one(s)
    den = ZLaurent.one(s)
    for b in range(1, d + 1):
        factor = ZLaurent.linear_h(s, 1, b)
        if b % delta == (d + 1) % delta:
            num = num * factor**case.ihyb_num_exp
        else:
            den = den * factor**case.ihyb_den_exp
    scale = Fraction(1, delta ** (case.ihyb_scale_exp * (d // delta)))
    return ZLaurent.z_power(s, 1) * num * den.invert() * scale


@lru_cache(maxsize=None)
def _i_hybrid_cached(case_name: str, order: int) -> FreqSeries:
    # A factor (H+bz) belongs to the numerator iff b = d+1 mod delta, so its
    # classification depends on the term index d and the products cannot be
    # shared across terms; the per-term rebuild is O(order^2) ring operations
    # in a nilpotent ring of size <= 4, which is negligible at the orders the
    # annihilation checks need.
    case = get_case(case_name)
    delta = case.d
    terms = {}
    for d in range(order + 1):
        if d % delta == delta - 1:
            continue
        terms[(Fraction(d + 1), (d + 1) % delta)] = _hybrid_coeff(case, d)
    return FreqSeries(case, "hybrid", Fraction(order + 1), terms)


def i_hybrid(case: ModelCase, order: int) -> FreqSeries:
    """LG-side I-series through index d <= order (frequencies <= order+1)."""
    _require_lg(case)
    if order < 0:
        raise StructureError("order must be nonnegative")
    return _i_hybrid_cached(case.name, order)


@lru_cache(maxsize=None)
def _i_gw_cached(case_name: str, order: int) -> FreqSeries:
    case = get_case(case_name)
    s = case.gw_nilpotency
    terms = {}
    num = ZLaurent.one(s)
    den_inv = ZLaurent.one(s)
    z1 = ZLaurent.z_power(s, 1)
    for d in range(order + 1):
        if d > 0:
            for k in range(case.d * (d - 1) + 1, case.d * d + 1):
                num = num * ZLaurent.linear_h(s, case.d, k) ** case.r
            den_inv = den_inv * (ZLaurent.linear_h(s, 1, d).invert() ** case.N)
        terms[(Fraction(d), 0)] = z1 * num * den_inv
    return FreqSeries(case, "gw", Fraction(order), terms)


def i_gw(case: ModelCase, order: int) -> FreqSeries:
    """GW-side I-series through degree d <= order."""
    if order < 0:
        raise StructureError("order must be nonnegative")
    return _i_gw_cached(case.name, order)


def givental_j_contribution(case: ModelCase, d: int) -> FreqSeries:
    """Degree-d small-J contribution of the ambient projective space.

    For the cubic case the target is P^1 and the term is
    d_prefactor * z * e^{(H/z+d)t} / ((H+z)...(H+dz))^r with prefactor 3 and
    r = 2; the quadric case has target P^3, prefactor 2 and fourth powers.
    The sector tag is (d+1) mod delta, matching the twisting factor that will
    multiply it.
    """
    _require_lg(case)
    if d < 0:
        raise StructureError("d must be nonnegative")
    s = case.lg_nilpotency
    den = ZLaurent.one(s)
    for k in range(1, d + 1):
        den = den * ZLaurent.linear_h(s, 1, k) ** case.r
    coeff = ZLaurent.z_power(s, 1) * den.invert() * Fraction(case.d)
    h = (d + 1) % case.d
    return FreqSeries(case, "hybrid", Fraction(d), {(Fraction(d), h): coeff})


def m_theta(case: ModelCase, d: int) -> ZLaurent:
    """Specialized twisting factor for the degree-d small-J types.

    prod over b with 0 <= b < (d+1)/delta and fractional part equal to that of
    (d+1)/delta, of (H/delta + b z)^E.  When d+1 = 0 mod delta the b = 0
    factor contains a bare H whose E-th power dies in the nilpotent ring, so
    the product is the zero element: broad insertions drop out structurally.
    """
    _require_lg(case)
    if d < 0:
        raise StructureError("d must be nonnegative")
    s = case.lg_nilpotency
    delta = case.d
    top = Fraction(d + 1, delta)
    b = Fraction((d + 1) % delta, delta)
    out = ZLaurent.one(s)
    while b < top:
        factor = ZLaurent(
            s,
            {
                0: HPoly.of(s, [0, Fraction(1, delta)]),
                1: HPoly.constant(s, b),
            },
        )
        out = out * factor**case.ihyb_scale_exp
        b += 1
    return out


def assemble_hybrid_via_mtheta(case: ModelCase, order: int) -> FreqSeries:
    """Assemble the LG I-series as (1/delta) e^t sum_d m_theta(d) * J_d.

    The e^t factor shifts every frequency up by one, so the result is
    comparable term by term with ``i_hybrid(case, order)``.
    """
    _require_lg(case)
    if order < 0:
        raise StructureError("order must be nonnegative")
    terms = {}
    for d in range(order + 1):
        twist = m_theta(case, d)
        if twist.is_zero():
            continue
        j = givental_j_contribution(case, d)
        coeff = j.term(d, (d + 1) % case.d) * twist * Fraction(1, case.d)
        terms[(Fraction(d + 1), (d + 1) % case.d)] = coeff
    return FreqSeries(case, "hybrid", Fraction(order + 1), terms)
