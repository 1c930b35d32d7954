"""Picard-Fuchs operators in shifted-factorial form.

An operator is stored factored, never expanded:

    prod_i (D - a_i)^{k_i}  -  A * S_c * prod_i (D - b_i)^{k_i},

where D acts on a frequency-f term as multiplication by lambda*(f + H/z)
(lambda = 1 for the q-side Euler derivative, 1/d for the psi-side one) and
S_c shifts frequencies by c (multiplication by q, resp. psi^{-1}).  Termwise
eigenvalue action keeps the application exact and mirrors the two-term
recursion the canonical series satisfy.

The four canonical operators (q-side and psi-side, cubic and quadric), plus
the quintic q-side operator, are registered here; ``pf_check`` certifies
annihilation through the frequency range the truncation makes complete,
``frobenius_components`` extracts the four scalar solutions organized by
powers of log, and ``yukawa`` runs the triple-coupling pipeline down to
integer instanton numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import qseries
from .ifunc import i_gw, i_hybrid
from .ring import (
    IntegralityError,
    ModelCase,
    StructureError,
    UnsupportedCaseError,
    format_rational,
    get_case,
)
from .series import FreqSeries, ZLaurent

__all__ = [
    "PFOperator",
    "operator_for",
    "pf_apply",
    "pf_check",
    "PFCheckReport",
    "FrobeniusComponent",
    "FrobeniusBasis",
    "frobenius_components",
    "yukawa",
    "YukawaResult",
]

Factors = tuple[tuple[Fraction, int], ...]


@dataclass(frozen=True)
class PFOperator:
    """Order-4 operator in factored shifted form (see module docstring)."""

    name: str
    case_name: str
    side: str
    derivation_scale: Fraction  # lambda: D = lambda * d/dt on e^{ft} terms
    left: Factors  # prod (D - a)^k
    constant: Fraction  # A
    shift: Fraction  # c: frequency shift of the right part
    right: Factors  # prod (D - b)^k

    @property
    def order(self) -> int:
        return sum(k for _, k in self.left)

    def frequency_drop(self) -> Fraction:
        """How much of the truncation range one application consumes."""
        return abs(self.shift) if self.constant != 0 else Fraction(0)


def _factors(*pairs) -> Factors:
    return tuple((Fraction(root), int(mult)) for root, mult in pairs)


@lru_cache(maxsize=None)
def operator_for(case_name: str, side: str) -> PFOperator:
    case = get_case(case_name)
    A = Fraction(case.pf_constant)
    if side == "gw":
        return PFOperator(
            name=f"{case_name}:gw",
            case_name=case_name,
            side="gw",
            derivation_scale=Fraction(1),
            left=_factors((0, 4)),
            constant=A,
            shift=Fraction(1),
            right=tuple((-idx, mult) for idx, mult in case.pf_indices),
        )
    if side == "hybrid":
        if not case.has_lg_side:
            raise UnsupportedCaseError(f"case {case_name!r} has no LG side")
        return PFOperator(
            name=f"{case_name}:hybrid",
            case_name=case_name,
            side="hybrid",
            derivation_scale=Fraction(1, case.d),
            left=_factors((0, 4)),
            constant=A,
            shift=Fraction(-case.d),
            right=tuple((idx, mult) for idx, mult in case.pf_indices),
        )
    raise StructureError(f"unknown side {side!r}")


def _apply_factors(s: FreqSeries, factors: Factors, scale: Fraction) -> FreqSeries:
    """Apply prod (D - root)^mult termwise, D acting as scale*(f + H/z)."""
    nil = s.nilpotency
    terms = {}
    for (f, h), coeff in s.terms.items():
        ev = ZLaurent.one(nil)
        for root, mult in factors:
            base = ZLaurent.eigenvalue(nil, f, scale) - ZLaurent.z_power(nil, 0, root)
            ev = ev * base**mult
        out = ev * coeff
        if not out.is_zero():
            terms[(f, h)] = out
    return FreqSeries(s.case, s.side, s.f_max, terms)


def pf_apply(op: PFOperator, s: FreqSeries) -> FreqSeries:
    """Exact application; result truncated to f_max - |shift|.

    Above that bound the two parts of the operator draw on input frequencies
    past the truncation, so keeping them would manufacture spurious residuals;
    below any natural minimum frequency everything is retained, since those
    are precisely the residuals the annihilation certificate must see.
    """
    if s.case.name != op.case_name or s.side != op.side:
        raise StructureError("operator/series case or side mismatch")
    f_max = s.f_max - op.frequency_drop()
    left = _apply_factors(s, op.left, op.derivation_scale)
    result = FreqSeries(
        s.case,
        s.side,
        f_max,
        {key: c for key, c in left.terms.items() if key[0] <= f_max},
    )
    if op.constant != 0:
        right = _apply_factors(s, op.right, op.derivation_scale)
        shifted = right.shift_freq(op.shift)
        moved = FreqSeries(
            s.case,
            s.side,
            f_max,
            {
                key: c * -op.constant
                for key, c in shifted.terms.items()
                if key[0] <= f_max
            },
        )
        result = result + moved
    return result


@dataclass(frozen=True)
class PFCheckReport:
    operator: str
    f_max: Fraction
    max_verified_frequency: Fraction
    residual: FreqSeries

    @property
    def is_zero(self) -> bool:
        return self.residual.is_zero()

    def to_json_dict(self) -> dict:
        return {
            "operator": self.operator,
            "f_max": format_rational(self.f_max),
            "verified_through": format_rational(self.max_verified_frequency),
            "residual_is_zero": self.is_zero,
            "residual_terms": self.residual.to_json_dict()["terms"],
        }


def pf_check(op: PFOperator, s: FreqSeries) -> PFCheckReport:
    """Annihilation certificate: residual on the guaranteed-complete range."""
    residual = pf_apply(op, s)
    return PFCheckReport(
        operator=op.name,
        f_max=s.f_max,
        max_verified_frequency=s.f_max - op.frequency_drop(),
        residual=residual,
    )


# ----------------------------------------------------------------- Frobenius


@dataclass(frozen=True)
class FrobeniusComponent:
    """One scalar solution: sum over (f, j) of coeff * e^{ft} t^j."""

    sector: int
    level: int
    terms: dict[tuple[Fraction, int], Fraction]

    def leading(self) -> tuple[Fraction, int]:
        return min(self.terms)


@dataclass(frozen=True)
class FrobeniusBasis:
    case: ModelCase
    side: str
    components: tuple[FrobeniusComponent, ...]


def frobenius_components(s: FreqSeries) -> FrobeniusBasis:
    """Expand at z = 1 into the four scalar solutions organized by t-powers.

    The nilpotent exponential e^{(f + H/z)t} contributes t^j H^j / j!, so the
    H^k reading of the series is u_k(t) = sum_f e^{ft} sum_{j<=k} t^j/j! *
    (H^{k-j} part of the coefficient).  On the q side this yields the four
    solutions u_0..u_3 of the maximally unipotent point; on the psi side the
    narrow sectors contribute lg_nilpotency solutions each.
    """
    case, side = s.case, s.side
    nil = s.nilpotency
    if side == "gw" and nil != 4:
        raise StructureError("q-side Frobenius extraction requires nilpotency 4")
    sectors = (0,) if side == "gw" else case.narrow_multiplicities
    collapsed: dict[int, dict[Fraction, tuple[Fraction, ...]]] = {
        h: {} for h in sectors
    }
    for (f, h), coeff in s.terms.items():
        if h not in collapsed:
            raise StructureError(f"unexpected sector {h} in canonical series")
        collapsed[h][f] = coeff.eval_z1().coeffs
    factorial = [1, 1, 2, 6]
    components = []
    for h in sectors:
        for k in range(nil):
            terms: dict[tuple[Fraction, int], Fraction] = {}
            for f, coeffs in collapsed[h].items():
                for j in range(k + 1):
                    c = coeffs[k - j]
                    if c != 0:
                        key = (f, j)
                        terms[key] = terms.get(key, Fraction(0)) + c / factorial[j]
            components.append(
                FrobeniusComponent(sector=h, level=k, terms=terms)
            )
    return FrobeniusBasis(case=case, side=side, components=tuple(components))


def scalar_component(
    basis: FrobeniusBasis, index: int, t_power: int, length: int
) -> list[Fraction]:
    """Integer-grid coefficients of one t-power of one component.

    On the q side the grid is f = 0, 1, 2, ...; on the psi side it is
    f = h, h+d, h+2d, ... for the component's sector h.
    """
    comp = basis.components[index]
    case = basis.case
    if basis.side == "gw":
        base, step = Fraction(0), 1
    else:
        base, step = Fraction(comp.sector), case.d
    out = [Fraction(0)] * length
    for (f, j), c in comp.terms.items():
        if j != t_power:
            continue
        k = (f - base) / step
        if k.denominator != 1 or k < 0:
            raise StructureError("component frequency off the expected grid")
        if int(k) < length:
            out[int(k)] = c
    return out


# -------------------------------------------------------------------- Yukawa


@dataclass(frozen=True)
class YukawaResult:
    case_name: str
    degree: int  # classical triple intersection number, = Y(0)
    pole: Fraction  # location 1/A of the coupling's pole
    y_coefficients: tuple[Fraction, ...]  # B-side coupling, powers of q
    mirror_map: tuple[Fraction, ...]  # q' as a series in q (index = power)
    normalized: tuple[Fraction, ...]  # coupling re-expanded in q'
    instanton: dict[int, int]

    def to_json_dict(self) -> dict:
        return {
            "case": self.case_name,
            "degree": self.degree,
            "pole": format_rational(self.pole),
            "y_series": [format_rational(c) for c in self.y_coefficients],
            "mirror_map": [format_rational(c) for c in self.mirror_map],
            "normalized_coupling": [format_rational(c) for c in self.normalized],
            "instanton_numbers": {str(k): v for k, v in sorted(self.instanton.items())},
            "exact": True,
        }


def _yukawa_closed_form(op: PFOperator, n: int) -> tuple[Fraction, list[Fraction]]:
    """Solve the first-order equation the operator imposes on the coupling.

    Writing the operator as sum_j b_j(q) D^j with b_4 = 1 - A q and
    b_3 = -A e_1 q (e_1 = sum of the shifted indices), the coupling satisfies
    D log Y = -b_3/(2 b_4), i.e. Y = Y_0 (1 - A q)^{-e_1/2}.  Returns the
    exponent e_1/2 and the series of (1 - A q)^{-e_1/2}.
    """
    e1 = sum(-root * mult for root, mult in op.right)
    expo = Fraction(e1, 2)
    series = qseries.binomial_series(-expo, Fraction(-op.constant), n)
    return expo, series


def yukawa(case: ModelCase, n_max: int = 5, order: int | None = None) -> YukawaResult:
    """Triple coupling, normalized coupling, and instanton numbers.

    The classical normalization Y(0) = deg X is forced by the q' -> 0 limit of
    the normalized coupling; integrality of every extracted n_e is asserted,
    never rounded.
    """
    if order is None:
        order = n_max + 5
    op = operator_for(case.name, "gw")
    basis = frobenius_components(i_gw(case, order))
    u0 = scalar_component(basis, 0, 0, order + 1)
    v1 = scalar_component(basis, 1, 0, order + 1)

    _, pole_series = _yukawa_closed_form(op, order)
    y0 = Fraction(case.cy_degree)
    y = [y0 * c for c in pole_series]

    mm = qseries.mul(v1, qseries.inverse(u0, order), order)  # log(q'/q)
    ratio = qseries.exponential(mm, order)  # q'/q
    qprime = [Fraction(0)] + ratio[:order]  # q' as a series in q

    dlog = qseries.logderiv(mm)  # D log(q'/q); so D q'/q' = 1 + dlog
    jacobian = [Fraction(1) + dlog[0]] + dlog[1 : order + 1]
    jac3 = qseries.mul(jacobian, qseries.mul(jacobian, jacobian, order), order)
    denom = qseries.mul(qseries.mul(u0, u0, order), jac3, order)
    k_of_q = qseries.mul(y, qseries.inverse(denom, order), order)

    q_of_qprime = qseries.revert(qprime, order)
    k_normalized = qseries.compose(k_of_q, q_of_qprime, order)

    if k_normalized[0] != y0:
        raise IntegralityError("normalized coupling has the wrong classical limit")
    instanton: dict[int, int] = {}
    for e in range(1, n_max + 1):
        acc = k_normalized[e]
        for div in range(1, e):
            if e % div == 0:
                acc -= Fraction(instanton[div] * div**3)
        n_e = acc / e**3
        if n_e.denominator != 1:
            raise IntegralityError(
                f"instanton number n_{e} is not an integer: {n_e}"
            )
        instanton[e] = int(n_e)

    return YukawaResult(
        case_name=case.name,
        degree=case.cy_degree,
        pole=Fraction(1, case.pf_constant),
        y_coefficients=tuple(y),
        mirror_map=tuple(qprime),
        normalized=tuple(k_normalized),
        instanton=instanton,
    )
