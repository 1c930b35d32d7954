"""Sector enumeration, age shifts, and the graded state-space match.

Each multiplicity m in {0, ..., d-1} indexes a sector with phases
Theta_j = <m c_j / d> and age shift iota = sum_j (Theta_j - q_j); a sector is
narrow when no phase vanishes.  Narrow sectors contribute a copy of
H^*(P^{r-1}) shifted up in degree by 2*iota, the broad sector a middle block
in degree 3 whose dimension 2 + 2 h^{2,1} is produced from the Calabi-Yau
side: h^{2,1} = 1 - chi/2, with chi computed by the Chern-coefficient oracle

    chi(X) = (prod d_i) * [h^3] (1+h)^{ambient+1} / prod (1 + d_i h)

in Q[h]/(h^4).  The correspondence check is the degree-by-degree equality of
the two graded dimension tables (h^{1,1} = 1 is forced for these ambient
restrictions).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .ring import HPoly, IntegralityError, ModelCase, UnsupportedCaseError, format_rational

__all__ = [
    "age_shift",
    "SectorReport",
    "sector_report",
    "euler_characteristic",
    "StateSpaceReport",
    "correspondence_check",
]


def age_shift(case: ModelCase, m: int) -> Fraction:
    """sum_j (<m c_j/d> - q_j) for the sector of multiplicity m."""
    if not 0 <= m < case.d:
        raise ValueError(f"multiplicity {m} outside 0..{case.d - 1}")
    total = Fraction(0)
    for c in case.weights:
        theta = Fraction(m * c % case.d, case.d)
        total += theta - Fraction(c, case.d)
    return total


@dataclass(frozen=True)
class SectorReport:
    multiplicity: int
    thetas: tuple[Fraction, ...]
    age: Fraction
    narrow: bool
    poincare: dict[int, int]

    def to_json_dict(self) -> dict:
        return {
            "multiplicity": self.multiplicity,
            "thetas": [format_rational(t) for t in self.thetas],
            "age": format_rational(self.age),
            "narrow": self.narrow,
            "poincare": {str(k): v for k, v in sorted(self.poincare.items())},
        }


def sector_report(case: ModelCase, m: int) -> SectorReport:
    thetas = tuple(Fraction(m * c % case.d, case.d) for c in case.weights)
    age = age_shift(case, m)
    narrow = all(t != 0 for t in thetas)
    poincare: dict[int, int] = {}
    if narrow:
        # narrow sector = H^*(P^{r-1}) shifted by twice the age
        shift = 2 * age
        if shift.denominator != 1:
            raise IntegralityError("narrow sector with fractional degree shift")
        for k in range(case.r):
            poincare[2 * k + int(shift)] = 1
    return SectorReport(m, thetas, age, narrow, poincare)


def euler_characteristic(degrees: list[int] | tuple[int, ...], ambient_dim: int) -> int:
    """chi of a threefold complete intersection of the given degrees.

    Chern-coefficient oracle: degree times the h^3 coefficient of
    (1+h)^{ambient_dim+1} / prod (1 + d_i h), expanded in Q[h]/(h^4).
    """
    degrees = tuple(int(d) for d in degrees)
    if ambient_dim - len(degrees) != 3:
        raise ValueError("oracle covers threefold complete intersections only")
    s = 4
    poly = (HPoly.one(s) + HPoly.h(s)) ** (ambient_dim + 1)
    for d in degrees:
        poly = poly * (HPoly.one(s) + HPoly.h(s) * d).invert()
    total_degree = 1
    for d in degrees:
        total_degree *= d
    chi = poly.coeffs[3] * total_degree
    if chi.denominator != 1:
        raise IntegralityError("Euler characteristic came out fractional")
    return int(chi)


@dataclass(frozen=True)
class StateSpaceReport:
    case_name: str
    sectors: tuple[SectorReport, ...]
    chi: int
    h21: int
    middle_dimension: int
    lg_poincare: dict[int, int]
    cy_poincare: dict[int, int]
    match: bool

    def to_json_dict(self) -> dict:
        return {
            "case": self.case_name,
            "sectors": [s.to_json_dict() for s in self.sectors],
            "chi": self.chi,
            "h21": self.h21,
            "middle_dimension": self.middle_dimension,
            "lg_poincare": {str(k): v for k, v in sorted(self.lg_poincare.items())},
            "cy_poincare": {str(k): v for k, v in sorted(self.cy_poincare.items())},
            "match": self.match,
        }


def correspondence_check(case: ModelCase) -> StateSpaceReport:
    """Degree-by-degree match of the two graded state spaces.

    LG side: narrow sectors shifted by twice their ages, plus the broad
    middle block of dimension 2 + 2 h^{2,1} in degree 3.  CY side: one
    ambient class in each even degree 0..6 (h^{1,1} = 1 is forced here) plus
    dim H^3 = 2 + 2 h^{2,1} from chi = 2 (h^{1,1} - h^{2,1}).
    """
    if not case.has_lg_side:
        raise UnsupportedCaseError(f"case {case.name!r} has no LG side")
    chi = euler_characteristic(case.ci_degrees, case.N - 1)
    if chi % 2 != 0:
        raise IntegralityError("odd Euler characteristic for a threefold")
    h21 = 1 - chi // 2
    middle = 2 + 2 * h21

    sectors = tuple(sector_report(case, m) for m in range(case.d))
    lg: dict[int, int] = {}
    for sec in sectors:
        if sec.narrow:
            for deg, dim in sec.poincare.items():
                lg[deg] = lg.get(deg, 0) + dim
        else:
            lg[3] = lg.get(3, 0) + middle
    # attach the broad block to its report for the JSON table
    sectors = tuple(
        sec if sec.narrow else SectorReport(
            sec.multiplicity, sec.thetas, sec.age, sec.narrow, {3: middle}
        )
        for sec in sectors
    )

    cy = {0: 1, 2: 1, 4: 1, 6: 1, 3: middle}
    return StateSpaceReport(
        case_name=case.name,
        sectors=sectors,
        chi=chi,
        h21=h21,
        middle_dimension=middle,
        lg_poincare=lg,
        cy_poincare=cy,
        match=lg == cy,
    )
