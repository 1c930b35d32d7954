"""Discrete bookkeeping for the LG-side moduli of decorated curves.

A topological type records genus, the curve class degree beta in P^{r-1}, and
the line-bundle multiplicities m_i at the marked points.  The coarse bundle
degree (2g - 2 + n - beta - sum m_i)/d is an integer exactly when the
selection congruence

    2g - 2 + n - beta - sum_i m_i = 0  (mod d)

holds; components failing it are empty.  ``n_theta`` is the twisted-factor
index attached to a type with a designated last marking, asserted integral,
and ``virtual_dimension`` evaluates

    (N - r - 4)(1 - g) + (r + 1) n - sum_{i,j} c_j m_{i,j} / d

for types whose markings are all narrow (m_{i,j} = m_i c_j mod d nonzero).
The correlator normalization constants (the overall d, the sign (-1)^D, and
the forgetful-map degree) are bookkeeping for correlators this package never
evaluates and enter no computation here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .ring import IntegralityError, ModelCase, StructureError, format_rational

__all__ = [
    "TopologicalType",
    "selection_rule",
    "CoarseDegree",
    "coarse_degree",
    "n_theta",
    "virtual_dimension",
]


@dataclass(frozen=True)
class TopologicalType:
    """(genus, curve degree, marked-point multiplicities)."""

    genus: int
    degree: int
    multiplicities: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.genus < 0 or self.degree < 0:
            raise StructureError("genus and degree must be nonnegative")

    @property
    def n(self) -> int:
        return len(self.multiplicities)

    def validate(self, case: ModelCase) -> None:
        for m in self.multiplicities:
            if not 0 <= m < case.d:
                raise StructureError(
                    f"multiplicity {m} outside 0..{case.d - 1}"
                )


def _selection_lhs(case: ModelCase, theta: TopologicalType) -> int:
    return (
        2 * theta.genus
        - 2
        + theta.n
        - theta.degree
        - sum(theta.multiplicities)
    )


def selection_rule(case: ModelCase, theta: TopologicalType) -> bool:
    """True iff 2g - 2 + n - beta - sum m_i = 0 mod d."""
    theta.validate(case)
    return _selection_lhs(case, theta) % case.d == 0


@dataclass(frozen=True)
class CoarseDegree:
    value: Fraction
    integral: bool

    def to_json_dict(self) -> dict:
        return {"value": format_rational(self.value), "integral": self.integral}


def coarse_degree(case: ModelCase, theta: TopologicalType, j: int = 0) -> CoarseDegree:
    """deg of the coarse j-th bundle power; integral iff the type is selected.

    For weight c_j: c_j (2g - 2 + n - beta)/d - sum_i (m_i c_j mod d)/d.  With
    unit weights this is (2g - 2 + n - beta - sum m_i)/d.
    """
    theta.validate(case)
    if not 0 <= j < case.N:
        raise StructureError(f"bundle index {j} outside 0..{case.N - 1}")
    c = case.weights[j]
    orb = Fraction(c * (2 * theta.genus - 2 + theta.n - theta.degree), case.d)
    drop = sum(Fraction(m * c % case.d, case.d) for m in theta.multiplicities)
    value = orb - drop
    return CoarseDegree(value=value, integral=value.denominator == 1)


def n_theta(case: ModelCase, theta: TopologicalType) -> int:
    """Twisted-factor index of a type with designated last marking.

    (2g - 2 + n - beta - sum_{j<n} i_j)/d + i_bar/d with i_bar = (-i_n) mod d;
    equals the coarse degree when i_n = 0 and coarse degree + 1 otherwise.
    A fractional result means the type violates the selection congruence and
    is rejected, never rounded.
    """
    theta.validate(case)
    if theta.n == 0:
        raise StructureError("n_theta requires a designated last marking")
    i_n = theta.multiplicities[-1]
    i_bar = (-i_n) % case.d
    head = (
        2 * theta.genus
        - 2
        + theta.n
        - theta.degree
        - sum(theta.multiplicities[:-1])
    )
    value = Fraction(head, case.d) + Fraction(i_bar, case.d)
    if value.denominator != 1:
        raise IntegralityError(
            f"n_theta fractional ({value}); type violates the selection rule"
        )
    return int(value)


def virtual_dimension(case: ModelCase, theta: TopologicalType) -> Fraction:
    """(N - r - 4)(1 - g) + (r + 1) n - sum_{i,j} c_j m_{i,j}/d.

    Requires every marking narrow: m_{i,j} = m_i c_j mod d nonzero for all j.
    """
    theta.validate(case)
    drop = Fraction(0)
    for m in theta.multiplicities:
        for c in case.weights:
            m_ij = (m * c) % case.d
            if m_ij == 0:
                raise StructureError(
                    f"broad marking (multiplicity {m}): formula presupposes "
                    "the narrow decomposition"
                )
            drop += Fraction(c * m_ij, case.d)
    return (
        Fraction((case.N - case.r - 4) * (1 - theta.genus))
        + Fraction((case.r + 1) * theta.n)
        - drop
    )
