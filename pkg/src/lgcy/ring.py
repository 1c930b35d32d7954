"""Exact scalar arithmetic and the truncated rings Q[H]/(H^s).

Every coefficient in the package is an exact rational number; the cohomology
classes they multiply live in Q[H]/(H^s) for a hyperplane class H that is
nilpotent of a case-dependent order s (s = 2 on a projective line, s = 4 on a
projective threefold).  ``HPoly`` implements that truncated ring: products drop
all powers H^k with k >= s, and inverses of units are computed by the finite
geometric series in the nilpotent part.

``ModelCase`` is the closed enumeration of geometries the package knows about:
the intersection of two cubics in P^5, the intersection of four quadrics in
P^7, and the quintic hypersurface in P^4 (which carries Gromov-Witten-side
data only).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "Rational",
    "StructureError",
    "NonUnitError",
    "UnsupportedCaseError",
    "IntegralityError",
    "parse_rational",
    "format_rational",
    "HPoly",
    "ModelCase",
    "CASES",
    "get_case",
]

Rational = Fraction

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


class StructureError(ValueError):
    """Operands live in incompatible rings, cases, or sides."""


class NonUnitError(ZeroDivisionError):
    """Inversion of an element whose constant term vanishes."""


class UnsupportedCaseError(ValueError):
    """The requested operation is not defined for this model case."""


class IntegralityError(ValueError):
    """A quantity that must be an integer came out fractional."""


def parse_rational(text: str) -> Fraction:
    """Parse the wire format: "p/q" or the integer shorthand "p"."""
    text = text.strip()
    if not _RATIONAL_RE.match(text):
        raise ValueError(f"not a rational literal: {text!r}")
    return Fraction(text)


def format_rational(x: Fraction) -> str:
    """Canonical wire format "p/q" (denominator always explicit)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class HPoly:
    """Element of Q[H]/(H^s): ``coeffs[k]`` is the coefficient of H^k.

    Values are immutable; all operations return fresh instances and are exact.
    """

    nilpotency: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.nilpotency <= 0:
            raise StructureError("nilpotency must be positive")
        if len(self.coeffs) != self.nilpotency:
            raise StructureError(
                f"expected {self.nilpotency} coefficients, got {len(self.coeffs)}"
            )

    @classmethod
    def of(cls, nilpotency: int, coeffs) -> "HPoly":
        """Build from any iterable of rational-like values, padding with zeros."""
        cs = [Fraction(c) for c in coeffs]
        if len(cs) > nilpotency:
            cs = cs[:nilpotency]
        cs.extend([Fraction(0)] * (nilpotency - len(cs)))
        return cls(nilpotency, tuple(cs))

    @classmethod
    def zero(cls, nilpotency: int) -> "HPoly":
        return cls.of(nilpotency, [])

    @classmethod
    def one(cls, nilpotency: int) -> "HPoly":
        return cls.of(nilpotency, [1])

    @classmethod
    def constant(cls, nilpotency: int, value) -> "HPoly":
        return cls.of(nilpotency, [Fraction(value)])

    @classmethod
    def h(cls, nilpotency: int) -> "HPoly":
        """The class H itself (requires s >= 2)."""
        if nilpotency < 2:
            raise StructureError("H is zero when the nilpotency is 1")
        return cls.of(nilpotency, [0, 1])

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def _check(self, other: "HPoly") -> None:
        if self.nilpotency != other.nilpotency:
            raise StructureError(
                f"nilpotency mismatch: {self.nilpotency} vs {other.nilpotency}"
            )

    def __add__(self, other: "HPoly") -> "HPoly":
        self._check(other)
        return HPoly(
            self.nilpotency,
            tuple(a + b for a, b in zip(self.coeffs, other.coeffs)),
        )

    def __sub__(self, other: "HPoly") -> "HPoly":
        self._check(other)
        return HPoly(
            self.nilpotency,
            tuple(a - b for a, b in zip(self.coeffs, other.coeffs)),
        )

    def __neg__(self) -> "HPoly":
        return HPoly(self.nilpotency, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, HPoly):
            self._check(other)
            s = self.nilpotency
            out = [Fraction(0)] * s
            for i, a in enumerate(self.coeffs):
                if a == 0:
                    continue
                for j in range(s - i):
                    b = other.coeffs[j]
                    if b != 0:
                        out[i + j] += a * b
            return HPoly(s, tuple(out))
        scalar = Fraction(other)
        return HPoly(self.nilpotency, tuple(scalar * a for a in self.coeffs))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "HPoly":
        if n < 0:
            return self.invert() ** (-n)
        out = HPoly.one(self.nilpotency)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def invert(self) -> "HPoly":
        """Multiplicative inverse via the finite geometric series.

        Writing a = a0(1 + n) with n nilpotent, the inverse is
        (1/a0) sum_{k<s} (-n)^k.  Requires a0 != 0.
        """
        a0 = self.coeffs[0]
        if a0 == 0:
            raise NonUnitError("constant term vanishes; element is not a unit")
        nil = HPoly(
            self.nilpotency,
            (Fraction(0),) + tuple(-c / a0 for c in self.coeffs[1:]),
        )
        acc = HPoly.one(self.nilpotency)
        power = HPoly.one(self.nilpotency)
        for _ in range(1, self.nilpotency):
            power = power * nil
            if power.is_zero():
                break
            acc = acc + power
        return acc * (Fraction(1) / a0)

    def __str__(self) -> str:
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                parts.append(str(c))
            elif k == 1:
                parts.append(f"({c})*H")
            else:
                parts.append(f"({c})*H^{k}")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class ModelCase:
    """Immutable descriptor of one geometry.

    N variables, r polynomials of common degree d, weights c_j (all 1 for the
    supported cases).  The LG-side sector rings are Q[H]/(H^lg_nilpotency);
    the GW side always works in Q[H]/(H^4).  ``pf_constant`` is the constant A
    in front of the shifted factor of the order-4 operator, ``pf_indices`` the
    fractional indices with multiplicities, ``narrow_multiplicities`` the
    narrow sector labels, and the ``ihyb_*`` exponents the numerator /
    denominator / scale exponents of the LG-side hypergeometric series.
    """

    name: str
    N: int
    r: int
    d: int
    weights: tuple[int, ...]
    pf_constant: int
    pf_indices: tuple[tuple[Fraction, int], ...]
    narrow_multiplicities: tuple[int, ...]
    gw_nilpotency: int = 4
    lg_nilpotency: int | None = None
    ihyb_num_exp: int | None = None
    ihyb_den_exp: int | None = None
    ihyb_scale_exp: int | None = None

    def __post_init__(self) -> None:
        if self.d * self.r != sum(self.weights):
            raise StructureError("Calabi-Yau condition d*r = sum(c_j) violated")

    @property
    def charges(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.d) for c in self.weights)

    @property
    def ci_degrees(self) -> tuple[int, ...]:
        """Degrees of the complete intersection: (d, ..., d) with r entries."""
        return (self.d,) * self.r

    @property
    def cy_degree(self) -> int:
        """deg X = d^r (9, 16, 5)."""
        return self.d**self.r

    @property
    def has_lg_side(self) -> bool:
        return self.lg_nilpotency is not None

    def ring_nilpotency(self, side: str) -> int:
        if side == "gw":
            return self.gw_nilpotency
        if side == "hybrid":
            if self.lg_nilpotency is None:
                raise UnsupportedCaseError(
                    f"case {self.name!r} carries no LG-side data"
                )
            return self.lg_nilpotency
        raise StructureError(f"unknown side {side!r}")


CASES: dict[str, ModelCase] = {
    "cubic33": ModelCase(
        name="cubic33",
        N=6,
        r=2,
        d=3,
        weights=(1,) * 6,
        pf_constant=3**6,
        pf_indices=((Fraction(1, 3), 2), (Fraction(2, 3), 2)),
        narrow_multiplicities=(1, 2),
        lg_nilpotency=2,
        ihyb_num_exp=4,
        ihyb_den_exp=2,
        ihyb_scale_exp=6,
    ),
    "quadric2222": ModelCase(
        name="quadric2222",
        N=8,
        r=4,
        d=2,
        weights=(1,) * 8,
        pf_constant=2**8,
        pf_indices=((Fraction(1, 2), 4),),
        narrow_multiplicities=(1,),
        lg_nilpotency=4,
        ihyb_num_exp=4,
        ihyb_den_exp=4,
        ihyb_scale_exp=8,
    ),
    "quintic": ModelCase(
        name="quintic",
        N=5,
        r=1,
        d=5,
        weights=(1,) * 5,
        pf_constant=5**5,
        pf_indices=tuple((Fraction(k, 5), 1) for k in (1, 2, 3, 4)),
        narrow_multiplicities=(),
        lg_nilpotency=None,
    ),
}


def get_case(name: str) -> ModelCase:
    try:
        return CASES[name]
    except KeyError:
        raise UnsupportedCaseError(
            f"unknown case {name!r}; expected one of {sorted(CASES)}"
        ) from None
