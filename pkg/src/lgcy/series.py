"""Laurent-in-z and exponential-frequency series.

``ZLaurent`` is a finite Laurent polynomial in z with ``HPoly`` coefficients,
together with a validity window: arithmetic narrows the window to the range on
which both operands are complete and records it.  Exactly constructed values
carry the unbounded window, so the bookkeeping is invisible until a truncated
object enters a computation.

``FreqSeries`` is the uniform carrier for every I- and J-type series in the
package: a finite sum

    sum over (f, h) of  e^{(f + H^{(h)}/z) t} * c_{f,h},

with rational frequencies f, sector tags h, and ZLaurent coefficients c_{f,h}.
d/dt acts termwise as multiplication by (f + H^{(h)}/z); multiplication by
e^{ct} shifts frequencies.  A hard truncation bound ``f_max`` is fixed at
construction and is monotonically non-increasing under every operation, so a
zero residual can never be an artifact of silent extension.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .ring import (
    HPoly,
    ModelCase,
    StructureError,
    NonUnitError,
    format_rational,
    get_case,
    parse_rational,
)

__all__ = ["ZLaurent", "FreqSeries", "SIDES"]

SIDES = ("gw", "hybrid")

_Window = tuple[int | None, int | None]
_FULL: _Window = (None, None)


def _window_intersect(a: _Window, b: _Window) -> _Window:
    lo = a[0] if b[0] is None else (b[0] if a[0] is None else max(a[0], b[0]))
    hi = a[1] if b[1] is None else (b[1] if a[1] is None else min(a[1], b[1]))
    return (lo, hi)


def _in_window(e: int, w: _Window) -> bool:
    lo, hi = w
    return (lo is None or e >= lo) and (hi is None or e <= hi)


@dataclass(frozen=True)
class ZLaurent:
    """Finite Laurent polynomial in z over Q[H]/(H^s), with validity window."""

    nilpotency: int
    terms: dict[int, HPoly] = field(default_factory=dict)
    window: _Window = _FULL

    def __post_init__(self) -> None:
        clean = {}
        for e, c in self.terms.items():
            if c.nilpotency != self.nilpotency:
                raise StructureError("coefficient ring mismatch in ZLaurent")
            if not _in_window(e, self.window):
                continue
            if not c.is_zero():
                clean[int(e)] = c
        object.__setattr__(self, "terms", clean)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nilpotency: int) -> "ZLaurent":
        return cls(nilpotency)

    @classmethod
    def one(cls, nilpotency: int) -> "ZLaurent":
        return cls(nilpotency, {0: HPoly.one(nilpotency)})

    @classmethod
    def z_power(cls, nilpotency: int, exp: int, coeff=1) -> "ZLaurent":
        return cls(nilpotency, {exp: HPoly.constant(nilpotency, coeff)})

    @classmethod
    def monomial(cls, exp: int, coeff: HPoly) -> "ZLaurent":
        return cls(coeff.nilpotency, {exp: coeff})

    @classmethod
    def linear_h(cls, nilpotency: int, a, b) -> "ZLaurent":
        """The element a*H + b*z."""
        h = HPoly.of(nilpotency, [0, a]) if nilpotency >= 2 else HPoly.zero(nilpotency)
        return cls(nilpotency, {0: h, 1: HPoly.constant(nilpotency, b)})

    @classmethod
    def eigenvalue(cls, nilpotency: int, f, scale=1) -> "ZLaurent":
        """The termwise derivative eigenvalue scale*(f + H/z)."""
        s = Fraction(scale)
        h = (
            HPoly.of(nilpotency, [0, s])
            if nilpotency >= 2
            else HPoly.zero(nilpotency)
        )
        return cls(
            nilpotency,
            {0: HPoly.constant(nilpotency, s * Fraction(f)), -1: h},
        )

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, exp: int) -> HPoly:
        return self.terms.get(exp, HPoly.zero(self.nilpotency))

    def support(self) -> tuple[int, int] | None:
        if not self.terms:
            return None
        return (min(self.terms), max(self.terms))

    def _check(self, other: "ZLaurent") -> None:
        if self.nilpotency != other.nilpotency:
            raise StructureError("nilpotency mismatch between ZLaurent operands")

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "ZLaurent") -> "ZLaurent":
        self._check(other)
        window = _window_intersect(self.window, other.window)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return ZLaurent(self.nilpotency, terms, window)

    def __sub__(self, other: "ZLaurent") -> "ZLaurent":
        return self + (-other)

    def __neg__(self) -> "ZLaurent":
        return ZLaurent(
            self.nilpotency, {e: -c for e, c in self.terms.items()}, self.window
        )

    def __mul__(self, other):
        if isinstance(other, ZLaurent):
            self._check(other)
            window = self._product_window(other)
            terms: dict[int, HPoly] = {}
            for ea, ca in self.terms.items():
                for eb, cb in other.terms.items():
                    e = ea + eb
                    c = ca * cb
                    if c.is_zero():
                        continue
                    terms[e] = terms[e] + c if e in terms else c
            return ZLaurent(self.nilpotency, terms, window)
        if isinstance(other, HPoly):
            return ZLaurent(
                self.nilpotency,
                {e: c * other for e, c in self.terms.items()},
                self.window,
            )
        scalar = Fraction(other)
        return ZLaurent(
            self.nilpotency,
            {e: c * scalar for e, c in self.terms.items()},
            self.window,
        )

    __rmul__ = __mul__

    def _product_window(self, other: "ZLaurent") -> _Window:
        # Completeness of the product at exponent e requires every contributing
        # pair to be known: unknown terms of one factor beyond its window can
        # only pollute exponents past (window edge + stored support edge) of
        # the other factor.
        def bound_hi(w: _Window, support: tuple[int, int] | None):
            if w[1] is None or support is None:
                return None
            return w[1] + support[0]

        def bound_lo(w: _Window, support: tuple[int, int] | None):
            if w[0] is None or support is None:
                return None
            return w[0] + support[1]

        his = [
            b
            for b in (
                bound_hi(self.window, other.support()),
                bound_hi(other.window, self.support()),
            )
            if b is not None
        ]
        los = [
            b
            for b in (
                bound_lo(self.window, other.support()),
                bound_lo(other.window, self.support()),
            )
            if b is not None
        ]
        return (max(los) if los else None, min(his) if his else None)

    def __pow__(self, n: int) -> "ZLaurent":
        if n < 0:
            return self.invert() ** (-n)
        out = ZLaurent.one(self.nilpotency)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift_z(self, k: int) -> "ZLaurent":
        lo, hi = self.window
        window = (None if lo is None else lo + k, None if hi is None else hi + k)
        return ZLaurent(
            self.nilpotency, {e + k: c for e, c in self.terms.items()}, window
        )

    def invert(self) -> "ZLaurent":
        """Exact inverse when one exists as a finite Laurent polynomial.

        Factor z^hi out of the top exponent; the rest must be a unit constant
        plus a nilpotent tail (each step down in z carries at least one H for
        the products this package inverts).  Guarded: verified by multiplying
        back, so a non-terminating geometric series is reported, not looped.
        """
        if self.window != _FULL:
            raise StructureError("refusing to invert a truncated ZLaurent")
        if self.is_zero():
            raise NonUnitError("zero is not invertible")
        hi = max(self.terms)
        head = self.coeff(hi)
        if head.coeffs[0] == 0:
            raise NonUnitError("leading z-coefficient is not a unit")
        head_inv = head.invert()
        # self = z^hi * (head + tail), tail strictly below exponent 0 after shift
        tail = (self.shift_z(-hi) - ZLaurent.monomial(0, head)) * head_inv
        acc = ZLaurent.one(self.nilpotency)
        power = ZLaurent.one(self.nilpotency)
        for _ in range(self.nilpotency):
            power = power * -tail
            if power.is_zero():
                break
            acc = acc + power
        result = (acc * head_inv).shift_z(-hi)
        if not (result * self - ZLaurent.one(self.nilpotency)).is_zero():
            raise NonUnitError("element has no finite Laurent inverse")
        return result

    def eval_z1(self) -> HPoly:
        """Collapse z -> 1 (used when extracting Frobenius solutions)."""
        out = HPoly.zero(self.nilpotency)
        for c in self.terms.values():
            out = out + c
        return out

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for e in sorted(self.terms, reverse=True):
            bits.append(f"({self.terms[e]})*z^{e}")
        return " + ".join(bits)


@dataclass(frozen=True)
class FreqSeries:
    """Finite sum of e^{(f + H^{(h)}/z) t} terms with ZLaurent coefficients."""

    case: ModelCase
    side: str
    f_max: Fraction
    terms: dict[tuple[Fraction, int], ZLaurent] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.side not in SIDES:
            raise StructureError(f"unknown side {self.side!r}")
        s = self.case.ring_nilpotency(self.side)
        clean = {}
        for (f, h), c in self.terms.items():
            f = Fraction(f)
            if c.nilpotency != s:
                raise StructureError("coefficient nilpotency does not match side")
            if f > self.f_max:
                raise StructureError("term frequency exceeds f_max")
            if not c.is_zero():
                clean[(f, int(h))] = c
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "f_max", Fraction(self.f_max))

    # -- structure ---------------------------------------------------------

    @property
    def nilpotency(self) -> int:
        return self.case.ring_nilpotency(self.side)

    def is_zero(self) -> bool:
        return not self.terms

    def term(self, f, h: int) -> ZLaurent:
        return self.terms.get(
            (Fraction(f), h), ZLaurent.zero(self.nilpotency)
        )

    def support(self) -> list[tuple[Fraction, int]]:
        return sorted(self.terms)

    def _check(self, other: "FreqSeries") -> None:
        if self.case.name != other.case.name or self.side != other.side:
            raise StructureError("case/side mismatch between series")

    # -- operations ----------------------------------------------------------

    def ddt(self) -> "FreqSeries":
        """d/dt: multiply each coefficient by its eigenvalue (f + H/z)."""
        s = self.nilpotency
        terms = {
            (f, h): ZLaurent.eigenvalue(s, f) * c
            for (f, h), c in self.terms.items()
        }
        return FreqSeries(self.case, self.side, self.f_max, terms)

    def shift_freq(self, c) -> "FreqSeries":
        """Multiply by e^{ct}: f -> f + c.

        Terms drifting above f_max are dropped (they would be incomplete);
        terms drifting below any natural minimum are retained, since they are
        exactly the residuals annihilation checks must see.
        """
        c = Fraction(c)
        terms = {}
        for (f, h), coeff in self.terms.items():
            if f + c > self.f_max:
                continue
            terms[(f + c, h)] = coeff
        return FreqSeries(self.case, self.side, self.f_max, terms)

    def __add__(self, other: "FreqSeries") -> "FreqSeries":
        self._check(other)
        f_max = min(self.f_max, other.f_max)
        terms: dict[tuple[Fraction, int], ZLaurent] = {}
        for (f, h), c in list(self.terms.items()) + list(other.terms.items()):
            if f > f_max:
                continue
            key = (f, h)
            terms[key] = terms[key] + c if key in terms else c
        return FreqSeries(self.case, self.side, f_max, terms)

    def __sub__(self, other: "FreqSeries") -> "FreqSeries":
        return self + other.scale_rational(-1)

    def scale_rational(self, k) -> "FreqSeries":
        k = Fraction(k)
        return FreqSeries(
            self.case,
            self.side,
            self.f_max,
            {key: c * k for key, c in self.terms.items()},
        )

    def scale(self, k: ZLaurent) -> "FreqSeries":
        """Scale by a z-Laurent polynomial over scalars (H-free)."""
        for e, c in k.terms.items():
            if any(x != 0 for x in c.coeffs[1:]):
                raise StructureError("scale expects an H-free ZLaurent")
        s = self.nilpotency
        lifted = ZLaurent(
            s,
            {e: HPoly.constant(s, c.coeffs[0]) for e, c in k.terms.items()},
            k.window,
        )
        return FreqSeries(
            self.case,
            self.side,
            self.f_max,
            {key: c * lifted for key, c in self.terms.items()},
        )

    def truncate(self, f_max) -> "FreqSeries":
        f_max = Fraction(f_max)
        if f_max > self.f_max:
            raise StructureError("truncate cannot extend a series")
        return FreqSeries(
            self.case,
            self.side,
            f_max,
            {key: c for key, c in self.terms.items() if key[0] <= f_max},
        )

    # -- serialization -------------------------------------------------------

    def to_json_dict(self) -> dict:
        entries = []
        for f, h in self.support():
            c = self.terms[(f, h)]
            zrows = []
            for e in sorted(c.terms):
                zrows.append(
                    {
                        "exp": e,
                        "H": [format_rational(x) for x in c.terms[e].coeffs],
                    }
                )
            row = {"f": format_rational(f), "sector": h, "z": zrows}
            if c.window != _FULL:
                row["window"] = list(c.window)
            entries.append(row)
        return {
            "side": self.side,
            "case": self.case.name,
            "f_max": format_rational(self.f_max),
            "terms": entries,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "FreqSeries":
        case = get_case(data["case"])
        side = data["side"]
        s = case.ring_nilpotency(side)
        terms = {}
        for row in data["terms"]:
            coeff_terms = {
                int(zr["exp"]): HPoly.of(s, [parse_rational(x) for x in zr["H"]])
                for zr in row["z"]
            }
            window = tuple(row.get("window", _FULL))
            zl = ZLaurent(s, coeff_terms, (window[0], window[1]))
            terms[(parse_rational(row["f"]), int(row["sector"]))] = zl
        return cls(case, side, parse_rational(data["f_max"]), terms)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FreqSeries):
            return NotImplemented
        return (
            self.case.name == other.case.name
            and self.side == other.side
            and self.f_max == other.f_max
            and self.terms == other.terms
        )
