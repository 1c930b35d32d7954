"""Dense rational power-series helpers (internal plumbing).

A series is a plain list of Fractions, index = power of the variable.  All
routines are exact and truncate at the shorter operand where that is the only
sound choice.
"""

from __future__ import annotations

from fractions import Fraction

__all__ = [
    "mul",
    "inverse",
    "exponential",
    "logderiv",
    "compose",
    "revert",
    "binomial_series",
]


def mul(a: list[Fraction], b: list[Fraction], n: int) -> list[Fraction]:
    """Product through order n (inclusive)."""
    out = [Fraction(0)] * (n + 1)
    for i, x in enumerate(a[: n + 1]):
        if x == 0:
            continue
        for j in range(min(n - i, len(b) - 1) + 1):
            if b[j] != 0:
                out[i + j] += x * b[j]
    return out


def inverse(a: list[Fraction], n: int) -> list[Fraction]:
    """Reciprocal through order n; requires a[0] != 0."""
    if not a or a[0] == 0:
        raise ZeroDivisionError("series has no reciprocal: constant term is zero")
    out = [Fraction(0)] * (n + 1)
    out[0] = Fraction(1) / a[0]
    for m in range(1, n + 1):
        s = Fraction(0)
        for k in range(1, min(m, len(a) - 1) + 1):
            s += a[k] * out[m - k]
        out[m] = -s / a[0]
    return out


def exponential(a: list[Fraction], n: int) -> list[Fraction]:
    """exp of a series with zero constant term, via E' = a' E."""
    if a and a[0] != 0:
        raise ValueError("exponential requires zero constant term")
    out = [Fraction(0)] * (n + 1)
    out[0] = Fraction(1)
    for m in range(1, n + 1):
        s = Fraction(0)
        for k in range(1, min(m, len(a) - 1) + 1):
            s += k * a[k] * out[m - k]
        out[m] = s / m
    return out


def logderiv(a: list[Fraction]) -> list[Fraction]:
    """The Euler derivative q d/dq applied termwise: k * a_k."""
    return [Fraction(k) * c for k, c in enumerate(a)]


def compose(outer: list[Fraction], inner: list[Fraction], n: int) -> list[Fraction]:
    """outer(inner(q)) through order n; inner must have zero constant term."""
    if inner and inner[0] != 0:
        raise ValueError("compose requires inner constant term zero")
    out = [Fraction(0)] * (n + 1)
    power = [Fraction(0)] * (n + 1)
    power[0] = Fraction(1)
    if outer:
        out[0] = outer[0]
    for k in range(1, len(outer)):
        power = mul(power, inner, n)
        if outer[k] == 0:
            continue
        for m in range(n + 1):
            out[m] += outer[k] * power[m]
        if all(c == 0 for c in power):
            break
    return out


def revert(a: list[Fraction], n: int) -> list[Fraction]:
    """Compositional inverse of a = q + a_2 q^2 + ... through order n.

    Coefficientwise Newton-free recursion: impose a(b(w)) = w order by order.
    """
    if len(a) < 2 or a[0] != 0 or a[1] == 0:
        raise ValueError("revert requires a series q*(unit)")
    b = [Fraction(0)] * (n + 1)
    if n >= 1:
        b[1] = Fraction(1) / a[1]
    for m in range(2, n + 1):
        comp = compose(a[: m + 1], b[:m] + [Fraction(0)], m)
        # a(b)(w) agrees with w below order m; the order-m defect is linear
        # in the unknown b_m with coefficient a_1.
        b[m] = -comp[m] / a[1]
    return b


def binomial_series(alpha: Fraction, x_coeff: Fraction, n: int) -> list[Fraction]:
    """(1 + x_coeff*q)^alpha through order n."""
    out = [Fraction(1)]
    c = Fraction(1)
    for k in range(1, n + 1):
        c = c * (Fraction(alpha) - (k - 1)) / k
        out.append(c * x_coeff**k)
    return out
