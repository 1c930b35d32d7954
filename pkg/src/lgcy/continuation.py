"""Arbitrary-precision continuation of the order-4 operators in the q-plane.

The common operator, written in coefficient form sum_j c_j(q) F^(j) with

    c_j(q) = S(4,j) q^j - A * rt_j * q^{j+1},

(S = Stirling numbers of the second kind, rt_j the Stirling-transformed
coefficients of the shifted factor) is regular away from {0, 1/A, infinity}.
Solutions are transported by a fixed-order Taylor recurrence: at each center
the local series coefficients follow from the four-term jet, the step size is
a fraction (default 1/2) of the distance to the nearest finite singularity,
and the neglected tail is checked against the precision budget before the
step is accepted.

The q-side Frobenius basis (powers of log q) and the psi-side basis
(q^{-(dk+h)/d} times powers of log q) are evaluated from the exact series
with a tail guard, carried as Euler-derivative jets (F, DF, D^2F, D^3F) for
conditioning, and matched by solving a 4x4 system at the path end.  Every
reported result carries the error budget 10^{-(digits-10)}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .pf import FrobeniusBasis, frobenius_components, operator_for, PFOperator
from .ifunc import i_gw, i_hybrid
from .ring import ModelCase, StructureError

__all__ = [
    "PathError",
    "ConditioningError",
    "PrecisionContext",
    "Path",
    "ConnectionResult",
    "ode_continue",
    "monodromy",
    "connection_matrix",
    "origin_monodromy_pattern",
    "rank_one_defect",
]

_STIRLING2 = {
    (0, 0): 1,
    (1, 1): 1,
    (2, 1): 1, (2, 2): 1,
    (3, 1): 1, (3, 2): 3, (3, 3): 1,
    (4, 1): 1, (4, 2): 7, (4, 3): 6, (4, 4): 1,
}


class PathError(ValueError):
    """Path invalid or too close to a singular point."""


class ConditioningError(ArithmeticError):
    """An endpoint linear system was too ill-conditioned to trust."""


@dataclass(frozen=True)
class PrecisionContext:
    """Requested digits, step-size control, and guard settings."""

    digits: int = 40
    step_fraction: Fraction = Fraction(1, 2)
    guard_digits: int = 15
    taylor_order: int | None = None
    min_clearance: float = 1e-6

    def __post_init__(self) -> None:
        if self.digits < 30:
            raise ValueError("digits must be at least 30")
        if not 0 < self.step_fraction < 1:
            raise ValueError("step_fraction must lie in (0, 1)")

    @property
    def working_dps(self) -> int:
        return self.digits + self.guard_digits

    @property
    def budget(self) -> float:
        return 10.0 ** (-(self.digits - 10))

    def order(self) -> int:
        if self.taylor_order is not None:
            return self.taylor_order
        theta = float(self.step_fraction)
        import math

        return int(self.working_dps * math.log(10) / -math.log(theta)) + 56


@dataclass(frozen=True)
class Path:
    """Piecewise-linear path; waypoints stored as exact (re, im) pairs."""

    waypoints: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self) -> None:
        if len(self.waypoints) < 1:
            raise PathError("a path needs at least one waypoint")

    @classmethod
    def of(cls, points) -> "Path":
        wps = []
        for p in points:
            if isinstance(p, tuple):
                wps.append((Fraction(p[0]), Fraction(p[1])))
            else:
                z = complex(p)
                wps.append((Fraction(z.real), Fraction(z.imag)))
        return cls(tuple(wps))

    @classmethod
    def parse(cls, text: str) -> "Path":
        """Semicolon-separated complex waypoints, e.g. "0.001;0.001+1j;2916"."""
        return cls.of(complex(part.strip()) for part in text.split(";") if part.strip())

    @classmethod
    def dogleg(cls, case: ModelCase, height: Fraction = Fraction(1)) -> "Path":
        """Canonical route: 1/(4A) -> 1/(4A)+iR -> 4A+iR -> 4A.

        Endpoints satisfy |qA| = |A/q| = 1/4, where both Frobenius series
        converge comfortably; the whole route clears the singular point 1/A
        by at least 3/(4A).
        """
        a = case.pf_constant
        qs, qe, r = Fraction(1, 4 * a), Fraction(4 * a), Fraction(height)
        return cls.of([(qs, Fraction(0)), (qs, r), (qe, r), (qe, Fraction(0))])

    @classmethod
    def reflected_dogleg(cls, case: ModelCase, height: Fraction = Fraction(1)) -> "Path":
        return cls.of(
            [(re, -im) for re, im in cls.dogleg(case, height).waypoints]
        )

    @classmethod
    def loop(
        cls,
        center,
        radius,
        segments: int = 12,
        base=None,
        entry_angle: float = 0.0,
    ) -> "Path":
        """Closed counterclockwise polygon around ``center``.

        The polygon starts and ends at ``entry_angle``; if ``base`` is given
        the loop is preceded and followed by the straight run base <-> entry
        point, so the entry angle must be chosen to keep that approach clear
        of singular points.
        """
        import math

        def scaled(trig: float) -> Fraction:
            # keep the radius exact at the axis angles so loop entry points
            # based on exact rationals stay exact
            if trig == 1.0:
                return Fraction(radius)
            if trig == -1.0:
                return -Fraction(radius)
            if trig == 0.0:
                return Fraction(0)
            return Fraction(float(radius) * trig)

        cx, cy = Fraction(center[0]), Fraction(center[1])
        pts = []
        for k in range(segments):
            ang = entry_angle + 2 * math.pi * k / segments
            pts.append((cx + scaled(math.cos(ang)), cy + scaled(math.sin(ang))))
        pts.append(pts[0])  # close the polygon exactly
        if base is not None:
            b = (Fraction(base[0]), Fraction(base[1]))
            pts = [b] + pts + [b]
        return cls.of(pts)

    def endpoints(self) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
        return self.waypoints[0], self.waypoints[-1]

    def validate(self, case: ModelCase, min_clearance: float) -> None:
        """Check every segment keeps the clearance from {0, 1/A}."""
        forbidden = [complex(0, 0), complex(1.0 / case.pf_constant, 0)]
        pts = [complex(float(re), float(im)) for re, im in self.waypoints]
        for p, q in zip(pts, pts[1:]):
            for f in forbidden:
                if _segment_distance(p, q, f) < min_clearance:
                    raise PathError(
                        f"segment {p} -> {q} passes within {min_clearance} "
                        f"of the singular point {f}"
                    )


def _segment_distance(p: complex, q: complex, x: complex) -> float:
    d = q - p
    if d == 0:
        return abs(x - p)
    t = ((x - p).real * d.real + (x - p).imag * d.imag) / (abs(d) ** 2)
    t = min(1.0, max(0.0, t))
    return abs(p + t * d - x)


# ------------------------------------------------------------- ODE stepping


def _ode_coefficients(op: PFOperator) -> list[tuple[Fraction, Fraction]]:
    """(s4j, rtj) per derivative order j: c_j(q) = s4j q^j - A rtj q^{j+1}."""
    right = [Fraction(1)]
    for root, mult in op.right:
        for _ in range(mult):
            right = [
                (right[k - 1] if k >= 1 else Fraction(0))
                - root * (right[k] if k < len(right) else Fraction(0))
                for k in range(len(right) + 1)
            ]
    out = []
    for j in range(5):
        s4j = Fraction(_STIRLING2.get((4, j), 0))
        rtj = sum(
            right[k] * _STIRLING2.get((k, j), 0) for k in range(len(right))
        )
        out.append((s4j, Fraction(rtj)))
    return out


def _local_poly(coeffs, op: PFOperator, q0):
    """Expand each c_j around q0: lists of mpc coefficients in w, degree <= j+1."""
    A = mp.mpf(op.constant.numerator) / mp.mpf(op.constant.denominator)
    out = []
    for j, (s4j, rtj) in enumerate(coeffs):
        deg = j + 1
        poly = [mp.mpc(0)] * (deg + 1)
        if s4j:
            s4 = mp.mpf(s4j.numerator) / mp.mpf(s4j.denominator)
            for m in range(j + 1):
                poly[m] += s4 * mp.binomial(j, m) * q0 ** (j - m)
        if rtj:
            rt = mp.mpf(rtj.numerator) / mp.mpf(rtj.denominator)
            for m in range(j + 2):
                poly[m] -= A * rt * mp.binomial(j + 1, m) * q0 ** (j + 1 - m)
        out.append(poly)
    return out


def _taylor_coefficients(local, jet, order: int):
    """Extend the four Taylor coefficients from the jet to ``order`` via the
    recurrence the ODE imposes."""
    c = [jet[0], jet[1], jet[2] / 2, jet[3] / 6]
    lead = local[4][0]
    for p in range(order - 3):
        acc = mp.mpc(0)
        for j in range(5):
            poly = local[j]
            for m in range(min(p, len(poly) - 1) + 1):
                if j == 4 and m == 0:
                    continue
                if poly[m] == 0:
                    continue
                n = p - m + j
                if n < 4 + p:  # known coefficient
                    ff = 1
                    for i in range(j):
                        ff *= n - i
                    acc += poly[m] * ff * c[n]
        ffl = 1
        for i in range(4):
            ffl *= p + 4 - i
        c.append(-acc / (lead * ffl))
    return c


def _eval_jet(c, h):
    """(F, F', F'', F''') of the Taylor polynomial at displacement h.

    Repeated synthetic division: the four accumulators end as p(h), p'(h),
    p''(h)/2!, p'''(h)/3!.
    """
    f0 = mp.mpc(0)
    f1 = mp.mpc(0)
    f2 = mp.mpc(0)
    f3 = mp.mpc(0)
    for n in range(len(c) - 1, -1, -1):
        f3 = f3 * h + f2
        f2 = f2 * h + f1
        f1 = f1 * h + f0
        f0 = f0 * h + c[n]
    return (f0, f1, 2 * f2, 6 * f3)


def _transport_jets(op: PFOperator, ctx: PrecisionContext, path: Path, jets):
    """Continue a list of (F, F', F'', F''') jets along the path.  Exact
    waypoint landings; raises PathError on step underflow."""
    coeffs = _ode_coefficients(op)
    order = ctx.order()
    theta = mp.mpf(ctx.step_fraction.numerator) / ctx.step_fraction.denominator
    conifold = mp.mpf(1) / int(op.constant)
    tol = mp.mpf(10) ** (-(ctx.working_dps - 2))
    jets = [tuple(mp.mpc(x) for x in jet) for jet in jets]
    pts = [
        mp.mpc(mp.mpf(re.numerator) / re.denominator, mp.mpf(im.numerator) / im.denominator)
        for re, im in path.waypoints
    ]
    current = pts[0]
    for target in pts[1:]:
        while current != target:
            remaining = target - current
            dist = min(abs(current), abs(current - conifold))
            if dist < mp.mpf(10) ** (-ctx.working_dps):
                raise PathError("step size underflow near a singular point")
            step = theta * dist
            if abs(remaining) <= step:
                h = remaining
            else:
                h = remaining / abs(remaining) * step
            local = _local_poly(coeffs, op, current)
            new_jets = []
            for jet in jets:
                c = _taylor_coefficients(local, jet, order)
                tail = sum(abs(c[n]) * abs(h) ** n for n in range(len(c) - 5, len(c)))
                scale = max(mp.mpf(1), abs(jet[0]))
                if tail > tol * scale:
                    raise PathError(
                        "Taylor tail above budget; decrease step_fraction"
                    )
                new_jets.append(_eval_jet(c, h))
            jets = new_jets
            current = target if abs(remaining) <= step else current + h
    return jets


def ode_continue(case: ModelCase, ctx: PrecisionContext, path: Path, initial):
    """Continue one solution, given (value, F', F'', F''') at the start."""
    path.validate(case, ctx.min_clearance)
    op = operator_for(case.name, "gw")
    with mp.workdps(ctx.working_dps):
        return _transport_jets(op, ctx, path, [initial])[0]


# -------------------------------------------------------- basis evaluation


@dataclass(frozen=True)
class _LogFreqFunction:
    """sum coef * q^alpha * (log q)^j, with symbolic Euler derivative."""

    terms: tuple[tuple[Fraction, int, Fraction], ...]

    def euler_derivative(self) -> "_LogFreqFunction":
        acc: dict[tuple[Fraction, int], Fraction] = {}
        for alpha, j, coef in self.terms:
            key = (alpha, j)
            acc[key] = acc.get(key, Fraction(0)) + alpha * coef
            if j:
                key2 = (alpha, j - 1)
                acc[key2] = acc.get(key2, Fraction(0)) + j * coef
        return _LogFreqFunction(
            tuple((a, j, c) for (a, j), c in sorted(acc.items()) if c != 0)
        )

    def eval(self, q) -> mp.mpc:
        logq = mp.log(q)
        powers: dict[Fraction, mp.mpc] = {}
        out = mp.mpc(0)
        for alpha, j, coef in self.terms:
            if alpha not in powers:
                al = mp.mpf(alpha.numerator) / alpha.denominator
                powers[alpha] = mp.exp(al * logq)
            out += (
                mp.mpf(coef.numerator) / coef.denominator
            ) * powers[alpha] * logq**j
        return out


def _basis_functions(case: ModelCase, side: str, order: int) -> list[_LogFreqFunction]:
    """The four Frobenius solutions as functions of q (psi = 1/q on the LG
    side), in the component order of ``frobenius_components``."""
    series = i_gw(case, order) if side == "gw" else i_hybrid(case, order)
    basis: FrobeniusBasis = frobenius_components(series)
    out = []
    for comp in basis.components:
        terms = []
        for (f, j), c in sorted(comp.terms.items()):
            if side == "gw":
                terms.append((f, j, c))
            else:
                # e^{ft} t^j = q^{-f/d} (-1/d)^j (log q)^j
                terms.append(
                    (-f / case.d, j, c * Fraction(-1, case.d) ** j)
                )
        out.append(_LogFreqFunction(tuple(terms)))
    return out


def _series_order(case: ModelCase, side: str, ctx: PrecisionContext) -> int:
    import math

    wd = ctx.working_dps + 5
    a = case.pf_constant
    if side == "gw":
        # coefficient ratio ~ A against |q| = 1/(4A): term ratio 1/4
        return int(wd * math.log(10) / math.log(4)) + 30
    # LG side at psi = 1/(4A): term ratio 1/(4A^2)
    k = int(wd * math.log(10) / math.log(4 * a * a)) + 12
    return case.d * k + case.d


def _jet_matrix(funcs, q, tol) -> list[list[mp.mpc]]:
    """Columns = functions, rows = Euler-derivative jets D^0..D^3 at q."""
    cols = []
    for f in funcs:
        jets = []
        g = f
        for _ in range(4):
            jets.append(g.eval(q))
            g = g.euler_derivative()
        # tail guard: the highest-frequency term must be negligible
        top = max(f.terms, key=lambda t: abs(t[0]))
        contrib = abs(
            mp.mpf(top[2].numerator) / top[2].denominator
        ) * abs(mp.exp(mp.mpf(top[0].numerator) / top[0].denominator * mp.log(q)))
        if contrib > tol * max(mp.mpf(1), abs(jets[0])):
            raise ConditioningError(
                "basis series truncation insufficient at the evaluation point"
            )
        cols.append(jets)
    return [[cols[c][r] for c in range(len(cols))] for r in range(4)]


def _euler_to_plain(jet, q):
    """(F, DF, D2F, D3F) -> (F, F', F'', F''')."""
    f, d1, d2, d3 = jet
    return (
        f,
        d1 / q,
        (d2 - d1) / q**2,
        (d3 - 3 * d2 + 2 * d1) / q**3,
    )


def _plain_to_euler(jet, q):
    f, f1, f2, f3 = jet
    d1 = q * f1
    d2 = d1 + q**2 * f2
    d3 = d1 + 3 * q**2 * f2 + q**3 * f3
    return (f, d1, d2, d3)


def _columns(mat):
    return [tuple(row[c] for row in mat) for c in range(len(mat[0]))]


def _from_columns(cols):
    return [[cols[c][r] for c in range(len(cols))] for r in range(4)]


def _mat(m) -> mp.matrix:
    out = mp.matrix(len(m), len(m[0]))
    for i, row in enumerate(m):
        for j, x in enumerate(row):
            out[i, j] = x
    return out


def _solve(a, b) -> list[list[mp.mpc]]:
    """a^{-1} b for small dense complex matrices."""
    am, bm = _mat(a), _mat(b)
    xm = mp.lu_solve(am, bm) if bm.cols == 1 else am**-1 * bm
    return [[xm[i, j] for j in range(xm.cols)] for i in range(xm.rows)]


def _max_abs(m) -> mp.mpf:
    return max(abs(x) for row in m for x in row)


# ----------------------------------------------------------- public results


@dataclass(frozen=True)
class ConnectionResult:
    case_name: str
    digits: int
    source_basis: str
    target_basis: str
    path: Path
    matrix: tuple[tuple[mp.mpc, ...], ...]
    determinant: mp.mpc
    residual: mp.mpf
    budget: float

    @property
    def invertible(self) -> bool:
        return abs(self.determinant) > self.budget

    def to_json_dict(self) -> dict:
        d = self.digits
        return {
            "case": self.case_name,
            "digits": d,
            "budget": self.budget,
            "source_basis": self.source_basis,
            "target_basis": self.target_basis,
            "path": [
                [float(re), float(im)] for re, im in self.path.waypoints
            ],
            "matrix": [
                [
                    {"re": mp.nstr(x.real, d), "im": mp.nstr(x.imag, d)}
                    for x in row
                ]
                for row in self.matrix
            ],
            "abs_determinant": mp.nstr(abs(self.determinant), 10),
            "invertible": self.invertible,
            "residual": mp.nstr(self.residual, 5),
        }


def _transport_matrix(op, ctx, path, mat_euler, q_from, q_to):
    cols = _columns(mat_euler)
    plain = [_euler_to_plain(c, q_from) for c in cols]
    moved = _transport_jets(op, ctx, path, plain)
    return _from_columns([_plain_to_euler(j, q_to) for j in moved])


def monodromy(
    case: ModelCase,
    ctx: PrecisionContext,
    loop: str = "origin",
    segments: int = 16,
) -> tuple[tuple[mp.mpc, ...], ...]:
    """Loop transport matrix M of the q-side Frobenius basis: the transported
    solution u_k returns as sum_j M[j][k] u_j.

    ``loop`` is "origin" (radius 1/(4A) around q=0), "conifold" (radius
    1/(2A) around q=1/A, entered from the real axis), or "infinity" (radius
    16A around both finite singular points).
    """
    import math

    a = case.pf_constant
    base = (Fraction(1, 4 * a), Fraction(0))
    if loop == "origin":
        path = Path.loop((0, 0), Fraction(1, 4 * a), segments)
    elif loop == "conifold":
        # enter the circle from the left, so the approach segment
        # base -> 1/(2A) stays on the near side of the singular point
        path = Path.loop(
            (Fraction(1, a), 0),
            Fraction(1, 2 * a),
            segments,
            base=base,
            entry_angle=math.pi,
        )
    elif loop == "infinity":
        # enter at the top of the big circle; the approach from the base
        # rises almost vertically and clears the conifold point
        path = Path.loop(
            (0, 0),
            Fraction(16 * a),
            segments,
            base=base,
            entry_angle=math.pi / 2,
        )
    else:
        raise ValueError(f"unknown loop {loop!r}")
    path.validate(case, min(ctx.min_clearance, 1.0 / (8.0 * a)))
    op = operator_for(case.name, "gw")
    with mp.workdps(ctx.working_dps):
        tol = mp.mpf(10) ** (-(ctx.working_dps - 3))
        qb = mp.mpf(path.waypoints[0][0].numerator) / path.waypoints[0][0].denominator
        funcs = _basis_functions(case, "gw", _series_order(case, "gw", ctx))
        b = _jet_matrix(funcs, qb, tol)
        t = _transport_matrix(op, ctx, path, b, qb, qb)
        return tuple(tuple(row) for row in _solve(b, t))


def origin_monodromy_pattern(digits: int) -> tuple[tuple[mp.mpc, ...], ...]:
    """The forced unipotent matrix around q=0: entry (j,k) = (2 pi i)^{k-j}/(k-j)!."""
    import math

    with mp.workdps(digits):
        twopii = 2 * mp.pi * mp.mpc(0, 1)
        return tuple(
            tuple(
                twopii ** (k - j) / math.factorial(k - j) if k >= j else mp.mpc(0)
                for k in range(4)
            )
            for j in range(4)
        )


def rank_one_defect(m) -> tuple[mp.mpf, mp.mpf]:
    """(pivot size, Schur-complement size) of a 4x4 matrix.

    The matrix has rank one exactly when the pivot is nonzero and the Schur
    complement after one full-pivot elimination step vanishes.
    """
    rows = [list(r) for r in m]
    n = len(rows)
    pi, pj = max(
        ((i, j) for i in range(n) for j in range(n)),
        key=lambda ij: abs(rows[ij[0]][ij[1]]),
    )
    pivot = rows[pi][pj]
    sigma = abs(pivot)
    if sigma == 0:
        return (mp.mpf(0), mp.mpf(0))
    defect = mp.mpf(0)
    for i in range(n):
        if i == pi:
            continue
        for j in range(n):
            if j == pj:
                continue
            val = rows[i][j] - rows[i][pj] * rows[pi][j] / pivot
            defect = max(defect, abs(val))
    return (sigma, defect)


def connection_matrix(
    case: ModelCase,
    ctx: PrecisionContext,
    path: Path | None = None,
) -> ConnectionResult:
    """Express the continued q-side Frobenius basis in the psi-side basis.

    Solves the 4x4 system of Euler-derivative jets at the path end, then
    prolongs the transport to twice the endpoint and measures how well the
    solved combination still matches there; that functional residual is the
    reported diagnostic.  Endpoints must be positive reals in the comfortable
    convergence regions (|qA| <= 1/4 at the start, |A/q| <= 1/4 at the end).
    """
    if not case.has_lg_side:
        raise StructureError(f"case {case.name!r} has no LG-side basis")
    if path is None:
        path = Path.dogleg(case)
    path.validate(case, ctx.min_clearance)
    (s_re, s_im), (e_re, e_im) = path.endpoints()
    a = case.pf_constant
    if s_im != 0 or e_im != 0 or s_re <= 0 or e_re <= 0:
        raise PathError("endpoints must be positive reals")
    if s_re * a > Fraction(1, 4) or Fraction(a) / e_re > Fraction(1, 4):
        raise PathError(
            "endpoints must satisfy |qA| <= 1/4 and |A/q| <= 1/4"
        )
    op = operator_for(case.name, "gw")
    with mp.workdps(ctx.working_dps):
        tol = mp.mpf(10) ** (-(ctx.working_dps - 3))
        qs = mp.mpf(s_re.numerator) / s_re.denominator
        qe = mp.mpf(e_re.numerator) / e_re.denominator
        gw_funcs = _basis_functions(case, "gw", _series_order(case, "gw", ctx))
        hyb_funcs = _basis_functions(
            case, "hybrid", _series_order(case, "hybrid", ctx)
        )
        b_start = _jet_matrix(gw_funcs, qs, tol)
        g_end = _transport_matrix(op, ctx, path, b_start, qs, qe)
        h_end = _jet_matrix(hyb_funcs, qe, tol)
        cond_scale = _max_abs(h_end)
        det_h = mp.det(_mat(h_end))
        if abs(det_h) < (mp.mpf(10) ** (-(ctx.digits - 12))) * cond_scale**4:
            raise ConditioningError(
                "endpoint system nearly singular; move the endpoint further "
                "from the singular points"
            )
        c = _solve(h_end, g_end)

        # functional residual: prolong to 2*q_end and re-test the combination
        q2 = 2 * qe
        tail = Path.of([(e_re, Fraction(0)), (2 * e_re, Fraction(0))])
        g2 = _transport_matrix(op, ctx, tail, g_end, qe, q2)
        h2 = _jet_matrix(hyb_funcs, q2, tol)
        hc = _mat(h2) * _mat(c)
        diff = max(
            abs(hc[i, j] - g2[i][j]) for i in range(4) for j in range(4)
        )
        residual = diff / max(mp.mpf(1), _max_abs(g2))

        return ConnectionResult(
            case_name=case.name,
            digits=ctx.digits,
            source_basis="gw-frobenius(q->0)",
            target_basis="hybrid-frobenius(psi->0)",
            path=path,
            matrix=tuple(tuple(row) for row in c),
            determinant=mp.det(_mat(c)),
            residual=residual,
            budget=ctx.budget,
        )
