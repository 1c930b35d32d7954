"""The acceptance gate: every criterion with its pinned tolerance.

Each criterion function returns a ``CriterionResult`` carrying pass/fail, a
one-line summary, and elapsed time; ``run_all`` executes the list in order.
The CLI subcommand ``verify-all`` and the acceptance test module both drive
exactly these functions, so the gate has a single source of truth.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import mpmath as mp

from .continuation import (
    Path,
    PrecisionContext,
    connection_matrix,
    monodromy,
    origin_monodromy_pattern,
    rank_one_defect,
)
from .ifunc import assemble_hybrid_via_mtheta, i_gw, i_hybrid
from .mirror import closed_form_crosscheck
from .moduli import TopologicalType, coarse_degree, n_theta, selection_rule, virtual_dimension
from .pf import operator_for, pf_check, yukawa
from .ring import IntegralityError, get_case
from .statespace import correspondence_check, euler_characteristic

__all__ = ["CriterionResult", "CRITERIA", "run_all"]


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    elapsed: float
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status} criterion {self.number} [{self.name}] "
            f"({self.elapsed:.1f}s): {self.detail}"
        )

    def to_json_dict(self) -> dict:
        return {
            "criterion": self.number,
            "name": self.name,
            "passed": self.passed,
            "elapsed_seconds": round(self.elapsed, 2),
            "detail": self.detail,
        }


def _result(number, name, started, passed, detail) -> CriterionResult:
    return CriterionResult(number, name, passed, time.time() - started, detail)


def criterion_1_gw_annihilation() -> CriterionResult:
    t0 = time.time()
    details = []
    passed = True
    for name in ("cubic33", "quadric2222"):
        case = get_case(name)
        rep = pf_check(operator_for(name, "gw"), i_gw(case, 20))
        ok = rep.is_zero and rep.max_verified_frequency >= 19
        passed &= ok
        details.append(f"{name}: zero residual through f={rep.max_verified_frequency}")
    elapsed = time.time() - t0
    if elapsed >= 10.0:
        passed = False
        details.append(f"runtime {elapsed:.1f}s exceeds 10s budget")
    return _result(1, "pf-annihilation-gw", t0, passed, "; ".join(details))


def criterion_2_hybrid_annihilation() -> CriterionResult:
    t0 = time.time()
    details = []
    passed = True
    for name, order, need in (("cubic33", 59, 57), ("quadric2222", 39, 38)):
        case = get_case(name)
        rep = pf_check(operator_for(name, "hybrid"), i_hybrid(case, order))
        ok = rep.is_zero and rep.max_verified_frequency >= need
        passed &= ok
        details.append(f"{name}: zero residual through f={rep.max_verified_frequency}")
    elapsed = time.time() - t0
    if elapsed >= 30.0:
        passed = False
        details.append(f"runtime {elapsed:.1f}s exceeds 30s budget")
    return _result(2, "pf-annihilation-hybrid", t0, passed, "; ".join(details))


def criterion_3_assembly_identity() -> CriterionResult:
    t0 = time.time()
    details = []
    passed = True
    for name in ("cubic33", "quadric2222"):
        case = get_case(name)
        ok = assemble_hybrid_via_mtheta(case, 20) == i_hybrid(case, 20)
        passed &= ok
        details.append(f"{name}: coefficientwise equal through d=20" if ok else f"{name}: MISMATCH")
    return _result(3, "twisted-assembly-identity", t0, passed, "; ".join(details))


def criterion_4_cubic_closed_forms() -> CriterionResult:
    t0 = time.time()
    report = closed_form_crosscheck(i_hybrid(get_case("cubic33"), 30), n_terms=10, digits=50)
    spot = {
        (r.series, r.index): r for r in report.rows
    }
    spot_ok = (
        spot[("omega1", 1)].exact == Fraction(1, 26244)
        and spot[("omega1", 1)].within_budget
        and spot[("omega2_const", 1)].exact == Fraction(7, 78732)
        and spot[("omega2_const", 1)].within_budget
    )
    passed = report.all_within_budget and spot_ok
    return _result(
        4,
        "cubic-gamma-digamma-crosscheck",
        t0,
        passed,
        f"10 terms at 50 digits within 1e-40; spot value 1/26244 on both routes: {spot_ok}",
    )


def criterion_5_quadric_closed_forms() -> CriterionResult:
    t0 = time.time()
    report = closed_form_crosscheck(i_hybrid(get_case("quadric2222"), 21), n_terms=11, digits=50)
    disc = report.discrepancies[0]
    disc_ok = (
        disc["agrees"] is False
        and disc["published_value_at_d1"] == "81/16"
        and disc["exact_value_at_k1"] == "1/4096"
    )
    passed = report.all_within_budget and disc_ok
    return _result(
        5,
        "quadric-closed-form-and-typo-record",
        t0,
        passed,
        "generating-function terms match exactly for k<=10; "
        f"published line mismatch (81/16 vs 1/4096) recorded: {disc_ok}",
    )


def criterion_6_state_space() -> CriterionResult:
    t0 = time.time()
    cubic = correspondence_check(get_case("cubic33"))
    quadric = correspondence_check(get_case("quadric2222"))
    quintic_chi = euler_characteristic([5], 4)
    passed = (
        cubic.match
        and cubic.chi == -144
        and cubic.middle_dimension == 148
        and quadric.match
        and quadric.chi == -128
        and quadric.middle_dimension == 132
        and quintic_chi == -200
    )
    return _result(
        6,
        "state-space-graded-match",
        t0,
        passed,
        f"cubic chi={cubic.chi} middle={cubic.middle_dimension} match={cubic.match}; "
        f"quadric chi={quadric.chi} middle={quadric.middle_dimension} match={quadric.match}; "
        f"quintic oracle chi={quintic_chi}",
    )


def _riemann_roch_vdim(case, theta: TopologicalType) -> Fraction:
    """Independent route: vdim of the map moduli plus bundle Euler counts."""
    g, beta, n = theta.genus, theta.degree, theta.n
    vdim_maps = (case.r - 1) * (1 - g) + case.r * beta + 3 * g - 3 + n
    chis = sum(
        coarse_degree(case, theta, j).value + 1 - g for j in range(case.N)
    )
    return vdim_maps + chis


def criterion_7_moduli_suite() -> CriterionResult:
    t0 = time.time()
    passed = True
    notes = []
    for name in ("cubic33", "quadric2222"):
        case = get_case(name)
        checked = 0
        for n in range(5):
            for ms in itertools.product(range(case.d), repeat=n):
                for beta in range(7):
                    theta = TopologicalType(0, beta, ms)
                    sel = selection_rule(case, theta)
                    if sel != coarse_degree(case, theta).integral:
                        passed = False
                    if n >= 1:
                        try:
                            n_theta(case, theta)
                            integral = True
                        except IntegralityError:
                            integral = False
                        if integral != sel:
                            passed = False
                    checked += 1
        three = TopologicalType(0, 0, (1, 1, 1))
        direct = virtual_dimension(case, three)
        indirect = _riemann_roch_vdim(case, three)
        if not (direct == indirect == 3):
            passed = False
        notes.append(f"{name}: {checked} types; vdim(0,3,(1,1,1)) = {direct} both routes")
    return _result(7, "moduli-selection-and-dimensions", t0, passed, "; ".join(notes))


def _continuation_case(name: str, digits: int) -> tuple[bool, str]:
    case = get_case(name)
    ctx = PrecisionContext(digits=digits)
    t0 = time.time()
    with mp.workdps(ctx.working_dps):
        res = connection_matrix(case, ctx)
        ok = res.invertible and res.residual <= mp.mpf(10) ** -30

        deformed = connection_matrix(case, ctx, Path.dogleg(case, height=Fraction(3, 2)))
        dev = max(
            abs(res.matrix[i][j] - deformed.matrix[i][j])
            for i in range(4)
            for j in range(4)
        )
        ok &= dev <= mp.mpf(10) ** -28

        m0 = monodromy(case, ctx, "origin")
        pattern = origin_monodromy_pattern(ctx.working_dps)
        pat_dev = max(
            abs(m0[i][j] - pattern[i][j]) for i in range(4) for j in range(4)
        )
        ok &= pat_dev <= mp.mpf(10) ** -28

        mc = monodromy(case, ctx, "conifold")
        mmi = [
            [mc[i][j] - (1 if i == j else 0) for j in range(4)] for i in range(4)
        ]
        sigma, defect = rank_one_defect(mmi)
        ok &= sigma > mp.mpf("1e-6") and defect <= mp.mpf(10) ** -25

        elapsed = time.time() - t0
        if elapsed >= 180.0:
            ok = False
        detail = (
            f"{name}: residual {mp.nstr(res.residual, 2)}, homotopy dev "
            f"{mp.nstr(dev, 2)}, unipotent dev {mp.nstr(pat_dev, 2)}, "
            f"conifold defect {mp.nstr(defect, 2)} ({elapsed:.0f}s)"
        )
    return bool(ok), detail


def criterion_8_continuation(digits: int = 40) -> CriterionResult:
    t0 = time.time()
    passed = True
    details = []
    for name in ("cubic33", "quadric2222"):
        ok, detail = _continuation_case(name, digits)
        passed &= ok
        details.append(detail)
    return _result(8, "connection-and-monodromy", t0, passed, "; ".join(details))


def criterion_9_yukawa() -> CriterionResult:
    t0 = time.time()
    expected_n1 = {"cubic33": 1053, "quadric2222": 512}
    passed = True
    details = []
    for name in ("cubic33", "quadric2222", "quintic"):
        try:
            res = yukawa(get_case(name), n_max=3)
        except IntegralityError as exc:
            passed = False
            details.append(f"{name}: {exc}")
            continue
        if name in expected_n1 and res.instanton[1] != expected_n1[name]:
            passed = False
        details.append(
            f"{name}: n1..n3 = "
            + ", ".join(str(res.instanton[e]) for e in (1, 2, 3))
        )
    return _result(9, "yukawa-instanton-numbers", t0, passed, "; ".join(details))


CRITERIA: tuple[Callable[..., CriterionResult], ...] = (
    criterion_1_gw_annihilation,
    criterion_2_hybrid_annihilation,
    criterion_3_assembly_identity,
    criterion_4_cubic_closed_forms,
    criterion_5_quadric_closed_forms,
    criterion_6_state_space,
    criterion_7_moduli_suite,
    criterion_8_continuation,
    criterion_9_yukawa,
)


def run_all(digits: int = 40) -> list[CriterionResult]:
    results = []
    for fn in CRITERIA:
        if fn is criterion_8_continuation:
            results.append(fn(digits))
        else:
            results.append(fn())
    return results
