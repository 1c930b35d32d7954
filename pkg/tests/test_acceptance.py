"""Acceptance gate: one test per criterion, each printing its verdict line.

Run with ``pytest tests/test_acceptance.py -s`` (or via ``lgcy verify-all``)
to see the pass/fail line per criterion.  Exact checks use unbounded rational
arithmetic; "zero" means structurally zero.
"""

from lgcy import verify


def _check(result):
    print(result.line())
    assert result.passed, result.detail


def test_criterion_1_gw_annihilation():
    _check(verify.criterion_1_gw_annihilation())


def test_criterion_2_hybrid_annihilation():
    _check(verify.criterion_2_hybrid_annihilation())


def test_criterion_3_assembly_identity():
    _check(verify.criterion_3_assembly_identity())


def test_criterion_4_cubic_closed_forms():
    _check(verify.criterion_4_cubic_closed_forms())


def test_criterion_5_quadric_closed_forms():
    _check(verify.criterion_5_quadric_closed_forms())


def test_criterion_6_state_space():
    _check(verify.criterion_6_state_space())


def test_criterion_7_moduli_suite():
    _check(verify.criterion_7_moduli_suite())


def test_criterion_8_continuation():
    _check(verify.criterion_8_continuation(digits=40))


def test_criterion_9_yukawa():
    _check(verify.criterion_9_yukawa())
