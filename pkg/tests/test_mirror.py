from fractions import Fraction

import mpmath as mp
import pytest

from lgcy.ifunc import i_gw, i_hybrid
from lgcy.mirror import (
    slice_coordinates,
    closed_form_crosscheck,
    digamma_rational,
    extract_omegas,
    gamma_rational,
    j_small,
    mirror_data,
    mirror_map_series,
    quadric_g0_term,
    quadric_published_omega1_term,
)
from lgcy.pf import frobenius_components, scalar_component, yukawa
from lgcy.ring import UnsupportedCaseError, get_case
from lgcy.series import FreqSeries, ZLaurent

CUBIC = get_case("cubic33")
QUADRIC = get_case("quadric2222")


# ------------------------------------------------------------------- omegas


def test_cubic_omega1_leading_terms():
    omega1, _ = extract_omegas(i_hybrid(CUBIC, 9))
    assert omega1.base == 1 and omega1.step == 3
    assert omega1.coeffs[0] == 1
    assert omega1.coeffs[1] == Fraction(1, 26244)


def test_cubic_omega2_term_at_e4t():
    # d=3 coefficient is (z + (7/3)H)/26244; its z^0 H^1 coordinate plus the
    # Ht/z cross-term gives (t + 7/3)/26244 at e^{4t}
    _, omega2 = extract_omegas(i_hybrid(CUBIC, 9))
    assert omega2.coeffs[0] == 0
    assert omega2.coeffs[1] == Fraction(7, 3 * 26244)


def test_gw_omega1_equals_frobenius_u0():
    series = i_gw(CUBIC, 6)
    omega1, omega2 = extract_omegas(series)
    assert omega1.base == 0 and omega1.step == 1
    u0 = scalar_component(frobenius_components(series), 0, 0, 7)
    assert list(omega1.coeffs) == u0
    assert omega1.coeffs[:3] == (1, 36, 8100)
    v1 = scalar_component(frobenius_components(series), 1, 0, 7)
    assert list(omega2.coeffs) == v1


def test_non_canonical_input_rejected():
    s = FreqSeries(
        CUBIC, "hybrid", Fraction(2), {(Fraction(1), 1): ZLaurent.z_power(2, 1) * 2}
    )
    with pytest.raises(UnsupportedCaseError):
        extract_omegas(s)


# -------------------------------------------------------------- mirror maps


def test_hybrid_mirror_map_leading_correction():
    mm = mirror_map_series(i_hybrid(CUBIC, 12))
    assert mm[0] == 0
    # first correction: the omega_2 coefficient 7/3/26244 with no omega_1
    # backreaction at this order (the backreaction starts at psi^2)
    assert mm[1] == Fraction(7, 78732)


def test_gw_mirror_map_matches_yukawa_route():
    mm = mirror_map_series(i_gw(CUBIC, 8))
    res = yukawa(CUBIC, n_max=2, order=8)
    assert mm == res.mirror_map
    assert mm[1] == 1  # q'/q -> 1 as q -> 0


def test_j_small_cone_slice_normal_form():
    for case in (CUBIC, QUADRIC):
        series = i_hybrid(case, 11)
        slice_ = j_small(series)
        unit, deg2 = slice_coordinates(slice_)
        # z^1 unit coefficient collapses to 1 at frequency 0
        assert unit.coeffs[0] == 1
        assert all(c == 0 for c in unit.coeffs[1:])
        # z^0 degree-2 coordinate reproduces the mirror-map correction
        mm = mirror_map_series(series)
        n = len(deg2.coeffs)
        assert list(deg2.coeffs) == list(mm[:n])


def test_j_small_gw_normal_form():
    series = i_gw(CUBIC, 7)
    slice_ = j_small(series)
    unit, _ = slice_coordinates(slice_)
    assert unit.coeffs[0] == 1
    assert all(c == 0 for c in unit.coeffs[1:])


def test_mirror_data_json():
    data = mirror_data(i_hybrid(CUBIC, 6))
    blob = data.to_json_dict()
    assert blob["case"] == "cubic33"
    assert blob["exact"] is True
    assert blob["omega1"]["coeffs"][0] == "1/1"


# ---------------------------------------------------------- Gamma / digamma


def test_gamma_rational_against_mpmath():
    with mp.workdps(60):
        for x in (Fraction(1, 3), Fraction(7, 3), Fraction(10), Fraction(13, 2)):
            mine = gamma_rational(x, 50)
            ref = mp.gamma(mp.mpf(x.numerator) / mp.mpf(x.denominator))
            assert abs(mine - ref) < mp.mpf(10) ** -45
        mine = digamma_rational(Fraction(10, 3), 50)
        ref = mp.digamma(mp.mpf(10) / 3)
        assert abs(mine - ref) < mp.mpf(10) ** -45


def test_gamma_recurrence_spot_value():
    # Gamma(4/3)^6 / (Gamma(1/3)^6 * Gamma(4)^2) = (1/3)^6/36 = 1/26244
    g43 = gamma_rational(Fraction(4, 3), 50)
    g13 = gamma_rational(Fraction(1, 3), 50)
    val = g43**6 / (g13**6 * gamma_rational(Fraction(4), 50) ** 2)
    assert abs(val - mp.mpf(1) / 26244) < mp.mpf(10) ** -45


# -------------------------------------------------------------- cross-check


def test_cubic_crosscheck_10_terms_50_digits():
    report = closed_form_crosscheck(i_hybrid(CUBIC, 30), n_terms=10, digits=50)
    assert report.all_within_budget
    spot = [r for r in report.rows if r.series == "omega1" and r.index == 1]
    assert spot[0].exact == Fraction(1, 26244)
    # the digamma expression reproduces the 7/3 exactly
    spot2 = [r for r in report.rows if r.series == "omega2_const" and r.index == 1]
    assert spot2[0].exact == Fraction(7, 78732)
    assert spot2[0].within_budget


def test_quadric_crosscheck_exact_and_discrepancy():
    report = closed_form_crosscheck(i_hybrid(QUADRIC, 21), n_terms=11, digits=50)
    assert report.all_within_budget  # equality is exact for the quadric rows
    assert quadric_g0_term(1) == Fraction(1, 4096)
    disc = report.discrepancies[0]
    assert disc["agrees"] is False
    assert disc["published_value_at_d1"] == "81/16"
    assert disc["exact_value_at_k1"] == "1/4096"
    assert quadric_published_omega1_term(1) == Fraction(81, 16)


def test_crosscheck_rejects_low_digits_and_gw_side():
    with pytest.raises(ValueError):
        closed_form_crosscheck(i_hybrid(CUBIC, 5), digits=10)
    with pytest.raises(UnsupportedCaseError):
        closed_form_crosscheck(i_gw(CUBIC, 5))
