import itertools
from fractions import Fraction

import pytest

from lgcy.ifunc import i_hybrid
from lgcy.moduli import (
    TopologicalType,
    coarse_degree,
    n_theta,
    selection_rule,
    virtual_dimension,
)
from lgcy.ring import IntegralityError, StructureError, get_case

CUBIC = get_case("cubic33")
QUADRIC = get_case("quadric2222")


def tt(g, beta, ms):
    return TopologicalType(g, beta, tuple(ms))


def test_selection_rule_examples():
    assert not selection_rule(CUBIC, tt(0, 0, (1, 1, 1)))
    assert selection_rule(CUBIC, tt(0, 0, (1, 2, 1)))
    assert not selection_rule(QUADRIC, tt(0, 1, (1, 1)))
    assert selection_rule(QUADRIC, tt(0, 2, (1, 1)))


def test_coarse_degree_examples():
    d = coarse_degree(CUBIC, tt(0, 0, (1, 2, 1)))
    assert (d.value, d.integral) == (Fraction(-1), True)
    d = coarse_degree(CUBIC, tt(0, 0, (1,)))
    assert (d.value, d.integral) == (Fraction(-2, 3), False)


def test_selection_rule_iff_integral_degree_exhaustive():
    # exhaustive over n <= 4, beta <= 6, all multiplicity tuples
    for case in (CUBIC, QUADRIC):
        for n in range(5):
            for ms in itertools.product(range(case.d), repeat=n):
                for beta in range(7):
                    theta = tt(0, beta, ms)
                    assert (
                        selection_rule(case, theta)
                        == coarse_degree(case, theta).integral
                    )


def test_n_theta_examples():
    # i_bar for the last marking: cubic (-2) mod 3 = 1; quadric i_bar = i
    assert n_theta(CUBIC, tt(0, 0, (1, 2))) == 0
    assert n_theta(QUADRIC, tt(0, 0, (1, 1))) == 0
    with pytest.raises(StructureError):
        n_theta(CUBIC, tt(0, 0, ()))


def test_n_theta_small_j_types_nonpositive():
    # types (0, beta, (1,...,1, i_bar-conjugate)) with the last multiplicity
    # congruent to -(beta+1): n_theta = (-beta-1 + i_bar)/d <= 0
    for case in (CUBIC, QUADRIC):
        for beta in range(12):
            i_n = (-(beta + 1)) % case.d
            if i_n == 0:
                continue  # broad last marking; not a small-J type
            for extra_ones in range(4):
                theta = tt(0, beta, (1,) * extra_ones + (i_n,))
                value = n_theta(case, theta)
                assert value <= 0
                deg = coarse_degree(case, theta).value
                assert value in (deg, deg + 1)


def test_n_theta_integrality_matches_selection():
    for case in (CUBIC, QUADRIC):
        for n in range(1, 4):
            for ms in itertools.product(range(case.d), repeat=n):
                for beta in range(5):
                    theta = tt(0, beta, ms)
                    if selection_rule(case, theta):
                        n_theta(case, theta)  # must not raise
                    else:
                        with pytest.raises(IntegralityError):
                            n_theta(case, theta)


def test_virtual_dimension_examples():
    assert virtual_dimension(CUBIC, tt(0, 0, (1, 1, 1))) == 3
    assert virtual_dimension(QUADRIC, tt(0, 0, (1, 1, 1))) == 3
    assert virtual_dimension(CUBIC, tt(1, 0, ())) == 0
    with pytest.raises(StructureError):
        virtual_dimension(CUBIC, tt(0, 0, (1, 0, 1)))


def riemann_roch_route(case, theta):
    """Independent count: vdim of the map moduli plus sum of bundle chis.

    vdim Mbar_{g,n}(P^{r-1}, beta) = (r-1)(1-g) + r*beta + 3g - 3 + n and
    chi(L^{c_j}) = deg|L^{c_j}| + 1 - g per component, with the coarse degree
    c_j(2g-2+n-beta)/d - sum_i (m_i c_j mod d)/d.
    """
    g, beta, n = theta.genus, theta.degree, theta.n
    vdim_maps = (case.r - 1) * (1 - g) + case.r * beta + 3 * g - 3 + n
    chi_sum = Fraction(0)
    for j, c in enumerate(case.weights):
        chi_sum += coarse_degree(case, theta, j).value + 1 - g
    return vdim_maps + chi_sum


def test_virtual_dimension_two_routes():
    for case in (CUBIC, QUADRIC):
        for n in range(1, 4):
            for ms in itertools.product(
                [m for m in range(1, case.d)], repeat=n
            ):
                for beta in range(4):
                    theta = tt(0, beta, ms)
                    assert virtual_dimension(case, theta) == riemann_roch_route(
                        case, theta
                    )


def test_hybrid_series_types_satisfy_selection():
    # every frequency in the LG I-series corresponds to small-J types
    # (0, beta, (1,...,1, i_n)) with i_n = -(beta+1) mod d that pass the
    # selection rule for every n
    for case in (CUBIC, QUADRIC):
        series = i_hybrid(case, 15)
        for f, h in series.support():
            beta = int(f) - 1
            i_n = (-(beta + 1)) % case.d
            assert i_n != 0
            assert (h + i_n) % case.d == 0  # pairing conjugates the sector
            for n in range(1, 5):
                theta = tt(0, beta, (1,) * (n - 1) + (i_n,))
                assert selection_rule(case, theta)
