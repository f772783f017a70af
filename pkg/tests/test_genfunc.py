from math import gcd

import pytest

from echembed.errors import InvalidSeriesError, ParameterError
from echembed.genfunc import (
    EpsilonTable,
    IntPolynomial,
    RationalSeries,
    build_epsilon_table,
    coefficient_by_quadrature,
    counts_via_epsilon,
    difference_series,
    generating_function,
    series_coefficients,
    seven_term_recurrence,
)
from echembed.sequences import count_lattice_oracle, lattice_counts

from conftest import brute_count


def test_polynomial_arithmetic():
    p = IntPolynomial.one_minus_power(2) * IntPolynomial.one_minus_power(3)
    assert p.coeffs == {0: 1, 2: -1, 3: -1, 5: 1}
    assert (p - p) == IntPolynomial()
    assert not IntPolynomial({4: 0})
    assert IntPolynomial.one_minus_power(0) == IntPolynomial()


def test_denominator_of_g_is_the_seven_term_pattern():
    # (1-z)(1-z^a)(1-z^b) has eight terms for distinct a, b > 1
    den = generating_function(3, 5).denominator
    assert den.coeffs == {0: 1, 1: -1, 3: -1, 5: -1, 4: 1, 6: 1, 8: 1, 9: -1}


def test_series_of_g():
    assert series_coefficients(generating_function(2, 3), 10) == [1, 1, 2, 3, 4, 5, 7, 8, 10, 12]
    assert series_coefficients(generating_function(1, 1), 4) == [1, 3, 6, 10]


def test_series_rejects_non_unit_constant():
    s = RationalSeries.from_polynomials(IntPolynomial({0: 1}), IntPolynomial({0: 2, 1: 1}))
    with pytest.raises(InvalidSeriesError):
        series_coefficients(s, 3)


def test_series_extends_memoised_prefix():
    s = generating_function(4, 7)
    first = series_coefficients(s, 10)
    more = series_coefficients(s, 40)
    assert more[:10] == first
    assert more == [count_lattice_oracle(4, 7, n) for n in range(40)]


def test_seven_term_examples():
    assert seven_term_recurrence(2, 3, 10) == [1, 1, 2, 3, 4, 5, 7, 8, 10, 12]
    assert seven_term_recurrence(1, 1, 4) == [1, 3, 6, 10]
    assert seven_term_recurrence(3, 7, 50) == [brute_count(3, 7, n) for n in range(50)]


def test_epsilon_table_coprime():
    t = build_epsilon_table(2, 3)
    assert (t.period, t.gcd) == (6, 1)
    # residues 1..5, 0
    assert tuple(t.eps[r] for r in (1, 2, 3, 4, 5, 0)) == (0, 1, 1, 1, 1, 1)
    t = build_epsilon_table(1, 1)
    assert (t.period, t.eps) == (1, (1,))


def test_epsilon_table_common_factor():
    # L_n(2,2) = d(floor(n/2)); increments live on even n only
    t = build_epsilon_table(2, 2)
    assert (t.gcd, t.period, t.eps) == (2, 1, (1,))
    assert counts_via_epsilon(t, 100) == [brute_count(2, 2, n) for n in range(101)]


def test_epsilon_values_binary_everywhere():
    for a in range(1, 9):
        for b in range(1, 9):
            t = build_epsilon_table(a, b)
            assert set(t.eps) <= {0, 1}
            assert t.period == (a // gcd(a, b)) * (b // gcd(a, b))


def test_epsilon_increment_domain():
    with pytest.raises(ParameterError):
        build_epsilon_table(2, 3).increment(0)


def test_counts_via_epsilon_examples():
    assert counts_via_epsilon(build_epsilon_table(2, 3), 12)[-1] == 19
    assert counts_via_epsilon(build_epsilon_table(1, 1), 3) == [1, 3, 6, 10]
    assert counts_via_epsilon(build_epsilon_table(5, 7), 200) == [count_lattice_oracle(5, 7, n) for n in range(201)]


def test_manual_table_round_trip():
    t = EpsilonTable(2, 3, 1, 6, (1, 0, 1, 1, 1, 1))
    assert counts_via_epsilon(t, 30) == lattice_counts(2, 3, 30).tolist()


def test_difference_series_examples():
    zero = difference_series(1, 1, 1, 1)
    assert not zero.numerator
    assert series_coefficients(zero, 20) == [0] * 20
    assert series_coefficients(difference_series(2, 3, 1, 6), 5)[4] == -1
    # frozen from the double-enumeration oracle: L_n(1,4) - L_n(2,2), n < 8
    assert series_coefficients(difference_series(1, 4, 2, 2), 8) == [0, 1, 0, 1, 0, 2, 0, 2]
    assert [brute_count(1, 4, n) - brute_count(2, 2, n) for n in range(8)] == [0, 1, 0, 1, 0, 2, 0, 2]


def test_difference_series_ball_embedding_nonnegative():
    assert min(series_coefficients(difference_series(1, 4, 2, 2), 501)) >= 0


def test_difference_series_consistency():
    pref = {(a, b): lattice_counts(a, b, 300).tolist() for a in range(1, 6) for b in range(1, 6)}
    for a in range(1, 6):
        for b in range(1, 6):
            for c in range(1, 6):
                for d in range(1, 6):
                    got = series_coefficients(difference_series(a, b, c, d), 301)
                    want = [x - y for x, y in zip(pref[a, b], pref[c, d])]
                    assert got == want, (a, b, c, d)


def test_numerator_matches_display():
    s = difference_series(2, 3, 1, 6)
    om = IntPolynomial.one_minus_power
    assert s.numerator == om(1) * om(6) - om(2) * om(3)
    assert len(s.factors) == 5


@pytest.mark.parametrize(
    "a,b,n,points,expected",
    [(2, 3, 6, 512, 7), (1, 1, 0, 64, 1), (4, 5, 40, 512, 51)],
)
def test_quadrature_examples(a, b, n, points, expected):
    assert expected == count_lattice_oracle(a, b, n)
    got = coefficient_by_quadrature(a, b, n, 0.5, points)
    assert abs(got - expected) <= 1e-6 * max(1, expected)


def test_quadrature_default_nodes_and_other_radius():
    assert round(coefficient_by_quadrature(3, 4, 30)) == count_lattice_oracle(3, 4, 30)
    assert abs(coefficient_by_quadrature(2, 5, 12, radius=0.9, points=512) - count_lattice_oracle(2, 5, 12)) < 1e-9


@pytest.mark.parametrize("radius", [0, 1, 1.5, -0.2])
def test_quadrature_radius_domain(radius):
    with pytest.raises(ParameterError):
        coefficient_by_quadrature(2, 3, 4, radius, 64)


def test_asymptotics_small():
    for a in range(1, 5):
        for b in range(1, 5):
            n = 10_000
            assert abs(count_lattice_oracle(a, b, n) * 2 * a * b / n**2 - 1) <= 0.05
