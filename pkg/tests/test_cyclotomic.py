import cmath
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from grouplab.cyclotomic import Cyclotomic, cyclotomic_poly, totient

LEVELS = [1, 2, 3, 4, 5, 6, 8, 12]


def approx(x: Cyclotomic) -> complex:
    return complex(x)


def element(level):
    coeff = st.fractions(min_value=-5, max_value=5, max_denominator=6)
    return st.lists(st.tuples(st.integers(0, level - 1), coeff), max_size=4).map(
        lambda terms: Cyclotomic.from_exponents(level, terms)
    )


@pytest.mark.parametrize(
    "n, poly",
    [(1, (-1, 1)), (2, (1, 1)), (3, (1, 1, 1)), (4, (1, 0, 1)), (6, (1, -1, 1)), (12, (1, 0, -1, 0, 1))],
)
def test_cyclotomic_polynomials(n, poly):
    assert cyclotomic_poly(n) == poly


@pytest.mark.parametrize("n", LEVELS)
def test_totient(n):
    from math import gcd

    assert totient(n) == sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


@pytest.mark.parametrize("n", LEVELS)
def test_powers_of_zeta_match_complex_values(n):
    z = cmath.exp(2j * cmath.pi / n)
    for k in range(-n, 2 * n):
        assert abs(approx(Cyclotomic.zeta(n, k)) - z**k) < 1e-9


def test_sum_of_roots_of_unity_vanishes():
    for n in (2, 3, 4, 6, 12):
        total = sum((Cyclotomic.zeta(n, k) for k in range(n)), Cyclotomic.rational(0, n))
        assert total == 0


def test_level_promotion_and_cross_level_equality():
    assert Cyclotomic.zeta(2) == -1
    assert Cyclotomic.zeta(6, 3) == Cyclotomic.rational(-1)
    assert Cyclotomic.zeta(3).to_level(6) == Cyclotomic.zeta(6, 2)
    assert Cyclotomic.zeta(3) * Cyclotomic.zeta(4) == Cyclotomic.zeta(12, 7)


def test_conjugate_and_integrality():
    w = Cyclotomic.zeta(3)
    assert w + w.conjugate() == -1
    assert (w * w.conjugate()) == 1
    assert w.is_integral()
    assert not (w / 2).is_integral()
    assert Cyclotomic.rational(Fraction(3, 2)).to_fraction() == Fraction(3, 2)


def test_non_rational_is_not_hashable():
    with pytest.raises(TypeError):
        hash(Cyclotomic.zeta(3))
    assert hash(Cyclotomic.rational(2, 6)) == hash(Fraction(2))


@given(element(12), element(12), element(12))
def test_field_axioms_against_complex_oracle(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert abs(approx(a * b) - approx(a) * approx(b)) < 1e-6
    assert abs(approx(a.conjugate()) - approx(a).conjugate()) < 1e-9


@given(element(4), element(6))
def test_mixed_levels_agree_with_complex_oracle(a, b):
    s = a + b
    assert s.level == 12
    assert abs(approx(s) - (approx(a) + approx(b))) < 1e-9
