from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from preimage_lab.errors import DomainError, UndefinedInputError
from preimage_lab.exact import (
    exact_integer_root,
    factor_integer,
    factor_small,
    format_rational,
    integer_nth_root,
    is_prime,
    is_rational_square,
    nth_root_rational,
    padic_valuation,
    parse_rational,
    rational_height,
)


@pytest.mark.parametrize(
    "text, value",
    [("3/4", Fraction(3, 4)), ("-6/8", Fraction(-3, 4)), (" 7 ", Fraction(7)), ("+2/1", Fraction(2)), ("10" * 30, Fraction(int("10" * 30)))],
)
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("bad", ["1/0", "1.5", "a/b", "", "1/-2", "1//2"])
def test_parse_rational_rejects(bad):
    with pytest.raises(DomainError):
        parse_rational(bad)


def test_parse_passes_numbers_through():
    assert parse_rational(5) == 5
    assert parse_rational(Fraction(1, 3)) == Fraction(1, 3)


@given(st.fractions())
def test_format_parse_round_trip(q):
    assert parse_rational(format_rational(q)) == q


def test_is_prime_matches_sympy():
    for n in list(range(-3, 2000)) + [2551, 58673, 2**61 - 1, 10**18 + 9, 3215031751]:
        assert is_prime(n) == sympy.isprime(n), n


@pytest.mark.parametrize("q, p, v", [(Fraction(12), 2, 2), (Fraction(3, 8), 2, -3), (Fraction(5, 7), 3, 0), (-23 * 23, 23, 2)])
def test_padic_valuation(q, p, v):
    assert padic_valuation(q, p) == v


def test_padic_valuation_errors():
    with pytest.raises(UndefinedInputError):
        padic_valuation(0, 5)
    with pytest.raises(DomainError):
        padic_valuation(3, 4)


@given(st.integers(min_value=0, max_value=10**40), st.integers(min_value=1, max_value=7))
def test_integer_nth_root_is_floor(n, k):
    r = integer_nth_root(n, k)
    assert r**k <= n < (r + 1) ** k


def test_roots_edge_cases():
    with pytest.raises(DomainError):
        integer_nth_root(-1, 2)
    with pytest.raises(DomainError):
        exact_integer_root(4, 0)
    with pytest.raises(DomainError):
        nth_root_rational(4, 0)
    assert exact_integer_root(-27, 3) == -3
    assert exact_integer_root(-4, 2) is None
    assert exact_integer_root(-26, 3) is None
    assert nth_root_rational(Fraction(16, 81), 4) == Fraction(2, 3)
    assert nth_root_rational(Fraction(-8, 27), 3) == Fraction(-2, 3)
    assert nth_root_rational(Fraction(2, 81), 4) is None
    assert nth_root_rational(Fraction(16, 80), 4) is None
    assert is_rational_square(Fraction(9, 4))
    assert not is_rational_square(-1)


@given(st.fractions(max_denominator=10**6), st.sampled_from([2, 3, 4, 5]))
def test_nth_root_of_power(q, n):
    r = nth_root_rational(q**n, n)
    assert r is not None and r**n == q**n


def test_factor_small_matches_sympy():
    for n in [1, -1, 2, 58673, -360, 2551 * 2551, 999983, 999983 * 2]:
        fac = factor_small(n)
        assert fac.complete
        assert fac.factors == sympy.factorint(abs(n))
        assert fac.value() == n


def test_factor_small_cofactor():
    big = 1000003 * 1000033
    fac = factor_small(big, bound=1000)
    assert not fac.complete
    assert fac.cofactor == big and fac.value() == big
    assert factor_small(97, bound=10).cofactor == 97
    assert factor_small(2 * (10**6 + 3)).cofactor == 10**6 + 3
    with pytest.raises(DomainError):
        factor_small(0)
    assert factor_small(12, bound=1).factors == {}


def test_rational_height():
    assert rational_height(Fraction(-7, 3)) == 7
    assert rational_height(Fraction(2, 9)) == 9


def test_factor_integer_splits_large_cofactors():
    fac = factor_integer(4231459**2 * 12)
    assert fac.complete and fac.factors == {2: 2, 3: 1, 4231459: 2}
    fac = factor_integer(-(1000003 * 1000033))
    assert fac.factors == {1000003: 1, 1000033: 1} and fac.value() == -(1000003 * 1000033)
    assert factor_integer(2**89 - 1).factors == {2**89 - 1: 1}
    assert factor_integer(1).factors == {}


@given(st.integers(min_value=2, max_value=10**24))
@settings(max_examples=60, deadline=None)
def test_factor_integer_matches_sympy(n):
    fac = factor_integer(n)
    assert fac.value() == n
    assert all(is_prime(p) for p in fac.factors)
    if fac.complete:
        assert fac.factors == sympy.factorint(n)


def test_factor_integer_can_give_up():
    n = 999983 * 1000003
    fac = factor_integer(n, trial_bound=10, max_iter=1)
    assert fac.value() == n
    assert not fac.complete and fac.cofactor == n
