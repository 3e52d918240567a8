from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st

from preimage_lab import cubic_field as cf
from preimage_lab.cubic_field import (
    BETA1,
    BETA2,
    ONE,
    THETA,
    KElement,
    UnitClass,
    fourth_power_free,
    is_square,
    k_add,
    k_inv,
    k_mul,
    norm,
    power_free,
    primes_above,
    real_embedding,
    square_class,
    trace,
    unit_decompose,
    valuation_at,
)
from preimage_lab.errors import DomainError, UndefinedInputError, UnsupportedInputError

t = sympy.Symbol("t")
MINPOLY = t**3 - t + 1

ints = st.integers(-12, 12)
elements = st.builds(KElement, ints, ints, ints).filter(bool)
rationals = st.fractions(min_value=-6, max_value=6, max_denominator=5)
rational_elements = st.builds(KElement, rationals, rationals, rationals).filter(bool)


def as_sympy(a: KElement):
    return sum(sympy.Rational(c.numerator, c.denominator) * t**k for k, c in enumerate(a.coords))


def from_sympy(expr) -> KElement:
    r = sympy.Poly(sympy.rem(sympy.expand(expr), MINPOLY, t), t)
    coeffs = list(reversed(r.all_coeffs())) if not r.is_zero else []
    return KElement.from_coords([Fraction(int(sympy.numer(c)), int(sympy.denom(c))) for c in coeffs])


def numeric_norm(a: KElement) -> int:
    """Product of a over the three complex roots, rounded."""
    mpmath.mp.dps = 60
    roots = mpmath.polyroots([1, 0, -1, 1], maxsteps=100, extraprec=200)
    prod = mpmath.mpf(1)
    for r in roots:
        prod *= sum(int(c) * r**k for k, c in enumerate(a.coords))
    return int(mpmath.nint(mpmath.re(prod)))


def test_theta_relations():
    assert THETA**3 == THETA - 1
    assert THETA * THETA**2 == KElement(-1, 1, 0)
    assert k_inv(THETA) == KElement(1, 0, -1)
    assert norm(THETA) == -1
    assert trace(THETA) == 0
    assert norm(BETA1) == 23 and norm(BETA2) == 23


@given(rational_elements, rational_elements)
def test_multiplication_matches_sympy(a, b):
    assert a * b == from_sympy(as_sympy(a) * as_sympy(b))
    assert k_mul(a, b) == b * a
    assert k_add(a, b) - b == a


@given(rational_elements)
def test_inverse(a):
    assert a * k_inv(a) == ONE
    assert a / a == ONE
    assert 1 / a == k_inv(a)
    assert a ** -2 * a**2 == ONE


@given(elements)
@settings(max_examples=50)
def test_norm_matches_numeric_product(a):
    assert norm(a) == numeric_norm(a)


@given(rational_elements, rational_elements)
def test_norm_multiplicative(a, b):
    assert norm(a * b) == norm(a) * norm(b)


def test_element_plumbing():
    a = KElement(1, Fraction(-1, 2), 3)
    assert KElement.from_json(a.to_json()) == a
    with pytest.raises(DomainError):
        KElement.from_json(["1", "2"])
    assert str(a) == "1 - (1/2)θ + 3θ^2"
    assert str(KElement(0, -1, 1)) == "-θ + θ^2"
    assert str(KElement()) == "0"
    assert a.denominator() == 2 and not a.is_integral()
    assert 1 - THETA == KElement(1, -1)
    assert 2 + THETA == THETA + 2
    with pytest.raises(TypeError):
        THETA + "x"
    with pytest.raises(TypeError):
        THETA - "x"
    with pytest.raises(TypeError):
        THETA * "x"
    with pytest.raises(TypeError):
        THETA / "x"
    with pytest.raises(DomainError):
        k_inv(KElement())


def test_real_embedding():
    assert abs(real_embedding(THETA) + mpmath.mpf("1.324717957244746")) < 1e-15
    assert abs(real_embedding(KElement(Fraction(1, 3))) - mpmath.mpf(1) / 3) < 1e-18


@pytest.mark.parametrize(
    "u, cls",
    [
        (THETA**2, UnitClass(0, 2)),
        (KElement(-1, -1), UnitClass(0, -4)),
        (-ONE, UnitClass(1, 0)),
        (THETA**-37, UnitClass(0, -37)),
        (-(THETA**55), UnitClass(1, 55)),
    ],
)
def test_unit_decompose(u, cls):
    assert unit_decompose(u) == cls
    assert cls.element() == u


@given(st.integers(-60, 60), st.booleans())
def test_unit_decompose_round_trip(k, neg):
    cls = UnitClass(int(neg), k)
    assert unit_decompose(cls.element()) == cls


def test_unit_decompose_rejects_non_units():
    for a in (KElement(), KElement(2), KElement(Fraction(1, 2)), BETA1):
        with pytest.raises(DomainError):
            unit_decompose(a)


def test_unit_class_algebra():
    a, b = UnitClass(1, 3), UnitClass(1, 2)
    assert (a * b) == UnitClass(0, 5)
    assert (a * b).reduced(4) == UnitClass(0, 1)
    assert str(a) == "(-,3)"


def test_primes_above_23_and_2():
    P1, P2 = primes_above(23)
    assert (P1.ramification_index, P2.ramification_index) == (1, 2)
    assert valuation_at(KElement(23), P1) == 1
    assert valuation_at(KElement(23), P2) == 2
    assert valuation_at(BETA2, P2) == 1 and valuation_at(BETA2, P1) == 0
    assert valuation_at(THETA, P1) == 0
    (two,) = primes_above(2)
    assert two.residue_degree == 3 and two.norm == 8
    assert valuation_at(KElement(Fraction(1, 8)), two) == -3
    assert valuation_at(KElement(Fraction(1, 23)), P2) == -2


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17, 19, 29, 59, 103, 419, 1861])
def test_prime_splitting_matches_sympy(p):
    _, facs = sympy.Poly(MINPOLY, t, modulus=p).factor_list()
    expected = sorted((g.degree(), m) for g, m in facs)
    primes = primes_above(p)
    assert sorted((P.residue_degree, P.ramification_index) for P in primes) == expected
    for P in primes:
        assert abs(norm(P.generator)) == P.norm
        assert valuation_at(KElement(p), P) == P.ramification_index


def test_primes_above_rejects_composites():
    with pytest.raises(DomainError):
        primes_above(4)


@given(elements, elements)
@settings(max_examples=60, deadline=None)
def test_valuation_additive(a, b):
    for p in (2, 3, 5, 23):
        for P in primes_above(p):
            assert valuation_at(a * b, P) == valuation_at(a, P) + valuation_at(b, P)


def test_valuation_of_zero():
    with pytest.raises(UndefinedInputError):
        valuation_at(KElement(), primes_above(5)[0])


@pytest.mark.parametrize(
    "a, delta, s, cls",
    [
        (1 - THETA, 1 - THETA, ONE, UnitClass(1, 3)),
        (THETA * THETA - THETA, ONE, THETA, UnitClass(0, 0)),
        (KElement(16), ONE, KElement(2), UnitClass(0, 0)),
    ],
)
def test_fourth_power_free_examples(a, delta, s, cls):
    dec = fourth_power_free(a)
    assert (dec.delta, dec.s, dec.unit_class) == (delta, s, cls)
    assert dec.delta_class == cls


@given(elements)
@settings(max_examples=80, deadline=None)
def test_fourth_power_free_reconstructs(a):
    dec = fourth_power_free(a)
    assert dec.delta * dec.s**4 == a
    for P, _ in dec.prime_exponents:
        assert 0 <= valuation_at(dec.delta, P) < 4
    assert 0 <= dec.unit_class.theta_exp < 4


@given(elements, elements)
@settings(max_examples=40, deadline=None)
def test_fourth_power_detected(a, b):
    dec = fourth_power_free(a**4 * b)
    assert dec.delta == fourth_power_free(b).delta


def test_power_free_errors():
    with pytest.raises(DomainError):
        power_free(KElement(), 4)
    with pytest.raises(DomainError):
        power_free(KElement(Fraction(1, 2)), 4)
    with pytest.raises(UnsupportedInputError):
        power_free(KElement(13), 4, bound=10, rho=False)
    # with rho the same input succeeds, and a large prime in the norm is fine
    assert power_free(KElement(13), 4, bound=10).delta == KElement(13)
    big = KElement(4231459) - THETA
    assert fourth_power_free(big).delta == big
    assert fourth_power_free(BETA1 * 23).delta_class is None


def test_is_square():
    assert is_square(THETA**2)
    assert is_square(KElement(Fraction(9, 4)))
    assert not is_square(THETA)
    assert not is_square(-ONE)
    assert not is_square(KElement(2))
    with pytest.raises(DomainError):
        is_square(KElement())


@given(rational_elements)
@settings(max_examples=40, deadline=None)
def test_squares_are_squares(a):
    assume(a.denominator() < 50)
    assert is_square(a * a)


def test_square_classes():
    assert square_class(KElement(-1, -1)).canonical_tag == "trivial"
    assert square_class(1 - THETA).canonical_tag == "minus_theta"
    assert square_class(-ONE).canonical_tag == "other"
    assert square_class(KElement(2)).canonical_tag == "other"
    assert square_class(KElement(2)).unit_class is None
    c = square_class(1 - THETA) * square_class(-THETA)
    assert c.canonical_tag == "trivial"
    with pytest.raises(DomainError):
        square_class(KElement())


def test_module_constants():
    assert cf.MIN_POLY == (1, -1, 0, 1)
    assert cf.P1.generator == BETA1 and cf.P2.generator == BETA2
