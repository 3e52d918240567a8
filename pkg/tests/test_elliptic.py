from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from preimage_lab.elliptic import (
    E_MAIN,
    INFINITY,
    Q0,
    THREE_Q0,
    ECPoint,
    ECurve,
    apply_phi,
    ec_add,
    ec_mul,
    ec_neg,
    ec_search_points,
    ec_torsion,
    express_as_multiple,
    multiples,
    point_order,
    torsion_structure,
    x_minus_T,
)
from preimage_lab.errors import DomainError

F = Fraction

# multiples of Q0 = (1, -1) on v^2 = u^3 - u + 1
TABLE = {
    1: (1, -1),
    2: (-1, -1),
    3: (0, 1),
    4: (3, 5),
    5: (5, -11),
    6: (F(1, 4), F(-7, 8)),
    7: (F(-11, 9), F(17, 27)),
    8: (F(19, 25), F(103, 125)),
    9: (56, 419),
    10: (F(159, 121), F(-1861, 1331)),
}


def collinear_sum(P, Q, R):
    """P + Q = R on E iff P, Q, -R lie on one line (tangent when P = Q)."""
    S = ECPoint(R.u, -R.v)
    if P == Q:
        slope = (3 * P.u**2 - 1) / (2 * P.v)
    else:
        slope = (Q.v - P.v) / (Q.u - P.u)
    on_line = S.v - P.v == slope * (S.u - P.u)
    return on_line and E_MAIN.contains(R)


def test_table_points_are_on_curve():
    for u, v in TABLE.values():
        assert E_MAIN.contains(ECPoint(u, v))


@pytest.mark.parametrize("m", range(1, 10))
def test_table_additions_are_collinear(m):
    P, R = ECPoint(*TABLE[m]), ECPoint(*TABLE[m + 1])
    assert collinear_sum(P, Q0, R)
    assert ec_add(E_MAIN, P, Q0) == R


@pytest.mark.parametrize("m", range(1, 6))
def test_doublings_are_tangent(m):
    P = ECPoint(*TABLE[m])
    assert collinear_sum(P, P, ECPoint(*TABLE[2 * m]))
    assert ec_mul(E_MAIN, 2, P) == ECPoint(*TABLE[2 * m])


def test_three_q0():
    assert ec_mul(E_MAIN, 3, Q0) == THREE_Q0 == ECPoint(0, 1)
    assert ec_mul(E_MAIN, -1, Q0) == ECPoint(1, 1)
    assert ec_mul(E_MAIN, 0, Q0) == INFINITY
    assert ec_mul(E_MAIN, 5, INFINITY) == INFINITY
    assert ec_mul(E_MAIN, -2, INFINITY) == INFINITY


small = st.integers(-12, 12)


@given(small, small, small)
@settings(max_examples=100)
def test_group_axioms(a, b, c):
    P, Q, R = (ec_mul(E_MAIN, k, Q0) for k in (a, b, c))
    assert ec_add(E_MAIN, P, INFINITY) == P
    assert ec_add(E_MAIN, INFINITY, P) == P
    assert ec_add(E_MAIN, P, ec_neg(E_MAIN, P)) == INFINITY
    assert ec_add(E_MAIN, P, Q) == ec_add(E_MAIN, Q, P)
    assert ec_add(E_MAIN, ec_add(E_MAIN, P, Q), R) == ec_add(E_MAIN, P, ec_add(E_MAIN, Q, R))
    assert E_MAIN.contains(ec_add(E_MAIN, P, Q))
    assert ec_add(E_MAIN, P, Q) == ec_mul(E_MAIN, a + b, Q0)


def test_off_curve_and_malformed_points():
    with pytest.raises(DomainError):
        ec_add(E_MAIN, Q0, ECPoint(1, 2))
    with pytest.raises(DomainError):
        ec_neg(E_MAIN, ECPoint(0, 0))
    with pytest.raises(DomainError):
        ECPoint(1, None)
    with pytest.raises(DomainError):
        ECurve(0, 0)
    with pytest.raises(DomainError):
        apply_phi("triple", Q0)


def test_serialization():
    P = ECPoint(F(1, 4), F(-7, 8))
    assert P.to_json() == {"u": "1/4", "v": "-7/8"}
    assert ECPoint.from_json(P.to_json()) == P
    assert INFINITY.to_json() == "infinity"
    assert ECPoint.from_json("infinity") is INFINITY
    assert str(P) == "(1/4, -7/8)" and str(INFINITY) == "O"
    assert str(E_MAIN) == "v^2 = u^3 + (-1)u + (1)"
    assert E_MAIN.discriminant == -368


def test_search_points_are_multiples_of_q0():
    pts = ec_search_points(E_MAIN, 10**4)
    found = {express_as_multiple(P, Q0, 13) for P in pts}
    assert None not in found
    # up to height 10^4 the search sees exactly the multiples |m| <= 13, m != 0
    assert found == set(range(-13, 14)) - {0}
    # a multiplier bound of 12 is not enough: 13Q0 has height 5665
    missed = [P for P in pts if express_as_multiple(P, Q0, 12) is None]
    expected = [ec_mul(E_MAIN, -13, Q0), ec_mul(E_MAIN, 13, Q0)]
    assert sorted(missed, key=ECPoint.sort_key) == sorted(expected, key=ECPoint.sort_key)


def test_search_needs_integral_model():
    with pytest.raises(DomainError):
        ec_search_points(ECurve(F(1, 2), 1), 10)
    with pytest.raises(DomainError):
        ec_torsion(ECurve(F(1, 2), 1))


def test_torsion_y2_x3_minus_1():
    tors = ec_torsion(ECurve(0, -1))
    assert [P for P, _ in tors] == [INFINITY, ECPoint(1, 0)]
    assert torsion_structure(tors) == "Z/2"


def test_torsion_y2_x3_plus_1():
    tors = ec_torsion(ECurve(0, 1))
    assert [P for P, _ in tors] == [
        INFINITY,
        ECPoint(-1, 0),
        ECPoint(0, -1),
        ECPoint(0, 1),
        ECPoint(2, -3),
        ECPoint(2, 3),
    ]
    assert sorted(o for _, o in tors) == [1, 2, 3, 3, 6, 6]
    assert torsion_structure(tors) == "Z/6"


def test_torsion_other_shapes():
    assert torsion_structure(ec_torsion(E_MAIN)) == "trivial"
    assert torsion_structure(ec_torsion(ECurve(-1, 0))) == "non-cyclic of order 4"
    # y^2 = x^3 + 4x: (0,0) of order 2 and (2, +-4) of order 4
    assert torsion_structure(ec_torsion(ECurve(4, 0))) == "Z/4"
    assert point_order(E_MAIN, Q0) is None


def test_phi_variants():
    assert apply_phi("double", Q0) == ec_mul(E_MAIN, 2, Q0)
    assert apply_phi("translate_then_double", THREE_Q0) == ec_mul(E_MAIN, 9, Q0)


def test_x_minus_t_examples():
    assert x_minus_T(INFINITY).canonical_tag == "trivial"
    assert x_minus_T(Q0).canonical_tag == "minus_theta"
    assert x_minus_T(ec_mul(E_MAIN, 2, Q0)).canonical_tag == "trivial"


def test_x_minus_t_is_a_homomorphism_with_kernel_2E():
    classes = {m: x_minus_T(ec_mul(E_MAIN, m, Q0)) for m in range(-16, 17)}
    for m in range(-10, 11):
        assert (classes[m].canonical_tag == "trivial") == (m % 2 == 0)
        assert classes[m].canonical_tag in ("trivial", "minus_theta")
    for m in range(-8, 9):
        for n in range(-8, 9):
            assert classes[m + n] == classes[m] * classes[n]


def test_express_as_multiple():
    assert express_as_multiple(INFINITY, Q0, 3) == 0
    assert express_as_multiple(ECPoint(1, 1), Q0, 3) == -1
    assert express_as_multiple(ECPoint(56, 419), Q0, 8) is None
    assert multiples(Q0, -1, 1) == {-1: ECPoint(1, 1), 0: INFINITY, 1: Q0}
