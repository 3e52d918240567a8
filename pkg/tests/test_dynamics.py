from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from preimage_lab.dynamics import (
    DMSolution,
    DMTriple,
    corollary_count,
    dm_reduction,
    dm_search,
    dm_triple_from_ratios,
    iterated_preimages,
    kappa,
    nontrivial,
    preimage_step,
    second_preimage_route_d34,
)
from preimage_lab.elliptic import ECPoint, INFINITY
from preimage_lab.errors import DomainError

F = Fraction


@pytest.mark.parametrize(
    "d, c, y, expected",
    [(2, -2, 2, {2, -2}), (3, 0, 8, {2}), (2, 1, 0, set()), (3, F(1, 8), 0, {F(-1, 2)}), (4, 0, F(1, 16), {F(1, 2), F(-1, 2)})],
)
def test_preimage_step(d, c, y, expected):
    assert preimage_step(d, F(c), F(y)) == expected


def test_preimage_step_rejects_degree():
    with pytest.raises(DomainError):
        preimage_step(1, F(0), F(0))


def test_quadratic_cycle():
    tree = iterated_preimages(2, -1, 0, 10)
    assert tree.union == {1, -1, 0}
    assert tree.levels == [{1, -1}, {0}]
    assert tree.cycle_values == {0}
    assert not tree.truncated


@pytest.mark.parametrize("d, c, expected", [(4, -1, {1, -1, 0}), (3, -8, {2}), (4, -16, {2, -2}), (6, 5, set())])
def test_examples(d, c, expected):
    tree = iterated_preimages(d, c, 0, 10)
    assert tree.union == expected
    assert len(tree.union) == corollary_count(d, c)


def test_tree_json():
    data = iterated_preimages(4, -1, 0, 10).to_json()
    assert data["union"] == ["-1", "0", "1"]
    assert data["union_size"] == "3"
    assert data["levels"] == [["-1", "1"], ["0"]]
    assert data["cycle_values"] == ["0"]
    assert data["truncated"] is False


def test_truncation_and_limits():
    # the fixed point 2 of x^2 - 2 keeps its preimage -2 alive at every depth
    tree = iterated_preimages(2, -2, 2, 1)
    assert tree.truncated and tree.levels == [{2, -2}]
    tree = iterated_preimages(2, -2, 2, 5)
    assert tree.union == {2, -2, 0} and not tree.truncated
    with pytest.raises(DomainError):
        iterated_preimages(2, 0, 0, 0)
    assert iterated_preimages(2, 1, 0, 3).levels == []


@given(st.integers(2, 6), st.fractions(min_value=-20, max_value=20, max_denominator=4), st.sampled_from([0, 1, -1, 2]))
def test_levels_map_forward(d, c, a):
    tree = iterated_preimages(d, c, a, 6)
    previous = {F(a)}
    for level in tree.levels:
        for x in level:
            assert x**d + c in previous
        previous = level


@pytest.mark.parametrize("d, c, n", [(4, -16, 2), (5, 0, 1), (6, 5, 0), (3, -8, 1), (3, 2, 0), (4, 0, 1), (4, -1, 3), (4, 16, 0)])
def test_corollary_count(d, c, n):
    assert corollary_count(d, F(c)) == n


def test_corollary_and_kappa_domains():
    with pytest.raises(DomainError):
        corollary_count(2, F(0))
    with pytest.raises(DomainError):
        kappa(1)
    assert [kappa(d) for d in range(2, 9)] == [6, 1, 3, 1, 3, 1, 3]


def test_grid_matches_closed_form():
    grid = sorted({F(p, q) for p in range(-40, 41) for q in range(1, 7)})
    for d in range(3, 9):
        counts = []
        for c in grid:
            tree = iterated_preimages(d, c, 0, 12)
            assert not tree.truncated
            counts.append(len(tree.union))
            assert counts[-1] == corollary_count(d, c), (d, c)
        assert max(counts) == kappa(d)


# ---------------------------------------------------------------- reductions


def test_triple_from_ratios():
    # d = 2: r^2 = w + 1 with w = 3, r = 2
    t = dm_triple_from_ratios(2, F(3), F(2))
    assert t == DMTriple(2, 2, 1, 3) and t.check()
    x, y, z, n = t.to_solution()
    assert x**n + y**n == z**2
    t = dm_triple_from_ratios(2, F(5, 4), F(3, 2))
    assert (t.A, t.B, t.C) == (3, 2, 5)
    with pytest.raises(DomainError):
        dm_triple_from_ratios(2, F(3), F(3))
    with pytest.raises(DomainError):
        dm_triple_from_ratios(3, F(0), F(1))
    with pytest.raises(DomainError):
        dm_triple_from_ratios(1, F(1), F(1))


@given(st.integers(1, 30), st.integers(1, 30), st.integers(1, 30), st.sampled_from([3, 4, 5, 6, 7]))
def test_solution_conversion_identity(A, B, C, d):
    # x^n + y^n - z^2 equals A^d - C^(d-1) - B^(d(d-1)) up to sign
    x, y, z, n = DMTriple(d, A, B, C).to_solution()
    lhs = x**n + y**n - z**2
    gap = A**d - C ** (d - 1) - B ** (d * (d - 1))
    assert lhs == (gap if d % 2 else -gap)


def test_triple_check_rejects():
    assert not DMTriple(2, 2, 1, 4).check()
    assert not DMTriple(2, 0, 1, 3).check()
    assert not DMTriple(2, 2, 2, 0).check()


def test_dm_reduction_rejects_non_witnesses():
    # z1 = 1/2 with z2/z1 = 3/16 for d = 5 fails (3/16)^5 = 2^4 + 1
    with pytest.raises(DomainError):
        dm_reduction(5, F(1, 2), F(3, 32))
    with pytest.raises(DomainError):
        dm_reduction(5, F(1, 2), F(0))
    with pytest.raises(DomainError):
        dm_reduction(5, F(0), F(1))
    with pytest.raises(DomainError):
        dm_reduction(4, F(1), F(1))
    # a first preimage is not a second one
    with pytest.raises(DomainError):
        dm_reduction(6, F(2), F(2))


def test_dm_search_examples():
    sols = dm_search(4, 50)
    assert nontrivial(sols) == []
    assert DMSolution(1, 0, 1, True) in sols and DMSolution(0, 1, -1, True) in sols
    assert DMSolution(1, -1, 0, True) in dm_search(5, 50)
    assert nontrivial(dm_search(6, 30)) == []
    with pytest.raises(DomainError):
        dm_search(1, 5)
    with pytest.raises(DomainError):
        dm_search(4, -1)


def test_dm_search_small_exponents_do_find_solutions():
    found = {(s.x, s.y, s.z) for s in nontrivial(dm_search(3, 10))}
    assert (1, 2, 3) in found and (-7, 8, 13) in found
    assert all(x**3 + y**3 == z**2 for x, y, z in found)


def test_no_nontrivial_solutions_at_bound_200():
    for n in range(4, 10):
        assert nontrivial(dm_search(n, 200)) == []


def test_route_d3():
    v = second_preimage_route_d34(3, F(-8))
    assert v.structure == "Z/2"
    assert [P for P, _ in v.exclusions] == [INFINITY, ECPoint(1, 0)]
    assert v.first_preimages == (2,)
    assert v.verdict == "no rational second preimage"
    data = v.to_json()
    assert data["excluded"][1] == {"point": {"u": "1", "v": "0"}, "reason": "1/z1 cannot vanish"}
    assert data["first_preimages"] == ["2"]


def test_route_d4():
    v = second_preimage_route_d34(4, F(-16))
    assert v.structure == "Z/6" and len(v.torsion) == 6
    reasons = {P: why for P, why in v.exclusions}
    assert reasons[ECPoint(2, 3)] == "3 is not the square of a rational"
    assert reasons[ECPoint(2, -3)] == "-3 is not the square of a rational"
    assert "c = -1" in reasons[ECPoint(-1, 0)]
    assert not v.second_preimage_possible
    v = second_preimage_route_d34(4, F(7))
    assert v.first_preimages == () and v.verdict == "no rational second preimage"


@pytest.mark.parametrize("d, c", [(5, -1), (3, 0), (4, -1)])
def test_route_domain(d, c):
    with pytest.raises(DomainError):
        second_preimage_route_d34(d, F(c))
