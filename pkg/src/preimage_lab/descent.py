"""The curves C_D: D^2 y^4 = x^3 - x + 1 and the pullback of E(Q) to X4.

For each D = (-1)^e0 2^e1 23^e2 a rational point of C_D gives coprime
integers (X, Y, Z) with Y^4 = X^3 - D^4 X Z^8 + D^6 Z^12. That cubic splits
over K through A = X - D^2 theta Z^4, and the unit parts of the fourth-power
free decompositions of A and B = Y^4 / A are restricted to four pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal

from .cubic_field import THETA, KElement, UnitClass, fourth_power_free
from .elliptic import E_MAIN, INFINITY, Q0, THREE_Q0, ECPoint, apply_phi, express_as_multiple
from .errors import ClassificationError, DomainError
from .exact import factor_small, nth_root_rational
from .preimage_curves import ProjPoint, lift_to_X4, mu_inv


@dataclass(frozen=True, order=True)
class DValue:
    eps0: int
    eps1: int
    eps2: int

    def __post_init__(self):
        if any(e not in (0, 1) for e in (self.eps0, self.eps1, self.eps2)):
            raise DomainError("D exponents must be bits")

    @property
    def value(self) -> int:
        return (-1) ** self.eps0 * 2**self.eps1 * 23**self.eps2

    @classmethod
    def of(cls, value: int) -> "DValue":
        for D in enumerate_D():
            if D.value == value:
                return D
        raise DomainError(f"D must be one of +-1, +-2, +-23, +-46, got {value}")

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return str(self.value)


def enumerate_D() -> list[DValue]:
    return [DValue(e0, e1, e2) for e2 in (0, 1) for e1 in (0, 1) for e0 in (0, 1)]


def _as_D(D: DValue | int) -> DValue:
    return D if isinstance(D, DValue) else DValue.of(D)


def on_CD(x: Fraction, y: Fraction, D: DValue | int) -> bool:
    D = _as_D(D)
    x, y = Fraction(x), Fraction(y)
    return D.value**2 * y**4 == x**3 - x + 1


# ---------------------------------------------------------------------------
# integral triples and the elements A, B of K


@dataclass(frozen=True)
class XYZTriple:
    X: int
    Y: int
    Z: int


def _min_exponent_multiplier(den: int, k: int) -> dict[int, int]:
    fac = factor_small(den)
    if not fac.complete:
        raise DomainError(f"cannot factor denominator {den}")
    return {p: -(-e // k) for p, e in fac.factors.items()}


def clear_denominators(x: Fraction, y: Fraction, D: DValue | int) -> XYZTriple:
    """(X, Y, Z) with D^2 x = X / Z^4 and D^2 y = Y / Z^3, Z minimal."""
    D = _as_D(D)
    x, y = Fraction(x), Fraction(y)
    if not on_CD(x, y, D):
        raise DomainError(f"({x}, {y}) is not on C_{D}")
    xs, ys = D.value**2 * x, D.value**2 * y
    need = _min_exponent_multiplier(xs.denominator, 4)
    for p, e in _min_exponent_multiplier(ys.denominator, 3).items():
        need[p] = max(need.get(p, 0), e)
    Z = math.prod(p**e for p, e in need.items())
    X, Y = xs * Z**4, ys * Z**3
    assert X.denominator == 1 and Y.denominator == 1
    X, Y = int(X), int(Y)
    d4, d6 = D.value**4, D.value**6
    assert Y**4 == X**3 - d4 * X * Z**8 + d6 * Z**12
    if math.gcd(X, Y) != 1 or math.gcd(X, Z) != 1:
        raise AssertionError(f"triple {(X, Y, Z)} is not coprime")
    return XYZTriple(X, Y, Z)


def compute_AB(t: XYZTriple, D: DValue | int) -> tuple[KElement, KElement]:
    D = _as_D(D)
    d2 = D.value**2
    z4 = t.Z**4
    A = KElement(t.X) - THETA * (d2 * z4)
    B = KElement(t.X**2) + THETA * (d2 * t.X * z4) + (THETA * THETA - 1) * (d2 * d2 * z4 * z4)
    if A * B != KElement(t.Y**4):
        raise AssertionError(f"A*B != Y^4 for {t}")
    return A, B


# ---------------------------------------------------------------------------
# classification of the unit parts


CANDIDATE_PAIRS = (
    (UnitClass(0, 0), UnitClass(0, 0)),
    (UnitClass(1, 1), UnitClass(1, 3)),
    (UnitClass(0, 2), UnitClass(0, 2)),
    (UnitClass(1, 3), UnitClass(1, 1)),
)


@dataclass(frozen=True)
class DeltaPair:
    delta_A: KElement
    delta_B: KElement
    delta_A_class: UnitClass
    delta_B_class: UnitClass

    @property
    def classes(self) -> tuple[UnitClass, UnitClass]:
        return (self.delta_A_class, self.delta_B_class)

    @property
    def is_candidate(self) -> bool:
        return self.classes in CANDIDATE_PAIRS

    def to_json(self) -> dict:
        return {"delta_A": str(self.delta_A_class), "delta_B": str(self.delta_B_class)}


def delta_pair(A: KElement, B: KElement) -> DeltaPair:
    prod = fourth_power_free(A * B)
    if prod.delta_class != UnitClass(0, 0):
        raise DomainError("A*B is not a fourth power in K")
    parts = []
    for name, elt in (("A", A), ("B", B)):
        dec = fourth_power_free(elt)
        if not dec.delta_is_unit:
            raise ClassificationError(f"delta_{name} of {elt} is not a unit: {dec.delta}")
        parts.append(dec)
    a, b = parts
    pair = DeltaPair(a.delta, b.delta, a.delta_class, b.delta_class)
    if (pair.delta_A_class * pair.delta_B_class).reduced(4) != UnitClass(0, 0):
        raise ClassificationError(f"unit classes {pair.delta_A_class}, {pair.delta_B_class} do not cancel")
    return pair


def classify_point(x: Fraction, y: Fraction, D: DValue | int) -> DeltaPair:
    t = clear_denominators(x, y, D)
    return delta_pair(*compute_AB(t, D))


# ---------------------------------------------------------------------------
# bounded search on C_D


def _admissible_denominators(D: DValue, bound: int) -> list[int]:
    """Denominators m of x allowed by comparing v_p on both sides.

    If p divides m then v_p(x^3 - x + 1) = -3 v_p(m), which must equal
    2 v_p(D) + 4 v_p(y): so v_p(m) = 0 mod 4 when p does not divide D and
    v_p(m) = 2 mod 4 when it does.
    """
    out = []
    for m in range(1, bound + 1):
        fac = factor_small(m)
        if all(e % 4 == (2 if D.value % p == 0 else 0) for p, e in fac.factors.items()):
            out.append(m)
    return out


def cd_search(D: DValue | int, height_bound: int, prune: bool = True) -> list[tuple[Fraction, Fraction]]:
    """All (x, y) on C_D with naive height of x at most height_bound.

    ``prune=False`` scans every denominator; it exists to cross-check the
    valuation filter.
    """
    D = _as_D(D)
    if height_bound < 1:
        raise DomainError("height bound must be positive")
    dens = _admissible_denominators(D, height_bound) if prune else range(1, height_bound + 1)
    d2 = D.value**2
    found = []
    for m in dens:
        m3 = m**3
        for n in range(-height_bound, height_bound + 1):
            if math.gcd(n, m) != 1:
                continue
            num = n**3 - n * m * m + m3
            if num <= 0:
                continue
            r = nth_root_rational(Fraction(num, m3 * d2), 4)
            if r is None:
                continue
            x = Fraction(n, m)
            found.extend([(x, -r), (x, r)])
    return sorted(found)


# ---------------------------------------------------------------------------
# psi_D, the set S and its pullback to X4


def psi_D(pt: tuple[Fraction, Fraction], D: DValue | int) -> ECPoint:
    D = _as_D(D)
    x, y = pt
    if not on_CD(x, y, D):
        raise DomainError(f"{pt} is not on C_{D}")
    P = ECPoint(x, D.value * Fraction(y) ** 2)
    assert E_MAIN.contains(P)
    return P


PHI_VARIANTS: tuple[Literal["double", "translate_then_double"], ...] = ("double", "translate_then_double")

# The set S as a list of multiples of Q0.
EXPECTED_S_MULTIPLES = (-6, -4, -3, -2, -1, 0, 1, 2, 3, 4, 5, 6, 7, 9)


@dataclass(frozen=True)
class SElement:
    multiple: int
    point: ECPoint


def build_S(height_bound: int = 100) -> list[SElement]:
    """phi(psi_D(C_D(Q))) for D = +-1 and both phi, together with O and 3Q0."""
    images = {INFINITY, THREE_Q0}
    for D in (DValue.of(1), DValue.of(-1)):
        for pt in cd_search(D, height_bound):
            base = psi_D(pt, D)
            for variant in PHI_VARIANTS:
                images.add(apply_phi(variant, base))
    out = []
    for P in images:
        m = express_as_multiple(P, Q0, 20)
        if m is None:
            raise AssertionError(f"{P} is not a small multiple of Q0")
        out.append(SElement(m, P))
    return sorted(out, key=lambda s: s.multiple)


def pullback_by_multiple(S: Iterable[SElement] | None = None) -> dict[int, list[ProjPoint]]:
    if S is None:
        S = build_S()
    return {s.multiple: lift_to_X4(mu_inv(s.point)) for s in S}


def x4_points_over_S(S: Iterable[SElement] | None = None) -> list[ProjPoint]:
    pts = set()
    for lifts in pullback_by_multiple(S).values():
        pts.update(lifts)
    return sorted(pts, key=lambda p: p.coords, reverse=True)

