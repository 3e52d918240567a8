"""Short Weierstrass curves over Q with exact group law.

The curve of interest is E: v^2 = u^3 - u + 1, with E(Q) infinite cyclic
generated by Q0 = (1, -1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal

from .cubic_field import THETA, KElement, SquareClass, square_class
from .errors import DomainError
from .exact import factor_small, format_rational, nth_root_rational, parse_rational

TORSION_ORDER_BOUND = 12


@dataclass(frozen=True)
class ECurve:
    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.discriminant == 0:
            raise DomainError(f"singular curve {self}")

    @property
    def discriminant(self) -> Fraction:
        return -16 * (4 * self.a**3 + 27 * self.b**2)

    def rhs(self, u: Fraction) -> Fraction:
        return u**3 + self.a * u + self.b

    def contains(self, P: "ECPoint") -> bool:
        return P.is_infinity or P.v**2 == self.rhs(P.u)

    def __str__(self) -> str:
        return f"v^2 = u^3 + ({self.a})u + ({self.b})"


@dataclass(frozen=True)
class ECPoint:
    u: Fraction | None = None
    v: Fraction | None = None

    def __post_init__(self):
        if (self.u is None) != (self.v is None):
            raise DomainError("a point needs both coordinates or neither")
        if self.u is not None:
            object.__setattr__(self, "u", Fraction(self.u))
            object.__setattr__(self, "v", Fraction(self.v))

    @property
    def is_infinity(self) -> bool:
        return self.u is None

    def to_json(self):
        if self.is_infinity:
            return "infinity"
        return {"u": format_rational(self.u), "v": format_rational(self.v)}

    @classmethod
    def from_json(cls, data) -> "ECPoint":
        if data == "infinity":
            return INFINITY
        return cls(parse_rational(data["u"]), parse_rational(data["v"]))

    def sort_key(self):
        if self.is_infinity:
            return (0, 0, 0, 0)
        return (1, self.u.denominator, self.u, self.v)

    def __str__(self) -> str:
        return "O" if self.is_infinity else f"({self.u}, {self.v})"


INFINITY = ECPoint()
E_MAIN = ECurve(-1, 1)
Q0 = ECPoint(1, -1)
THREE_Q0 = ECPoint(0, 1)


def _check(E: ECurve, *points: ECPoint) -> None:
    for P in points:
        if not E.contains(P):
            raise DomainError(f"{P} is not on {E}")


def ec_neg(E: ECurve, P: ECPoint) -> ECPoint:
    _check(E, P)
    return P if P.is_infinity else ECPoint(P.u, -P.v)


def ec_add(E: ECurve, P: ECPoint, Q: ECPoint) -> ECPoint:
    _check(E, P, Q)
    return _add(E, P, Q)


def _add(E: ECurve, P: ECPoint, Q: ECPoint) -> ECPoint:
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    if P.u == Q.u:
        if P.v == -Q.v:
            return INFINITY
        slope = (3 * P.u**2 + E.a) / (2 * P.v)
    else:
        slope = (Q.v - P.v) / (Q.u - P.u)
    u = slope**2 - P.u - Q.u
    return ECPoint(u, slope * (P.u - u) - P.v)


def ec_mul(E: ECurve, n: int, P: ECPoint) -> ECPoint:
    _check(E, P)
    if n < 0:
        n, P = -n, ECPoint(P.u, -P.v) if not P.is_infinity else P
    result, base = INFINITY, P
    while n:
        if n & 1:
            result = _add(E, result, base)
        base = _add(E, base, base)
        n >>= 1
    return result


def ec_search_points(E: ECurve, height_bound: int) -> list[ECPoint]:
    """All affine points with u = p/e^2, v = q/e^3, max(|p|, e^2) <= bound.

    Needs an integral model; ordered by e, then p, then v.
    """
    if E.a.denominator != 1 or E.b.denominator != 1:
        raise DomainError("point search needs an integral model")
    a, b = E.a.numerator, E.b.numerator
    found = []
    e = 1
    while e * e <= height_bound:
        e2, e4, e6 = e * e, e**4, e**6
        for p in range(-height_bound, height_bound + 1):
            if math.gcd(p, e) != 1:
                continue
            val = p**3 + a * p * e4 + b * e6
            if val < 0:
                continue
            q = math.isqrt(val)
            if q * q != val:
                continue
            u = Fraction(p, e2)
            for sq in sorted({-q, q}):
                found.append(ECPoint(u, Fraction(sq, e**3)))
        e += 1
    return found


def point_order(E: ECurve, P: ECPoint, bound: int = TORSION_ORDER_BOUND) -> int | None:
    Q = P
    for n in range(1, bound + 1):
        if Q.is_infinity:
            return n
        Q = _add(E, Q, P)
    return None


def _divisors(n: int) -> list[int]:
    fac = factor_small(n)
    if not fac.complete:
        raise DomainError(f"cannot fully factor {n}")
    divs = [1]
    for p, e in fac.factors.items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def _integer_roots_of_cubic(a: int, c: int) -> list[int]:
    """Integer roots of x^3 + a x + c."""
    if c == 0:
        roots = {0}
        r = nth_root_rational(-a, 2)
        if r is not None and r.denominator == 1:
            roots |= {int(r), -int(r)}
        return sorted(roots)
    return sorted(x for d in _divisors(abs(c)) for x in (d, -d) if x**3 + a * x + c == 0)


def ec_torsion(E: ECurve) -> list[tuple[ECPoint, int]]:
    """Torsion points with their orders, via Lutz-Nagell.

    Candidates are integral points with v = 0 or v^2 | 4a^3 + 27b^2; each is
    kept only if its order is at most 12.
    """
    if E.a.denominator != 1 or E.b.denominator != 1:
        raise DomainError("Lutz-Nagell needs an integral model")
    a, b = E.a.numerator, E.b.numerator
    delta = abs(4 * a**3 + 27 * b**2)
    ys = {0}
    for d in _divisors(delta):
        r = math.isqrt(d)
        if r * r == d:
            ys |= {r, -r}
    out = [(INFINITY, 1)]
    for y in sorted(ys):
        for x in _integer_roots_of_cubic(a, b - y * y):
            P = ECPoint(x, y)
            order = point_order(E, P)
            if order is not None:
                out.append((P, order))
    return sorted(out, key=lambda t: t[0].sort_key())


def torsion_structure(points: Iterable[tuple[ECPoint, int]]) -> str:
    """Cyclic-group label such as "Z/6" when one point has full order."""
    points = list(points)
    n = len(points)
    if n == 1:
        return "trivial"
    if any(order == n for _, order in points):
        return f"Z/{n}"
    return f"non-cyclic of order {n}"


def apply_phi(variant: Literal["double", "translate_then_double"], P: ECPoint) -> ECPoint:
    """[2]P, or [2]P + 3Q0 on the fixed curve v^2 = u^3 - u + 1."""
    _check(E_MAIN, P)
    doubled = _add(E_MAIN, P, P)
    if variant == "double":
        return doubled
    if variant == "translate_then_double":
        return _add(E_MAIN, doubled, THREE_Q0)
    raise DomainError(f"unknown variant {variant!r}")


TRIVIAL_CLASS = SquareClass(KElement(1), "trivial", None)


def x_minus_T(P: ECPoint) -> SquareClass:
    """Square class of u - θ in K^x/(K^x)^2; trivial at infinity."""
    _check(E_MAIN, P)
    if P.is_infinity:
        return square_class(KElement(1))
    return square_class(KElement(P.u) - THETA)


def express_as_multiple(P: ECPoint, G: ECPoint, max_n: int, E: ECurve = E_MAIN) -> int | None:
    """Smallest |n| <= max_n with nG = P (positive n first on ties)."""
    _check(E, P, G)
    if P.is_infinity:
        return 0
    plus, minus = INFINITY, INFINITY
    negG = ECPoint(G.u, -G.v) if not G.is_infinity else G
    for n in range(1, max_n + 1):
        plus = _add(E, plus, G)
        minus = _add(E, minus, negG)
        if plus == P:
            return n
        if minus == P:
            return -n
    return None


def multiples(G: ECPoint, lo: int, hi: int, E: ECurve = E_MAIN) -> dict[int, ECPoint]:
    return {m: ec_mul(E, m, G) for m in range(lo, hi + 1)}
