"""Rational iterated preimages under f(x) = x^d + c.

Includes the closed-form counts for d >= 3, the bound kappa(d), and the
reductions used for d >= 3: a second preimage of 0 gives a solution of
A^d = C^(d-1) + B^(d(d-1)), hence of x^n + y^n = z^2, and for d = 3, 4 a
rational point of y^2 = x^3 -+ 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .elliptic import ECPoint, ECurve, ec_torsion, torsion_structure
from .errors import DomainError
from .exact import exact_integer_root, is_rational_square, nth_root_rational


def _check_degree(d: int, least: int) -> None:
    if not isinstance(d, int) or d < least:
        raise DomainError(f"degree must be an integer >= {least}, got {d!r}")


def preimage_step(d: int, c: Fraction, y: Fraction) -> set[Fraction]:
    """Rational x with x^d + c = y."""
    _check_degree(d, 2)
    r = nth_root_rational(Fraction(y) - Fraction(c), d)
    if r is None:
        return set()
    return {r, -r} if d % 2 == 0 else {r}


@dataclass
class PreimageTree:
    d: int
    c: Fraction
    root: Fraction
    levels: list[set[Fraction]] = field(default_factory=list)
    cycle_values: set[Fraction] = field(default_factory=set)
    truncated: bool = False

    @property
    def union(self) -> set[Fraction]:
        return set().union(*self.levels) if self.levels else set()

    def to_json(self) -> dict:
        def fmt(values):
            return [str(v) for v in sorted(values)]

        return {
            "d": str(self.d),
            "c": str(self.c),
            "root": str(self.root),
            "levels": [fmt(level) for level in self.levels],
            "union": fmt(self.union),
            "union_size": str(len(self.union)),
            "cycle_values": fmt(self.cycle_values),
            "truncated": self.truncated,
        }


def iterated_preimages(d: int, c: Fraction, a: Fraction, depth_limit: int) -> PreimageTree:
    """Breadth-first expansion of f^-N(a) for 1 <= N <= depth_limit.

    Each value is expanded once; a value met again (the root included) is
    recorded in ``cycle_values`` and not expanded a second time.
    ``truncated`` is set when the last level still had unexpanded values.
    """
    _check_degree(d, 2)
    if depth_limit < 1:
        raise DomainError("depth limit must be at least 1")
    c, a = Fraction(c), Fraction(a)
    tree = PreimageTree(d, c, a)
    seen = {a}
    frontier = {a}
    for _ in range(depth_limit):
        level = set()
        for y in frontier:
            level |= preimage_step(d, c, y)
        if not level:
            return tree
        tree.levels.append(level)
        tree.cycle_values |= level & seen
        frontier = level - seen
        seen |= level
        if not frontier:
            return tree
    tree.truncated = True
    return tree


def corollary_count(d: int, c: Fraction) -> int:
    """Number of rational iterated preimages of 0 under x^d + c, d >= 3."""
    _check_degree(d, 3)
    c = Fraction(c)
    r = nth_root_rational(-c, d)
    if d % 2 == 1:
        return 1 if r is not None else 0
    if c == -1:
        return 3
    if c == 0:
        return 1
    return 2 if r is not None else 0


def kappa(d: int) -> int:
    """Maximum over c of the number of rational iterated preimages of 0."""
    _check_degree(d, 2)
    if d == 2:
        return 6
    return 3 if d % 2 == 0 else 1


# ---------------------------------------------------------------------------
# reduction to x^n + y^n = z^2


@dataclass(frozen=True)
class DMTriple:
    d: int
    A: int
    B: int
    C: int

    def check(self) -> bool:
        d = self.d
        return (
            self.A != 0
            and self.B != 0
            and self.C != 0
            and math.gcd(self.A, self.B) == 1
            and math.gcd(self.B, self.C) == 1
            and self.A**d == self.C ** (d - 1) + self.B ** (d * (d - 1))
        )

    def to_solution(self) -> tuple[int, int, int, int]:
        """(x, y, z, n) with x^n + y^n = z^2."""
        d, A, B, C = self.d, self.A, self.B, self.C
        if d % 2 == 0:
            return (C, B**d, A ** (d // 2), d - 1)
        return (A, -(B ** (d - 1)), C ** ((d - 1) // 2), d)


def dm_triple_from_ratios(d: int, w: Fraction, r: Fraction) -> DMTriple:
    """Integers with w = C/B^d and r = A/B^(d-1), given r^d = w^(d-1) + 1."""
    _check_degree(d, 2)
    w, r = Fraction(w), Fraction(r)
    if r**d != w ** (d - 1) + 1:
        raise DomainError(f"({w}, {r}) does not satisfy r^d = w^(d-1) + 1")
    if w == 0 or r == 0:
        raise DomainError("degenerate ratios give a zero entry")
    B = exact_integer_root(w.denominator, d)
    if B is None:
        raise AssertionError(f"denominator of {w} is not a {d}-th power")
    C = w * B**d
    A = r * B ** (d - 1)
    if A.denominator != 1:
        raise AssertionError(f"{r} * B^(d-1) is not integral")
    t = DMTriple(d, int(A), B, int(C))
    if not t.check():
        raise AssertionError(f"{t} fails the exponent identity")
    return t


def dm_reduction(d: int, z1: Fraction, z2: Fraction) -> DMTriple:
    """Triple attached to a second preimage z2 of 0 under x^d - z1^d."""
    _check_degree(d, 5)
    z1, z2 = Fraction(z1), Fraction(z2)
    if z1 == 0:
        raise DomainError("z1 must be nonzero")
    if z2 == 0:
        raise DomainError("z2 = 0 would force z1^d = 0")
    c = -(z1**d)
    if (z2**d + c) ** d + c != 0:
        raise DomainError(f"z2 = {z2} is not a second preimage of 0 for c = {c}")
    if d % 2 == 0 and z2**d + c == -z1:
        z1 = -z1
    return dm_triple_from_ratios(d, 1 / z1, z2 / z1)


@dataclass(frozen=True)
class DMSolution:
    x: int
    y: int
    z: int
    trivial: bool


def dm_search(n: int, bound: int) -> list[DMSolution]:
    """Primitive solutions of x^n + y^n = z^2 with |x|, |y| <= bound."""
    if n < 2:
        raise DomainError("exponent must be at least 2")
    if bound < 0:
        raise DomainError("bound must be non-negative")
    powers = {x: x**n for x in range(-bound, bound + 1)}
    out = []
    for x, px in powers.items():
        for y, py in powers.items():
            s = px + py
            if s < 0:
                continue
            z = math.isqrt(s)
            if z * z != s or math.gcd(math.gcd(x, y), z) != 1:
                continue
            trivial = abs(x * y * z) <= 1
            for zz in sorted({z, -z}):
                out.append(DMSolution(x, y, zz, trivial))
    return sorted(out, key=lambda s: (s.x, s.y, s.z))


def nontrivial(solutions: list[DMSolution]) -> list[DMSolution]:
    return [s for s in solutions if not s.trivial]


# ---------------------------------------------------------------------------
# d = 3 and d = 4 through torsion of y^2 = x^3 -+ 1


@dataclass(frozen=True)
class RouteVerdict:
    d: int
    c: Fraction
    curve: ECurve
    torsion: tuple[ECPoint, ...]
    structure: str
    exclusions: tuple[tuple[ECPoint, str], ...]
    first_preimages: tuple[Fraction, ...]
    second_preimage_possible: bool

    @property
    def verdict(self) -> str:
        if self.second_preimage_possible:
            return "rational second preimage not excluded"
        return "no rational second preimage"

    def to_json(self) -> dict:
        return {
            "d": str(self.d),
            "c": str(self.c),
            "curve": str(self.curve),
            "torsion_structure": self.structure,
            "excluded": [{"point": P.to_json(), "reason": why} for P, why in self.exclusions],
            "first_preimages": [str(x) for x in self.first_preimages],
            "verdict": self.verdict,
        }


def _exclusion_d3(P: ECPoint) -> str | None:
    # (x, y) = (z2/z1, 1/z1)
    if P.is_infinity:
        return "point at infinity is not of the form (z2/z1, 1/z1)"
    if P.v == 0:
        return "1/z1 cannot vanish"
    return None


def _exclusion_d4(P: ECPoint) -> str | None:
    # (x, y) = (1/z1, (z2/z1)^2)
    if P.is_infinity:
        return "point at infinity is not of the form (1/z1, (z2/z1)^2)"
    if P.u == 0:
        return "1/z1 cannot vanish"
    if not is_rational_square(P.v):
        return f"{P.v} is not the square of a rational"
    if P.v == 0:
        return "z2 = 0 forces z1^4 = 1, that is c = -1"
    return None


def second_preimage_route_d34(d: int, c: Fraction) -> RouteVerdict:
    """Rule out z2 with f(f(z2)) = 0 and z2 not a first preimage, d in {3, 4}."""
    c = Fraction(c)
    if d not in (3, 4):
        raise DomainError("this route covers d = 3 and d = 4 only")
    if c == 0:
        raise DomainError("c must be nonzero")
    if d == 4 and c == -1:
        raise DomainError("c = -1 is excluded for d = 4")
    curve = ECurve(0, -1) if d == 3 else ECurve(0, 1)
    exclude = _exclusion_d3 if d == 3 else _exclusion_d4
    torsion = ec_torsion(curve)
    exclusions = []
    open_points = []
    for P, _ in torsion:
        why = exclude(P)
        if why is None:
            open_points.append(P)
        else:
            exclusions.append((P, why))
    return RouteVerdict(
        d,
        c,
        curve,
        tuple(P for P, _ in torsion),
        torsion_structure(torsion),
        tuple(exclusions),
        tuple(sorted(preimage_step(d, c, 0))),
        bool(open_points),
    )
