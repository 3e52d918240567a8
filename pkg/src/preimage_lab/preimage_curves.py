"""Projective preimage curves X^pre(2, N, a) and their maps to E.

X^pre(2, N, a) lives in P^N with coordinates [W, Z1, ..., ZN] and is cut out
by Z1^2 + Zi*W - Z(i+1)^2 - a*W^2 for 1 <= i <= N-1. X^pre(2, 3, 0) is
isomorphic to E: v^2 = u^3 - u + 1 through the two-chart map ``mu``, and
``pi`` is the projection X4 -> X3 followed by ``mu``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import product
from typing import Sequence

from .elliptic import E_MAIN, INFINITY, ECPoint
from .errors import DomainError
from .exact import exact_integer_root, is_prime, parse_rational
from .polynomials import (
    MPoly,
    discriminant,
    format_gf_poly,
    gf_factor,
    symmetric_residue,
    upoly_divmod,
    upoly_mul,
)


@dataclass(frozen=True)
class ProjPoint:
    """Primitive integer coordinates with the first nonzero entry positive."""

    coords: tuple[int, ...]

    def __post_init__(self):
        coords = tuple(self.coords)
        if not any(coords):
            raise DomainError("the zero vector is not a projective point")
        if any(not isinstance(c, int) for c in coords):
            raise DomainError("use ProjPoint.of for non-integer coordinates")
        g = reduce(math.gcd, coords)
        lead = next(c for c in coords if c)
        sign = -1 if lead < 0 else 1
        object.__setattr__(self, "coords", tuple(sign * c // g for c in coords))

    @classmethod
    def of(cls, values: Sequence[Fraction | int | str]) -> "ProjPoint":
        fracs = [parse_rational(v) if isinstance(v, str) else Fraction(v) for v in values]
        den = math.lcm(*(f.denominator for f in fracs))
        return cls(tuple(int(f * den) for f in fracs))

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __str__(self) -> str:
        return "[" + ",".join(str(c) for c in self.coords) + "]"


def curve_variables(N: int) -> tuple[str, ...]:
    return ("W",) + tuple(f"Z{i}" for i in range(1, N + 1))


@dataclass(frozen=True)
class IdealGens:
    generators: tuple[MPoly, ...]
    tags: tuple[str, ...]  # variable in which each generator is monic up to a unit

    @property
    def variables(self) -> tuple[str, ...]:
        return self.generators[0].variables


def preimage_ideal(N: int, a: Fraction | int = 0) -> IdealGens:
    if N < 2:
        raise DomainError("preimage curves need N >= 2")
    a = Fraction(a)
    names = curve_variables(N)
    W, *Z = MPoly.gens(names)
    gens = tuple(Z[0] ** 2 + Z[i] * W - Z[i + 1] ** 2 - a * W**2 for i in range(N - 1))
    return IdealGens(gens, tuple(f"Z{i + 2}" for i in range(N - 1)))


def on_curve(point: ProjPoint | Sequence[int], gens: IdealGens) -> bool:
    coords = point.coords if isinstance(point, ProjPoint) else tuple(point)
    if len(coords) != len(gens.variables):
        raise DomainError("point dimension does not match the ideal")
    return all(g(*coords) == 0 for g in gens.generators)


def boundary_points(N: int) -> list[ProjPoint]:
    """The 2^(N-1) points [0, ±1, ..., ±1] at W = 0, up to global sign."""
    if N < 2:
        raise DomainError("preimage curves need N >= 2")
    pts = {ProjPoint((0, 1) + signs) for signs in product((1, -1), repeat=N - 1)}
    return sorted(pts, key=lambda P: P.coords, reverse=True)


# ---------------------------------------------------------------------------
# ideal membership by a chain of remainders


@dataclass
class MembershipResult:
    member: bool
    remainder: MPoly
    quotients: dict[str, MPoly] = field(default_factory=dict)
    order: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.member


def _triangular_order(gens: IdealGens) -> list[int]:
    """Order generators so each one's tag is absent from all later ones.

    The remainder chain only decides membership when the k-th divisor does
    not involve the variables already eliminated.
    """
    remaining = list(range(len(gens.generators)))
    order = []
    while remaining:
        for i in remaining:
            tag = gens.tags[i]
            if not any(gens.generators[j].involves(tag) for j in remaining if j != i):
                order.append(i)
                remaining.remove(i)
                break
        else:
            raise DomainError("generators are not triangular in their tagged variables")
    return order


def ideal_membership(g: MPoly, gens: IdealGens, order: Sequence[str] | None = None) -> MembershipResult:
    """Reduce g by each generator in its tag variable.

    By default generators are taken in triangular order; an explicit
    ``order`` of tags is used as given, which can leave a nonzero remainder
    for members of the ideal.
    """
    if len(set(gens.tags)) != len(gens.tags):
        raise DomainError("generator tags must be distinct")
    for F, tag in zip(gens.generators, gens.tags):
        n = F.degree_in(tag)
        if n < 1 or F.coeff_in(tag, n).constant_value() in (None, 0):
            raise DomainError(f"generator {F} is not monic up to a unit in {tag}")
    if order is None:
        order = _triangular_order(gens)
    else:
        if sorted(order) != sorted(gens.tags):
            raise DomainError("order must list every tag once")
        order = [gens.tags.index(t) for t in order]
    r = g
    quotients = {}
    for i in order:
        q, r = r.divmod_in(gens.tags[i], gens.generators[i])
        quotients[gens.tags[i]] = q
    return MembershipResult(r.is_zero(), r, quotients, tuple(gens.tags[i] for i in order))


def reconstruct(result: MembershipResult, gens: IdealGens) -> MPoly:
    """sum(q_i * F_i) + remainder, which must give back the input."""
    total = result.remainder
    for F, tag in zip(gens.generators, gens.tags):
        total = total + result.quotients[tag] * F
    return total


# ---------------------------------------------------------------------------
# the isomorphism X^pre(2,3,0) -> E and the projection from X^pre(2,4,0)

X3 = preimage_ideal(3, 0)
X4 = preimage_ideal(4, 0)


def proportional(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(a[i] * b[j] == a[j] * b[i] for i in range(len(a)) for j in range(len(a)))


def _to_ec_point(uvs: Sequence[int]) -> ECPoint:
    U, V, S = uvs
    if S == 0:
        if U != 0:
            raise AssertionError(f"[{U},{V},{S}] is not on E")
        return INFINITY
    return ECPoint(Fraction(U, S), Fraction(V, S))


def mu_charts(p: ProjPoint) -> list[tuple[int, ...]]:
    """Values of every applicable chart of mu at p."""
    W, Z1, Z2, Z3 = p.coords
    charts = []
    if Z1 or Z2 or Z3:
        charts.append((Z2, Z3, Z1))
    mid = Z1 * Z2 + Z1 * W + W * W
    if mid:
        charts.append(((W + Z1) * Z3, mid, Z2 * Z3))
    return charts


def mu(p: ProjPoint) -> ECPoint:
    if len(p) != 4 or not on_curve(p, X3):
        raise DomainError(f"{p} is not on X^pre(2,3,0)")
    charts = mu_charts(p)
    if not charts:
        raise AssertionError(f"no chart of mu applies at {p}")
    for other in charts[1:]:
        if not proportional(charts[0], other):
            raise AssertionError(f"charts of mu disagree at {p}")
    return _to_ec_point(charts[0])


def _integral_uvs(P: ECPoint) -> tuple[int, int, int]:
    if P.is_infinity:
        return (0, 1, 0)
    den = math.lcm(P.u.denominator, P.v.denominator)
    return (int(P.u * den), int(P.v * den), den)


def mu_inv_charts(P: ECPoint) -> list[tuple[int, ...]]:
    U, V, S = _integral_uvs(P)
    charts = []
    if S:
        charts.append((U * U - S * S, S * S, U * S, V * S))
    if V * V - S * S:
        charts.append((V * V - S * S, U * S, U * U, U * V))
    return charts


def mu_inv(P: ECPoint) -> ProjPoint:
    if not E_MAIN.contains(P):
        raise DomainError(f"{P} is not on E")
    charts = mu_inv_charts(P)
    if not charts:
        raise AssertionError(f"no chart of mu^-1 applies at {P}")
    for other in charts[1:]:
        if not proportional(charts[0], other):
            raise AssertionError(f"charts of mu^-1 disagree at {P}")
    return ProjPoint(charts[0])


def pr(p: ProjPoint) -> ProjPoint:
    return ProjPoint(p.coords[:4])


def pi(p: ProjPoint) -> ECPoint:
    if len(p) != 5 or not on_curve(p, X4):
        raise DomainError(f"{p} is not on X^pre(2,4,0)")
    return mu(pr(p))


def lift_to_X4(p: ProjPoint) -> list[ProjPoint]:
    """Rational points of X4 over p: solve Z4^2 = Z1^2 + Z3*W."""
    if len(p) != 4 or not on_curve(p, X3):
        raise DomainError(f"{p} is not on X^pre(2,3,0)")
    W, Z1, Z2, Z3 = p.coords
    root = exact_integer_root(Z1 * Z1 + Z3 * W, 2)
    if root is None:
        return []
    return sorted({ProjPoint((W, Z1, Z2, Z3, s)) for s in (root, -root)}, key=lambda q: q.coords, reverse=True)


# The ten known rational points of X^pre(2,4,0), as printed, with the
# multiple m such that pi(P_i) = m*Q0.
KNOWN_X4_POINTS: dict[int, tuple[tuple[int, ...], int]] = {
    1: ((0, 1, 1, 1, 1), -1),
    2: ((0, -1, 1, 1, 1), 2),
    3: ((0, 1, -1, 1, 1), -2),
    4: ((0, -1, -1, 1, 1), 1),
    5: ((0, 1, 1, -1, 1), 1),
    6: ((0, -1, 1, -1, 1), -2),
    7: ((0, 1, -1, -1, 1), 2),
    8: ((0, -1, -1, -1, 1), -1),
    9: ((1, 0, 0, 0, 0), 0),
    10: ((1, -1, 0, -1, 0), 3),
}


def known_points() -> dict[int, ProjPoint]:
    return {i: ProjPoint(c) for i, (c, _) in KNOWN_X4_POINTS.items()}


# ---------------------------------------------------------------------------
# ramification polynomial, discriminants, reductions mod p


def critical_orbit(n: int) -> list[list[Fraction]]:
    """Coefficient lists of f_c^n(0) for n = 0..n, as polynomials in c."""
    orbit = [[]]
    cur: list[Fraction] = []
    for _ in range(n):
        sq = upoly_mul(cur, cur)
        cur = list(sq) + [Fraction(0)] * max(0, 2 - len(sq))
        cur[1] += 1
        orbit.append(cur)
    return orbit


RAMIFICATION_COEFFS = (1, 0, 2, 3, 3, 3, 1)  # c^6 + 3c^5 + 3c^4 + 3c^3 + 2c^2 + 1


def ramification_poly() -> MPoly:
    """F(c) = f_c^4(0) / f_c^2(0), checked to divide exactly."""
    orbit = critical_orbit(4)
    quot, rem = upoly_divmod(orbit[4], orbit[2])
    if rem:
        raise AssertionError("f_c^2(0) does not divide f_c^4(0)")
    if upoly_mul(orbit[2], quot) != orbit[4]:
        raise AssertionError("ramification polynomial identity failed")
    return MPoly.from_univariate(quot, "c")


def poly_disc(F: MPoly) -> Fraction:
    coeffs = F.to_univariate()
    if len(coeffs) < 2:
        raise DomainError("discriminant of a constant polynomial")
    return discriminant(coeffs)


@dataclass(frozen=True)
class ModPFactor:
    coeffs: tuple[int, ...]  # monic, lowest degree first
    multiplicity: int

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def format(self, var: str = "c") -> str:
        body = format_gf_poly(self.coeffs, var)
        return f"({body})" + (f"^{self.multiplicity}" if self.multiplicity > 1 else "")


def factor_mod_p(F: MPoly, p: int) -> list[ModPFactor]:
    coeffs = F.to_univariate()
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if coeffs[-1].numerator % p == 0:
        raise DomainError(f"{p} divides the leading coefficient")
    lead, factors = gf_factor(coeffs, p)
    out = [ModPFactor(tuple(g), m) for g, m in factors]
    if lead != 1:
        out.insert(0, ModPFactor((lead,), 1))
    return out


def format_factorization(factors: Sequence[ModPFactor], var: str = "c") -> str:
    return " ".join(f.format(var) for f in factors)


def iterate_poly(N: int) -> MPoly:
    """g(x, c) = f_c^N(x) as a polynomial in (x, c)."""
    x, c = MPoly.gens(("x", "c"))
    g = x
    for _ in range(N):
        g = g * g + c
    return g


SUPPORTED_SINGULAR_PRIMES = (23, 2551)


@dataclass(frozen=True)
class SingularPoint:
    c0: int  # symmetric residue
    projective: tuple[int, ...]  # [W, Z1, Z2, Z3, Z4] mod p, symmetric residues
    hessian: tuple[tuple[int, int], tuple[int, int]]
    hessian_det: int
    hessian_nondegenerate: bool


@dataclass(frozen=True)
class SingularReport:
    p: int
    double_roots: tuple[int, ...]
    points: tuple[SingularPoint, ...]

    @property
    def smooth(self) -> bool:
        return not self.points


def singular_check_mod_p(p: int) -> SingularReport:
    """Singular points of f_c^4(x) = 0 over F_p and their Hessians.

    A point (0, c0) is singular exactly when c0 is a multiple root of
    f_c^4(0); the Hessian of f_c^4(x) there decides whether it is a node.
    """
    if p not in SUPPORTED_SINGULAR_PRIMES:
        raise DomainError(f"p = {p} is not supported (use one of {SUPPORTED_SINGULAR_PRIMES})")
    orbit = critical_orbit(4)
    _, factors = gf_factor(orbit[4], p)
    doubles = sorted(symmetric_residue(-g[0], p) for g, m in factors if len(g) == 2 and m >= 2)
    g = iterate_poly(4)
    gx, gc = g.diff("x"), g.diff("c")
    hess = ((gx.diff("x"), gx.diff("c")), (gc.diff("x"), gc.diff("c")))
    points = []
    for c0 in doubles:
        at = (0, c0 % p)
        if g.eval_mod(at, p) or gx.eval_mod(at, p) or gc.eval_mod(at, p):
            raise AssertionError(f"(0, {c0}) is not a singular point mod {p}")
        h = tuple(tuple(symmetric_residue(e.eval_mod(at, p), p) for e in row) for row in hess)
        det = symmetric_residue(h[0][0] * h[1][1] - h[0][1] * h[1][0], p)
        z3 = c0
        z2 = z3 * z3 + c0
        z1 = z2 * z2 + c0
        proj = (1,) + tuple(symmetric_residue(z, p) for z in (z1, z2, z3, 0))
        if any(F.eval_mod(proj, p) for F in X4.generators):
            raise AssertionError(f"{proj} does not lie on X4 mod {p}")
        points.append(SingularPoint(c0, proj, h, det, det % p != 0))
    return SingularReport(p, tuple(doubles), tuple(points))


def riemann_hurwitz(genus_base: int, degree: int, simple_ram_count: int) -> int:
    """Genus g of a cover with 2g - 2 = degree*(2*genus_base - 2) + r."""
    if degree < 1 or genus_base < 0 or simple_ram_count < 0:
        raise DomainError("degree must be positive and counts non-negative")
    twice = degree * (2 * genus_base - 2) + simple_ram_count + 2
    if twice % 2 or twice < 0:
        raise DomainError("inputs give a non-integral or negative genus")
    return twice // 2
