"""Arithmetic in the cubic field K = Q(theta), theta^3 = theta - 1.

Elements are coordinate triples on the power basis (1, theta, theta^2).
The discriminant of t^3 - t + 1 is -23, which is squarefree, so the ring
of integers is Z[theta] and integrality is just integrality of coordinates.
K has class number 1 and unit group {+-1} x theta^Z, which is what makes
the decompositions below canonical once prime generators are fixed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Sequence

import mpmath

from .errors import DomainError, UndefinedInputError, UnsupportedInputError
from .exact import DEFAULT_TRIAL_BOUND, factor_integer, factor_small, is_prime, padic_valuation
from .polynomials import gf_factor, solve_linear

MIN_POLY = (1, -1, 0, 1)  # t^3 - t + 1, lowest degree first


@dataclass(frozen=True)
class KElement:
    c0: Fraction = Fraction(0)
    c1: Fraction = Fraction(0)
    c2: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("c0", "c1", "c2"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @classmethod
    def from_coords(cls, coords: Sequence[Fraction | int]) -> "KElement":
        c = list(coords) + [0] * (3 - len(coords))
        return cls(c[0], c[1], c[2])

    @property
    def coords(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.c0, self.c1, self.c2)

    def _coerce(self, other) -> "KElement":
        if isinstance(other, KElement):
            return other
        if isinstance(other, (int, Fraction)):
            return KElement(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return KElement(self.c0 + other.c0, self.c1 + other.c1, self.c2 + other.c2)

    __radd__ = __add__

    def __neg__(self):
        return KElement(-self.c0, -self.c1, -self.c2)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coords, other.coords
        d = [Fraction(0)] * 5
        for i in range(3):
            if a[i]:
                for j in range(3):
                    d[i + j] += a[i] * b[j]
        # theta^3 = theta - 1, theta^4 = theta^2 - theta
        return KElement(d[0] - d[3], d[1] + d[3] - d[4], d[2] + d[4])

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * k_inv(other)

    def __rtruediv__(self, other):
        return self._coerce(other) * k_inv(self)

    def __pow__(self, n: int) -> "KElement":
        if n < 0:
            return k_inv(self) ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self) -> bool:
        return bool(self.c0 or self.c1 or self.c2)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def denominator(self) -> int:
        return math.lcm(*(c.denominator for c in self.coords))

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coords]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "KElement":
        from .exact import parse_rational

        if len(data) != 3:
            raise DomainError("K element needs exactly three coordinates")
        return cls(*(parse_rational(x) for x in data))

    def __str__(self) -> str:
        parts = []
        for c, mono in zip(self.coords, ("", "θ", "θ^2")):
            if not c:
                continue
            if mono and abs(c) == 1:
                body = mono
            elif mono:
                body = f"{abs(c)}{mono}" if c.denominator == 1 else f"({abs(c)}){mono}"
            else:
                body = str(abs(c))
            parts.append(("-" if c < 0 else "+", body))
        if not parts:
            return "0"
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


ZERO = KElement(0)
ONE = KElement(1)
THETA = KElement(0, 1, 0)
BETA1 = KElement(-4, 0, 3)  # 3θ² - 4
BETA2 = KElement(-1, 0, 3)  # 3θ² - 1


def k_add(a: KElement, b: KElement) -> KElement:
    return a + b


def k_mul(a: KElement, b: KElement) -> KElement:
    return a * b


def mult_matrix(a: KElement) -> list[list[Fraction]]:
    """Matrix of x -> a*x on (1, θ, θ²); column j is a*θ^j."""
    cols = [a, a * THETA, a * THETA * THETA]
    return [[cols[j].coords[i] for j in range(3)] for i in range(3)]


def k_inv(a: KElement) -> KElement:
    if not a:
        raise DomainError("0 has no inverse in K")
    return KElement.from_coords(solve_linear(mult_matrix(a), [1, 0, 0]))


def _norm_coords(a0, a1, a2):
    """det of multiplication by a0 + a1θ + a2θ², expanded; exact for ints."""
    # columns: a, aθ = (-a2, a0 + a2, a1), aθ² = (-a1, a1 - a2, a0 + a2)
    b0, b1, b2 = -a2, a0 + a2, a1
    c0, c1, c2 = -a1, a1 - a2, a0 + a2
    return a0 * (b1 * c2 - b2 * c1) - b0 * (a1 * c2 - a2 * c1) + c0 * (a1 * b2 - a2 * b1)


def norm(a: KElement) -> Fraction:
    return Fraction(_norm_coords(*a.coords))


def trace(a: KElement) -> Fraction:
    m = mult_matrix(a)
    return m[0][0] + m[1][1] + m[2][2]


# ---------------------------------------------------------------------------
# embeddings


@lru_cache(maxsize=32)
def _embedding_roots(prec_bits: int):
    with mpmath.workprec(prec_bits):
        roots = mpmath.polyroots([1, 0, -1, 1], maxsteps=200, extraprec=prec_bits)
        real = next(r for r in roots if abs(mpmath.im(r)) < mpmath.mpf(2) ** (-prec_bits // 2))
        cplx = next(r for r in roots if mpmath.im(r) > mpmath.mpf(2) ** (-prec_bits // 2))
        return mpmath.re(real), cplx


def real_embedding(a: KElement, prec_bits: int = 64):
    """Value of a under the unique real embedding (θ ≈ -1.3247)."""
    with mpmath.workprec(prec_bits):
        r, _ = _embedding_roots(prec_bits)
        c0, c1, c2 = (mpmath.mpf(c.numerator) / c.denominator for c in a.coords)
        return c0 + c1 * r + c2 * r * r


# ---------------------------------------------------------------------------
# units


@dataclass(frozen=True)
class UnitClass:
    """The unit (-1)^sign_bit * θ^theta_exp."""

    sign_bit: int
    theta_exp: int

    def element(self) -> KElement:
        return (-ONE if self.sign_bit else ONE) * theta_power(self.theta_exp)

    def reduced(self, n: int) -> "UnitClass":
        return UnitClass(self.sign_bit % 2, self.theta_exp % n)

    def __mul__(self, other: "UnitClass") -> "UnitClass":
        return UnitClass((self.sign_bit + other.sign_bit) % 2, self.theta_exp + other.theta_exp)

    def __str__(self) -> str:
        return f"({'-' if self.sign_bit else '+'},{self.theta_exp})"


@lru_cache(maxsize=512)
def theta_power(k: int) -> KElement:
    return THETA**k


def _coord_bits(a: KElement) -> int:
    return max(abs(c.numerator).bit_length() + c.denominator.bit_length() for c in a.coords)


def unit_decompose(u: KElement) -> UnitClass:
    """Write an integral unit as (-1)^s θ^k.

    The exponent is estimated from the real embedding, |σ(u)| = |σ(θ)|^k,
    and then confirmed exactly.
    """
    if not u or not u.is_integral() or abs(norm(u)) != 1:
        raise DomainError(f"{u} is not a unit of Z[θ]")
    bits = 64 + 2 * _coord_bits(u)
    with mpmath.workprec(bits):
        sigma = real_embedding(u, bits)
        r, _ = _embedding_roots(bits)
        estimate = int(mpmath.nint(mpmath.log(abs(sigma)) / mpmath.log(abs(r))))
    for k in sorted(range(estimate - 3, estimate + 4), key=lambda j: abs(j - estimate)):
        t = theta_power(k)
        if u == t:
            return UnitClass(0, k)
        if u == -t:
            return UnitClass(1, k)
    raise AssertionError(f"unit {u} not of the form ±θ^k near k={estimate}")


# ---------------------------------------------------------------------------
# prime ideals


@dataclass(frozen=True)
class PrimeIdealRef:
    residue_char: int
    generator: KElement
    residue_degree: int
    ramification_index: int

    @property
    def norm(self) -> int:
        return self.residue_char**self.residue_degree


P1 = PrimeIdealRef(23, BETA1, 1, 1)
P2 = PrimeIdealRef(23, BETA2, 1, 2)
TWO = PrimeIdealRef(2, KElement(2), 3, 1)

_KNOWN_PRIMES = {2: (TWO,), 23: (P1, P2)}


def _lll(basis: list[list[int]], delta: Fraction = Fraction(3, 4)) -> list[list[int]]:
    """Textbook LLL on a small integer basis, exact arithmetic."""
    b = [list(v) for v in basis]
    n = len(b)

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    def gram_schmidt():
        bstar, mu = [], [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            v = [Fraction(x) for x in b[i]]
            for j in range(i):
                mu[i][j] = Fraction(dot(b[i], bstar[j])) / dot(bstar[j], bstar[j])
                v = [x - mu[i][j] * y for x, y in zip(v, bstar[j])]
            bstar.append(v)
        return bstar, mu

    bstar, mu = gram_schmidt()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                bstar, mu = gram_schmidt()
        if dot(bstar[k], bstar[k]) >= (delta - mu[k][k - 1] ** 2) * dot(bstar[k - 1], bstar[k - 1]):
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            bstar, mu = gram_schmidt()
            k = max(k - 1, 1)
    return b


def _ideal_basis(p: int, g: list[int]) -> list[list[int]]:
    """Z-basis of the prime (p, g(θ)) for a monic factor g of degree 1 or 2."""
    if len(g) == 2:
        r = (-g[0]) % p
        return [[p, 0, 0], [-r, 1, 0], [-(r * r % p), 0, 1]]
    return [[p, 0, 0], [0, p, 0], [g[0], g[1], 1]]


def _find_generator(p: int, g: list[int], search: int = 3) -> KElement:
    deg = len(g) - 1
    target = p**deg
    reduced = _lll(_ideal_basis(p, g))
    found = []
    for coeffs in product(range(-search, search + 1), repeat=3):
        if not any(coeffs):
            continue
        v = [sum(c * row[i] for c, row in zip(coeffs, reduced)) for i in range(3)]
        if abs(_norm_coords(*v)) == target:
            found.append((max(abs(x) for x in v), tuple(-x for x in v)))
    if not found:
        raise UnsupportedInputError(f"no short generator found for a prime above {p}")
    best = min(found)
    return KElement(*(-x for x in best[1]))


@lru_cache(maxsize=None)
def primes_above(p: int) -> tuple[PrimeIdealRef, ...]:
    """All prime ideals over p, each with a principal generator."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if p in _KNOWN_PRIMES:
        return _KNOWN_PRIMES[p]
    _, factors = gf_factor(MIN_POLY, p)
    out = []
    for g, e in factors:
        deg = len(g) - 1
        gen = KElement(p) if deg == 3 else _find_generator(p, g)
        out.append(PrimeIdealRef(p, gen, deg, e))
    return tuple(out)


def _split_denominator(a: KElement) -> tuple[KElement, int]:
    m = a.denominator()
    return a * m, m


def _valuation_integral(a: KElement, P: PrimeIdealRef) -> int:
    inv = k_inv(P.generator)
    v = 0
    while True:
        q = a * inv
        if not q.is_integral():
            return v
        a = q
        v += 1


def valuation_at(a: KElement, P: PrimeIdealRef) -> int:
    if not a:
        raise UndefinedInputError("valuation of 0 is undefined")
    num, m = _split_denominator(a)
    v_den = P.ramification_index * padic_valuation(m, P.residue_char)
    if norm(num) % P.residue_char:
        return -v_den
    return _valuation_integral(num, P) - v_den


# ---------------------------------------------------------------------------
# power-free decompositions


@dataclass(frozen=True)
class PowerFreeDecomp:
    """alpha = delta * s**n with every prime valuation of delta in [0, n)."""

    n: int
    delta: KElement
    s: KElement
    unit_class: UnitClass  # unit cofactor of delta, theta_exp in [0, n)
    prime_exponents: tuple[tuple[PrimeIdealRef, int], ...]  # (P, v_P(alpha))

    @property
    def delta_is_unit(self) -> bool:
        return all(v % self.n == 0 for _, v in self.prime_exponents)

    @property
    def delta_class(self) -> UnitClass | None:
        return self.unit_class if self.delta_is_unit else None


FourthPowerFreeDecomp = PowerFreeDecomp


RHO_TRIAL_BOUND = 10**4


def _factor_norm(N: int, bound: int, rho: bool) -> dict[int, int]:
    if rho:
        fac = factor_integer(N, trial_bound=min(bound, RHO_TRIAL_BOUND))
    else:
        fac = factor_small(N, bound)
    if not fac.complete:
        raise UnsupportedInputError(f"could not fully factor the norm {N}")
    return fac.factors


def power_free(a: KElement, n: int, bound: int = DEFAULT_TRIAL_BOUND, rho: bool = True) -> PowerFreeDecomp:
    """Decompose integral a as delta * s^n.

    Without ``rho`` the norm is factored by trial division up to ``bound``
    only. With it, trial division stops at min(bound, 10^4) and the cofactor
    is split by Pollard-Brent.
    """
    if not a:
        raise DomainError("decomposition of 0")
    if not a.is_integral():
        raise DomainError(f"{a} is not integral")
    factors = _factor_norm(int(norm(a)), bound, rho)
    delta, s, rest = ONE, ONE, a
    exps = []
    for p in factors:
        for P in primes_above(p):
            v = _valuation_integral(rest, P)
            if v == 0:
                continue
            exps.append((P, v))
            pi = P.generator
            rest = rest / pi**v
            delta = delta * pi ** (v % n)
            s = s * pi ** (v // n)
    unit = unit_decompose(rest)
    q, r = divmod(unit.theta_exp, n)
    delta = delta * UnitClass(unit.sign_bit, r).element()
    s = s * theta_power(q)
    result = PowerFreeDecomp(n, delta, s, UnitClass(unit.sign_bit, r), tuple(exps))
    assert result.delta * result.s**n == a
    return result


def fourth_power_free(a: KElement, bound: int = DEFAULT_TRIAL_BOUND) -> PowerFreeDecomp:
    return power_free(a, 4, bound)


def is_square(a: KElement, bound: int = DEFAULT_TRIAL_BOUND) -> bool:
    if not a:
        raise DomainError("0 has no square class")
    num, m = _split_denominator(a)
    d = power_free(num * m, 2, bound)
    return d.delta_is_unit and d.unit_class == UnitClass(0, 0)


@dataclass(frozen=True)
class SquareClass:
    """Class of an element in K^x/(K^x)^2, via its square-free part."""

    representative: KElement
    canonical_tag: str  # "trivial", "minus_theta" or "other"
    unit_class: UnitClass | None

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        return square_class(self.representative * other.representative)


def square_class(a: KElement, bound: int = DEFAULT_TRIAL_BOUND) -> SquareClass:
    if not a:
        raise DomainError("0 has no square class")
    num, m = _split_denominator(a)
    d = power_free(num * m, 2, bound)
    if not d.delta_is_unit:
        return SquareClass(d.delta, "other", None)
    uc = d.unit_class
    if uc == UnitClass(0, 0):
        tag = "trivial"
    elif uc == UnitClass(1, 1):
        tag = "minus_theta"
    else:
        tag = "other"
    return SquareClass(d.delta, tag, uc)
