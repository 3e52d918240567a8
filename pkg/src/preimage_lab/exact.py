"""Exact integer and rational helpers.

Rationals are plain :class:`fractions.Fraction` values, which are always kept
in lowest terms with a positive denominator, so structural equality is exact
equality.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError, UndefinedInputError

DEFAULT_TRIAL_BOUND = 10**6

ExactRational = Fraction

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (arbitrary size) into a Fraction."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise DomainError(f"not a rational literal: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise DomainError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(q: Fraction | int) -> str:
    return str(Fraction(q))


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def padic_valuation(q: Fraction | int, p: int) -> int:
    q = Fraction(q)
    if q == 0:
        raise UndefinedInputError("valuation of 0 is undefined")
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    return _int_val(q.numerator, p) - _int_val(q.denominator, p)


def _int_val(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def integer_nth_root(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0, by binary search."""
    if n < 0:
        raise DomainError("negative radicand")
    if n < 2:
        return n
    lo, hi = 1, 1 << (n.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid**k <= n:
            lo = mid
        else:
            hi = mid - 1
    return lo


def exact_integer_root(n: int, k: int) -> int | None:
    """Integer r with r**k == n, or None. Odd k handles negative n."""
    if k < 1:
        raise DomainError("root index must be positive")
    if n < 0:
        if k % 2 == 0:
            return None
        r = exact_integer_root(-n, k)
        return None if r is None else -r
    r = math.isqrt(n) if k == 2 else integer_nth_root(n, k)
    return r if r**k == n else None


def nth_root_rational(q: Fraction | int, n: int) -> Fraction | None:
    """Rational r with r**n == q, or None if none exists.

    For even n the non-negative root is returned.
    """
    if n < 1:
        raise DomainError("root index must be positive")
    q = Fraction(q)
    num = exact_integer_root(q.numerator, n)
    if num is None:
        return None
    den = exact_integer_root(q.denominator, n)
    if den is None:
        return None
    return Fraction(num, den)


def is_rational_square(q: Fraction | int) -> bool:
    return nth_root_rational(q, 2) is not None


@dataclass(frozen=True)
class SmallFactorization:
    sign: int
    factors: dict[int, int] = field(default_factory=dict)
    cofactor: int = 1

    def value(self) -> int:
        out = self.sign * self.cofactor
        for p, e in self.factors.items():
            out *= p**e
        return out

    @property
    def complete(self) -> bool:
        return self.cofactor == 1


@lru_cache(maxsize=8)
def _primes_upto(bound: int) -> tuple[int, ...]:
    if bound < 2:
        return ()
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(bound) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, bound + 1, i)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def factor_small(n: int, bound: int = DEFAULT_TRIAL_BOUND) -> SmallFactorization:
    """Trial division by primes <= bound.

    The cofactor has no prime factor <= bound. If the cofactor is below
    bound**2 it is itself prime and is promoted to the factor map only when
    it does not exceed the bound, keeping the "listed primes <= bound"
    invariant.
    """
    if n == 0:
        raise DomainError("cannot factor 0")
    sign = -1 if n < 0 else 1
    n = abs(n)
    factors: dict[int, int] = {}
    for p in _primes_upto(bound):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            factors[p] = e
    if 1 < n <= bound:
        factors[n] = factors.get(n, 0) + 1
        n = 1
    return SmallFactorization(sign, dict(sorted(factors.items())), n)


def _pollard_brent(n: int, seed: int, max_iter: int) -> int | None:
    """A nontrivial factor of composite odd n, or None after max_iter steps."""
    y, c, m = seed % n, (seed * 7 + 1) % n or 1, 64
    g = r = q = 1
    x = ys = y
    steps = 0
    while g == 1 and steps < max_iter:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        r *= 2
        steps += r
    if g == n:
        while True:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
            if g > 1:
                break
    return g if 1 < g < n else None


def factor_integer(n: int, trial_bound: int = 10**4, max_iter: int = 10**6) -> SmallFactorization:
    """Trial division, then Miller-Rabin and Pollard-Brent on the cofactor.

    The result is incomplete only if rho gives up on a composite cofactor.
    """
    fac = factor_small(n, trial_bound)
    factors = dict(fac.factors)
    stack, stuck = ([fac.cofactor] if fac.cofactor > 1 else []), 1
    while stack:
        m = stack.pop()
        r = exact_integer_root(m, 2)
        if r is not None:
            stack.extend([r, r])
            continue
        if is_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        d = None
        for seed in range(1, 6):
            d = _pollard_brent(m, seed, max_iter)
            if d:
                break
        if d is None:
            stuck *= m
        else:
            stack.extend([d, m // d])
    return SmallFactorization(fac.sign, dict(sorted(factors.items())), stuck)


def rational_height(q: Fraction) -> int:
    """Naive height max(|num|, den)."""
    q = Fraction(q)
    return max(abs(q.numerator), q.denominator)
