"""Sparse multivariate polynomials over Q, plus univariate tools.

Univariate polynomials are handled as coefficient lists, lowest degree
first: over Q as lists of Fractions, over F_p as lists of ints in [0, p).
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .errors import DomainError
from .exact import is_prime

Exponents = tuple[int, ...]


class MPoly:
    """Polynomial with rational coefficients in a fixed tuple of variables."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponents, Fraction | int] | None = None):
        self.variables = tuple(variables)
        clean: dict[Exponents, Fraction] = {}
        for exps, coeff in (terms or {}).items():
            if len(exps) != len(self.variables):
                raise DomainError("exponent vector length does not match variables")
            coeff = Fraction(coeff)
            if coeff:
                clean[tuple(exps)] = coeff
        self.terms = clean

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, variables: Sequence[str], value: Fraction | int) -> "MPoly":
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> "MPoly":
        variables = tuple(variables)
        exps = tuple(1 if v == name else 0 for v in variables)
        if sum(exps) != 1:
            raise DomainError(f"unknown variable {name!r}")
        return cls(variables, {exps: 1})

    @classmethod
    def gens(cls, variables: Sequence[str]) -> tuple["MPoly", ...]:
        return tuple(cls.var(variables, v) for v in variables)

    @classmethod
    def from_univariate(cls, coeffs: Sequence[Fraction | int], name: str = "t") -> "MPoly":
        return cls((name,), {(k,): c for k, c in enumerate(coeffs)})

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.variables != self.variables:
                raise DomainError("polynomials live in different rings")
            return other
        return MPoly.const(self.variables, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return MPoly(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return MPoly(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise DomainError("negative power of a polynomial")
        result = MPoly.const(self.variables, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(self.variables, other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    # inspection ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def _index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise DomainError(f"unknown variable {name!r}") from None

    def degree_in(self, name: str) -> int:
        i = self._index(name)
        return max((e[i] for e in self.terms), default=-1)

    def coeff_in(self, name: str, k: int) -> "MPoly":
        """Coefficient of name**k, as a polynomial not involving name."""
        i = self._index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i] == k:
                out[e[:i] + (0,) + e[i + 1 :]] = c
        return MPoly(self.variables, out)

    def involves(self, name: str) -> bool:
        return self.degree_in(name) > 0

    def constant_value(self) -> Fraction | None:
        if not self.terms:
            return Fraction(0)
        if list(self.terms) == [(0,) * len(self.variables)]:
            return next(iter(self.terms.values()))
        return None

    def diff(self, name: str) -> "MPoly":
        i = self._index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                out[e[:i] + (e[i] - 1,) + e[i + 1 :]] = c * e[i]
        return MPoly(self.variables, out)

    def __call__(self, *values, **named) -> Fraction:
        if named:
            values = tuple(named[v] for v in self.variables)
        if len(values) != len(self.variables):
            raise DomainError("wrong number of values")
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for x, k in zip(values, e):
                if k:
                    term *= Fraction(x) ** k
            total += term
        return total

    def eval_mod(self, values: Sequence[int], p: int) -> int:
        total = 0
        for e, c in self.terms.items():
            if c.denominator % p == 0:
                raise DomainError(f"coefficient {c} is not p-integral for p={p}")
            term = c.numerator * pow(c.denominator, -1, p)
            for x, k in zip(values, e):
                term = term * pow(x, k, p)
            total += term
        return total % p

    def substitute(self, name: str, value: "MPoly | Fraction | int") -> "MPoly":
        i = self._index(name)
        value = self._coerce(value)
        out = MPoly(self.variables)
        for e, c in self.terms.items():
            mono = MPoly(self.variables, {e[:i] + (0,) + e[i + 1 :]: c})
            out = out + mono * value ** e[i]
        return out

    def divmod_in(self, name: str, divisor: "MPoly") -> tuple["MPoly", "MPoly"]:
        """Division in the variable ``name`` by a divisor whose leading
        coefficient in ``name`` is a nonzero constant.
        """
        divisor = self._coerce(divisor)
        n = divisor.degree_in(name)
        lead = divisor.coeff_in(name, n).constant_value()
        if n < 0 or lead is None or lead == 0:
            raise DomainError(f"divisor is not monic (up to a unit) in {name}")
        x = MPoly.var(self.variables, name)
        quotient = MPoly(self.variables)
        rem = self
        while rem.degree_in(name) >= n:
            k = rem.degree_in(name)
            top = rem.coeff_in(name, k) * (Fraction(1) / lead) * x ** (k - n)
            quotient = quotient + top
            rem = rem - top * divisor
        return quotient, rem

    def to_univariate(self) -> list[Fraction]:
        if len(self.variables) != 1:
            raise DomainError("not a univariate polynomial")
        deg = self.total_degree()
        return [self.terms.get((k,), Fraction(0)) for k in range(deg + 1)]

    # printing -----------------------------------------------------------
    def sorted_terms(self) -> list[tuple[Exponents, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for exps, c in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, exps) if k
            )
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = str(mag)
            pieces.append(("-" if c < 0 else "+", body))
        first_sign, first = pieces[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"MPoly({self.variables}, {str(self)!r})"


# ---------------------------------------------------------------------------
# univariate over Q


def _trim(coeffs: Sequence) -> list:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return out


def upoly_eval(coeffs: Sequence[Fraction | int], x: Fraction | int) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def upoly_mul(f: Sequence, g: Sequence) -> list[Fraction]:
    if not f or not g:
        return []
    out = [Fraction(0)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] += a * b
    return _trim(out)


def upoly_add(f: Sequence, g: Sequence) -> list[Fraction]:
    n = max(len(f), len(g))
    return _trim([Fraction(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)])


def upoly_divmod(f: Sequence, g: Sequence) -> tuple[list[Fraction], list[Fraction]]:
    g = _trim([Fraction(c) for c in g])
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    rem = _trim([Fraction(c) for c in f])
    quot = [Fraction(0)] * max(len(rem) - len(g) + 1, 0)
    while len(rem) >= len(g):
        shift = len(rem) - len(g)
        factor = rem[-1] / g[-1]
        quot[shift] = factor
        for i, c in enumerate(g):
            rem[shift + i] -= factor * c
        rem = _trim(rem)
    return quot, rem


def upoly_derivative(coeffs: Sequence) -> list[Fraction]:
    return _trim([Fraction(c) * k for k, c in enumerate(coeffs)][1:])


def determinant(matrix: Sequence[Sequence[Fraction | int]]) -> Fraction:
    """Exact determinant by fraction-valued Gaussian elimination."""
    m = [[Fraction(x) for x in row] for row in matrix]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        for r in range(col + 1, n):
            if m[r][col]:
                ratio = m[r][col] / m[col][col]
                for k in range(col, n):
                    m[r][k] -= ratio * m[col][k]
    return det


def solve_linear(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction]:
    """Solve a square nonsingular system exactly."""
    n = len(matrix)
    m = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            raise DomainError("singular linear system")
        m[col], m[pivot] = m[pivot], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                ratio = m[r][col]
                m[r] = [a - ratio * b for a, b in zip(m[r], m[col])]
    return [row[n] for row in m]


def sylvester_matrix(f: Sequence, g: Sequence) -> list[list[Fraction]]:
    f, g = _trim(f), _trim(g)
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    fh, gh = list(reversed(f)), list(reversed(g))
    for i in range(n):
        rows.append([Fraction(0)] * i + [Fraction(c) for c in fh] + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + [Fraction(c) for c in gh] + [Fraction(0)] * (size - n - 1 - i))
    return rows


def resultant(f: Sequence, g: Sequence) -> Fraction:
    f, g = _trim(f), _trim(g)
    if not f or not g:
        return Fraction(0)
    if len(f) == 1 and len(g) == 1:
        return Fraction(1)
    return determinant(sylvester_matrix(f, g))


def discriminant(coeffs: Sequence[Fraction | int]) -> Fraction:
    """disc(f) = (-1)^(n(n-1)/2) Res(f, f') / lc(f)."""
    f = _trim([Fraction(c) for c in coeffs])
    n = len(f) - 1
    if n < 1:
        raise DomainError("discriminant of a constant polynomial")
    if n == 1:
        return Fraction(1)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(f, upoly_derivative(f)) / f[-1]


# ---------------------------------------------------------------------------
# univariate over F_p


def _gf_trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def gf_reduce(coeffs: Iterable[Fraction | int], p: int) -> list[int]:
    out = []
    for c in coeffs:
        c = Fraction(c)
        if c.denominator % p == 0:
            raise DomainError(f"coefficient {c} not defined mod {p}")
        out.append(c.numerator * pow(c.denominator, -1, p) % p)
    return _gf_trim(out)


def gf_monic(f: list[int], p: int) -> list[int]:
    inv = pow(f[-1], -1, p)
    return [c * inv % p for c in f]


def gf_sub(f: list[int], g: list[int], p: int) -> list[int]:
    n = max(len(f), len(g))
    return _gf_trim([((f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)) % p for i in range(n)])


def gf_mul(f: list[int], g: list[int], p: int) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _gf_trim(out)


def gf_divmod(f: list[int], g: list[int], p: int) -> tuple[list[int], list[int]]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(f)
    inv = pow(g[-1], -1, p)
    quot = [0] * max(len(rem) - len(g) + 1, 0)
    while len(rem) >= len(g) and rem:
        shift = len(rem) - len(g)
        factor = rem[-1] * inv % p
        quot[shift] = factor
        for i, c in enumerate(g):
            rem[shift + i] = (rem[shift + i] - factor * c) % p
        _gf_trim(rem)
    return _gf_trim(quot), rem


def gf_gcd(f: list[int], g: list[int], p: int) -> list[int]:
    while g:
        f, g = g, gf_divmod(f, g, p)[1]
    return gf_monic(f, p) if f else []


def gf_powmod(f: list[int], n: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = gf_divmod(f, mod, p)[1]
    while n:
        if n & 1:
            result = gf_divmod(gf_mul(result, base, p), mod, p)[1]
        base = gf_divmod(gf_mul(base, base, p), mod, p)[1]
        n >>= 1
    return result


def gf_derivative(f: list[int], p: int) -> list[int]:
    return _gf_trim([k * c % p for k, c in enumerate(f)][1:])


def gf_eval(f: Sequence[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def gf_squarefree(f: list[int], p: int) -> list[tuple[list[int], int]]:
    """Square-free decomposition of a monic polynomial over F_p."""
    out: list[tuple[list[int], int]] = []
    if len(f) <= 1:
        return out
    df = gf_derivative(f, p)
    if not df:
        # f = g(x^p) = g^(1/p)(x)^p since Frobenius is the identity on F_p
        root = [f[k] for k in range(0, len(f), p)]
        return [(g, m * p) for g, m in gf_squarefree(root, p)]
    c = gf_gcd(f, df, p)
    w = gf_divmod(f, c, p)[0]
    i = 1
    while len(w) > 1:
        y = gf_gcd(w, c, p)
        z = gf_divmod(w, y, p)[0]
        if len(z) > 1:
            out.append((gf_monic(z, p), i))
        i += 1
        w = y
        c = gf_divmod(c, y, p)[0]
    if len(c) > 1:
        root = [c[k] for k in range(0, len(c), p)]
        out.extend((g, m * p) for g, m in gf_squarefree(gf_monic(root, p), p))
    return out


def gf_distinct_degree(f: list[int], p: int) -> list[tuple[list[int], int]]:
    """Split a monic square-free f into products of equal-degree factors."""
    out = []
    h = [0, 1]
    d = 0
    rest = f
    while len(rest) - 1 >= 2 * (d + 1):
        d += 1
        h = gf_powmod(h, p, rest, p)
        g = gf_gcd(rest, gf_sub(h, [0, 1], p), p)
        if len(g) > 1:
            out.append((g, d))
            rest = gf_divmod(rest, g, p)[0]
            h = gf_divmod(h, rest, p)[1]
    if len(rest) > 1:
        out.append((rest, len(rest) - 1))
    return out


def gf_equal_degree(f: list[int], d: int, p: int, rng: random.Random) -> list[list[int]]:
    """Cantor-Zassenhaus splitting of a product of degree-d irreducibles (odd p)."""
    n = len(f) - 1
    if n == d:
        return [f]
    while True:
        a = _gf_trim([rng.randrange(p) for _ in range(n)])
        if len(a) <= 1:
            continue
        g = gf_gcd(f, a, p)
        if 1 < len(g) < len(f):
            break
        b = gf_powmod(a, (p**d - 1) // 2, f, p)
        g = gf_gcd(f, gf_sub(b, [1], p), p)
        if 1 < len(g) < len(f):
            break
    return gf_equal_degree(g, d, p, rng) + gf_equal_degree(gf_divmod(f, g, p)[0], d, p, rng)


def gf_factor(coeffs: Sequence[Fraction | int], p: int, seed: int = 0) -> tuple[int, list[tuple[list[int], int]]]:
    """Factor over F_p into (leading coeff, [(monic irreducible, multiplicity)]).

    Factors are sorted by degree then by coefficients (highest first).
    """
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    f = gf_reduce(coeffs, p)
    if not f:
        raise DomainError("polynomial vanishes mod p")
    lead = f[-1]
    f = gf_monic(f, p)
    rng = random.Random(seed)
    result: dict[tuple[int, ...], int] = {}
    for sqf, mult in gf_squarefree(f, p):
        for block, d in gf_distinct_degree(sqf, p):
            if p == 2:
                pieces = _gf_split_bruteforce(block, d, p)
            else:
                pieces = gf_equal_degree(block, d, p, rng)
            for piece in pieces:
                key = tuple(gf_monic(piece, p))
                result[key] = result.get(key, 0) + mult
    ordered = sorted(result.items(), key=lambda kv: (len(kv[0]), tuple(reversed(kv[0]))))
    return lead, [(list(k), m) for k, m in ordered]


def _gf_split_bruteforce(f: list[int], d: int, p: int) -> list[list[int]]:
    """Equal-degree splitting by trial division, used for p = 2."""
    n = len(f) - 1
    if n == d:
        return [f]
    for tail in product(range(p), repeat=d):
        cand = list(tail) + [1]
        q, r = gf_divmod(f, cand, p)
        if not r:
            return [cand] + _gf_split_bruteforce(q, d, p)
    raise AssertionError("equal-degree split failed")


def gf_roots(coeffs: Sequence[Fraction | int], p: int) -> list[tuple[int, int]]:
    """Roots in F_p with multiplicity, read off the factorization."""
    _, factors = gf_factor(coeffs, p)
    return sorted(((-g[0]) % p, m) for g, m in factors if len(g) == 2)


def format_gf_poly(f: Sequence[int], var: str = "c") -> str:
    """Render a monic F_p polynomial as in ``c^3 + 4*c + 2``."""
    terms = []
    for k in range(len(f) - 1, -1, -1):
        c = f[k]
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if not mono:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        else:
            terms.append(f"{c}*{mono}")
    return " + ".join(terms) if terms else "0"


def symmetric_residue(x: int, p: int) -> int:
    """Representative of x mod p in (-p/2, p/2]."""
    r = x % p
    return r - p if r > p // 2 else r
