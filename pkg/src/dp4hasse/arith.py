"""Exact integer and rational number theory kernel.

Everything here is pure, deterministic and works on arbitrary-precision
integers or fractions.Fraction values; no floating point is used anywhere.
Residue symbols and Hilbert symbols are computed by the standard closed
local formulas, with Hilbert reciprocity serving as the independent
correctness check in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

Rational = Union[int, Fraction]

DIRICHLET_CAP = 10**6

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_TRIAL_BOUND = 10**4


class BoundedSearchError(RuntimeError):
    """An exhaustive search hit its configured budget before deciding."""


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3 * 10**24 (covers 64 bit)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    k = max(2, n + 1)
    while not is_prime(k):
        k += 1
    return k


@dataclass(frozen=True)
class FactoredInteger:
    """Sign and sorted (prime, exponent) decomposition of a nonzero integer."""

    sign: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.sign not in (-1, 1):
            raise ValueError("sign must be +1 or -1")
        primes = [p for p, _ in self.factors]
        if primes != sorted(set(primes)):
            raise ValueError("primes must be strictly increasing")
        for p, e in self.factors:
            if e < 1 or not is_prime(p):
                raise ValueError(f"bad factor ({p}, {e})")

    def to_int(self) -> int:
        n = self.sign
        for p, e in self.factors:
            n *= p**e
        return n

    def valuation(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


def _pollard_brent(n: int) -> int:
    # Brent's cycle variant; n odd composite, not a prime power issue here.
    if n % 2 == 0:
        return 2
    seed = 1
    while True:
        y, c, m = seed % n, seed + 1, 128
        g = r = q = 1
        x = ys = y
        while g == 1:
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
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        seed += 2


def _factor_odd(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _pollard_brent(n)
    _factor_odd(d, out)
    _factor_odd(n // d, out)


def factor(n: int) -> FactoredInteger:
    """Full prime factorization; trial division first, Pollard-Brent after."""
    if n == 0:
        raise ValueError("cannot factor 0")
    sign = 1 if n > 0 else -1
    n = abs(n)
    out: dict[int, int] = {}
    for p in (2, 3, 5, 7):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 11
    while d <= _TRIAL_BOUND and d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 2
    if n > 1:
        _factor_odd(n, out)
    return FactoredInteger(sign, tuple(sorted(out.items())))


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is undefined")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def val_unit(x: Rational, p: int) -> tuple[int, Fraction]:
    """Split nonzero x as p**v * u with u a p-adic unit (as a Fraction)."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("x must be nonzero")
    vn = valuation(x.numerator, p)
    vd = valuation(x.denominator, p)
    u = Fraction(x.numerator // p**vn, x.denominator // p**vd)
    return vn - vd, u


def unit_residue(u: Fraction, modulus: int) -> int:
    """Residue of a fraction whose denominator is invertible mod modulus."""
    inv = pow(u.denominator % modulus, -1, modulus)
    return u.numerator * inv % modulus


def legendre(a: Rational, p: int) -> int:
    """Residue symbol (a|p) in {-1, 0, +1} for an odd prime p."""
    if p == 2 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    if isinstance(a, Fraction):
        if a.denominator % p == 0:
            raise ValueError("denominator of a not invertible mod p")
        a = unit_residue(a, p)
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def sqrt_mod_prime(a: int, p: int) -> Optional[int]:
    """Tonelli-Shanks square root mod an odd prime, or None for non-residues."""
    a %= p
    if a == 0:
        return 0
    if legendre(a, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # write p-1 = q * 2^s with q odd
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    c = pow(z, q, p)
    x = pow(a, (q + 1) // 2, p)
    t = pow(a, q, p)
    m = s
    while t != 1:
        i, e = t, 0
        while i != 1:
            i = i * i % p
            e += 1
        b = pow(c, 1 << (m - e - 1), p)
        x = x * b % p
        t = t * b % p * b % p
        m = e
    return x


def sqrt_mod_prime_power(a: int, p: int, k: int) -> Optional[int]:
    """A root of x^2 = a mod p^k for a p-adic unit a, or None.

    For p = 2 the unit a must be 1 mod 8 once k >= 3.
    """
    if a % p == 0:
        raise ValueError("a must be a p-adic unit")
    pk = p**k
    a %= pk
    if p == 2:
        if k == 1:
            return 1
        if k == 2:
            return 1 if a % 4 == 1 else None
        if a % 8 != 1:
            return None
        x, m = 1, 3
        while m < k:
            # adjust the top bit so the square matches one more binary digit
            if (x * x - a) % (1 << (m + 1)):
                x += 1 << (m - 1)
            m += 1
        return x % pk
    r = sqrt_mod_prime(a, p)
    if r is None:
        return None
    m = 1
    while m < k:
        # Newton step doubles the precision
        m = min(2 * m, k)
        pm = p**m
        r = (r - (r * r - a) * pow(2 * r, -1, pm)) % pm
    return r % pk


class Splitting(Enum):
    SPLIT = "SPLIT"
    INERT = "INERT"
    RAMIFIED = "RAMIFIED"
    REAL_POSITIVE = "REAL_POSITIVE"
    REAL_NEGATIVE = "REAL_NEGATIVE"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


def _splitting_at_finite(D: int, p: int) -> Splitting:
    v, u = val_unit(D, p)
    u = unit_residue(u, 8 if p == 2 else p)
    if v % 2 == 1:
        return Splitting.RAMIFIED
    if p == 2:
        if u % 8 == 1:
            return Splitting.SPLIT
        if u % 4 == 1:
            return Splitting.INERT
        return Splitting.RAMIFIED
    return Splitting.SPLIT if legendre(u, p) == 1 else Splitting.INERT


@dataclass(frozen=True)
class Place:
    """The real place (p is None) or a finite prime of the rationals.

    The splitting field is recorded relative to a quadratic discriminant when
    one was supplied at construction; it is not needed for Hilbert symbols.
    """

    p: Optional[int]
    splitting: Optional[Splitting] = None

    @staticmethod
    def real(D: Optional[int] = None) -> "Place":
        if D is None:
            return Place(None)
        return Place(None, Splitting.REAL_POSITIVE if D > 0 else Splitting.REAL_NEGATIVE)

    @staticmethod
    def finite(p: int, D: Optional[int] = None) -> "Place":
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if D is None:
            return Place(p)
        if D == 0:
            raise ValueError("discriminant must be nonzero")
        return Place(p, _splitting_at_finite(D, p))

    @property
    def is_real(self) -> bool:
        return self.p is None

    def __str__(self) -> str:
        return "real" if self.p is None else str(self.p)


def square_class(D: int, v: Place) -> Splitting:
    """Behaviour of Q_v(sqrt(D)) over Q_v, or the sign at the real place."""
    if D == 0:
        raise ValueError("D must be nonzero")
    if v.is_real:
        return Splitting.REAL_POSITIVE if D > 0 else Splitting.REAL_NEGATIVE
    return _splitting_at_finite(D, v.p)


def _eps2(u: int) -> int:
    return (u - 1) // 2 % 2


def _omega2(u: int) -> int:
    return (u * u - 1) // 8 % 2


def _hilbert_symbol_2(alpha: int, u: int, beta: int, w: int) -> int:
    """(a,b)_2 from a = 2^alpha u, b = 2^beta w with odd residues u, w mod 8."""
    exp = _eps2(u) * _eps2(w) + alpha * _omega2(w) + beta * _omega2(u)
    return -1 if exp % 2 else 1


def hilbert_symbol(a: Rational, b: Rational, v: Place) -> int:
    """Hilbert symbol (a,b)_v: +1 iff a is a norm from Q_v(sqrt(b))."""
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol arguments must be nonzero")
    if v.is_real:
        return -1 if a < 0 and b < 0 else 1
    p = v.p
    alpha, u = val_unit(a, p)
    beta, w = val_unit(b, p)
    if p == 2:
        return _hilbert_symbol_2(alpha, unit_residue(u, 8), beta, unit_residue(w, 8))
    eps = (p - 1) // 2
    sign = -1 if (alpha * beta * eps) % 2 else 1
    return sign * legendre(u, p) ** (beta % 2) * legendre(w, p) ** (alpha % 2)


def hilbert_product_places(a: Rational, b: Rational) -> list[Place]:
    """The finitely many places where (a,b)_v might differ from +1."""
    a, b = Fraction(a), Fraction(b)
    ps = {2}
    for x in (a.numerator, a.denominator, b.numerator, b.denominator):
        if x not in (1, -1):
            ps.update(factor(x).primes())
    return [Place.real()] + [Place.finite(p) for p in sorted(ps)]


def crt_solve(congruences: Sequence[tuple[int, int]]) -> int:
    """Smallest nonnegative solution of simultaneous congruences.

    Moduli must be pairwise coprime.
    """
    if not congruences:
        raise ValueError("need at least one congruence")
    mods = [m for _, m in congruences]
    for m in mods:
        if m < 1:
            raise ValueError("moduli must be positive")
    for i in range(len(mods)):
        for j in range(i + 1, len(mods)):
            if math.gcd(mods[i], mods[j]) != 1:
                raise ValueError(f"moduli {mods[i]} and {mods[j]} are not coprime")
    r, m = 0, 1
    for r2, m2 in congruences:
        inv = pow(m % m2, -1, m2) if m2 > 1 else 0
        r = r + m * ((r2 - r) * inv % m2)
        m *= m2
    return r % m


def dirichlet_prime(
    residue: int,
    modulus: int,
    avoid: Iterable[int] = (),
    start: int = 2,
    cap: int = DIRICHLET_CAP,
) -> int:
    """Least prime p >= start with p = residue mod modulus, p not in avoid.

    Scans the arithmetic progression; after `cap` candidates a
    BoundedSearchError is raised rather than looping on.
    """
    if modulus < 1:
        raise ValueError("modulus must be positive")
    if math.gcd(residue, modulus) != 1:
        raise ValueError("residue and modulus must be coprime")
    avoid = set(avoid)
    n = residue % modulus
    if n == 0:
        n = modulus
    while n < start:
        n += modulus
    for _ in range(cap):
        if n not in avoid and is_prime(n):
            return n
        n += modulus
    raise BoundedSearchError(
        f"no prime = {residue} mod {modulus} within {cap} candidates"
    )
