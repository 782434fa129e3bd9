"""Invariant triple of the pencil quintic; weighted point comparison.

The triple (I4, I8, I12) sits in the weighted projective plane P(1,2,3):
rescaling coordinates by lambda, lambda^2, lambda^3 gives the same point.
Invariance plus empirical separation is what certificates rely on, so the
exact classical scaling conventions are immaterial here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .arith import factor, valuation
from .forms import BinaryForm
from .surface import SurfaceParams, is_nonsingular, pencil_quintic


def _mixed_partial(f: BinaryForm, du_count: int, dv_count: int) -> BinaryForm:
    g = f
    for _ in range(du_count):
        g = g.du()
    for _ in range(dv_count):
        g = g.dv()
    return g


def transvectant(f: BinaryForm, g: BinaryForm, k: int) -> BinaryForm:
    """k-th transvectant (f, g)^k via the omega process.

    (f,g)^k = (m-k)!(n-k)!/(m! n!) * sum_i (-1)^i C(k,i)
              * d^k f / du^(k-i) dv^i * d^k g / du^i dv^(k-i)
    """
    m, n = f.degree, g.degree
    if k < 0 or k > min(m, n):
        raise ValueError(f"transvectant index {k} exceeds degrees ({m}, {n})")
    scale = Fraction(factorial(m - k) * factorial(n - k), factorial(m) * factorial(n))
    acc = BinaryForm(m + n - 2 * k, (0,) * (m + n - 2 * k + 1))
    for i in range(k + 1):
        term = _mixed_partial(f, k - i, i) * _mixed_partial(g, i, k - i)
        acc = acc + term * Fraction((-1) ** i * comb(k, i))
    return acc * scale


@dataclass(frozen=True)
class InvariantTriple:
    I4: Fraction
    I8: Fraction
    I12: Fraction

    def is_zero(self) -> bool:
        return self.I4 == 0 and self.I8 == 0 and self.I12 == 0


def fundamental_invariants(f: BinaryForm) -> InvariantTriple:
    """Degrees 4, 8 and 12 invariants of a binary quintic.

    Built from the standard covariants i = (f,f)^4, j = (f,i)^2 and
    c = (j,j)^2; full contractions then give the scalars.
    """
    if f.degree != 5:
        raise ValueError("need a binary quintic")
    i = transvectant(f, f, 4)
    j = transvectant(f, i, 2)
    c = transvectant(j, j, 2)
    i4 = transvectant(i, i, 2).coefficients[0]
    i8 = transvectant(c, i, 2).coefficients[0]
    i12 = transvectant(c, c, 2).coefficients[0]
    return InvariantTriple(i4, i8, i12)


def moduli_point(s: SurfaceParams) -> InvariantTriple:
    """Weighted moduli point of the surface; independent of D."""
    if not is_nonsingular(s):
        raise ValueError("moduli point requires a nonsingular surface")
    return fundamental_invariants(pencil_quintic(s))


def _is_rational_square(r: Fraction) -> bool:
    if r <= 0:
        return r == 0
    return (
        math.isqrt(r.numerator) ** 2 == r.numerator
        and math.isqrt(r.denominator) ** 2 == r.denominator
    )


def _icbrt(n: int) -> int:
    if n < 0:
        return -_icbrt(-n)
    c = round(n ** (1 / 3)) if n else 0
    while c**3 > n:
        c -= 1
    while (c + 1) ** 3 <= n:
        c += 1
    return c


def _is_rational_cube(r: Fraction) -> bool:
    return (
        _icbrt(r.numerator) ** 3 == r.numerator
        and _icbrt(r.denominator) ** 3 == r.denominator
    )


def same_weighted_point(P: InvariantTriple, Q: InvariantTriple) -> bool:
    """Exact equality in P(1,2,3): Q = (l*P4, l^2*P8, l^3*P12) for some l."""
    if P.is_zero() and Q.is_zero():
        raise ValueError("the zero triple is not a weighted projective point")
    zp = (P.I4 == 0, P.I8 == 0, P.I12 == 0)
    zq = (Q.I4 == 0, Q.I8 == 0, Q.I12 == 0)
    if zp != zq:
        return False
    if P.I4 != 0:
        lam = Q.I4 / P.I4
        return Q.I8 == lam**2 * P.I8 and Q.I12 == lam**3 * P.I12
    if P.I8 != 0 and P.I12 != 0:
        return (Q.I12 / P.I12) ** 2 == (Q.I8 / P.I8) ** 3
    if P.I8 != 0:
        return _is_rational_square(Q.I8 / P.I8)
    return _is_rational_cube(Q.I12 / P.I12)


def normalized_triple(t: InvariantTriple) -> tuple[int, int, int]:
    """Canonical integer representative of the weighted point.

    Denominators are cleared, the weighted content (prime powers entering
    as p^w, p^2w, p^3w) is divided out, and the sign is fixed on the first
    odd-weight coordinate.
    """
    if t.is_zero():
        raise ValueError("the zero triple has no normalization")
    lcm = math.lcm(t.I4.denominator, t.I8.denominator, t.I12.denominator)
    x4 = int(t.I4 * lcm)
    x8 = int(t.I8 * lcm**2)
    x12 = int(t.I12 * lcm**3)
    primes: set[int] = set()
    for x in (x4, x8, x12):
        if x not in (0, 1, -1):
            primes.update(factor(x).primes())
    for p in sorted(primes):
        exps = []
        if x4:
            exps.append(valuation(x4, p))
        if x8:
            exps.append(valuation(x8, p) // 2)
        if x12:
            exps.append(valuation(x12, p) // 3)
        w = min(exps)
        if w > 0:
            x4 = x4 // p**w if x4 else 0
            x8 = x8 // p ** (2 * w) if x8 else 0
            x12 = x12 // p ** (3 * w) if x12 else 0
    if x4 < 0 or (x4 == 0 and x12 < 0):
        x4, x12 = -x4, -x12
    return x4, x8, x12


def triple_key(t: InvariantTriple) -> str:
    """Canonical string "I4/I8/I12" used in certificates and the ledger."""
    x4, x8, x12 = normalized_triple(t)
    return f"{x4}/{x8}/{x12}"
