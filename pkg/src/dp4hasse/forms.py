"""Binary forms with exact rational coefficients.

A form of degree d stores d+1 coefficients; index i holds the coefficient
of u^(d-i) v^i.  Degree-0 forms double as scalars.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .arith import Rational


@dataclass(frozen=True)
class BinaryForm:
    degree: int
    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("degree must be nonnegative")
        if len(self.coefficients) != self.degree + 1:
            raise ValueError("need degree + 1 coefficients")
        object.__setattr__(
            self, "coefficients", tuple(Fraction(c) for c in self.coefficients)
        )

    @staticmethod
    def from_coeffs(coeffs: Sequence[Rational]) -> "BinaryForm":
        return BinaryForm(len(coeffs) - 1, tuple(Fraction(c) for c in coeffs))

    @staticmethod
    def constant(c: Rational) -> "BinaryForm":
        return BinaryForm(0, (Fraction(c),))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients)

    def __add__(self, other: "BinaryForm") -> "BinaryForm":
        if self.degree != other.degree:
            raise ValueError("can only add forms of equal degree")
        return BinaryForm(
            self.degree,
            tuple(a + b for a, b in zip(self.coefficients, other.coefficients)),
        )

    def __neg__(self) -> "BinaryForm":
        return BinaryForm(self.degree, tuple(-c for c in self.coefficients))

    def __sub__(self, other: "BinaryForm") -> "BinaryForm":
        return self + (-other)

    def __mul__(self, other: Union["BinaryForm", int, Fraction]) -> "BinaryForm":
        if isinstance(other, (int, Fraction)):
            return BinaryForm(self.degree, tuple(c * other for c in self.coefficients))
        d = self.degree + other.degree
        out = [Fraction(0)] * (d + 1)
        for i, a in enumerate(self.coefficients):
            if a == 0:
                continue
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return BinaryForm(d, tuple(out))

    __rmul__ = __mul__

    def scale(self, c: Rational) -> "BinaryForm":
        return self * Fraction(c)

    def du(self) -> "BinaryForm":
        """Partial derivative with respect to u."""
        if self.degree == 0:
            return BinaryForm.constant(0)
        d = self.degree
        return BinaryForm(
            d - 1, tuple(self.coefficients[i] * (d - i) for i in range(d))
        )

    def dv(self) -> "BinaryForm":
        """Partial derivative with respect to v."""
        if self.degree == 0:
            return BinaryForm.constant(0)
        d = self.degree
        return BinaryForm(
            d - 1, tuple(self.coefficients[i + 1] * (i + 1) for i in range(d))
        )

    def evaluate(self, u: Rational, v: Rational) -> Fraction:
        u, v = Fraction(u), Fraction(v)
        acc = Fraction(0)
        for i, c in enumerate(self.coefficients):
            acc += c * u ** (self.degree - i) * v**i
        return acc

    def substitute(self, a: Rational, b: Rational, c: Rational, d: Rational) -> "BinaryForm":
        """Apply (u, v) -> (a u + b v, c u + d v)."""
        uu = BinaryForm.from_coeffs([a, b])
        vv = BinaryForm.from_coeffs([c, d])
        acc = BinaryForm(self.degree, (0,) * (self.degree + 1))
        for i, coeff in enumerate(self.coefficients):
            if coeff == 0:
                continue
            term = BinaryForm.constant(coeff)
            for _ in range(self.degree - i):
                term = term * uu
            for _ in range(i):
                term = term * vv
            acc = acc + term
        return acc

    def content_cleared(self) -> tuple["BinaryForm", Fraction]:
        """Scale to coprime integer coefficients; returns (form, multiplier)."""
        from math import gcd, lcm

        if self.is_zero():
            return self, Fraction(1)
        m = lcm(*(c.denominator for c in self.coefficients))
        ints = [c * m for c in self.coefficients]
        g = 0
        for c in ints:
            g = gcd(g, int(c))
        lam = Fraction(m, g)
        return BinaryForm(self.degree, tuple(c * lam for c in self.coefficients)), lam


def _univariate(form: BinaryForm) -> tuple[int, list[Fraction]]:
    """Drop the v^m factor and dehomogenize; returns (m, poly coeffs low->high)."""
    cs = form.coefficients
    lead = 0
    while lead <= form.degree and cs[lead] == 0:
        lead += 1
    if lead > form.degree:
        raise ValueError("zero form")
    # with u-degree d - lead, f(x, 1) has coefficients cs[lead:] (high -> low)
    poly = list(reversed(cs[lead:]))
    return lead, poly


def _poly_mod(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = a[:]
    while len(a) >= len(b) and any(c != 0 for c in a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) < len(b):
            break
        q = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] -= q * c
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = a[:], b[:]
    while b:
        a, b = b, _poly_mod(a, b)
    return a


def _first_nonzero_normalized(f: BinaryForm) -> BinaryForm:
    for c in f.coefficients:
        if c != 0:
            return f * (1 / c)
    raise ValueError("zero form")


def form_gcd(f: BinaryForm, g: BinaryForm) -> BinaryForm:
    """Normalized gcd of two binary forms (including common v powers)."""
    if f.is_zero() and g.is_zero():
        raise ValueError("gcd of two zero forms")
    if f.is_zero():
        return _first_nonzero_normalized(g)
    if g.is_zero():
        return _first_nonzero_normalized(f)
    mf, pf = _univariate(f)
    mg, pg = _univariate(g)
    h = _poly_gcd(pf, pg)
    lead = h[-1]
    h = [c / lead for c in h]
    m = min(mf, mg)
    d = len(h) - 1 + m
    coeffs = [Fraction(0)] * (d + 1)
    for i, c in enumerate(reversed(h)):
        coeffs[i + m] = c
    return BinaryForm(d, tuple(coeffs))


def is_squarefree(f: BinaryForm) -> bool:
    """True iff gcd(f, df/du, df/dv) is a nonzero constant."""
    if f.is_zero():
        return False
    if f.degree == 0:
        return True
    g = form_gcd(f, f.du())
    if g.degree > 0:
        g = form_gcd(g, f.dv())
    return g.degree == 0
