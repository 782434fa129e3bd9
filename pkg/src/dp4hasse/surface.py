"""The two-quadric surface family and its exact geometry helpers.

A parameter triple (D, A, B) stands for the projective surface in P^4 cut
out by

    T0*T1               = T2^2 - D*T3^2
    (T0+A*T1)(T0+B*T1)  = T2^2 - D*T4^2

Surfaces are kept as parameters only; Gram matrices, reductions and the
degenerate member quintic of the quadric pencil are derived on demand.
"""

from __future__ import annotations

import math
from dataclasses import InitVar, dataclass
from fractions import Fraction
from typing import Optional

from .arith import valuation
from .forms import BinaryForm


def _is_perfect_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


@dataclass(frozen=True)
class SurfaceParams:
    """Nonzero non-square D plus integer coefficients A, B.

    Square D would make the quadratic extension trivial and the quaternion
    class collapse, so it is rejected up front; pass check=False to build
    raw parameters for low-level solvability experiments.
    """

    D: int
    A: int
    B: int
    check: InitVar[bool] = True

    def __post_init__(self, check: bool):
        if check:
            if self.D == 0:
                raise ValueError("D must be nonzero (D = 0 gives a cone)")
            if _is_perfect_square(self.D):
                raise ValueError(f"D = {self.D} is a perfect square")

    def key(self) -> str:
        return f"{self.D}:{self.A}:{self.B}"

    @staticmethod
    def from_key(s: str) -> "SurfaceParams":
        d, a, b = (int(x) for x in s.split(":"))
        return SurfaceParams(d, a, b)

    def equations(self, t: tuple[int, int, int, int, int]) -> tuple[int, int]:
        """Exact values of the two defining polynomials at an integer tuple."""
        t0, t1, t2, t3, t4 = t
        f1 = t0 * t1 - t2 * t2 + self.D * t3 * t3
        f2 = (t0 + self.A * t1) * (t0 + self.B * t1) - t2 * t2 + self.D * t4 * t4
        return f1, f2


def is_nonsingular(s: SurfaceParams) -> bool:
    """Smoothness of the surface, decided exactly from the parameters."""
    if s.A * s.B * s.D == 0:
        return False
    if s.A == s.B:
        return False
    return s.A**2 - 2 * s.A * s.B + s.B**2 - 2 * s.A - 2 * s.B + 1 != 0


def pencil_quintic(s: SurfaceParams) -> BinaryForm:
    """Binary quintic whose roots are the degenerate members of the pencil.

    Fixed factor order u, v, (u+v), (u^2 + 2(A+B)uv + (A-B)^2 v^2); the
    result does not involve D.
    """
    u = BinaryForm.from_coeffs([1, 0])
    v = BinaryForm.from_coeffs([0, 1])
    upv = BinaryForm.from_coeffs([1, 1])
    quad = BinaryForm.from_coeffs([1, 2 * (s.A + s.B), (s.A - s.B) ** 2])
    return u * v * upv * quad


def normalized_d(D: int, p: int) -> int:
    """Remove even powers of p from D (an isomorphic model, T3 T4 rescaled)."""
    v = valuation(D, p)
    return D // p ** (2 * (v // 2))


QuadricCoeffs = dict[tuple[int, int], int]


def reduce_mod_p(
    s: SurfaceParams, p: int, normalize: bool = False
) -> tuple[QuadricCoeffs, QuadricCoeffs]:
    """Coefficients of the two defining quadrics over F_p.

    Keys are monomials T_i T_j with i <= j.  With normalize set, even
    powers of p are first stripped from D.
    """
    D = normalized_d(s.D, p) if normalize else s.D
    q1 = {(0, 1): 1 % p, (2, 2): -1 % p, (3, 3): D % p}
    q2 = {
        (0, 0): 1 % p,
        (0, 1): (s.A + s.B) % p,
        (1, 1): (s.A * s.B) % p,
        (2, 2): -1 % p,
        (4, 4): D % p,
    }
    return q1, q2


def evaluate_quadric(q: QuadricCoeffs, t: tuple[int, ...], p: int) -> int:
    acc = 0
    for (i, j), c in q.items():
        acc += c * t[i] * t[j]
    return acc % p


def jacobian_matrix(
    t: tuple[int, int, int, int, int], s: SurfaceParams, D: Optional[int] = None
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """2x5 matrix of partial derivatives of the defining pair at a tuple."""
    if D is None:
        D = s.D
    t0, t1, t2, t3, t4 = t
    row1 = (t1, t0, -2 * t2, 2 * D * t3, 0)
    row2 = (
        2 * t0 + (s.A + s.B) * t1,
        (s.A + s.B) * t0 + 2 * s.A * s.B * t1,
        -2 * t2,
        0,
        2 * D * t4,
    )
    return row1, row2


def jacobian_minors(
    t: tuple[int, int, int, int, int], s: SurfaceParams, D: Optional[int] = None
) -> list[int]:
    """All ten 2x2 minors of the Jacobian, as exact integers."""
    r1, r2 = jacobian_matrix(t, s, D)
    out = []
    for i in range(5):
        for j in range(i + 1, 5):
            out.append(r1[i] * r2[j] - r1[j] * r2[i])
    return out


def jacobian_rank_mod_p(
    point: tuple[int, int, int, int, int], s: SurfaceParams, p: int
) -> int:
    """Rank over F_p of the Jacobian at a point of the reduction.

    The point must satisfy both reduced equations; D is normalized the same
    way reduce_mod_p(normalize=True) does so ranks match that model.
    """
    D = normalized_d(s.D, p)
    q1, q2 = reduce_mod_p(s, p, normalize=True)
    if evaluate_quadric(q1, point, p) or evaluate_quadric(q2, point, p):
        raise ValueError("point does not lie on the reduction mod p")
    if all(x % p == 0 for x in point):
        raise ValueError("point must be nonzero mod p")
    r1, r2 = jacobian_matrix(point, s, D)
    r1 = [x % p for x in r1]
    r2 = [x % p for x in r2]
    for i in range(5):
        for j in range(i + 1, 5):
            if (r1[i] * r2[j] - r1[j] * r2[i]) % p:
                return 2
    if any(r1) or any(r2):
        return 1
    return 0


def gram_matrices(s: SurfaceParams) -> tuple[list[list[Fraction]], list[list[Fraction]]]:
    """Symmetric Gram matrices of the two quadrics (halves appear off-diagonal)."""
    h = Fraction(1, 2)
    z = Fraction(0)
    g1 = [
        [z, h, z, z, z],
        [h, z, z, z, z],
        [z, z, Fraction(-1), z, z],
        [z, z, z, Fraction(s.D), z],
        [z, z, z, z, z],
    ]
    ab = Fraction(s.A + s.B) * h
    g2 = [
        [Fraction(1), ab, z, z, z],
        [ab, Fraction(s.A * s.B), z, z, z],
        [z, z, Fraction(-1), z, z],
        [z, z, z, z, z],
        [z, z, z, z, Fraction(s.D)],
    ]
    return g1, g2
