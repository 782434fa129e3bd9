"""Solvability of the surface over R and over every Q_p, with witnesses.

Analytic rules cover the bulk of places (split point, smooth-point count
at odd unramified primes, the four-plane simple point at ramified primes,
2-adic valuation conditions at inert 2); a bounded Hensel-certified brute
search handles the rest.  A verdict of UNDECIDED is a value, not an error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .arith import (
    BoundedSearchError,
    Place,
    Splitting,
    factor,
    legendre,
    sqrt_mod_prime_power,
    square_class,
    valuation,
)
from .padic import Budget, SearchOutcome, hensel_margin, search_liftable_point
from .surface import SurfaceParams, is_nonsingular, normalized_d

PRECISION_CAP = 12
TUPLE_CAP = 10**7

RULE_REAL = "REAL_RULE"
RULE_SPLIT = "SPLIT_POINT"
RULE_UNRAMIFIED = "UNRAMIFIED_COUNT"
RULE_RAMIFIED_SIMPLE = "RAMIFIED_SIMPLE_POINT"
RULE_TWO_ADIC = "TWO_ADIC_CONGRUENCE"
RULE_BRUTE = "BRUTE_HENSEL"

SOLVABLE = "SOLVABLE"
UNSOLVABLE = "UNSOLVABLE"
UNDECIDED = "UNDECIDED"


@dataclass(frozen=True)
class SolvabilityWitness:
    place: Place
    rule: str
    point: Optional[tuple[int, int, int, int, int]] = None
    precision: Optional[int] = None  # point data is exact mod p^precision
    hensel_margin: Optional[int] = None
    detail: dict = field(default_factory=dict)


@dataclass(frozen=True)
class LocalSolvability:
    place: Place
    verdict: str
    witness: Optional[SolvabilityWitness] = None
    note: str = ""


def solvable_at_real(s: SurfaceParams) -> SolvabilityWitness:
    """Constructive real witness: t0 making both conic constants positive.

    The returned detail carries t3^2 and t4^2 as exact nonnegative
    rationals, which is precisely what real solvability needs.
    """
    if s.D == 0:
        raise ValueError("D must be nonzero")
    t0 = max(1, 1 - s.A, 1 - s.B)
    c = t0
    cprime = (t0 + s.A) * (t0 + s.B)
    assert t0 > 0 and t0 + s.A > 0 and t0 + s.B > 0
    if s.D > 0:
        t2 = math.isqrt(max(c, cprime)) + 1
        branch = "D>0: t2^2 >= max(C, C')"
    else:
        t2 = 0
        branch = "D<0: t2^2 <= min(C, C')"
    t3_sq = Fraction(t2 * t2 - c, s.D)
    t4_sq = Fraction(t2 * t2 - cprime, s.D)
    assert t3_sq >= 0 and t4_sq >= 0
    return SolvabilityWitness(
        place=Place.real(s.D),
        rule=RULE_REAL,
        detail={
            "t0": t0,
            "t1": 1,
            "t2": t2,
            "t3_sq": t3_sq,
            "t4_sq": t4_sq,
            "branch": branch,
        },
    )


def find_smooth_point_mod_pk(
    s: SurfaceParams, p: int, k: int, tuple_cap: int = TUPLE_CAP
) -> Optional[SolvabilityWitness]:
    """Exhaustive liftable-point search at precision p^k on s as given.

    Returns a BRUTE_HENSEL witness or None; raises BoundedSearchError when
    the modulus or the visit budget exceeds tuple_cap.
    """
    if p**k > tuple_cap:
        raise BoundedSearchError(f"modulus {p}^{k} exceeds cap {tuple_cap}")
    outcome = search_liftable_point(s, p, k, Budget(tuple_cap))
    if not outcome.complete and outcome.point is None:
        raise BoundedSearchError(f"visit budget {tuple_cap} exhausted at {p}^{k}")
    if outcome.point is None:
        return None
    return SolvabilityWitness(
        place=Place.finite(p, s.D if s.D else None),
        rule=RULE_BRUTE,
        point=outcome.point,
        precision=k,
        hensel_margin=outcome.margin,
    )


def _split_point_witness(
    s_norm: SurfaceParams, p: int, place: Place
) -> SolvabilityWitness:
    k = 8 if p == 2 else 4
    pk = p**k
    t3 = sqrt_mod_prime_power(pow(s_norm.D % pk, -1, pk), p, k)
    assert t3 is not None and t3 * t3 * s_norm.D % pk == 1
    return SolvabilityWitness(
        place=place,
        rule=RULE_SPLIT,
        point=(1, 0, 1, t3, 0),
        precision=k,
        detail={"normalized_D": s_norm.D, "t3_sq_times_D_mod": 1},
    )


def _ramified_simple_point(
    s_norm: SurfaceParams, p: int, place: Place
) -> Optional[SolvabilityWitness]:
    """The T0/T1 = 1 point of the four-plane reduction, when it is smooth."""
    a = s_norm.A % p
    if p == 2 or legendre(a, p) != 1 or a == p - 1:
        return None
    if (a * a + a + 1) % p == 0:
        return None
    if (s_norm.B * (s_norm.A + 1) + s_norm.A) % p != 0:
        return None
    point = (1, 1, 1, 0, 0)
    f1, f2 = s_norm.equations(point)
    if f1 % p or f2 % p:
        return None
    e = hensel_margin(s_norm, point, p, 1)
    if e != 0:
        return None
    return SolvabilityWitness(
        place=place,
        rule=RULE_RAMIFIED_SIMPLE,
        point=point,
        precision=1,
        hensel_margin=0,
        detail={"residue_a": a, "residue_b": s_norm.B % p},
    )


def _two_adic_congruence(s: SurfaceParams, place: Place) -> Optional[SolvabilityWitness]:
    """Valuation conditions making T3 = T4 solvable over Q_2 at inert 2."""
    if s.A == 0 or s.B == 1:
        return None
    f = valuation(s.B - 1, 2)
    va = valuation(s.A, 2)
    # a 2-adic unit is a square iff it is 1 mod 8, so e = 3 below
    if f >= 1 and va % 2 == 1 and va >= 2 * f + 3:
        return SolvabilityWitness(
            place=place,
            rule=RULE_TWO_ADIC,
            detail={"f": f, "v2_A": va, "square_exponent": 3},
        )
    return None


def _brute_schedule(p: int, v: int, precision_cap: int, tuple_cap: int) -> list[int]:
    if p == 2:
        ks = list(range(v + 1, precision_cap + 1, 2))
    else:
        ks = [1] + list(range(v + 2, precision_cap + 1, 2))
    return [k for k in ks if p**k <= tuple_cap]


def _brute_escalate(
    s_norm: SurfaceParams,
    p: int,
    place: Place,
    schedule: list[int],
    tuple_cap: int,
) -> LocalSolvability:
    ran_out = False
    for k in schedule:
        outcome: SearchOutcome = search_liftable_point(s_norm, p, k, Budget(tuple_cap))
        if outcome.point is not None:
            witness = SolvabilityWitness(
                place=place,
                rule=RULE_BRUTE,
                point=outcome.point,
                precision=k,
                hensel_margin=outcome.margin,
                detail={"normalized_D": s_norm.D},
            )
            return LocalSolvability(place, SOLVABLE, witness)
        if outcome.complete and outcome.solutions_seen == 0:
            return LocalSolvability(
                place,
                UNSOLVABLE,
                note=f"no primitive solutions mod {p}^{k}",
            )
        if not outcome.complete:
            ran_out = True
            break
    note = "visit budget exhausted" if ran_out else "precision cap reached"
    return LocalSolvability(place, UNDECIDED, note=note)


def solvable_at_p(
    s: SurfaceParams,
    p: int,
    precision_cap: int = PRECISION_CAP,
    tuple_cap: int = TUPLE_CAP,
) -> LocalSolvability:
    """Decide S(Q_p) != empty with a witness, or report UNDECIDED.

    Works on the model with even powers of p stripped from D, which is
    isomorphic over Q_p; witnesses record that normalization.
    """
    place = Place.finite(p, s.D)
    d_norm = normalized_d(s.D, p)
    s_norm = SurfaceParams(d_norm, s.A, s.B, check=False)
    v = valuation(d_norm, p)
    cls = square_class(s.D, place)

    if cls is Splitting.SPLIT:
        return LocalSolvability(place, SOLVABLE, _split_point_witness(s_norm, p, place))

    if p != 2 and cls is Splitting.INERT:
        outcome = search_liftable_point(s_norm, p, 1, Budget(tuple_cap))
        if outcome.point is not None:
            witness = SolvabilityWitness(
                place=place,
                rule=RULE_UNRAMIFIED,
                point=outcome.point,
                precision=1,
                hensel_margin=outcome.margin,
                detail={
                    "normalized_D": d_norm,
                    "smooth_point_count_bound": p * p - 4 * p + 1,
                },
            )
            return LocalSolvability(place, SOLVABLE, witness)
        if outcome.complete and outcome.solutions_seen == 0:
            return LocalSolvability(place, UNSOLVABLE, note="empty mod p")
        return _brute_escalate(
            s_norm, p, place, _brute_schedule(p, v, precision_cap, tuple_cap), tuple_cap
        )

    if p != 2 and cls is Splitting.RAMIFIED:
        witness = _ramified_simple_point(s_norm, p, place)
        if witness is not None:
            return LocalSolvability(place, SOLVABLE, witness)
        return _brute_escalate(
            s_norm, p, place, _brute_schedule(p, v, precision_cap, tuple_cap), tuple_cap
        )

    # p = 2, inert or ramified
    witness = _two_adic_congruence(s_norm, place)
    if witness is not None:
        return LocalSolvability(place, SOLVABLE, witness)
    return _brute_escalate(
        s_norm, p, place, _brute_schedule(2, v, precision_cap, tuple_cap), tuple_cap
    )


ADELIC_OK = "ADELIC_OK"
ADELIC_FAIL = "ADELIC_FAIL"
ADELIC_UNDECIDED = "ADELIC_UNDECIDED"

BLANKET_SOLVABILITY = (
    "every remaining place is an odd prime unramified in Q(sqrt(D)); "
    "the reduction there has a smooth point by the count bound l^2-4l+1 > 0"
)


@dataclass(frozen=True)
class AdelicReport:
    verdict: str
    locals: tuple[LocalSolvability, ...]
    blanket: str = BLANKET_SOLVABILITY

    def undecided_places(self) -> list[Place]:
        return [lc.place for lc in self.locals if lc.verdict == UNDECIDED]

    def failed_places(self) -> list[Place]:
        return [lc.place for lc in self.locals if lc.verdict == UNSOLVABLE]


def critical_solvability_primes(D: int) -> list[int]:
    """2 plus every prime dividing D to odd order."""
    ps = {2}
    for q, e in factor(D).factors:
        if e % 2 == 1:
            ps.add(q)
    return sorted(ps)


def adelic_check(
    s: SurfaceParams,
    precision_cap: int = PRECISION_CAP,
    tuple_cap: int = TUPLE_CAP,
) -> AdelicReport:
    """Witnessed solvability at the real place, 2, and the ramified primes.

    All other places are covered by the blanket smooth-point count rule.
    """
    if not is_nonsingular(s):
        raise ValueError("adelic check requires a nonsingular surface")
    results = [
        LocalSolvability(Place.real(s.D), SOLVABLE, solvable_at_real(s))
    ]
    for p in critical_solvability_primes(s.D):
        results.append(solvable_at_p(s, p, precision_cap, tuple_cap))
    if any(r.verdict == UNSOLVABLE for r in results):
        verdict = ADELIC_FAIL
    elif any(r.verdict == UNDECIDED for r in results):
        verdict = ADELIC_UNDECIDED
    else:
        verdict = ADELIC_OK
    return AdelicReport(verdict, tuple(results))
