"""Bounded p-adic enumeration shared by solvability and evaluation code.

Projective tuples mod p^k are enumerated in the canonical form whose first
p-adic unit coordinate equals 1 exactly, so each residue class is visited
once.  All searches run under an explicit work budget and either finish,
return a verdict, or raise BoundedSearchError; nothing loops silently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

from .arith import BoundedSearchError, Fraction as _F  # noqa: F401
from .arith import Place, hilbert_symbol, valuation
from .surface import SurfaceParams, jacobian_minors


class Budget:
    """Mutable work counter; spend() raises once the cap is exhausted."""

    def __init__(self, cap: int):
        self.cap = cap
        self.used = 0

    def spend(self, n: int = 1) -> None:
        self.used += n
        if self.used > self.cap:
            raise BoundedSearchError(f"work budget of {self.cap} exhausted")


def dx2_table(D: int, p: int, pk: int) -> dict[int, list[int]]:
    """Map r -> all x mod p^k with D*x^2 = r; the t3/t4 completion oracle."""
    tab: dict[int, list[int]] = {}
    for x in range(pk):
        tab.setdefault(D * x * x % pk, []).append(x)
    return tab


def _t01_pairs(p: int, pk: int) -> Iterator[tuple[int, int]]:
    # first-unit coordinate t0, then t0 nonunit with t1 the unit
    for t1 in range(pk):
        yield 1, t1
    for t0 in range(0, pk, p):
        yield t0, 1


def iter_solutions(
    s: SurfaceParams, p: int, k: int, budget: Budget
) -> Iterator[tuple[int, int, int, int, int]]:
    """All normalized tuples mod p^k satisfying both equations mod p^k."""
    pk = p**k
    A, B, D = s.A, s.B, s.D
    budget.spend(pk)
    tab = dx2_table(D, p, pk)
    for t0, t1 in _t01_pairs(p, pk):
        r1 = t0 * t1 % pk
        r2 = (t0 + A * t1) * (t0 + B * t1) % pk
        for t2 in range(pk):
            budget.spend()
            tt = t2 * t2
            l3 = tab.get((tt - r1) % pk)
            if not l3:
                continue
            l4 = tab.get((tt - r2) % pk)
            if not l4:
                continue
            for t3 in l3:
                for t4 in l4:
                    yield (t0, t1, t2, t3, t4)
    nonunits = range(0, pk, p)
    # t2 is the first unit
    for t0 in nonunits:
        for t1 in nonunits:
            budget.spend()
            r1 = t0 * t1 % pk
            r2 = (t0 + A * t1) * (t0 + B * t1) % pk
            l3 = tab.get((1 - r1) % pk)
            if not l3:
                continue
            l4 = tab.get((1 - r2) % pk)
            if not l4:
                continue
            for t3 in l3:
                for t4 in l4:
                    yield (t0, t1, 1, t3, t4)
    # t3 the first unit, then t4
    for t0 in nonunits:
        for t1 in nonunits:
            r1 = t0 * t1 % pk
            r2 = (t0 + A * t1) * (t0 + B * t1) % pk
            for t2 in nonunits:
                budget.spend()
                tt = t2 * t2
                if (r1 - tt + D) % pk == 0:
                    l4 = tab.get((tt - r2) % pk)
                    if l4:
                        for t4 in l4:
                            yield (t0, t1, t2, 1, t4)
                if (r2 - tt + D) % pk == 0:
                    l3 = tab.get((tt - r1) % pk)
                    if l3:
                        for t3 in l3:
                            if t3 % p == 0:
                                yield (t0, t1, t2, t3, 1)


def hensel_margin(
    s: SurfaceParams, t: tuple[int, int, int, int, int], p: int, k: int
) -> int:
    """Least p-valuation over the ten Jacobian minors, clamped to k."""
    e = k
    for m in jacobian_minors(t, s):
        if m != 0:
            e = min(e, valuation(m, p))
        if e == 0:
            break
    return e


@dataclass
class SearchOutcome:
    """Result of one bounded sweep at fixed precision."""

    point: Optional[tuple[int, int, int, int, int]]
    margin: Optional[int]
    solutions_seen: int
    complete: bool


def search_liftable_point(
    s: SurfaceParams, p: int, k: int, budget: Budget
) -> SearchOutcome:
    """First normalized solution mod p^k certified liftable, if any.

    Certification is the standard multivariate criterion: both equations
    vanish mod p^(2e+1) and some 2x2 Jacobian minor has valuation <= e.
    """
    seen = 0
    try:
        for t in iter_solutions(s, p, k, budget):
            seen += 1
            e = hensel_margin(s, t, p, k)
            if 2 * e + 1 <= k:
                return SearchOutcome(t, e, seen, True)
    except BoundedSearchError:
        return SearchOutcome(None, None, seen, False)
    return SearchOutcome(None, None, seen, True)


# ---------------------------------------------------------------------------
# Fiber refinement for local evaluation sampling.
#
# Whether a local point can be evaluated, and the value it gets, depends
# only on (t0, t1); completions (t2, t3, t4) matter only for whether the
# fiber can hold points at all.  Fibers are refined one p-adic digit at a
# time; a fiber with no completions is dead and is dropped.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Fiber:
    t0: int
    t1: int
    m: int
    fixed0: bool  # t0 is exactly 1 (the normalized unit)
    fixed1: bool  # t1 is exactly 1


@dataclass
class FiberValue:
    fiber: Fiber
    quotient_index: int
    q_valuation: int
    q_unit: int
    q_unit_modulus: int
    symbol: int
    e: Fraction


@dataclass
class SampleReport:
    status: str  # CONSTANT | NON_CONSTANT | UNDECIDED | EMPTY
    e: Optional[Fraction]
    values: list[FiberValue]
    undetermined: int
    work_used: int = 0

    def symbols(self) -> set[int]:
        return {v.symbol for v in self.values}


QUOTIENT_LABELS = (
    "(T0+A*T1)/T0",
    "(T0+A*T1)/T1",
    "(T0+B*T1)/T0",
    "(T0+B*T1)/T1",
)


def _fiber_alive(
    s: SurfaceParams,
    p: int,
    fiber: Fiber,
    tables: dict[int, dict[int, list[int]]],
    budget: Budget,
) -> bool:
    pm = p**fiber.m
    if fiber.m not in tables:
        budget.spend(pm)
        tables[fiber.m] = dx2_table(s.D, p, pm)
    tab = tables[fiber.m]
    r1 = fiber.t0 * fiber.t1 % pm
    r2 = (fiber.t0 + s.A * fiber.t1) * (fiber.t0 + s.B * fiber.t1) % pm
    need_unit = fiber.t0 % p == 0 and fiber.t1 % p == 0
    for t2 in range(pm):
        budget.spend()
        tt = t2 * t2
        l3 = tab.get((tt - r1) % pm)
        if not l3:
            continue
        l4 = tab.get((tt - r2) % pm)
        if not l4:
            continue
        if not need_unit or t2 % p:
            return True
        if any(x % p for x in l3) or any(x % p for x in l4):
            return True
    return False


def _fiber_value(
    fiber: Fiber, s: SurfaceParams, original_d: int, p: int
) -> Optional[FiberValue]:
    """Evaluate the first quotient whose square class the fiber pins down."""
    pm = p**fiber.m
    need = 3 if p == 2 else 1
    place = Place.finite(p)
    quotients = ((s.A, 0), (s.A, 1), (s.B, 0), (s.B, 1))
    for idx, (coeff, den_idx) in enumerate(quotients):
        num = (fiber.t0 + coeff * fiber.t1) % pm
        den = (fiber.t0 if den_idx == 0 else fiber.t1) % pm
        if num == 0 or den == 0:
            continue  # valuation not pinned at this precision
        vn, vd = valuation(num, p), valuation(den, p)
        if fiber.m - max(vn, vd) < need:
            continue
        mod = p**need
        w = (num // p**vn) * pow((den // p**vd) % mod, -1, mod) % mod
        alpha = vn - vd
        sym = hilbert_symbol(Fraction(p) ** alpha * w, original_d, place)
        e = Fraction(0) if sym == 1 else Fraction(1, 2)
        return FiberValue(fiber, idx, alpha, w, mod, sym, e)
    return None


def sampled_evaluation(
    s: SurfaceParams,
    original_d: int,
    p: int,
    m_cap: int,
    work_cap: int,
) -> SampleReport:
    """Exhaustive fiber sampling of the local evaluation at p.

    The surface must already carry the p-normalized discriminant; the
    Hilbert symbols are taken against original_d (same square class).
    A CONSTANT verdict means every residue fiber that can hold points was
    evaluated and they all agree.
    """
    budget = Budget(work_cap)
    tables: dict[int, dict[int, list[int]]] = {}
    queue: list[Fiber] = [Fiber(1, b, 1, True, False) for b in range(p)]
    queue.append(Fiber(0, 1, 1, False, True))
    queue.append(Fiber(0, 0, 1, False, False))
    values: list[FiberValue] = []
    undetermined = 0
    alive_seen = 0
    while queue:
        fiber = queue.pop(0)
        try:
            if not _fiber_alive(s, p, fiber, tables, budget):
                continue
        except BoundedSearchError:
            undetermined += 1 + len(queue)
            break
        alive_seen += 1
        val = _fiber_value(fiber, s, original_d, p)
        if val is not None:
            values.append(val)
            continue
        if fiber.m >= m_cap:
            undetermined += 1
            continue
        pm = p**fiber.m
        if fiber.fixed0:
            queue.extend(
                Fiber(1, fiber.t1 + c * pm, fiber.m + 1, True, False) for c in range(p)
            )
        elif fiber.fixed1:
            queue.extend(
                Fiber(fiber.t0 + c * pm, 1, fiber.m + 1, False, True) for c in range(p)
            )
        else:
            queue.extend(
                Fiber(fiber.t0 + c0 * pm, fiber.t1 + c1 * pm, fiber.m + 1, False, False)
                for c0 in range(p)
                for c1 in range(p)
            )
    symbols = {v.symbol for v in values}
    if undetermined:
        status, e = "UNDECIDED", None
    elif not values:
        status, e = ("EMPTY", None) if alive_seen == 0 else ("UNDECIDED", None)
    elif len(symbols) == 1:
        status = "CONSTANT"
        e = values[0].e
    else:
        status, e = "NON_CONSTANT", None
    return SampleReport(status, e, values, undetermined, budget.used)
