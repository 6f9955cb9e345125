"""
Rank-1 lattices on the torus.

The rank-1 lattice P_n = {({k p / n}, k / n) : 0 <= k < n} has the same
periodic dispersion as the planar lattice generated by (p / n, 1 / n) and
(1, 0). After row scaling that lattice has the finite continued fraction
n / p, so its boxes form a finite chain the torus-mode walk enumerates.
Unbounded strips of the planar lattice correspond to periodic boxes of
area 2 / n, so the normalized value is at least 2.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .. import config
from .boxwalk import LatticeNormalForm, MaxEmptyBox, normal_form, walk_all
from .contfrac import fibonacci, shortest_expansion
from ..utils.errors import InvalidArgument

logger = logging.getLogger(__name__)

STRIP_VALUE = Fraction(2)


@dataclass(frozen=True)
class RankOneLattice:
    p: int
    n: int

    def __post_init__(self):
        if self.n < 2 or not 0 < self.p < self.n:
            raise InvalidArgument(f"rank-1 lattice needs 0 < p < n, got ({self.p}, {self.n})")
        if math.gcd(self.p, self.n) != 1:
            raise InvalidArgument(f"p and n must be coprime, got ({self.p}, {self.n})")

    def points(self) -> list[tuple[Fraction, Fraction]]:
        return [(Fraction(k * self.p % self.n, self.n), Fraction(k, self.n)) for k in range(self.n)]

    def expansion(self) -> list[int]:
        """Shortest expansion of p / n (a_0 = 0)."""
        return shortest_expansion(Fraction(self.p, self.n))

    def max_coefficient(self) -> int:
        return max(self.expansion()[1:])

    def generating_matrix(self):
        return (Fraction(self.p, self.n), -1), (Fraction(1, self.n), 0)

    def reflection(self) -> "RankOneLattice":
        return RankOneLattice(self.n - self.p, self.n)


@dataclass(frozen=True)
class PeriodicDispersionResult:
    lattice: RankOneLattice
    value: Fraction
    normalized: Fraction
    witness: Optional[MaxEmptyBox]

    @property
    def strip(self) -> bool:
        """True when the maximum comes from an unbounded strip (normalized value 2)."""
        return self.witness is None


def planar_normal_form(lattice: RankOneLattice) -> LatticeNormalForm:
    return normal_form(lattice.generating_matrix(), irrational=False)


def periodic_dispersion(lattice: RankOneLattice) -> PeriodicDispersionResult:
    planar = planar_normal_form(lattice)
    best, witness = STRIP_VALUE, None
    for box in walk_all(planar):
        value = box.normalized_volume(planar).a
        if value > best:
            best, witness = value, box
    logger.debug("rank-1 lattice (%d, %d): normalized dispersion %s", lattice.p, lattice.n, best)
    return PeriodicDispersionResult(lattice=lattice, value=best / lattice.n, normalized=best, witness=witness)


def fibonacci_lattice(m: int) -> tuple[RankOneLattice, list[Fraction]]:
    """(F_{m-2}, F_m) and the normalized box profile F_{m-k} F_{k+3} / F_m, 0 <= k <= m - 3."""
    if m < 3:
        raise InvalidArgument(f"Fibonacci lattices need m >= 3, got {m}")
    f_m = fibonacci(m)
    profile = [Fraction(fibonacci(m - k) * fibonacci(k + 3), f_m) for k in range(m - 2)]
    return RankOneLattice(fibonacci(m - 2), f_m), profile


def zaremba_constant(bound: int) -> Fraction:
    """C(A) = A/4 + 3/2 + 1/(A + 2); every n with m(n) <= A has a rank-1 lattice below it."""
    return Fraction(bound, 4) + Fraction(3, 2) + Fraction(1, bound + 2)


@dataclass(frozen=True)
class ZarembaRow:
    n: int
    p: int
    reflection: int
    max_coefficient: int
    normalized: Fraction
    flagged: bool


def _zaremba_row(n: int, bound: int) -> ZarembaRow:
    best_p, best_m = None, None
    for p in range(1, n):
        if math.gcd(p, n) != 1:
            continue
        m = max(shortest_expansion(Fraction(p, n))[1:])
        if best_m is None or m < best_m:
            best_p, best_m = p, m
    lattice = RankOneLattice(best_p, n)
    result = periodic_dispersion(lattice)
    return ZarembaRow(n, best_p, n - best_p, best_m, result.normalized, best_m > bound)


def _zaremba_chunk(args: tuple[list[int], int]) -> list[ZarembaRow]:
    ns, bound = args
    return [_zaremba_row(n, bound) for n in ns]


def zaremba_scan(n_range: Iterable[int], bound: int, workers: Optional[int] = None) -> list[ZarembaRow]:
    """m(n) = min over coprime p of the largest coefficient of p / n, one witness and its reflection per n."""
    if bound < 1:
        raise InvalidArgument(f"bound must be positive, got {bound}")
    ns = [n for n in n_range]
    if any(n < 2 for n in ns):
        raise InvalidArgument("the scan needs n >= 2")
    workers = min(workers or config.THREADS, max(len(ns), 1))
    if workers <= 1 or len(ns) < 64:
        rows = _zaremba_chunk((ns, bound))
    else:
        chunks = [(ns[k::workers * 4], bound) for k in range(workers * 4)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = [row for part in pool.map(_zaremba_chunk, chunks) for row in part]
        rows.sort(key=lambda row: row.n)
    flagged = [row.n for row in rows if row.flagged]
    if flagged:
        logger.info("m(n) exceeds %d for n in %s", bound, flagged)
    return rows
