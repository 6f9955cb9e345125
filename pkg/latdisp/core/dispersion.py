"""
Normalized dispersion of coefficient sequences and quadratic lattices.

For a two-sided sequence (a_i) the normalized volume of the box B_{A_i + j} is

    f(a_i, j, Delta_i, Delta~_i) = (1 - j + Delta_i)(1 + j - Delta~_i) / (Delta_i - Delta~_i)

and the dispersion is the supremum over i of the maximum over 0 <= j < a_i.
The maximizing j is floor(a_i / 2) or ceil(a_i / 2).

Eventually periodic sequences are handled exactly. Indices between the two
preperiods are evaluated directly. In each periodic regime the values along
a residue class modulo twice the period are monotone (the tail maps are
increasing Moebius maps and f is monotone in each tail), so the supremum of
the class is either its first value or its limit, which is the value at
the same index of the purely periodic sequence of that regime.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .boxwalk import LatticeNormalForm, enumerate_boxes, lattice_sequence, volume_decomposition
from .contfrac import CFSequence, cf_expand, convergent_table, fibonacci, purely_periodic_generator, tail_values
from .qfield import Expr, QuadraticNumber, Real, ci_compare, delta, format_decimal, is_squarefree, realize
from ..utils.errors import InternalFault, InvalidArgument, NotPurelyPeriodic, NotQuadraticInteger

logger = logging.getLogger(__name__)

BOUND_TABLE_COEFFICIENTS = (2, 3, 4, 5, 6, 7, 8, 9, 10, 25, 50, 75, 100, 150, 200, 500, 1000)

# generators of the smallest-discriminant rings plus the period-13 example
NORM_FIGURE_GENERATORS = (
    "delta_5",
    "1+delta_2",
    "1+delta_3",
    "1+delta_13",
    "1+delta_17",
    "1+2*delta_5",
    "6+delta_217",
)


@dataclass(frozen=True)
class DispersionResult:
    value: Optional[Real]
    attained: bool
    witness: Optional[tuple[int, int]] = None
    infinite: bool = False

    @classmethod
    def infinite_result(cls) -> "DispersionResult":
        return cls(value=None, attained=False, witness=None, infinite=True)

    def decimal(self, digits: int = 5) -> str:
        return "inf" if self.infinite else format_decimal(self.value, digits)

    def __str__(self):
        return "inf" if self.infinite else str(self.value)


@dataclass(frozen=True)
class SubringSpec:
    """The order Z[n * delta_d] of the real quadratic field Q(sqrt(d))."""

    d: int
    n: int = 1

    def __post_init__(self):
        if self.d < 2 or not is_squarefree(self.d):
            raise InvalidArgument(f"d must be squarefree and >= 2, got {self.d}")
        if self.n < 1:
            raise InvalidArgument(f"n must be positive, got {self.n}")

    @property
    def disc(self) -> int:
        return self.n * self.n * self.d * (1 if self.d % 4 == 1 else 4)

    @property
    def det(self) -> QuadraticNumber:
        return QuadraticNumber.sqrt(self.disc)

    @property
    def generator(self) -> QuadraticNumber:
        return self.n * delta(self.d)


@dataclass(frozen=True)
class QuadraticDispersion:
    spec: SubringSpec
    value: QuadraticNumber
    normalized: QuadraticNumber
    result: DispersionResult


def box_value(a: int, j: int, delta_i, delta_tilde_i) -> Real:
    if not 0 <= j < a:
        raise InvalidArgument(f"need 0 <= j < a, got j={j}, a={a}")
    if delta_i < 1 or not -1 <= delta_tilde_i < 0:
        raise InvalidArgument("tails must satisfy Delta >= 1 and -1 <= Delta~ < 0")
    dl, dt = Expr.lift(delta_i), Expr.lift(delta_tilde_i)
    return realize((1 - j + dl) * (1 + j - dt) / (dl - dt))


def best_offset(a: int, delta_i, delta_tilde_i) -> tuple[Real, int]:
    """Largest box value over j in {floor(a/2), ceil(a/2)}; the smaller j wins ties."""
    best_v, best_j = None, None
    for j in sorted({a // 2, (a + 1) // 2}):
        if j >= a:
            continue
        v = box_value(a, j, delta_i, delta_tilde_i)
        if best_v is None or ci_compare(v, best_v) > 0:
            best_v, best_j = v, j
    return best_v, best_j


@dataclass
class _Candidate:
    value: Real
    attained: bool
    witness: tuple[int, int]

    def beats(self, other: Optional["_Candidate"]) -> bool:
        if other is None:
            return True
        c = ci_compare(self.value, other.value)
        return c > 0 or c == 0 and self.attained and not other.attained


def _periodic_extension(coefficient, length: int) -> CFSequence:
    """Purely periodic two-sided sequence agreeing with `coefficient(k)` of period `length`."""
    right = tuple(coefficient(k) for k in range(length))
    left = tuple(coefficient(-k - 1) for k in range(length))
    return CFSequence(right_period=right, left_period=left, two_sided=True)


def disp_sequence(seq: CFSequence) -> DispersionResult:
    if not seq.two_sided:
        if not seq.is_purely_periodic:
            raise InvalidArgument("dispersion needs a two-sided or purely periodic sequence")
        seq = CFSequence.periodic(seq.right_period)
    if not seq.right_period or not seq.left_period:
        logger.debug("sequence %s terminates: infinite dispersion", seq)
        return DispersionResult.infinite_result()

    rpre, rper = len(seq.right_preperiod), seq.right_period
    lpre, lper = len(seq.left_preperiod), seq.left_period
    lr, ll = len(rper), len(lper)
    right_limit = _periodic_extension(lambda k: rper[(k - rpre) % lr], lr)
    left_limit = _periodic_extension(lambda k: lper[(-k - 1 - lpre) % ll], ll)
    lo, hi = -lpre - 2 * ll, rpre + 2 * lr - 1
    logger.debug("evaluating %s on indices [%d, %d]", seq, lo, hi)

    best = None
    for i in range(lo, hi + 1):
        a = seq.coefficient(i)
        value, j = best_offset(a, *tail_values(seq, i))
        cand = _Candidate(value, True, (i, j))
        limit_seq, period = (right_limit, lr) if i >= rpre else (left_limit, ll) if i < -lpre else (None, 0)
        if limit_seq is not None:
            limit, limit_j = best_offset(a, *tail_values(limit_seq, i % period))
            if ci_compare(value, limit) < 0:
                cand = _Candidate(limit, False, (i, limit_j))
        if cand.beats(best):
            best = cand
    return DispersionResult(value=best.value, attained=best.attained, witness=best.witness)


def disp_lattice(lattice: LatticeNormalForm) -> DispersionResult:
    return disp_sequence(lattice_sequence(lattice))


def verify_witness(seq: CFSequence, result: DispersionResult) -> bool:
    """Re-evaluate the box formula at an attained witness."""
    if not result.attained or result.witness is None:
        return False
    i, j = result.witness
    return ci_compare(box_value(seq.coefficient(i), j, *tail_values(seq, i)), result.value) == 0


def disp_quadratic(spec: SubringSpec) -> QuadraticDispersion:
    disc = spec.disc
    r = disc % 2
    root = QuadraticNumber.sqrt(disc)
    value = (root / 2 + 1) ** 2 - Fraction(r, 4)
    normalized = value / spec.det
    period = cf_expand(purely_periodic_generator(spec.d, spec.n)).right_period
    result = disp_sequence(CFSequence.periodic(period))
    if result.value != normalized:
        raise InternalFault(f"closed form {normalized} and period evaluation {result.value} disagree for {spec}")
    return QuadraticDispersion(spec=spec, value=value, normalized=normalized, result=result)


def _bound_formula(x: int, r: int) -> Fraction:
    return Fraction(x, 4) + 1 + Fraction(1, x) - Fraction(r, 4 * x)


def coefficient_bounds(a: int) -> tuple[Fraction, Fraction]:
    """(L(a), L(a + 2)) with r = a mod 2; every box value with a_i = a lies strictly between."""
    if a < 2:
        raise InvalidArgument(f"coefficient bounds need a >= 2, got {a}")
    r = a % 2
    return _bound_formula(a, r), _bound_formula(a + 2, r)


def tight_bounds(a: int) -> tuple[QuadraticNumber, QuadraticNumber]:
    """Dispersion of the periods (a) and (a, 1), closed form checked against disp_sequence."""
    if a < 1:
        raise InvalidArgument(f"tight bounds need a >= 1, got {a}")
    r = a % 2
    lo = 1 + Fraction(a * a + 8 - r, 4) / QuadraticNumber.sqrt(a * a + 4)
    root = QuadraticNumber.sqrt(a * a + 4 * a)
    hi = ((root / 2 + 1) ** 2 - Fraction(r, 4)) / root
    for closed, period in ((lo, (a,)), (hi, (a, 1))):
        computed = disp_sequence(CFSequence.periodic(period)).value
        if computed != closed:
            raise InternalFault(f"tight bound for period {period}: {closed} != {computed}")
    return lo, hi


BEST_LATTICE_LIMIT = (4 + QuadraticNumber.sqrt(5)) / 3


def best_lattice(rank: int) -> tuple[CFSequence, QuadraticNumber]:
    """Period of the lattice with the rank-th smallest normalized dispersion, and that dispersion."""
    if rank < 1:
        raise InvalidArgument(f"rank must be positive, got {rank}")
    if rank == 1:
        seq = CFSequence.periodic((1,))
        closed = disp_quadratic(SubringSpec(5)).normalized
    else:
        n = rank - 2
        seq = CFSequence.periodic((2,) + (1,) * (2 * n) + (2,))
        f_top, f_mid = fibonacci(2 * n + 4), fibonacci(2 * n + 3)
        closed = 1 + 2 * f_top / QuadraticNumber.sqrt(9 * f_mid * f_mid - 4)
    computed = disp_sequence(seq).value
    if computed != closed:
        raise InternalFault(f"best lattice of rank {rank}: {closed} != {computed}")
    return seq, closed


def pattern_thresholds() -> list[tuple[str, CFSequence, Real]]:
    """Smallest box value B_1 can take when a (1,2)-sequence contains each excluded pattern.

    Each sequence is centered so the pattern sits around a_0 = 2 with the
    tails minimized; the value is the box formula at i = 0, j = 1.
    """
    witnesses = [
        ("2,1,2", CFSequence.two_sided_from(left=(1, 2), left_period=(2, 1), right=(2,), right_period=(2, 1))),
        ("1,2,1", CFSequence.two_sided_from(left=(1, 1), left_period=(2, 1, 1, 1), right=(2, 1, 1),
                                            right_period=(2, 1, 1, 1))),
        ("2,2,2", CFSequence.two_sided_from(left=(2, 2, 2), left_period=(1, 1, 1, 2, 2, 2), right=(2, 1, 1),
                                            right_period=(2, 2, 2, 1, 1, 1))),
    ]
    return [(name, seq, box_value(2, 1, *tail_values(seq, 0))) for name, seq in witnesses]


# -- coefficient bounds for purely periodic quadratic integers ---------------------


@dataclass(frozen=True)
class NormRow:
    i: int
    a: int
    norm: Fraction
    lower: QuadraticNumber
    upper: QuadraticNumber

    @property
    def ok(self) -> bool:
        return self.lower <= self.norm <= self.upper


@dataclass(frozen=True)
class CoefficientBoundReport:
    delta: QuadraticNumber
    period: tuple[int, ...]
    a0: int
    interior_max: Optional[int]
    bound: int
    half_a0: int
    norms: list[NormRow] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        interior_ok = self.interior_max is None or self.interior_max <= min(self.bound, self.a0)
        return interior_ok and all(row.ok for row in self.norms)

    @property
    def within_half_a0(self) -> bool:
        return self.interior_max is None or self.interior_max <= self.half_a0


def coefficient_bound_check(x: QuadraticNumber) -> CoefficientBoundReport:
    if x.is_rational or not x.is_integer:
        raise NotQuadraticInteger(f"{x} is not an irrational quadratic integer")
    seq = cf_expand(x)
    if not seq.is_purely_periodic:
        raise NotPurelyPeriodic(f"{x} = {seq} is not purely periodic")
    period = seq.right_period
    spread = x - x.conjugate()
    table = convergent_table(seq, 0, len(period) - 1)
    norms = [
        NormRow(i, period[i], abs(table[i].residue(x).norm()), spread / (period[i] + 2), spread / period[i])
        for i in range(len(period))
    ]
    return CoefficientBoundReport(
        delta=x,
        period=period,
        a0=period[0],
        interior_max=max(period[1:], default=None),
        bound=(spread / 2).floor(),
        half_a0=math.ceil(period[0] / 2),
        norms=norms,
    )


@dataclass(frozen=True)
class StatisticsRow:
    delta: QuadraticNumber
    trace: int
    norm: int
    period: tuple[int, ...]
    coefficients: tuple[int, ...]
    ratio: Fraction

    @property
    def consistent(self) -> bool:
        return self.ratio <= 1


def coefficient_statistics_scan(trace_max: int, norm_range: Iterable[int]) -> list[StatisticsRow]:
    """Distinct coefficient sets of purely periodic quadratic integers x^2 - t x - m, 1 <= t <= trace_max.

    Reduction (x > 1 > 0 > conj(x) > -1) forces norm -m with 1 <= m <= t.
    The ratio is max over n of n * w_n / a_0, w_n the n-th largest coefficient.
    """
    norms = sorted({abs(m) for m in norm_range if m})
    rows = []
    for t in range(1, trace_max + 1):
        for m in norms:
            if m > t:
                break
            disc = t * t + 4 * m
            if math.isqrt(disc) ** 2 == disc:
                continue
            x = QuadraticNumber(Fraction(t, 2), Fraction(1, 2), disc)
            period = cf_expand(x).right_period
            distinct = tuple(sorted(set(period), reverse=True))
            ratio = max(Fraction(n * w, period[0]) for n, w in enumerate(distinct, start=1))
            rows.append(StatisticsRow(x, t, -m, period, distinct, ratio))
    flagged = sum(not row.consistent for row in rows)
    if flagged:
        logger.warning("coefficient scan found %d rows with n * w_n > a_0", flagged)
    return rows


def norm_figure(x: QuadraticNumber, max_n: Optional[int] = None) -> list[tuple[int, Fraction]]:
    """(n, |N(alpha_n)| + |N(beta_n)|) for 0 <= n <= max_n (default: one period, A_l).

    The value equals vol(B_n) - (Delta - conj(Delta)) and is an integer for quadratic integers.
    """
    seq = cf_expand(x)
    if not seq.is_purely_periodic:
        raise NotPurelyPeriodic(f"{x} is not purely periodic")
    lattice = LatticeNormalForm(x, x.conjugate())
    top = sum(seq.right_period) if max_n is None else max_n
    if top < 0:
        raise InvalidArgument(f"max_n must be nonnegative, got {max_n}")
    series = []
    for box in enumerate_boxes(lattice, 0, top):
        norm_part, _ = volume_decomposition(box, lattice)
        series.append((box.n, norm_part.a))
    return series


# -- bound table ---------------------------------------------------------------


@dataclass(frozen=True)
class BoundTableRow:
    a: int
    lower: Fraction
    periodic: QuadraticNumber
    tail: QuadraticNumber
    upper: Fraction

    def cells(self) -> dict:
        return {"a": self.a, "L": self.lower, "disp_periodic": self.periodic, "disp_tail": self.tail, "U": self.upper}


def bound_table(coefficients: Iterable[int] = BOUND_TABLE_COEFFICIENTS) -> list[BoundTableRow]:
    rows = []
    for a in coefficients:
        lower, upper = coefficient_bounds(a)
        lo, hi = tight_bounds(a)
        rows.append(BoundTableRow(a, lower, lo, hi, upper))
    return rows


def bound_table_check(rows: Iterable[BoundTableRow], reference: Iterable[dict]) -> list[tuple[int, str, str, str]]:
    """Cells that disagree with the printed reference at its own number of decimals: (a, column, printed, computed)."""
    printed = {int(ref["a"]): ref for ref in reference}
    mismatches = []
    for row in rows:
        ref = printed.get(row.a)
        if ref is None:
            continue
        for column, value in row.cells().items():
            if column == "a":
                continue
            text = str(ref[column])
            digits = len(text.split(".", 1)[1]) if "." in text else 0
            computed = format_decimal(value, digits)
            if computed != text:
                mismatches.append((row.a, column, text, computed))
    return mismatches
