"""
Continued fractions of rationals and quadratic irrationals.

CFSequence stores each side of a coefficient sequence as a preperiod plus
a (possibly empty) period, so finite, one-sided and two-sided eventually
periodic sequences share one representation. The right side holds
a_0, a_1, ... and the left side holds a_{-1}, a_{-2}, ... read outward.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Union

from .qfield import QuadraticNumber, delta
from ..utils.errors import IndexOutOfRange, InvalidArgument, NonPeriodicTail

logger = logging.getLogger(__name__)


class SequenceKind(str, Enum):
    TWO_SIDED = "two_sided"
    ONE_SIDED_RIGHT = "one_sided_right"
    FINITE = "finite"


def _primitive(period: tuple[int, ...]) -> tuple[int, ...]:
    n = len(period)
    for k in range(1, n + 1):
        if n % k == 0 and period[:k] * (n // k) == period:
            return period[:k]
    return period


def _canonical_side(pre: Sequence[int], period: Sequence[int], end_in_one: bool) -> tuple[tuple[int, ...], tuple[int, ...]]:
    pre, period = list(pre), _primitive(tuple(period))
    if period:
        period = list(period)
        while pre and pre[-1] == period[-1]:
            pre.pop()
            period = [period[-1]] + period[:-1]
        return tuple(pre), tuple(period)
    if end_in_one and pre and pre[-1] > 1 and not (len(pre) == 1 and pre[0] == 1):
        pre[-1] -= 1
        pre.append(1)
    return tuple(pre), ()


@dataclass(frozen=True)
class CFSequence:
    """Coefficient sequence (a_i) with eventually periodic or terminating sides."""

    right_preperiod: tuple[int, ...] = ()
    right_period: tuple[int, ...] = ()
    left_preperiod: tuple[int, ...] = ()
    left_period: tuple[int, ...] = ()
    two_sided: bool = False
    center_index_offset: int = field(default=0, compare=False)

    def __post_init__(self):
        rpre, rper = tuple(int(c) for c in self.right_preperiod), tuple(int(c) for c in self.right_period)
        lpre, lper = tuple(int(c) for c in self.left_preperiod), tuple(int(c) for c in self.left_period)
        if not self.two_sided and (lpre or lper):
            raise InvalidArgument("a one-sided sequence has no left part")
        if not rpre and not rper:
            raise InvalidArgument("empty coefficient sequence")
        leading_free = not self.two_sided and bool(rpre)
        checked = (rpre[1:] if leading_free else rpre) + rper + lpre + lper
        if any(c < 1 for c in checked):
            raise InvalidArgument(f"coefficients must be positive integers: {checked}")
        # finite one-sided expansions keep a_0 outside the trailing-one rule
        if not self.two_sided and not rper and len(rpre) == 1:
            if rpre[0] > 1:
                rpre = (rpre[0] - 1, 1)
        else:
            rpre, rper = _canonical_side(rpre, rper, end_in_one=True)
        if self.two_sided:
            lpre, lper = _canonical_side(lpre, lper, end_in_one=True)
        object.__setattr__(self, "right_preperiod", rpre)
        object.__setattr__(self, "right_period", rper)
        object.__setattr__(self, "left_preperiod", lpre)
        object.__setattr__(self, "left_period", lper)

    # -- construction ---------------------------------------------------------

    @classmethod
    def periodic(cls, period: Sequence[int]) -> "CFSequence":
        """Two-sided purely periodic sequence with a_0 = period[0]."""
        period = tuple(period)
        return cls(right_period=period, left_period=tuple(reversed(period)), two_sided=True)

    @classmethod
    def two_sided_from(cls, left: Sequence[int], right: Sequence[int], left_period: Sequence[int] = (),
                       right_period: Sequence[int] = ()) -> "CFSequence":
        """`left` is given outward (a_{-1}, a_{-2}, ...), `right` from a_0."""
        return cls(right_preperiod=tuple(right), right_period=tuple(right_period),
                   left_preperiod=tuple(left), left_period=tuple(left_period), two_sided=True)

    @classmethod
    def parse(cls, text: str) -> "CFSequence":
        from ..utils.parsing import parse_sequence

        return parse_sequence(text)

    # -- shape ------------------------------------------------------------------

    @property
    def kind(self) -> SequenceKind:
        if self.two_sided:
            return SequenceKind.TWO_SIDED
        if self.right_period:
            return SequenceKind.ONE_SIDED_RIGHT
        return SequenceKind.FINITE

    @property
    def is_purely_periodic(self) -> bool:
        return bool(self.right_period) and not self.right_preperiod and not self.two_sided

    @property
    def right_length(self) -> Optional[int]:
        return None if self.right_period else len(self.right_preperiod)

    @property
    def left_length(self) -> Optional[int]:
        if not self.two_sided:
            return 0
        return None if self.left_period else len(self.left_preperiod)

    @property
    def is_bounded_both_ways(self) -> bool:
        return self.two_sided and bool(self.right_period) and bool(self.left_period)

    @property
    def min_index(self) -> Optional[int]:
        n = self.left_length
        return None if n is None else -n

    @property
    def max_index(self) -> Optional[int]:
        n = self.right_length
        return None if n is None else n - 1

    def has_index(self, i: int) -> bool:
        lo, hi = self.min_index, self.max_index
        return (lo is None or i >= lo) and (hi is None or i <= hi)

    def max_coefficient(self) -> int:
        coeffs = self.right_preperiod + self.right_period + self.left_preperiod + self.left_period
        if not self.two_sided and self.right_preperiod:
            coeffs = self.right_preperiod[1:] + self.right_period
        return max(coeffs, default=self.right_preperiod[0])

    # -- access -----------------------------------------------------------------

    def coefficient(self, i: int) -> int:
        if i >= 0:
            pre, period, k = self.right_preperiod, self.right_period, i
        else:
            if not self.two_sided:
                raise IndexOutOfRange(f"index {i} on a one-sided sequence")
            pre, period, k = self.left_preperiod, self.left_period, -i - 1
        if k < len(pre):
            return pre[k]
        if not period:
            raise IndexOutOfRange(f"index {i} beyond a terminating side")
        return period[(k - len(pre)) % len(period)]

    __getitem__ = coefficient

    def coefficients(self, start: int, stop: int) -> list[int]:
        return [self.coefficient(i) for i in range(start, stop)]

    def partial_sum(self, i: int) -> int:
        """A_i with A_0 = 0 and A_{i+1} = A_i + a_i."""
        if i >= 0:
            return sum(self.coefficient(k) for k in range(i))
        return -sum(self.coefficient(k) for k in range(i, 0))

    def locate(self, n: int) -> tuple[int, int]:
        """(i, j) with n = A_i + j and 0 <= j < a_i."""
        i, a_sum = 0, 0
        if n >= 0:
            while n >= a_sum + self.coefficient(i):
                a_sum += self.coefficient(i)
                i += 1
            return i, n - a_sum
        while n < a_sum:
            i -= 1
            a_sum -= self.coefficient(i)
        return i, n - a_sum

    # -- rendering --------------------------------------------------------------

    def __str__(self):
        def join(cs):
            return ",".join(str(c) for c in cs)

        if not self.two_sided:
            parts = [str(c) for c in self.right_preperiod]
            if self.right_period:
                parts.append(f"({join(self.right_period)})")
            if self.right_preperiod and len(parts) > 1:
                return f"[{parts[0]};{','.join(parts[1:])}]"
            return f"[{','.join(parts)}]"
        left = []
        if self.left_period:
            left.append(f"({join(reversed(self.left_period))})")
        left += [str(c) for c in reversed(self.left_preperiod)]
        right = [str(c) for c in self.right_preperiod]
        if self.right_period:
            right.append(f"({join(self.right_period)})")
        return f"{','.join(left)}|{','.join(right)}"


@dataclass(frozen=True)
class ConvergentPair:
    index: int
    p: int
    q: int

    def residue(self, x: QuadraticNumber) -> QuadraticNumber:
        """p_i - q_i * x."""
        return self.p - self.q * x


def convergent_table(seq: CFSequence, i_min: int, i_max: int) -> dict[int, ConvergentPair]:
    """Convergents p_i, q_i for i_min <= i <= i_max (both recurrences from p_{-1}=0, p_0=1)."""
    table = {-1: (0, 1), 0: (1, 0)}
    p_prev, p_cur, q_prev, q_cur = 0, 1, 1, 0
    for k in range(0, max(i_max, 0)):
        a = seq.coefficient(k)
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        table[k + 1] = (p_cur, q_cur)
    # backward: p_{k-1} = -a_k p_k + p_{k+1}
    p_next, p_here, q_next, q_here = 1, 0, 0, 1
    for k in range(-1, min(i_min, -1), -1):
        a = seq.coefficient(k)
        p_next, p_here = p_here, -a * p_here + p_next
        q_next, q_here = q_here, -a * q_here + q_next
        table[k - 1] = (p_here, q_here)
    return {i: ConvergentPair(i, *table[i]) for i in range(i_min, i_max + 1)}


def convergents(seq: CFSequence, i: int) -> ConvergentPair:
    if i > 0 and not seq.has_index(i - 1) or i < -1 and not seq.has_index(i + 1):
        raise IndexOutOfRange(f"convergent {i} needs coefficients outside the sequence")
    return convergent_table(seq, min(i, 0), max(i, 0))[i]


# -- tail values -----------------------------------------------------------------


@lru_cache(maxsize=4096)
def periodic_value(period: tuple[int, ...]) -> QuadraticNumber:
    """Value of the purely periodic expansion [c_0; c_1, ..., c_{l-1}, c_0, ...]."""
    p, p1, q, q1 = 1, 0, 0, 1
    for c in period:
        p, p1 = c * p + p1, p
        q, q1 = c * q + q1, q
    # x = (p x + p1) / (q x + q1)  =>  q x^2 + (q1 - p) x - p1 = 0
    disc = (p - q1) ** 2 + 4 * q * p1
    return QuadraticNumber(Fraction(p - q1, 2 * q), Fraction(1, 2 * q), disc)


def fold(coefficients: Sequence[int], tail: QuadraticNumber) -> QuadraticNumber:
    """[c_0; c_1, ..., c_{k-1}, tail]."""
    x = tail
    for c in reversed(coefficients):
        x = c + 1 / x
    return x


def finite_value(coefficients: Sequence[int]) -> Fraction:
    x = Fraction(coefficients[-1])
    for c in reversed(coefficients[:-1]):
        x = c + 1 / x
    return x


def _side_value(pre: tuple[int, ...], period: tuple[int, ...], k: int) -> QuadraticNumber:
    """Value of [s_k; s_{k+1}, ...] for the side s = pre + period repeated."""
    if not period:
        raise NonPeriodicTail("tail terminates; use the rational (torus) path")
    if k >= len(pre):
        r = (k - len(pre)) % len(period)
        return periodic_value(period[r:] + period[:r])
    return fold(pre[k:], periodic_value(period))


def tail_values(seq: CFSequence, i: int) -> tuple[QuadraticNumber, QuadraticNumber]:
    """(Delta_i, tilde Delta_i) with Delta_i = [a_i; a_{i+1}, ...] and -tilde Delta_i = [0; a_{i-1}, ...]."""
    if not seq.two_sided:
        raise NonPeriodicTail("tail values need a two-sided sequence")
    if i >= 0:
        forward = _side_value(seq.right_preperiod, seq.right_period, i)
    else:
        forward = fold(seq.coefficients(i, 0), _side_value(seq.right_preperiod, seq.right_period, 0))
    if i <= 0:
        backward = _side_value(seq.left_preperiod, seq.left_period, -i)
    else:
        backward = fold([seq.coefficient(k) for k in range(i - 1, -1, -1)],
                        _side_value(seq.left_preperiod, seq.left_period, 0))
    return forward, -1 / backward


# -- expansions --------------------------------------------------------------------


def _rational_expansion(x: Fraction) -> list[int]:
    coeffs = []
    num, den = x.numerator, x.denominator
    while den:
        a, r = divmod(num, den)
        coeffs.append(a)
        num, den = den, r
    return coeffs


def shortest_expansion(x: Union[int, Fraction]) -> list[int]:
    """Euclidean expansion of a rational; the last coefficient is >= 2 unless x is 1 or the expansion has length 1."""
    return _rational_expansion(Fraction(x))


def cf_expand(x: Union[QuadraticNumber, Fraction, int]) -> CFSequence:
    if isinstance(x, (int, Fraction)):
        x = QuadraticNumber.rational(x)
    if x.is_rational:
        if x.a <= 0:
            raise InvalidArgument(f"finite expansions need a positive rational, got {x.a}")
        return CFSequence(right_preperiod=tuple(_rational_expansion(x.a)))
    seen: dict[QuadraticNumber, int] = {}
    coeffs: list[int] = []
    while x not in seen:
        seen[x] = len(coeffs)
        a = x.floor()
        coeffs.append(a)
        x = 1 / (x - a)
    start = seen[x]
    logger.debug("expansion: preperiod %d, period %d", start, len(coeffs) - start)
    return CFSequence(right_preperiod=tuple(coeffs[:start]), right_period=tuple(coeffs[start:]))


def purely_periodic_generator(d: int, n: int) -> QuadraticNumber:
    """floor(-conj(delta)) + delta for delta = n * delta_d."""
    if n < 1:
        raise InvalidArgument(f"n must be positive, got {n}")
    gen = n * delta(d)
    return (-gen.conjugate()).floor() + gen


def shift_reverse(seq: CFSequence, shift: int, reverse: bool = False) -> CFSequence:
    """Sequence b_i = a_{i+shift}, then b_i -> b_{-i} if reverse."""
    if not seq.two_sided:
        raise InvalidArgument("shift_reverse needs a two-sided sequence")
    rpre, rper = list(seq.right_preperiod), list(seq.right_period)
    lpre, lper = list(seq.left_preperiod), list(seq.left_period)

    def take(pre, period):
        if pre:
            return pre.pop(0), period
        if not period:
            raise IndexOutOfRange("shift runs past a terminating side")
        return period[0], period[1:] + period[:1]

    for _ in range(max(shift, 0)):
        c, rper = take(rpre, rper)
        lpre.insert(0, c)
    for _ in range(max(-shift, 0)):
        c, lper = take(lpre, lper)
        rpre.insert(0, c)
    if reverse:
        a0, rper = take(rpre, rper)
        rpre, rper, lpre, lper = [a0] + lpre, lper, rpre, rper
    return CFSequence(right_preperiod=tuple(rpre), right_period=tuple(rper), left_preperiod=tuple(lpre),
                      left_period=tuple(lper), two_sided=True,
                      center_index_offset=seq.center_index_offset + shift)


def conjugate_expansion_identity(x: QuadraticNumber) -> str:
    """Which period order the expansion of -conj(x) follows: reversed, forward, both or neither."""
    seq = cf_expand(x)
    if not seq.is_purely_periodic:
        raise InvalidArgument(f"{x} is not purely periodic")
    period = seq.right_period
    actual = cf_expand(-x.conjugate())
    reversed_form = CFSequence(right_preperiod=(0,), right_period=tuple(reversed(period)))
    forward_form = CFSequence(right_preperiod=(0,), right_period=period[1:] + period[:1])
    matches = (actual == reversed_form, actual == forward_form)
    return {(True, True): "both", (True, False): "reversed", (False, True): "forward"}.get(matches, "neither")


def fibonacci(k: int) -> int:
    """F_k with F_0 = 0, F_1 = F_2 = 1."""
    if k < 0:
        raise InvalidArgument(f"Fibonacci index must be nonnegative, got {k}")
    a, b = 0, 1
    for _ in range(k):
        a, b = b, a + b
    return a
