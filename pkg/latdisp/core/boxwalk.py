"""
Maximal empty boxes bounded below by the origin.

A lattice in normal form is generated by (1, 1) and (-Delta, -tilde Delta).
Its origin-bounded maximal empty boxes B_n form a chain ordered by height;
B_0 = (-Delta, 1) x (0, 1 - tilde Delta) and the neighbours of a box are
obtained from its left point (alpha, alpha~) and right point (beta, beta~):

    up:   alpha + beta > 0  ->  beta  <- alpha + beta, else alpha <- alpha + beta
    down: alpha~ - beta~ > 0 -> alpha <- alpha - beta, else beta <- beta - alpha

The walk is the source of truth; the convergent closed form is used as a
cross-check. In torus mode (rational generators) the chain is finite and
the walk stops on the degenerate box where alpha + beta = 0 or alpha~ = beta~.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence, Union

from .. import config
from .contfrac import CFSequence, cf_expand, convergent_table
from .qfield import Expr, QuadraticNumber, Real, delta, realize
from ..utils.errors import (
    InternalFault,
    InvalidArgument,
    NotIrrational,
    SingularBasis,
    TerminatedWalk,
)

logger = logging.getLogger(__name__)

Number = Union[QuadraticNumber, Fraction, int]
Point = tuple[QuadraticNumber, QuadraticNumber]


def _qn(x: Number) -> QuadraticNumber:
    return x if isinstance(x, QuadraticNumber) else QuadraticNumber.rational(x)


class Direction(str, Enum):
    UP = "up"
    DOWN = "down"


@dataclass(frozen=True)
class LatticeNormalForm:
    """Lattice generated by the rows (1, -delta) and (1, -delta_tilde) of its matrix."""

    delta: QuadraticNumber
    delta_tilde: QuadraticNumber
    torus: bool = False

    def __post_init__(self):
        dl, dt = _qn(self.delta), _qn(self.delta_tilde)
        object.__setattr__(self, "delta", dl)
        object.__setattr__(self, "delta_tilde", dt)
        if self.torus:
            if dl < 1 or dt < -1 or dt >= 0:
                raise InvalidArgument(f"torus normal form needs delta >= 1 and -1 <= delta~ < 0, got {dl}, {dt}")
            return
        if dl.is_rational or dt.is_rational:
            raise NotIrrational("irrational normal form needs irrational delta and delta~")
        if dl <= 1 or dt <= -1 or dt >= 0:
            raise InvalidArgument(f"normal form needs delta > 1 and -1 < delta~ < 0, got {dl}, {dt}")

    @property
    def det(self) -> Real:
        return realize(Expr.lift(self.delta) - self.delta_tilde)

    def matrix(self) -> tuple[tuple[QuadraticNumber, QuadraticNumber], tuple[QuadraticNumber, QuadraticNumber]]:
        one = QuadraticNumber.rational(1)
        return (one, -self.delta), (one, -self.delta_tilde)

    def point(self, p: int, q: int) -> Point:
        """Coordinates of p*(1, 1) + q*(-delta, -delta~)."""
        return p - q * self.delta, p - q * self.delta_tilde


@dataclass(frozen=True)
class MaxEmptyBox:
    """B_n = (alpha, beta) x (0, alpha~ + beta~)."""

    n: int
    alpha: QuadraticNumber
    alpha_tilde: QuadraticNumber
    beta: QuadraticNumber
    beta_tilde: QuadraticNumber

    @property
    def left(self) -> Point:
        return self.alpha, self.alpha_tilde

    @property
    def right(self) -> Point:
        return self.beta, self.beta_tilde

    @property
    def top(self) -> Point:
        return self.alpha + self.beta, self.alpha_tilde + self.beta_tilde

    @property
    def width(self) -> QuadraticNumber:
        return self.beta - self.alpha

    @property
    def height(self) -> QuadraticNumber:
        return self.alpha_tilde + self.beta_tilde

    @property
    def volume(self) -> Real:
        return realize(Expr.lift(self.width) * self.height)

    def normalized_volume(self, lattice: LatticeNormalForm) -> Real:
        return realize(Expr.lift(self.width) * self.height / (Expr.lift(lattice.delta) - lattice.delta_tilde))

    def same_sides(self, other: "MaxEmptyBox") -> bool:
        return (self.alpha, self.alpha_tilde, self.beta, self.beta_tilde) == (
            other.alpha, other.alpha_tilde, other.beta, other.beta_tilde)


def starting_box(lattice: LatticeNormalForm) -> MaxEmptyBox:
    one = QuadraticNumber.rational(1)
    return MaxEmptyBox(0, -lattice.delta, -lattice.delta_tilde, one, one)


def step(box: MaxEmptyBox, direction: Direction, torus: bool = False) -> MaxEmptyBox:
    direction = Direction(direction)
    if direction is Direction.UP:
        s = (box.alpha + box.beta).sign()
        if s == 0:
            if torus:
                raise TerminatedWalk(f"top point of B_{box.n} lies on the vertical axis")
            raise NotIrrational("two lattice points on a vertical line")
        if s > 0:
            return MaxEmptyBox(box.n + 1, box.alpha, box.alpha_tilde, box.alpha + box.beta, box.alpha_tilde + box.beta_tilde)
        return MaxEmptyBox(box.n + 1, box.alpha + box.beta, box.alpha_tilde + box.beta_tilde, box.beta, box.beta_tilde)
    t = (box.alpha_tilde - box.beta_tilde).sign()
    if t == 0:
        if torus:
            raise TerminatedWalk(f"left and right points of B_{box.n} have equal height")
        raise NotIrrational("two lattice points on a horizontal line")
    if t > 0:
        return MaxEmptyBox(box.n - 1, box.alpha - box.beta, box.alpha_tilde - box.beta_tilde, box.beta, box.beta_tilde)
    return MaxEmptyBox(box.n - 1, box.alpha, box.alpha_tilde, box.beta - box.alpha, box.beta_tilde - box.alpha_tilde)


def lattice_sequence(lattice: LatticeNormalForm) -> CFSequence:
    """Two-sided coefficient sequence with Delta = [a_0; a_1, ...] and -Delta~ = [0; a_{-1}, ...]."""
    right = cf_expand(lattice.delta)
    minus_dt = -lattice.delta_tilde
    if minus_dt == 1:
        left_pre, left_period = (1,), ()
    else:
        left = cf_expand(minus_dt)
        left_pre, left_period = left.right_preperiod[1:], left.right_period
    return CFSequence(right_preperiod=right.right_preperiod, right_period=right.right_period,
                      left_preperiod=left_pre, left_period=left_period, two_sided=True)


def closed_form_box(lattice: LatticeNormalForm, seq: CFSequence, n: int, table=None) -> MaxEmptyBox:
    """B_n from convergents: with n = A_i + j the sides are r_i and j*r_i + r_{i-1}, r_k = p_k - q_k*Delta."""
    i, j = seq.locate(n)
    if table is None:
        table = convergent_table(seq, min(i - 1, -1), max(i, 0))
    cur, prev = table[i], table[i - 1]
    r = (cur.residue(lattice.delta), cur.residue(lattice.delta_tilde))
    s = (j * r[0] + prev.residue(lattice.delta), j * r[1] + prev.residue(lattice.delta_tilde))
    if i % 2:
        return MaxEmptyBox(n, r[0], r[1], s[0], s[1])
    return MaxEmptyBox(n, s[0], s[1], r[0], r[1])


def enumerate_boxes(lattice: LatticeNormalForm, n_min: int, n_max: int, verify: bool = True) -> list[MaxEmptyBox]:
    """B_{n_min} .. B_{n_max} by walking from B_0; torus walks stop at the degenerate box."""
    if n_min > 0 or n_max < 0:
        raise InvalidArgument(f"index range must contain 0, got [{n_min}, {n_max}]")
    torus = lattice.torus
    b0 = starting_box(lattice)
    upper, lower = [b0], []
    try:
        while upper[-1].n < n_max:
            upper.append(step(upper[-1], Direction.UP, torus))
    except TerminatedWalk as exc:
        logger.debug("upward walk stopped: %s", exc)
    try:
        box = b0
        while box.n > n_min:
            box = step(box, Direction.DOWN, torus)
            lower.append(box)
    except TerminatedWalk as exc:
        logger.debug("downward walk stopped: %s", exc)
    boxes = lower[::-1] + upper
    if verify and not lattice.torus:
        _check_closed_form(lattice, boxes)
    return boxes


def walk_all(lattice: LatticeNormalForm) -> list[MaxEmptyBox]:
    """Every box of a torus-mode lattice (the chain is finite)."""
    if not lattice.torus:
        raise InvalidArgument("only torus-mode lattices have a finite box chain")
    bound = config.NORMAL_FORM_STEP_CAP
    boxes = enumerate_boxes(lattice, -bound, bound, verify=False)
    if boxes[0].n == -bound or boxes[-1].n == bound:
        raise InternalFault("torus walk did not terminate within the step cap")
    return boxes


def _check_closed_form(lattice: LatticeNormalForm, boxes: Sequence[MaxEmptyBox]) -> None:
    seq = lattice_sequence(lattice)
    lo_i, _ = seq.locate(boxes[0].n)
    hi_i, _ = seq.locate(boxes[-1].n)
    table = convergent_table(seq, min(lo_i - 1, -1), max(hi_i, 0))
    for box in boxes:
        expected = closed_form_box(lattice, seq, box.n, table)
        if not box.same_sides(expected):
            raise InternalFault(f"walk and convergent closed form disagree at B_{box.n}")


def volume_decomposition(box: MaxEmptyBox, lattice: LatticeNormalForm) -> tuple[Real, Real]:
    """(|alpha*alpha~| + |beta*beta~|, Delta - Delta~); the parts sum to the box volume."""
    norm_part = realize(Expr.lift(abs(box.alpha)) * abs(box.alpha_tilde) + Expr.lift(abs(box.beta)) * abs(box.beta_tilde))
    return norm_part, lattice.det


@dataclass(frozen=True)
class Basis:
    """Generating matrix [[beta, alpha], [beta~, alpha~]] of a lattice read off a box."""

    right: Point
    left: Point
    det: Real

    @property
    def matrix(self):
        return (self.right[0], self.left[0]), (self.right[1], self.left[1])

    @property
    def top(self) -> Point:
        return self.left[0] + self.right[0], self.left[1] + self.right[1]


def generator_from_box(left: Sequence[Number], right: Sequence[Number]) -> Basis:
    (a, at), (b, bt) = (tuple(_qn(v) for v in left), tuple(_qn(v) for v in right))
    det = realize(Expr.lift(b) * at - Expr.lift(a) * bt)
    if isinstance(det, QuadraticNumber) and det == 0:
        raise SingularBasis("box points are collinear with the origin")
    if not (a < 0 < b and at > 0 and bt > 0):
        raise InvalidArgument("need alpha < 0 < beta with positive ordinates")
    return Basis(right=(b, bt), left=(a, at), det=det)


def scale_rows(matrix: Sequence[Sequence[Number]], irrational: bool = True) -> tuple[QuadraticNumber, QuadraticNumber]:
    """Scale rows so the first usable column becomes (1, 1); returns (x, x~) with second column (-x, -x~)."""
    (m11, m12), (m21, m22) = ((_qn(v) for v in row) for row in matrix)
    det = realize(Expr.lift(m11) * m22 - Expr.lift(m12) * m21)
    if isinstance(det, QuadraticNumber) and det == 0:
        raise SingularBasis("generating matrix is singular")
    if irrational and not all((m11, m12, m21, m22)):
        raise NotIrrational("a generator lies on a coordinate axis")
    if not (m11 and m21):
        m11, m12, m21, m22 = m12, m11, m22, m21
    if not (m11 and m21):
        raise NotIrrational("no generator off the coordinate axes")
    return -m12 / m11, -m22 / m21


def normal_form(matrix: Sequence[Sequence[Number]], irrational: bool = True) -> LatticeNormalForm:
    """NBA-equivalent normal form.

    Each reduction step walks the current boxes up through the first
    coefficient block (B_0 .. B_{a_0}) and rescales rows so the new B_0 is
    the unit box corner, which in coordinates is (x, x~) -> (1/(x - a), 1/(x~ - a)).
    """
    x, xt = scale_rows(matrix, irrational)
    if irrational and (x.is_rational or xt.is_rational):
        raise NotIrrational("two lattice points share a coordinate line")

    def reduced():
        if irrational:
            return x > 1 and -1 < xt < 0
        return x >= 1 and -1 <= xt < 0

    steps = 0
    while not reduced():
        a = x.floor()
        if x == a:
            a -= 1
        if xt == a:
            raise NotIrrational("degenerate rational lattice")
        x, xt = 1 / (x - a), 1 / (xt - a)
        steps += 1
        if steps > config.NORMAL_FORM_STEP_CAP:
            raise InternalFault("normal form reduction exceeded the step cap")
    logger.debug("normal form reached after %d reduction steps", steps)
    return LatticeNormalForm(x, xt, torus=not irrational)


def box_table(boxes: Sequence[MaxEmptyBox], lattice: LatticeNormalForm) -> list[dict]:
    """Rows (n, alpha, alpha~, beta, beta~, vol, normalized vol) with exact values."""
    return [
        {
            "n": box.n,
            "alpha": box.alpha,
            "alpha_tilde": box.alpha_tilde,
            "beta": box.beta,
            "beta_tilde": box.beta_tilde,
            "vol": box.volume,
            "normalized_vol": box.normalized_volume(lattice),
        }
        for box in boxes
    ]


def ring_lattice(d: int, n: int = 1):
    """Generating matrix of the Minkowski embedding of Z[n * delta_d]: columns (1, 1) and (delta, conj(delta))."""
    if n < 1:
        raise InvalidArgument(f"n must be positive, got {n}")
    gen = n * delta(d)
    one = QuadraticNumber.rational(1)
    return (one, gen), (one, gen.conjugate())
