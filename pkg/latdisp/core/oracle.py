"""
Brute-force empty-box search, kept independent of the continued fraction machinery.

All three searches work on exact coordinates and exist to validate the
analytic results on small inputs.
"""

from __future__ import annotations

import bisect
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .. import config
from .boxwalk import MaxEmptyBox
from .qfield import Expr, QuadraticNumber, enclose
from .torus import RankOneLattice
from ..utils.errors import CapExceeded, InvalidArgument, WindowTooSmall

logger = logging.getLogger(__name__)

Coordinate = Union[QuadraticNumber, Fraction, int]


def _qn(x: Coordinate) -> QuadraticNumber:
    return x if isinstance(x, QuadraticNumber) else QuadraticNumber.rational(x)


@dataclass(frozen=True)
class Region:
    """Axis-parallel box [x0, x1] x [y0, y1]."""

    x0: QuadraticNumber
    x1: QuadraticNumber
    y0: QuadraticNumber
    y1: QuadraticNumber

    def __post_init__(self):
        for name in ("x0", "x1", "y0", "y1"):
            object.__setattr__(self, name, _qn(getattr(self, name)))
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise InvalidArgument("region must have positive width and height")

    @classmethod
    def unit(cls) -> "Region":
        return cls(0, 1, 0, 1)

    def scaled(self, sx: Fraction, sy: Fraction) -> "Region":
        return Region(self.x0 * sx, self.x1 * sx, self.y0 * sy, self.y1 * sy)


@dataclass(frozen=True)
class PointSet:
    points: tuple[tuple[QuadraticNumber, QuadraticNumber], ...]

    def __post_init__(self):
        points = tuple((_qn(x), _qn(y)) for x, y in self.points)
        if len(set(points)) != len(points):
            raise InvalidArgument("point set contains duplicates")
        object.__setattr__(self, "points", points)

    @classmethod
    def of(cls, points: Iterable[Sequence[Coordinate]]) -> "PointSet":
        return cls(tuple((x, y) for x, y in points))

    def __len__(self):
        return len(self.points)

    def with_point(self, point: Sequence[Coordinate]) -> "PointSet":
        return PointSet(self.points + ((_qn(point[0]), _qn(point[1])),))

    def scaled(self, sx: Fraction, sy: Fraction) -> "PointSet":
        return PointSet(tuple((x * sx, y * sy) for x, y in self.points))


@dataclass(frozen=True)
class EmptyBox:
    x0: QuadraticNumber
    x1: QuadraticNumber
    y0: QuadraticNumber
    y1: QuadraticNumber

    @property
    def area(self) -> QuadraticNumber:
        return (self.x1 - self.x0) * (self.y1 - self.y0)


def brute_dispersion(points: PointSet, region: Optional[Region] = None) -> tuple[QuadraticNumber, EmptyBox]:
    """Largest open box in the region avoiding all points; sides lie on point coordinates or the boundary."""
    region = region or Region.unit()
    if len(points) > config.ORACLE_POINT_CAP:
        raise CapExceeded(f"{len(points)} points exceed the oracle cap {config.ORACLE_POINT_CAP}")
    inside = [(x, y) for x, y in points.points if region.x0 < x < region.x1 and region.y0 < y < region.y1]
    xs = sorted({region.x0, region.x1, *(x for x, _ in inside)})
    best_area, best_box = None, None
    for lo_index, left in enumerate(xs):
        for right in xs[lo_index + 1:]:
            ys = sorted(y for x, y in inside if left < x < right)
            bounds = [region.y0, *ys, region.y1]
            for bottom, top in zip(bounds, bounds[1:]):
                area = (right - left) * (top - bottom)
                if best_area is None or area > best_area:
                    best_area, best_box = area, EmptyBox(left, right, bottom, top)
    return best_area, best_box


def _strip_points(delta, delta_tilde, x0, x1, y1, window: int) -> set[tuple[int, int]]:
    """Index pairs (p, q) of lattice points p(1,1) + q(-Delta, -Delta~) with x0 <= x <= x1 and 0 < y <= y1."""
    det = Expr.lift(delta) - delta_tilde
    q_lo = math.floor(enclose((Expr.lift(0) - x1) / det).lo) - 1
    q_hi = math.ceil(enclose((Expr.lift(y1) - x0) / det).hi) + 1
    found = set()
    for q in range(q_lo, q_hi + 1):
        p_lo = max((x0 + q * delta).ceil(), (q * delta_tilde).floor())
        p_hi = min((x1 + q * delta).floor(), (y1 + q * delta_tilde).floor())
        for p in range(p_lo, p_hi + 1):
            x, y = p - q * delta, p - q * delta_tilde
            if x0 <= x <= x1 and 0 < y <= y1:
                if abs(p) > window or abs(q) > window:
                    raise WindowTooSmall(f"lattice point ({p}, {q}) lies outside the window {window}")
                found.add((p, q))
    return found


def _has_point_inside(by_x, xs, x0, x1, y1) -> bool:
    """Whether a collected point lies in the open box (x0, x1) x (0, y1)."""
    lo, hi = bisect.bisect_right(xs, x0), bisect.bisect_left(xs, x1)
    return any(0 < y < y1 for _, y in by_x[lo:hi])


def brute_boxes_origin(
    delta: Coordinate,
    delta_tilde: Coordinate,
    window: int,
    height_cap: Coordinate,
    width_cap: Optional[Coordinate] = None,
) -> list[MaxEmptyBox]:
    """Origin-bounded maximal empty boxes lower than height_cap with both sides within +-width_cap.

    Points are collected exactly from the tall strip [-Delta, 1] x (0, cap]
    and the wide strip [-w, w] x (0, 1 - Delta~]. Every pair of a point left
    of the vertical axis and a point right of it spans the box
    (left.x, right.x) x (0, left.y + right.y), kept when no collected point
    lies inside it. Boxes are indexed relative to B_0 = (-Delta, 1) x (0, 1 - Delta~).
    """
    if window < 5:
        raise WindowTooSmall(f"window {window} is below the minimum of 5")
    dl, dt = _qn(delta), _qn(delta_tilde)
    cap = _qn(height_cap)
    width = _qn(width_cap) if width_cap is not None else cap
    one = QuadraticNumber.rational(1)
    low = 1 - dt
    pairs = _strip_points(dl, dt, -dl, one, cap, window)
    pairs |= _strip_points(dl, dt, -width, width, low, window)
    by_x = sorted(((p - q * dl, p - q * dt) for p, q in pairs), key=lambda pt: pt[0])
    xs = [x for x, _ in by_x]

    def covered(x0, x1, y1) -> bool:
        return y1 <= low or (-dl <= x0 and x1 <= one)

    # a side point must see the vertical axis through an empty rectangle
    lefts = [(x, y) for x, y in by_x
             if -width <= x < 0 and covered(x, 0, y) and not _has_point_inside(by_x, xs, x, 0, y)]
    rights = [(x, y) for x, y in by_x
              if 0 < x <= width and covered(0, x, y) and not _has_point_inside(by_x, xs, 0, x, y)]

    found = []
    for left in lefts:
        for right in rights:
            height = left[1] + right[1]
            if height >= cap or not covered(left[0], right[0], height):
                continue
            if not _has_point_inside(by_x, xs, left[0], right[0], height):
                found.append((height, left, right))
    found.sort(key=lambda item: item[0])

    try:
        origin = next(k for k, (_, lp, rp) in enumerate(found) if lp == (-dl, -dt) and rp == (one, one))
    except StopIteration:
        raise WindowTooSmall("B_0 was not found; enlarge the caps") from None
    boxes = [MaxEmptyBox(k - origin, lp[0], lp[1], rp[0], rp[1]) for k, (_, lp, rp) in enumerate(found)]
    logger.debug("oracle found %d origin-bounded boxes (B_%d .. B_%d) from %d x %d side points",
                 len(boxes), boxes[0].n, boxes[-1].n, len(lefts), len(rights))
    return boxes


@dataclass(frozen=True)
class PeriodicBox:
    """Grid-unit description: rows y0 < y < y0 + height (mod n), columns x0 < x < x0 + width (mod n)."""

    y0: int
    height: int
    x0: int
    width: int

    @property
    def area(self) -> int:
        return self.height * self.width


def _max_circular_gap(xs: list[int], n: int) -> tuple[int, int]:
    """(width, start) of the widest open arc between consecutive points on the circle Z/n."""
    if len(xs) <= 1:
        return n, xs[0] if xs else 0
    width, start = xs[0] + n - xs[-1], xs[-1]
    for a, b in zip(xs, xs[1:]):
        if b - a > width:
            width, start = b - a, a
    return width, start


def brute_periodic_dispersion(lattice: RankOneLattice) -> tuple[Fraction, PeriodicBox]:
    """Periodic dispersion of {(k p / n mod 1, k / n)} with wrapped boxes; returns (area, box in grid units)."""
    n = lattice.n
    if n > config.PERIODIC_ORACLE_MAX_N:
        raise CapExceeded(f"n = {n} exceeds the periodic oracle cap {config.PERIODIC_ORACLE_MAX_N}")
    column = [k * lattice.p % n for k in range(n)]
    best = None
    for y0 in range(n):
        xs: list[int] = []
        for height in range(1, n + 1):
            if height > 1:
                bisect.insort(xs, column[(y0 + height - 1) % n])
            width, x0 = _max_circular_gap(xs, n)
            if best is None or height * width > best.area:
                best = PeriodicBox(y0, height, x0, width)
    return Fraction(best.area, n * n), best
