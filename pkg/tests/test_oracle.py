"""
Tests for the brute-force empty-box oracles and their agreement with the box walk.
"""
import random
from fractions import Fraction

import pytest

from latdisp import config
from latdisp.core.boxwalk import enumerate_boxes, normal_form, ring_lattice
from latdisp.core.oracle import (
    PointSet,
    Region,
    brute_boxes_origin,
    brute_dispersion,
    brute_periodic_dispersion,
)
from latdisp.core.qfield import QuadraticNumber, is_squarefree
from latdisp.core.torus import RankOneLattice, fibonacci_lattice, periodic_dispersion
from latdisp.utils.errors import CapExceeded, InvalidArgument, WindowTooSmall

HALF = Fraction(1, 2)


def test_empty_set_has_dispersion_one():
    area, box = brute_dispersion(PointSet(()))
    assert area == 1
    assert (box.x0, box.x1, box.y0, box.y1) == (0, 1, 0, 1)


def test_single_center_point():
    area, box = brute_dispersion(PointSet.of([(HALF, HALF)]))
    assert area == HALF
    assert box.area == area


def test_adding_points_never_increases_dispersion():
    points = PointSet.of([(Fraction(1, 3), Fraction(1, 4)), (Fraction(3, 4), Fraction(2, 3))])
    before, _ = brute_dispersion(points)
    after, _ = brute_dispersion(points.with_point((HALF, Fraction(1, 5))))
    assert after <= before


def test_dispersion_scales_with_the_region():
    points = PointSet.of([(Fraction(1, 3), Fraction(1, 4)), (Fraction(3, 4), Fraction(2, 3))])
    area, _ = brute_dispersion(points)
    scaled, _ = brute_dispersion(points.scaled(2, 3), Region.unit().scaled(2, 3))
    assert scaled == 6 * area


def test_irrational_coordinates():
    x = QuadraticNumber.sqrt(2) - 1
    area, box = brute_dispersion(PointSet.of([(x, x)]))
    assert area == 1 - x
    assert box.area == area


def test_point_cap():
    points = PointSet.of((Fraction(k, 1000), Fraction(k, 1000)) for k in range(1, config.ORACLE_POINT_CAP + 2))
    with pytest.raises(CapExceeded):
        brute_dispersion(points)


def test_duplicate_points_are_rejected():
    with pytest.raises(InvalidArgument):
        PointSet.of([(HALF, HALF), (HALF, HALF)])


def test_degenerate_region_is_rejected():
    with pytest.raises(InvalidArgument):
        Region(0, 0, 0, 1)


def assert_origin_boxes_agree(d, n, reach=12, window=2000):
    lattice = normal_form(ring_lattice(d, n))
    walked = {box.n: box for box in enumerate_boxes(lattice, -reach - 28, reach + 28)}
    top, bottom = walked[reach], walked[-reach]
    height_cap = top.height + 1
    width_cap = max(-bottom.alpha, bottom.beta) + 1
    found = brute_boxes_origin(lattice.delta, lattice.delta_tilde, window, height_cap, width_cap)
    indices = [box.n for box in found]
    assert indices == list(range(indices[0], indices[-1] + 1))
    assert set(range(-reach, reach + 1)) <= set(indices)
    for box in found:
        assert box.same_sides(walked[box.n])


@pytest.mark.parametrize("d, n", [(2, 1), (3, 1), (5, 1), (13, 1), (7, 1), (5, 2), (6, 1)])
def test_origin_boxes_agree_with_the_walk(d, n):
    assert_origin_boxes_agree(d, n)


@pytest.mark.slow
def test_origin_boxes_agree_on_random_rings():
    """20 rings Z[n delta_d] with squarefree d <= 30 and n <= 2, boxes B_-12 .. B_12."""
    rings = [(d, n) for d in range(2, 31) if is_squarefree(d) for n in (1, 2)]
    for d, n in random.Random(2024).sample(rings, 20):
        assert_origin_boxes_agree(d, n, window=10 ** 6)


def test_origin_boxes_have_no_point_inside():
    """Every reported box is empty against a direct scan of the lattice points around it."""
    lattice = normal_form(ring_lattice(3))
    walked = {box.n: box for box in enumerate_boxes(lattice, -10, 10)}
    found = brute_boxes_origin(lattice.delta, lattice.delta_tilde, 2000, walked[6].height + 1,
                               max(-walked[-6].alpha, walked[-6].beta) + 1)
    dl, dt = lattice.delta, lattice.delta_tilde
    points = [(p - q * dl, p - q * dt) for p in range(-40, 41) for q in range(-40, 41)]
    for box in found:
        assert not any(box.alpha < x < box.beta and 0 < y < box.height for x, y in points)


def test_small_window_is_reported():
    lattice = normal_form(ring_lattice(2))
    with pytest.raises(WindowTooSmall):
        brute_boxes_origin(lattice.delta, lattice.delta_tilde, 4, 10)
    with pytest.raises(WindowTooSmall):
        brute_boxes_origin(lattice.delta, lattice.delta_tilde, 5, 1000)


@pytest.mark.parametrize("p, n, expected", [
    (5, 13, Fraction(2, 13)),
    (1, 4, Fraction(9, 16)),
    (1, 5, Fraction(12, 25)),
])
def test_periodic_oracle_examples(p, n, expected):
    value, box = brute_periodic_dispersion(RankOneLattice(p, n))
    assert value == expected
    assert box.area == expected * n * n


def test_periodic_oracle_lower_bound():
    for n in (7, 11, 20, 31):
        value, _ = brute_periodic_dispersion(RankOneLattice(1, n))
        assert value >= Fraction(2, n)


def test_periodic_oracle_cap():
    with pytest.raises(CapExceeded):
        brute_periodic_dispersion(RankOneLattice(1, config.PERIODIC_ORACLE_MAX_N + 1))


@pytest.mark.slow
@pytest.mark.parametrize("m", [7, 9, 11, 12])
def test_periodic_oracle_on_fibonacci_lattices(m):
    lattice, _ = fibonacci_lattice(m)
    value, _ = brute_periodic_dispersion(lattice)
    assert value == periodic_dispersion(lattice).value == Fraction(2, lattice.n)


@pytest.mark.parametrize("m", [6, 7, 8])
def test_plain_dispersion_is_below_periodic(m):
    """Every box inside the unit square is also a wrapped box."""
    lattice, _ = fibonacci_lattice(m)
    plain, _ = brute_dispersion(PointSet.of(lattice.points()))
    assert plain <= periodic_dispersion(lattice).value
