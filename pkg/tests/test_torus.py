"""
Tests for rank-1 lattices: planar normal form, periodic dispersion,
Fibonacci lattices and the Zaremba scan.
"""
import functools
import math
from fractions import Fraction

import pytest

from latdisp.core.boxwalk import LatticeNormalForm, walk_all
from latdisp.core.contfrac import fibonacci
from latdisp.core.oracle import brute_periodic_dispersion
from latdisp.core.torus import (
    RankOneLattice,
    fibonacci_lattice,
    periodic_dispersion,
    planar_normal_form,
    zaremba_constant,
    zaremba_scan,
)
from latdisp.utils.errors import InvalidArgument

FIBONACCI_NUMBERS = {fibonacci(k) for k in range(2, 16)}


def _coprime_lattices(n_max):
    for n in range(2, n_max + 1):
        for p in range(1, n):
            if math.gcd(p, n) == 1:
                yield RankOneLattice(p, n)


def test_rank_one_validation():
    for p, n in [(0, 5), (5, 5), (2, 4), (1, 1)]:
        with pytest.raises(InvalidArgument):
            RankOneLattice(p, n)


def test_rank_one_points_and_expansion():
    lattice = RankOneLattice(2, 5)
    assert lattice.points()[1] == (Fraction(2, 5), Fraction(1, 5))
    assert len(set(lattice.points())) == 5
    assert lattice.expansion() == [0, 2, 2]
    assert lattice.max_coefficient() == 2
    assert lattice.reflection() == RankOneLattice(3, 5)


def test_planar_normal_form():
    assert planar_normal_form(RankOneLattice(5, 13)) == LatticeNormalForm(Fraction(5, 3), Fraction(-1, 2), torus=True)
    assert planar_normal_form(RankOneLattice(1, 4)) == LatticeNormalForm(1, Fraction(-1, 3), torus=True)


def test_periodic_dispersion_of_one_over_five():
    result = periodic_dispersion(RankOneLattice(1, 5))
    assert result.value == Fraction(12, 25)
    assert result.normalized == Fraction(12, 5)
    assert not result.strip


def test_periodic_dispersion_of_one_over_four():
    result = periodic_dispersion(RankOneLattice(1, 4))
    assert result.normalized == Fraction(9, 4)
    assert result.witness is not None


@pytest.mark.parametrize("m", range(3, 21))
def test_fibonacci_lattices_reach_the_strip_value(m):
    lattice, profile = fibonacci_lattice(m)
    result = periodic_dispersion(lattice)
    assert result.value == Fraction(2, fibonacci(m))
    assert result.strip
    assert max(profile) == 2
    assert profile == profile[::-1]


def test_fibonacci_profile_of_five():
    lattice, profile = fibonacci_lattice(5)
    assert lattice == RankOneLattice(2, 5)
    assert profile == [2, Fraction(9, 5), 2]


@pytest.mark.parametrize("m", range(5, 15))
def test_fibonacci_walk_matches_the_profile(m):
    lattice, profile = fibonacci_lattice(m)
    planar = planar_normal_form(lattice)
    volumes = [box.normalized_volume(planar) for box in walk_all(planar)]
    assert sorted(volumes) == sorted(profile)


def test_fibonacci_lattice_needs_m_at_least_three():
    with pytest.raises(InvalidArgument):
        fibonacci_lattice(2)


def test_walk_agrees_with_periodic_oracle():
    for lattice in _coprime_lattices(21):
        brute, box = brute_periodic_dispersion(lattice)
        assert periodic_dispersion(lattice).value == brute
        assert box.area == brute * lattice.n ** 2


@pytest.mark.slow
def test_walk_agrees_with_periodic_oracle_up_to_sixty():
    for lattice in _coprime_lattices(60):
        if lattice.n > 21:
            assert periodic_dispersion(lattice).value == brute_periodic_dispersion(lattice)[0], lattice


def test_dispersion_is_reflection_invariant():
    for lattice in _coprime_lattices(60):
        assert periodic_dispersion(lattice).value == periodic_dispersion(lattice.reflection()).value


@functools.lru_cache(maxsize=None)
def _optimal_numerators(n_max):
    """n -> (smallest normalized periodic dispersion, the p reaching it)."""
    best = {}
    for lattice in _coprime_lattices(n_max):
        value = periodic_dispersion(lattice).normalized
        current = best.get(lattice.n)
        if current is None or value < current[0]:
            best[lattice.n] = (value, {lattice.p})
        elif value == current[0]:
            current[1].add(lattice.p)
    return best


@pytest.mark.slow
def test_only_fibonacci_sizes_reach_the_strip_value():
    """For n up to 200, some p gives normalized dispersion 2 exactly when n is a Fibonacci number."""
    for n, (value, _) in _optimal_numerators(200).items():
        assert value >= 2
        assert (value == 2) == (n in FIBONACCI_NUMBERS), n


@pytest.mark.slow
def test_fibonacci_optimum_is_unique_up_to_reflection():
    best = _optimal_numerators(200)
    for m in range(3, 13):
        n, p = fibonacci(m), fibonacci(m - 2)
        value, numerators = best[n]
        assert value == 2
        assert numerators == {p, n - p}, n


def test_zaremba_constant():
    assert zaremba_constant(5) == Fraction(81, 28)
    values = [zaremba_constant(a) for a in range(1, 20)]
    assert values == sorted(values)


def test_zaremba_rows():
    rows = zaremba_scan(range(2, 40), 5, workers=1)
    assert [row.n for row in rows] == list(range(2, 40))
    five = rows[3]
    assert (five.n, five.p, five.reflection, five.max_coefficient) == (5, 2, 3, 2)
    for row in rows:
        assert not row.flagged
        assert row.max_coefficient <= 5
        assert 2 <= row.normalized < zaremba_constant(5)
        assert RankOneLattice(row.p, row.n).max_coefficient() == row.max_coefficient


def test_zaremba_flags_rows_above_the_bound():
    rows = zaremba_scan([5, 6, 7], 1, workers=1)
    assert all(row.flagged for row in rows)


def test_parallel_scan_matches_serial():
    assert zaremba_scan(range(2, 80), 5, workers=2) == zaremba_scan(range(2, 80), 5, workers=1)


@pytest.mark.parametrize("n_range, bound", [(range(2, 10), 0), ([1, 2, 3], 5)])
def test_zaremba_scan_errors(n_range, bound):
    with pytest.raises(InvalidArgument):
        zaremba_scan(n_range, bound)


@pytest.mark.slow
def test_zaremba_scan_up_to_two_thousand():
    """Every n <= 2000 has a numerator with coefficients at most 5, and its lattice stays below C(5)."""
    rows = zaremba_scan(range(2, 2001), 5)
    assert len(rows) == 1999
    constant = zaremba_constant(5)
    for row in rows:
        assert not row.flagged, row.n
        assert Fraction(row.max_coefficient, 4) < row.normalized < constant, row.n
