"""
Tests for the maximal empty box walk, its closed form and the normal form reduction.
"""
from fractions import Fraction

import pytest

from latdisp.core.boxwalk import (
    Direction,
    LatticeNormalForm,
    box_table,
    closed_form_box,
    enumerate_boxes,
    generator_from_box,
    lattice_sequence,
    normal_form,
    ring_lattice,
    scale_rows,
    starting_box,
    step,
    volume_decomposition,
    walk_all,
)
from latdisp.core.contfrac import CFSequence, convergent_table, purely_periodic_generator, tail_values
from latdisp.core.dispersion import SubringSpec, disp_lattice, disp_quadratic
from latdisp.core.qfield import QuadraticNumber, delta
from latdisp.utils.errors import InvalidArgument, NotIrrational, SingularBasis, TerminatedWalk

SQRT2 = QuadraticNumber.sqrt(2)
PHI = delta(5)
LAMBDA_2 = LatticeNormalForm(1 + SQRT2, 1 - SQRT2)
LAMBDA_5 = LatticeNormalForm(PHI, PHI.conjugate())


def test_starting_box_of_lambda_2():
    b0 = starting_box(LAMBDA_2)
    assert (b0.alpha, b0.beta) == (-1 - SQRT2, 1)
    assert b0.height == SQRT2
    assert b0.n == 0


def test_torus_mode_bounds():
    """Torus mode accepts Delta~ = -1 but nothing below."""
    assert starting_box(LatticeNormalForm(1, -1, torus=True)).height == 2
    with pytest.raises(InvalidArgument):
        LatticeNormalForm(2, Fraction(-3, 2), torus=True)


def test_irrational_mode_rejects_rationals():
    with pytest.raises(NotIrrational):
        LatticeNormalForm(Fraction(5, 3), Fraction(-1, 2))


def test_step_up_examples():
    """alpha_0 + beta_0 = 1 - Delta < 0, so the left point moves."""
    box = step(starting_box(LAMBDA_2), Direction.UP)
    assert (box.alpha, box.beta) == (-SQRT2, 1)
    box = step(starting_box(LAMBDA_5), Direction.UP)
    assert (box.alpha, box.beta) == (1 - PHI, 1)


@pytest.mark.parametrize("lattice", [LAMBDA_2, LAMBDA_5])
def test_up_then_down_is_identity(lattice):
    for box in enumerate_boxes(lattice, -6, 6):
        assert step(step(box, Direction.UP), Direction.DOWN) == box
        assert step(step(box, Direction.DOWN), Direction.UP) == box


def test_enumerate_single_box():
    assert enumerate_boxes(LAMBDA_5, 0, 0) == [starting_box(LAMBDA_5)]


def test_enumerate_range_must_contain_zero():
    with pytest.raises(InvalidArgument):
        enumerate_boxes(LAMBDA_5, 1, 4)


@pytest.mark.parametrize("lattice", [LAMBDA_2, LAMBDA_5, normal_form(ring_lattice(13)), normal_form(ring_lattice(7, 2))])
def test_heights_increase_and_top_is_sum(lattice):
    boxes = enumerate_boxes(lattice, -15, 15)
    assert [box.n for box in boxes] == list(range(-15, 16))
    for lower, upper in zip(boxes, boxes[1:]):
        assert lower.height < upper.height
    for box in boxes:
        assert box.alpha < 0 < box.beta
        assert box.alpha_tilde > 0 and box.beta_tilde > 0
        assert box.top == (box.alpha + box.beta, box.alpha_tilde + box.beta_tilde)


def test_closed_form_first_boxes_of_lambda_2():
    """B_1 = A_0 + 1 has sides 1 - Delta and 1."""
    seq = lattice_sequence(LAMBDA_2)
    b1 = closed_form_box(LAMBDA_2, seq, 1)
    assert {b1.alpha, b1.beta} == {1 - LAMBDA_2.delta, QuadraticNumber.rational(1)}
    assert b1.same_sides(step(starting_box(LAMBDA_2), Direction.UP))


def test_boxes_at_block_starts_are_convergent_residues():
    """With j = 0 the sides of B_{A_i} are r_i and r_{i-1}."""
    seq = lattice_sequence(LAMBDA_5)
    table = convergent_table(seq, -1, 6)
    boxes = {box.n: box for box in enumerate_boxes(LAMBDA_5, 0, 6)}
    for i in range(1, 7):
        box = boxes[seq.partial_sum(i)]
        assert {box.alpha, box.beta} == {table[i].residue(PHI), table[i - 1].residue(PHI)}


def test_lattice_sequence_of_ring_lattices():
    assert lattice_sequence(LAMBDA_2) == CFSequence.periodic((2,))
    assert lattice_sequence(LAMBDA_5) == CFSequence.periodic((1,))


def test_volume_decomposition_examples():
    norm_part, det = volume_decomposition(starting_box(LAMBDA_2), LAMBDA_2)
    assert norm_part == 2
    assert det == 2 * SQRT2
    assert norm_part + det == starting_box(LAMBDA_2).volume
    norm_part, _ = volume_decomposition(starting_box(LAMBDA_5), LAMBDA_5)
    assert norm_part == 2


@pytest.mark.parametrize("d, n", [(2, 1), (5, 1), (13, 1), (217, 1), (3, 2)])
def test_norm_part_is_integral_for_quadratic_integers(d, n):
    gen = purely_periodic_generator(d, n)
    lattice = LatticeNormalForm(gen, gen.conjugate())
    for box in enumerate_boxes(lattice, -20, 20):
        norm_part, det = volume_decomposition(box, lattice)
        assert norm_part.is_rational and norm_part.a.denominator == 1
        assert norm_part + det == box.volume


@pytest.mark.parametrize("shift", [-2, -1, 1, 2, 3])
def test_reindexing_preserves_normalized_volumes(shift):
    """Boxes of the lattice of the shifted sequence are the same boxes moved by A_i."""
    seq = CFSequence.periodic((2, 1))
    lattice = LatticeNormalForm(*tail_values(seq, 0))
    shifted = LatticeNormalForm(*tail_values(seq, shift))
    offset = seq.partial_sum(shift)
    boxes = enumerate_boxes(lattice, -10, 10)
    moved = {box.n: box for box in enumerate_boxes(shifted, -10 - offset, 10 - offset)}
    for box in boxes:
        assert box.normalized_volume(lattice) == moved[box.n - offset].normalized_volume(shifted)


def test_generator_from_box_of_lambda_2():
    b0 = starting_box(LAMBDA_2)
    basis = generator_from_box(b0.left, b0.right)
    assert basis.matrix == ((1, -1 - SQRT2), (1, SQRT2 - 1))
    assert basis.det == 2 * SQRT2


def test_generator_from_unit_points():
    basis = generator_from_box((-1, 1), (1, 1))
    assert basis.det == 2
    assert basis.top == (0, 2)


def test_generator_from_collinear_points():
    with pytest.raises(SingularBasis):
        generator_from_box((-1, 1), (1, -1))


def test_normal_form_fixed_point():
    assert normal_form(LAMBDA_2.matrix()) == LAMBDA_2


def test_normal_form_of_swapped_golden_matrix():
    one = QuadraticNumber.rational(1)
    lattice = normal_form(((PHI, one), (PHI.conjugate(), one)))
    assert lattice == LAMBDA_5
    assert disp_lattice(lattice).value == disp_quadratic(SubringSpec(5)).normalized


def test_rank_one_matrix_scaling():
    """((p/n, -1), (1/n, 0)) scales to x = n/p and x~ = 0."""
    assert scale_rows(((Fraction(5, 13), -1), (Fraction(1, 13), 0)), irrational=False) == (Fraction(13, 5), 0)


def test_normal_form_rejects_axis_points():
    with pytest.raises(NotIrrational):
        normal_form(((Fraction(5, 13), -1), (Fraction(1, 13), 0)))


def test_normal_form_rejects_singular_matrix():
    with pytest.raises(SingularBasis):
        normal_form(((1, SQRT2), (1, SQRT2)))


@pytest.mark.parametrize("d", [2, 3, 5, 6, 7, 10, 13])
def test_ring_lattice_walk_matches_closed_form(d):
    lattice = normal_form(ring_lattice(d))
    assert disp_lattice(lattice).value == disp_quadratic(SubringSpec(d)).normalized


def test_torus_walk_is_finite():
    lattice = normal_form(((Fraction(5, 13), -1), (Fraction(1, 13), 0)), irrational=False)
    assert lattice == LatticeNormalForm(Fraction(5, 3), Fraction(-1, 2), torus=True)
    boxes = walk_all(lattice)
    with pytest.raises(TerminatedWalk):
        step(boxes[-1], Direction.UP, torus=True)
    with pytest.raises(TerminatedWalk):
        step(boxes[0], Direction.DOWN, torus=True)


def test_walk_all_needs_torus_mode():
    with pytest.raises(InvalidArgument):
        walk_all(LAMBDA_2)


def test_box_table_columns():
    rows = box_table(enumerate_boxes(LAMBDA_2, -1, 1), LAMBDA_2)
    assert [row["n"] for row in rows] == [-1, 0, 1]
    assert set(rows[0]) == {"n", "alpha", "alpha_tilde", "beta", "beta_tilde", "vol", "normalized_vol"}
    assert rows[1]["vol"] == 2 + 2 * SQRT2
