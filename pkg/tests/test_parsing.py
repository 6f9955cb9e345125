"""
Tests for the text grammar of numbers, sequences and rank-1 lattices.
"""
from fractions import Fraction

import pytest

from latdisp.core.contfrac import CFSequence, cf_expand
from latdisp.core.qfield import QuadraticNumber, delta
from latdisp.utils.errors import ParseError
from latdisp.utils.parsing import parse_number, parse_quadratic, parse_rank_one, parse_sequence


def test_parse_quadratic_examples():
    assert parse_quadratic("(13+sqrt(217))/2") == 6 + delta(217)
    assert parse_quadratic("delta_5") == delta(5)
    assert parse_quadratic("phi") == delta(5)
    assert parse_quadratic("1 + 2*sqrt(8)") == 1 + 4 * QuadraticNumber.sqrt(2)


def test_parse_quadratic_operators():
    assert parse_quadratic("phi^3/sqrt(5)") == delta(5) ** 3 / QuadraticNumber.sqrt(5)
    assert parse_quadratic("2**-1") == Fraction(1, 2)
    assert parse_quadratic("-(1 - sqrt(2))") == QuadraticNumber.sqrt(2) - 1
    assert parse_quadratic("0.25") == Fraction(1, 4)


@pytest.mark.parametrize("value", [
    6 + delta(217),
    1 - QuadraticNumber.sqrt(2),
    -QuadraticNumber.sqrt(2),
    (QuadraticNumber.sqrt(5) - 1) / 2,
    QuadraticNumber.rational(Fraction(-3, 4)),
    Fraction(2, 7) * QuadraticNumber.sqrt(3),
])
def test_printed_numbers_parse_back(value):
    assert parse_quadratic(str(value)) == value


@pytest.mark.parametrize("text, position", [
    ("sqrt(2)+sqrt(3)", 7),
    ("1/0", 1),
    ("1 + ", 3),
    ("2 $ 3", 2),
])
def test_parse_quadratic_errors_carry_position(text, position):
    with pytest.raises(ParseError) as info:
        parse_quadratic(text)
    assert info.value.position == position


def test_exponents_are_capped():
    assert parse_quadratic("2^64") == 2 ** 64
    assert parse_quadratic("(1+sqrt(2))**-3") == (1 + QuadraticNumber.sqrt(2)) ** -3
    with pytest.raises(ParseError) as info:
        parse_quadratic("2^65")
    assert info.value.position == 2
    with pytest.raises(ParseError):
        parse_quadratic("2**-100000")


def test_nested_powers_are_capped():
    assert parse_quadratic("(2^64)^64") == 2 ** 4096
    with pytest.raises(ParseError) as info:
        parse_quadratic("((2^64)^64)^64")
    assert info.value.position == 11


@pytest.mark.parametrize("text", ["sqrt(" + "9" * 30 + ")", "sqrt(1/" + "7" * 30 + ")", "delta_" + "3" * 30])
def test_huge_radicands_are_rejected(text):
    with pytest.raises(ParseError):
        parse_quadratic(text)


def test_parse_quadratic_rejects_irrational_sqrt_argument():
    with pytest.raises(ParseError):
        parse_quadratic("sqrt(sqrt(2))")


def test_parse_one_sided_finite():
    """[0;2,1,1] is the expansion of 2/5."""
    assert parse_sequence("[0;2,1,1]") == cf_expand(Fraction(2, 5))


def test_parse_one_sided_periodic():
    seq = parse_sequence("[2;1,1,(2,1,1,1)]")
    assert seq.coefficients(0, 11) == [2, 1, 1, 2, 1, 1, 1, 2, 1, 1, 1]


def test_parse_two_sided():
    """The left period is written in reading order and stored outward."""
    seq = parse_sequence("(1,2)|(2,1,1,2)")
    assert seq.two_sided
    assert seq.coefficients(-4, 5) == [1, 2, 1, 2, 2, 1, 1, 2, 2]


def test_parse_two_sided_with_preperiods():
    seq = parse_sequence("(1,2),2,1|2,(2,1)")
    assert seq.coefficients(-5, 4) == [2, 1, 2, 2, 1, 2, 2, 1, 2]
    assert str(seq) == "(1,2),2,1|2,(2,1)"


def test_bare_period_is_two_sided():
    assert parse_sequence("(2,1)") == CFSequence.periodic((2, 1))


@pytest.mark.parametrize("text", ["[0;2,1,1]", "[3;(1,2)]", "(1,2),2,1|2,(2,1)", "(1)|(1)", "4,1|(3)"])
def test_printed_sequences_parse_back(text):
    seq = parse_sequence(text)
    assert parse_sequence(str(seq)) == seq


@pytest.mark.parametrize("text", ["", "[1;2", "1,2", "(1,2|3)", "1|2|3", "|(2)", "(1),0|(2)", "(1,2),x|(2)"])
def test_parse_sequence_errors(text):
    with pytest.raises(ParseError):
        parse_sequence(text)


def test_parse_rank_one():
    assert parse_rank_one("rank1(5, 13)") == (5, 13)
    with pytest.raises(ParseError):
        parse_rank_one("rank1(13, 5)")
    with pytest.raises(ParseError):
        parse_rank_one("rank(5, 13)")


def test_parse_number_dispatch():
    assert parse_number("rank1(2,5)").kind == "rank1"
    assert parse_number("[0;2,1,1]").kind == "sequence"
    assert parse_number("(1)|(2)").kind == "sequence"
    parsed = parse_number("delta_5")
    assert parsed.kind == "number"
    assert parsed.value == delta(5)
