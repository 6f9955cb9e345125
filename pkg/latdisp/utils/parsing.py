"""
Text grammar for numbers, coefficient sequences and rank-1 lattices.

    number   :=  sum
    sum      :=  product (("+" | "-") product)*
    product  :=  power (("*" | "/") power)*
    power    :=  unary (("^" | "**") integer)?
    unary    :=  ("-" | "+") unary | atom
    atom     :=  decimal | "sqrt(" sum ")" | "delta_" integer | "phi" | "(" sum ")"

    one-sided:  "[a0; a1, ..., (p1, ..., pk)]"     a0 may be zero or negative
    two-sided:  "LEFT|RIGHT" in reading order, e.g. "(1,2),2,1|2,(2,1)"
                the left period group comes first, the right one last;
                "(p1,...,pk)" alone is the purely periodic sequence
    rank-1:     "rank1(p, n)"
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .. import config
from ..core.contfrac import CFSequence
from ..core.qfield import QuadraticNumber, delta
from .errors import InvalidArgument, MixedRadicand, ParseError

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|(\*\*|[-+*/^()])|(sqrt|phi|delta_\d+))")


def _bits(x: QuadraticNumber) -> int:
    return max(x.a.numerator.bit_length(), x.a.denominator.bit_length(),
               x.b.numerator.bit_length(), x.b.denominator.bit_length(), x.d.bit_length())


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError("unexpected character", text, pos + len(text[pos:]) - len(text[pos:].lstrip()))
        start = m.start(m.lastindex)
        kind = ("num", "op", "name")[m.lastindex - 1]
        tokens.append((kind, m.group(m.lastindex), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _QuadraticParser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def fail(self, message: str, pos=None):
        raise ParseError(message, self.text, self.tok[2] if pos is None else pos)

    def eat(self, value: str) -> None:
        if self.tok[1] != value:
            self.fail(f"expected {value!r}")
        self.i += 1

    def apply(self, op: str, x, y, pos: int):
        try:
            if op == "+":
                return x + y
            if op == "-":
                return x - y
            if op == "*":
                return x * y
            return x / y
        except MixedRadicand as exc:
            raise ParseError(str(exc), self.text, pos) from exc
        except ZeroDivisionError as exc:
            raise ParseError("division by zero", self.text, pos) from exc

    def parse(self) -> QuadraticNumber:
        if self.tok[0] == "end":
            self.fail("empty input")
        value = self.sum()
        if self.tok[0] != "end":
            self.fail("trailing input")
        return value

    def sum(self):
        value = self.product()
        while self.tok[1] in ("+", "-"):
            op, pos = self.tok[1], self.tok[2]
            self.i += 1
            value = self.apply(op, value, self.product(), pos)
        return value

    def product(self):
        value = self.power()
        while self.tok[1] in ("*", "/"):
            op, pos = self.tok[1], self.tok[2]
            self.i += 1
            value = self.apply(op, value, self.power(), pos)
        return value

    def power(self):
        base = self.unary()
        if self.tok[1] in ("^", "**"):
            pos = self.tok[2]
            self.i += 1
            sign = 1
            if self.tok[1] == "-":
                sign = -1
                self.i += 1
            if self.tok[0] != "num" or "." in self.tok[1]:
                self.fail("exponent must be an integer")
            exponent = sign * int(self.tok[1])
            if abs(exponent) > config.PARSE_MAX_EXPONENT:
                self.fail(f"exponent above {config.PARSE_MAX_EXPONENT}")
            if _bits(base) * abs(exponent) > config.PARSE_MAX_POWER_BITS:
                self.fail("power too large", pos)
            self.i += 1
            try:
                return base ** exponent
            except ZeroDivisionError as exc:
                raise ParseError("division by zero", self.text, pos) from exc
        return base

    def unary(self):
        if self.tok[1] == "-":
            self.i += 1
            return -self.unary()
        if self.tok[1] == "+":
            self.i += 1
            return self.unary()
        return self.atom()

    def atom(self):
        kind, value, pos = self.tok
        if kind == "num":
            self.i += 1
            return QuadraticNumber.rational(Fraction(value))
        if value == "(":
            self.i += 1
            inner = self.sum()
            self.eat(")")
            return inner
        if value == "sqrt":
            self.i += 1
            self.eat("(")
            arg_pos = self.tok[2]
            arg = self.sum()
            self.eat(")")
            if not arg.is_rational or arg < 0:
                self.fail("sqrt needs a nonnegative rational argument", arg_pos)
            if (arg.a.numerator * arg.a.denominator).bit_length() > config.PARSE_MAX_RADICAND_BITS:
                self.fail(f"sqrt argument above {config.PARSE_MAX_RADICAND_BITS} bits", arg_pos)
            return QuadraticNumber.sqrt(arg.a)
        if value == "phi":
            self.i += 1
            return delta(5)
        if value.startswith("delta_"):
            if int(value[len("delta_"):]).bit_length() > config.PARSE_MAX_RADICAND_BITS:
                self.fail(f"radicand above {config.PARSE_MAX_RADICAND_BITS} bits")
            self.i += 1
            try:
                return delta(int(value[len("delta_"):]))
            except InvalidArgument as exc:
                raise ParseError(str(exc), self.text, pos) from exc
        self.fail("expected a number")


def parse_quadratic(text: str) -> QuadraticNumber:
    return _QuadraticParser(text).parse()


# -- sequences -----------------------------------------------------------------

_INT = re.compile(r"-?\d+")


def _int(item: str, text: str, pos: int, allow_sign: bool = False) -> int:
    item = item.strip()
    if not _INT.fullmatch(item) or (item.startswith("-") and not allow_sign):
        raise ParseError(f"bad coefficient {item!r}", text, pos)
    return int(item)


def _split_side(side: str, text: str, offset: int, group_last: bool) -> tuple[list[int], list[int]]:
    """Coefficients and the parenthesized period group of one side, as written."""
    plain, group = side, ""
    if "(" in side:
        open_at, close_at = side.index("("), side.find(")")
        if close_at < open_at or side.count("(") != 1 or side.count(")") != 1:
            raise ParseError("unbalanced period group", text, offset + open_at)
        group = side[open_at + 1:close_at]
        before, after = side[:open_at].strip(), side[close_at + 1:].strip()
        if group_last and after or not group_last and before:
            pos = offset + (close_at + 1 if group_last else 0)
            raise ParseError("the period group must be outermost", text, pos)
        plain = before.rstrip(",") if group_last else after.lstrip(",")
        if not group.strip():
            raise ParseError("empty period group", text, offset + open_at)
    elif ")" in side:
        raise ParseError("unbalanced period group", text, offset + side.index(")"))
    coeffs = [_int(c, text, offset) for c in plain.split(",")] if plain.strip() else []
    period = [_int(c, text, offset) for c in group.split(",")] if group else []
    return coeffs, period


def _check_positive(values, text: str, pos: int) -> None:
    if any(c < 1 for c in values):
        raise ParseError("coefficients must be positive", text, pos)


def parse_sequence(text: str) -> CFSequence:
    stripped = text.strip()
    if not stripped:
        raise ParseError("empty sequence", text, 0)
    if stripped.startswith("["):
        return _parse_one_sided(text)
    if "|" not in stripped:
        if stripped.startswith("(") and stripped.endswith(")"):
            _, period = _split_side(stripped, text, 0, group_last=True)
            _check_positive(period, text, 0)
            return CFSequence.periodic(period)
        raise ParseError("expected '[...]' or 'LEFT|RIGHT'", text, 0)
    if stripped.count("|") != 1:
        raise ParseError("more than one '|'", text, stripped.index("|", stripped.index("|") + 1))
    bar = stripped.index("|")
    left_text, right_text = stripped[:bar], stripped[bar + 1:]
    if not left_text.strip() or not right_text.strip():
        raise ParseError("both sides of '|' need coefficients", text, bar)
    left, left_period = _split_side(left_text, text, 0, group_last=False)
    right, right_period = _split_side(right_text, text, bar + 1, group_last=True)
    _check_positive(left + left_period, text, 0)
    _check_positive(right + right_period, text, bar + 1)
    try:
        return CFSequence.two_sided_from(left=left[::-1], right=right, left_period=left_period[::-1],
                                         right_period=right_period)
    except InvalidArgument as exc:
        raise ParseError(str(exc), text, 0) from exc


def _parse_one_sided(text: str) -> CFSequence:
    stripped = text.strip()
    if not stripped.endswith("]"):
        raise ParseError("missing ']'", text, len(text))
    body = stripped[1:-1]
    if ";" in body:
        head, rest = body.split(";", 1)
        a0 = _int(head, text, 1, allow_sign=True)
        coeffs, period = _split_side(rest, text, len(head) + 2, group_last=True) if rest.strip() else ([], [])
        _check_positive(coeffs + period, text, len(head) + 2)
        return CFSequence(right_preperiod=(a0, *coeffs), right_period=tuple(period))
    coeffs, period = _split_side(body, text, 1, group_last=True)
    if coeffs:
        _check_positive(coeffs[1:] + period, text, 1)
    else:
        _check_positive(period, text, 1)
    return CFSequence(right_preperiod=tuple(coeffs), right_period=tuple(period))


_RANK_ONE = re.compile(r"\s*rank1\s*\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*")


def parse_rank_one(text: str) -> tuple[int, int]:
    m = _RANK_ONE.fullmatch(text)
    if not m:
        raise ParseError("expected rank1(p, n)", text, 0)
    p, n = int(m.group(1)), int(m.group(2))
    if n < 2 or not 1 <= p < n:
        raise ParseError(f"rank1 needs 1 <= p < n and n >= 2, got ({p}, {n})", text, m.start(1))
    return p, n


@dataclass(frozen=True)
class ParsedInput:
    kind: str
    value: Union[QuadraticNumber, CFSequence, tuple[int, int]]


def parse_number(text: str) -> ParsedInput:
    """Dispatch on the shape of the text: rank-1 lattice, coefficient sequence or number."""
    stripped = text.strip()
    if stripped.startswith("rank1"):
        return ParsedInput("rank1", parse_rank_one(text))
    if stripped.startswith("[") or "|" in stripped:
        return ParsedInput("sequence", parse_sequence(text))
    return ParsedInput("number", parse_quadratic(text))
