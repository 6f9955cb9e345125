"""
Exact arithmetic in Q and in real quadratic fields Q(sqrt(d)).

A QuadraticNumber is a + b*sqrt(d) with rational a, b and squarefree d >= 2;
rationals are stored with b = 0 and d = 1. Values are immutable and always
canonical, so structural equality is numeric equality.

Comparisons between two different quadratic fields go through ci_compare,
which decides them exactly in the compositum Q(sqrt(p), sqrt(q)). Expressions
over three or more fields are separated on nested rational intervals.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Optional, Union

from sympy import factorint

from .. import config
from ..utils.errors import DivisionByZero, InternalFault, InvalidArgument, MixedRadicand

logger = logging.getLogger(__name__)

RationalLike = Union[int, Fraction]


class Sign(IntEnum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1


class Ordering(IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


@lru_cache(maxsize=4096)
def square_split(d: int) -> tuple[int, int]:
    """Write d = k**2 * core with core squarefree; returns (k, core)."""
    if d <= 0:
        raise InvalidArgument(f"radicand must be positive, got {d}")
    k, core = 1, 1
    for prime, exp in factorint(d).items():
        k *= prime ** (exp // 2)
        if exp % 2:
            core *= prime
    return k, core


def is_squarefree(d: int) -> bool:
    return d >= 1 and square_split(d)[0] == 1


def _frac(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"expected a rational, got {type(x).__name__}")


@dataclass(frozen=True, eq=False)
class QuadraticNumber:
    """Exact element a + b*sqrt(d) of Q(sqrt(d)); b == 0 means a rational with d == 1."""

    a: Fraction
    b: Fraction = Fraction(0)
    d: int = 1

    def __post_init__(self):
        a, b, d = _frac(self.a), _frac(self.b), int(self.d)
        if d <= 0:
            raise InvalidArgument(f"radicand must be positive, got {d}")
        k, core = square_split(d)
        b *= k
        if b == 0 or core == 1:
            a, b, core = a + b, Fraction(0), 1
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", core)

    @classmethod
    def _raw(cls, a: Fraction, b: Fraction, d: int) -> "QuadraticNumber":
        # caller guarantees d squarefree; only the b == 0 normalization is applied
        obj = object.__new__(cls)
        if b == 0:
            b, d = Fraction(0), 1
        object.__setattr__(obj, "a", a)
        object.__setattr__(obj, "b", b)
        object.__setattr__(obj, "d", d)
        return obj

    @classmethod
    def rational(cls, x: RationalLike) -> "QuadraticNumber":
        return cls._raw(_frac(x), Fraction(0), 1)

    @classmethod
    def sqrt(cls, x: RationalLike) -> "QuadraticNumber":
        """Exact square root of a nonnegative rational."""
        x = _frac(x)
        if x < 0:
            raise InvalidArgument(f"square root of negative rational {x}")
        if x == 0:
            return cls.rational(0)
        return cls(0, Fraction(1, x.denominator), x.numerator * x.denominator)

    @classmethod
    def parse(cls, text: str) -> "QuadraticNumber":
        from ..utils.parsing import parse_quadratic

        return parse_quadratic(text)

    # -- predicates -------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    @property
    def is_integer(self) -> bool:
        """True for elements of the ring of integers (integral norm and trace)."""
        n, t = self.norm(), self.trace()
        return n.denominator == 1 and t.denominator == 1

    def field_with(self, other: "QuadraticNumber") -> int:
        """Common radicand of self and other, or MixedRadicand."""
        if self.d == other.d or other.d == 1:
            return self.d
        if self.d == 1:
            return other.d
        raise MixedRadicand(self.d, other.d)

    # -- field structure ----------------------------------------------------

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber._raw(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    def trace(self) -> Fraction:
        return 2 * self.a

    def sign(self) -> Sign:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return Sign(sa)
        if sa == 0 or sa == sb:
            return Sign(sb)
        # opposite signs; d is not a square so the norm cannot vanish
        return Sign(sa if self.norm() > 0 else sb)

    def floor(self) -> int:
        if self.b == 0:
            return math.floor(self.a)
        q = self.a.denominator * self.b.denominator // math.gcd(self.a.denominator, self.b.denominator)
        p = int(self.a * q)
        r = int(self.b * q)
        s = math.isqrt(r * r * self.d)
        if r > 0:
            return (p + s) // q
        return (p - s - 1) // q

    def ceil(self) -> int:
        return -((-self).floor())

    # -- arithmetic -----------------------------------------------------------

    @staticmethod
    def _coerce(other) -> Optional["QuadraticNumber"]:
        if isinstance(other, QuadraticNumber):
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticNumber.rational(other)
        return None

    def __add__(self, other):
        y = self._coerce(other)
        if y is None:
            return NotImplemented
        d = self.field_with(y)
        return QuadraticNumber._raw(self.a + y.a, self.b + y.b, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber._raw(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        y = self._coerce(other)
        if y is None:
            return NotImplemented
        d = self.field_with(y)
        return QuadraticNumber._raw(self.a - y.a, self.b - y.b, d)

    def __rsub__(self, other):
        y = self._coerce(other)
        if y is None:
            return NotImplemented
        return y - self

    def __mul__(self, other):
        y = self._coerce(other)
        if y is None:
            return NotImplemented
        d = self.field_with(y)
        a = self.a * y.a + self.b * y.b * d
        b = self.a * y.b + self.b * y.a
        return QuadraticNumber._raw(a, b, d)

    __rmul__ = __mul__

    def inverse(self) -> "QuadraticNumber":
        n = self.norm()
        if n == 0:
            raise DivisionByZero("division by zero in a quadratic field")
        return QuadraticNumber._raw(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        y = self._coerce(other)
        if y is None:
            return NotImplemented
        self.field_with(y)
        return self * y.inverse()

    def __rtruediv__(self, other):
        y = self._coerce(other)
        if y is None:
            return NotImplemented
        return y * self.inverse()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = QuadraticNumber.rational(1), self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- comparison -----------------------------------------------------------

    def _cmp(self, other) -> Optional[int]:
        y = self._coerce(other)
        if y is None:
            if isinstance(other, (Expr, CertifiedInterval)):
                return int(ci_compare(self, other))
            return None
        if self.d != y.d and self.d != 1 and y.d != 1:
            return int(ci_compare(self, y))
        return int((self - y).sign())

    def __eq__(self, other):
        y = self._coerce(other)
        if y is None:
            return NotImplemented
        return self.a == y.a and self.b == y.b and self.d == y.d

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    def __bool__(self):
        return self.a != 0 or self.b != 0

    # -- rendering ------------------------------------------------------------

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        den = self.a.denominator * self.b.denominator // math.gcd(self.a.denominator, self.b.denominator)
        p, q = int(self.a * den), int(self.b * den)
        root = f"sqrt({self.d})"
        if q == 1:
            surd = root
        elif q == -1:
            surd = "-" + root
        else:
            surd = f"{q}*{root}"
        if p == 0:
            body = surd
        elif q < 0:
            body = f"{p} - {surd[1:]}"
        else:
            body = f"{p} + {surd}"
        if den == 1:
            return body
        return f"({body})/{den}"

    def __repr__(self):
        return f"QuadraticNumber({self})"


def delta(d: int) -> QuadraticNumber:
    """Generator of the ring of integers: sqrt(d), or (1 + sqrt(d))/2 when d = 1 mod 4."""
    if not is_squarefree(d) or d < 2:
        raise InvalidArgument(f"delta_d needs a squarefree d >= 2, got {d}")
    if d % 4 == 1:
        return QuadraticNumber(Fraction(1, 2), Fraction(1, 2), d)
    return QuadraticNumber(0, 1, d)


def qn_canonicalize(a: RationalLike, b: RationalLike, d: int) -> QuadraticNumber:
    if d <= 0:
        raise InvalidArgument(f"radicand must be positive, got {d}")
    return QuadraticNumber(a, b, d)


_OPS = {
    "add": lambda x, y: x + y,
    "sub": lambda x, y: x - y,
    "mul": lambda x, y: x * y,
    "div": lambda x, y: x / y,
}


def qn_arith(x: QuadraticNumber, y: QuadraticNumber, op: str) -> QuadraticNumber:
    try:
        fn = _OPS[op]
    except KeyError:
        raise InvalidArgument(f"unknown operation {op!r}") from None
    return fn(x, y)


def qn_conj_norm_trace(x: QuadraticNumber) -> tuple[QuadraticNumber, Fraction, Fraction]:
    return x.conjugate(), x.norm(), x.trace()


def qn_sign(x: QuadraticNumber) -> Sign:
    return x.sign()


def qn_floor(x: QuadraticNumber) -> int:
    return x.floor()


# ---------------------------------------------------------------------------
# Expressions over up to two fields and certified comparison
# ---------------------------------------------------------------------------


def _sqrt_bounds(d: int, bits: int) -> tuple[Fraction, Fraction]:
    s = math.isqrt(d << (2 * bits))
    scale = 1 << bits
    if s * s == d << (2 * bits):
        return Fraction(s, scale), Fraction(s, scale)
    return Fraction(s, scale), Fraction(s + 1, scale)


def _leaf_interval(x: QuadraticNumber, bits: int) -> tuple[Fraction, Fraction]:
    if x.b == 0:
        return x.a, x.a
    lo, hi = _sqrt_bounds(x.d, bits)
    if x.b > 0:
        return x.a + x.b * lo, x.a + x.b * hi
    return x.a + x.b * hi, x.a + x.b * lo


@dataclass(frozen=True)
class BiquadraticNumber:
    """u + v*sqrt(q) with u, v in Q(sqrt(p)): exact arithmetic in Q(sqrt(p), sqrt(q)) for p != q."""

    u: QuadraticNumber
    v: QuadraticNumber
    q: int

    @classmethod
    def embed(cls, x: QuadraticNumber, p: int, q: int) -> Optional["BiquadraticNumber"]:
        r = square_split(p * q)[1]
        if x.d == r:
            # sqrt(r) = sqrt(p) * sqrt(q) / g
            g = math.isqrt(p * q // r)
            return cls(QuadraticNumber.rational(x.a), QuadraticNumber(0, x.b / g, p), q)
        if x.d == q:
            return cls(QuadraticNumber.rational(x.a), QuadraticNumber.rational(x.b), q)
        if x.d in (1, p):
            return cls(x, QuadraticNumber.rational(0), q)
        return None

    def __add__(self, other: "BiquadraticNumber") -> "BiquadraticNumber":
        return BiquadraticNumber(self.u + other.u, self.v + other.v, self.q)

    def __sub__(self, other: "BiquadraticNumber") -> "BiquadraticNumber":
        return BiquadraticNumber(self.u - other.u, self.v - other.v, self.q)

    def __mul__(self, other: "BiquadraticNumber") -> "BiquadraticNumber":
        return BiquadraticNumber(
            self.u * other.u + self.v * other.v * self.q,
            self.u * other.v + self.v * other.u,
            self.q,
        )

    def relative_norm(self) -> QuadraticNumber:
        """u**2 - q*v**2, zero only for the zero element."""
        return self.u * self.u - self.v * self.v * self.q

    def inverse(self) -> "BiquadraticNumber":
        n = self.relative_norm()
        if not n:
            raise DivisionByZero("division by zero in a biquadratic field")
        n_inv = n.inverse()
        return BiquadraticNumber(self.u * n_inv, -self.v * n_inv, self.q)

    def __truediv__(self, other: "BiquadraticNumber") -> "BiquadraticNumber":
        return self * other.inverse()

    def sign(self) -> Sign:
        su, sv = self.u.sign(), self.v.sign()
        if sv == 0:
            return su
        if su == 0 or su == sv:
            return sv
        return su if self.relative_norm().sign() > 0 else sv

    def collapse(self) -> Optional[QuadraticNumber]:
        """The value as a QuadraticNumber when it lies in one of the three quadratic subfields, else None."""
        if not self.v:
            return self.u
        if not self.u.is_rational:
            return None
        if self.v.is_rational:
            return qn_canonicalize(self.u.a, self.v.a, self.q)
        if self.v.a == 0:
            # c*sqrt(p)*sqrt(q) = c*g*sqrt(r)
            p = self.v.d
            r = square_split(p * self.q)[1]
            return qn_canonicalize(self.u.a, self.v.b * math.isqrt(p * self.q // r), r)
        return None


class Expr:
    """Arithmetic expression tree whose leaves are QuadraticNumbers."""

    __slots__ = ("op", "args")

    def __init__(self, op: str, *args):
        self.op = op
        self.args = args

    @staticmethod
    def lift(x) -> "Expr":
        if isinstance(x, Expr):
            return x
        if isinstance(x, CertifiedInterval):
            if x.source is None:
                raise InvalidArgument("interval without a source expression cannot be refined")
            return x.source
        if isinstance(x, (int, Fraction)):
            x = QuadraticNumber.rational(x)
        if isinstance(x, QuadraticNumber):
            return Expr("leaf", x)
        raise TypeError(f"cannot build an expression from {type(x).__name__}")

    def _bin(self, op, other, swap=False):
        try:
            other = Expr.lift(other)
        except TypeError:
            return NotImplemented
        return Expr(op, other, self) if swap else Expr(op, self, other)

    def __add__(self, o):
        return self._bin("add", o)

    def __radd__(self, o):
        return self._bin("add", o, swap=True)

    def __sub__(self, o):
        return self._bin("sub", o)

    def __rsub__(self, o):
        return self._bin("sub", o, swap=True)

    def __mul__(self, o):
        return self._bin("mul", o)

    def __rmul__(self, o):
        return self._bin("mul", o, swap=True)

    def __truediv__(self, o):
        return self._bin("div", o)

    def __rtruediv__(self, o):
        return self._bin("div", o, swap=True)

    def __neg__(self):
        return Expr("sub", Expr.lift(0), self)

    def exact(self) -> Optional[QuadraticNumber]:
        """The value as a single QuadraticNumber, or None if it spans two fields."""
        if self.op == "leaf":
            return self.args[0]
        left, right = (arg.exact() for arg in self.args)
        if left is None or right is None:
            return None
        try:
            return qn_arith(left, right, self.op)
        except MixedRadicand:
            return None

    def radicands(self) -> frozenset[int]:
        if self.op == "leaf":
            d = self.args[0].d
            return frozenset() if d == 1 else frozenset((d,))
        return self.args[0].radicands() | self.args[1].radicands()

    def _in_compositum(self, p: int, q: int) -> BiquadraticNumber:
        if self.op == "leaf":
            return BiquadraticNumber.embed(self.args[0], p, q)
        left = self.args[0]._in_compositum(p, q)
        right = self.args[1]._in_compositum(p, q)
        if self.op == "add":
            return left + right
        if self.op == "sub":
            return left - right
        if self.op == "mul":
            return left * right
        return left / right

    def compositum(self) -> Optional[BiquadraticNumber]:
        """The exact value in Q(sqrt(p), sqrt(q)) when every leaf lies in that field, else None."""
        fields = sorted(self.radicands())
        if len(fields) == 2:
            return self._in_compositum(*fields)
        if len(fields) == 3:
            for k, r in enumerate(fields):
                p, q = (f for i, f in enumerate(fields) if i != k)
                if square_split(p * q)[1] == r:
                    return self._in_compositum(p, q)
        return None

    def same_tree(self, other: "Expr") -> bool:
        if self is other:
            return True
        if self.op != other.op or len(self.args) != len(other.args):
            return False
        if self.op == "leaf":
            return self.args[0] == other.args[0]
        return all(a.same_tree(b) for a, b in zip(self.args, other.args))

    def enclose(self, bits: int) -> Optional[tuple[Fraction, Fraction]]:
        """Rational enclosure at the given precision; None if a divisor straddles zero."""
        if self.op == "leaf":
            return _leaf_interval(self.args[0], bits)
        left = self.args[0].enclose(bits)
        right = self.args[1].enclose(bits)
        if left is None or right is None:
            return None
        (a, b), (c, e) = left, right
        if self.op == "add":
            return a + c, b + e
        if self.op == "sub":
            return a - e, b - c
        if self.op == "mul":
            products = (a * c, a * e, b * c, b * e)
            return min(products), max(products)
        if c <= 0 <= e:
            return None
        quotients = (a / c, a / e, b / c, b / e)
        return min(quotients), max(quotients)

    def __repr__(self):
        if self.op == "leaf":
            return str(self.args[0])
        sym = {"add": "+", "sub": "-", "mul": "*", "div": "/"}[self.op]
        return f"({self.args[0]!r} {sym} {self.args[1]!r})"


@dataclass(frozen=True)
class CertifiedInterval:
    """Closed rational interval [lo, hi] known to contain a real value."""

    lo: Fraction
    hi: Fraction
    precision_bits: int
    source: Optional[Expr] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.lo > self.hi:
            raise InvalidArgument(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def of(cls, expr, bits: int = config.INTERVAL_START_BITS) -> "CertifiedInterval":
        expr = Expr.lift(expr)
        while bits <= config.INTERVAL_MAX_BITS:
            box = expr.enclose(bits)
            if box is not None:
                return cls(box[0], box[1], bits, expr)
            bits *= 2
        raise InternalFault(f"no finite enclosure of {expr!r} within {config.INTERVAL_MAX_BITS} bits")

    def refine(self) -> "CertifiedInterval":
        if self.source is None:
            return self
        box = self.source.enclose(self.precision_bits * 2)
        if box is None:
            return CertifiedInterval(self.lo, self.hi, self.precision_bits * 2, self.source)
        return CertifiedInterval(max(self.lo, box[0]), min(self.hi, box[1]), self.precision_bits * 2, self.source)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __float__(self):
        return float(self.midpoint)

    def __str__(self):
        if self.source is not None:
            return repr(self.source)
        return f"[{self.lo}, {self.hi}]"

    def _cmp(self, other) -> int:
        return int(ci_compare(self, other))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0


Real = Union[QuadraticNumber, CertifiedInterval]


def ci_compare(x, y) -> Ordering:
    """Certified ordering of two expressions over rationals and quadratic fields.

    Differences inside one field or inside the compositum of two fields are decided
    exactly; only expressions spanning three or more fields fall back to intervals.
    """
    if isinstance(x, CertifiedInterval) and x.source is None or isinstance(y, CertifiedInterval) and y.source is None:
        return _compare_bare(x, y)
    lx, ly = Expr.lift(x), Expr.lift(y)
    if lx.same_tree(ly):
        return Ordering.EQUAL
    diff = lx - ly
    exact = diff.exact()
    if exact is not None:
        return Ordering(int(exact.sign()))
    joint = diff.compositum()
    if joint is not None:
        return Ordering(int(joint.sign()))
    # three or more fields: separate on intervals
    bits = config.INTERVAL_START_BITS
    while bits <= config.INTERVAL_MAX_BITS:
        box = diff.enclose(bits)
        if box is not None:
            if box[0] > 0:
                return Ordering.GREATER
            if box[1] < 0:
                return Ordering.LESS
        logger.debug("interval comparison undecided at %d bits", bits)
        bits *= 2
    raise InternalFault(f"could not separate {x!r} and {y!r} within {config.INTERVAL_MAX_BITS} bits")


def _compare_bare(x, y) -> Ordering:
    def bounds(v):
        if isinstance(v, CertifiedInterval):
            return v.lo, v.hi
        return Expr.lift(v).enclose(config.INTERVAL_MAX_BITS)

    (a, b), (c, e) = bounds(x), bounds(y)
    if b < c:
        return Ordering.LESS
    if a > e:
        return Ordering.GREATER
    raise InternalFault("overlapping intervals without source expressions")


def enclose(value: Real, bits: int = config.INTERVAL_START_BITS) -> CertifiedInterval:
    if isinstance(value, CertifiedInterval):
        return value
    return CertifiedInterval.of(value, bits)


def realize(value) -> Real:
    """Exact value when the expression stays in one field, otherwise a certified enclosure."""
    if isinstance(value, (QuadraticNumber, CertifiedInterval)):
        return value
    expr = Expr.lift(value)
    exact = expr.exact()
    if exact is not None:
        return exact
    joint = expr.compositum()
    if joint is not None and (single := joint.collapse()) is not None:
        return single
    return CertifiedInterval.of(expr)


def format_decimal(value, digits: int = config.DEFAULT_DIGITS) -> str:
    """Decimal rendering rounded half-up to `digits` places. Never parsed back as data."""
    scale = 10**digits
    if isinstance(value, (int, Fraction)):
        value = QuadraticNumber.rational(value)
    if isinstance(value, QuadraticNumber):
        n = (value * scale + Fraction(1, 2)).floor()
    else:
        iv = enclose(value)
        target = Fraction(1, 100 * scale)
        while iv.width > target and iv.precision_bits < config.INTERVAL_MAX_BITS:
            iv = iv.refine()
        n = math.floor(iv.midpoint * scale + Fraction(1, 2))
    sign = "-" if n < 0 else ""
    n = abs(n)
    if digits == 0:
        return f"{sign}{n}"
    whole, frac = divmod(n, scale)
    return f"{sign}{whole}.{frac:0{digits}d}"
