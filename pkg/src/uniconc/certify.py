"""Certified comparison of exact rationals against irrational bound values.

Endpoints are dyadic rationals (integer mantissa times a power of two), so
halving, doubling and comparison are exact and the only rounding ever applied
is an explicit outward rounding to a requested number of significant bits.
Every interval operation returns an enclosure of the exact real result; a
comparison verdict therefore cannot be flipped by rounding error.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import isqrt

from .errors import DomainError, ExpressionError, ParameterError

__all__ = [
    "Dyadic",
    "Interval",
    "Outcome",
    "Verdict",
    "pi_enclosure",
    "sqrt_enclosure",
    "certify_less",
    "verdict_between",
    "Expr",
    "Const",
    "PI",
    "sqrt_expr",
    "evaluate",
]

# Guard bits added on top of the caller-requested precision inside the
# evaluator, so that a chain of rounded operations still meets the target.
_GUARD_BITS = 32


# ---------------------------------------------------------------------------
# dyadic endpoints
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Dyadic:
    """The rational ``man * 2**exp``, normalized so ``man`` is odd or zero."""

    man: int
    exp: int

    @staticmethod
    def normalized(man: int, exp: int) -> "Dyadic":
        if man == 0:
            return Dyadic(0, 0)
        shift = (man & -man).bit_length() - 1
        return Dyadic(man >> shift, exp + shift)

    @staticmethod
    def from_int(v: int) -> "Dyadic":
        return Dyadic.normalized(v, 0)

    def as_fraction(self) -> Fraction:
        if self.exp >= 0:
            return Fraction(self.man << self.exp, 1)
        return Fraction(self.man, 1 << -self.exp)

    def __float__(self) -> float:
        try:
            return self.man * 2.0**self.exp
        except OverflowError:
            return float(self.as_fraction())

    def _cmp(self, other: "Dyadic") -> int:
        a, b = self.man, other.man
        if self.exp >= other.exp:
            a <<= self.exp - other.exp
        else:
            b <<= other.exp - self.exp
        return (a > b) - (a < b)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    @property
    def sign(self) -> int:
        return (self.man > 0) - (self.man < 0)


def _round_ratio(num: int, den: int, bits: int, up: bool) -> Dyadic:
    """Directed rounding of num/den (den > 0) to about ``bits`` significant bits.

    Rounding toward +inf when ``up`` else toward -inf.  Never rounds a nonzero
    value to zero, since rounding acts on the mantissa only.
    """
    if num == 0:
        return Dyadic(0, 0)
    if den <= 0:
        raise ValueError("denominator must be positive")
    neg = num < 0
    a = -num if neg else num
    # exponent such that the mantissa has roughly `bits` bits
    e = a.bit_length() - den.bit_length() - bits
    if e >= 0:
        q, r = divmod(a, den << e)
    else:
        q, r = divmod(a << -e, den)
    inexact = r != 0
    if neg:
        # value is -(q + r/den'); toward -inf means growing the magnitude
        if inexact and not up:
            q += 1
        return Dyadic.normalized(-q, e)
    if inexact and up:
        q += 1
    return Dyadic.normalized(q, e)


def _round_fraction(fr: Fraction, bits: int, up: bool) -> Dyadic:
    return _round_ratio(fr.numerator, fr.denominator, bits, up)


def _sqrt_dyadic(x: Dyadic, bits: int, up: bool) -> Dyadic:
    """Directed rounding of sqrt(x) for x >= 0 via integer square root."""
    if x.man < 0:
        raise DomainError("square root of a negative endpoint")
    if x.man == 0:
        return Dyadic(0, 0)
    m, e = x.man, x.exp
    # scale so the integer sqrt carries >= bits+2 significant bits and the
    # exponent is even
    shift = max(0, 2 * bits + 2 - m.bit_length())
    if (e - shift) & 1:
        shift += 1
    n = m << shift
    r = isqrt(n)
    exact = r * r == n
    if up and not exact:
        r += 1
    return Dyadic.normalized(r, (e - shift) // 2)


# ---------------------------------------------------------------------------
# intervals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    """Closed enclosure [lo, hi] with dyadic endpoints."""

    lo: Dyadic
    hi: Dyadic

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("interval endpoints out of order")

    @staticmethod
    def point(v: int | Fraction) -> "Interval":
        if isinstance(v, int):
            d = Dyadic.from_int(v)
            return Interval(d, d)
        num, den = v.numerator, v.denominator
        if den & (den - 1) == 0:  # power of two: exactly representable
            d = Dyadic.normalized(num, -(den.bit_length() - 1))
            return Interval(d, d)
        raise ValueError("fraction is not dyadic; use from_fraction with a precision")

    @staticmethod
    def from_fraction(fr: Fraction, bits: int) -> "Interval":
        den = fr.denominator
        if den & (den - 1) == 0:
            d = Dyadic.normalized(fr.numerator, -(den.bit_length() - 1))
            return Interval(d, d)
        return Interval(_round_fraction(fr, bits, False), _round_fraction(fr, bits, True))

    def width(self) -> Fraction:
        return self.hi.as_fraction() - self.lo.as_fraction()

    def contains(self, v: Fraction) -> bool:
        return self.lo.as_fraction() <= v <= self.hi.as_fraction()

    def contains_zero(self) -> bool:
        return self.lo.man <= 0 <= self.hi.man

    def __contains__(self, v) -> bool:
        return self.contains(Fraction(v))

    # All arithmetic takes an explicit precision and rounds outward, so the
    # result is always an enclosure of the exact set image.

    def add(self, other: "Interval", bits: int) -> "Interval":
        lo = self.lo.as_fraction() + other.lo.as_fraction()
        hi = self.hi.as_fraction() + other.hi.as_fraction()
        return Interval(_round_fraction(lo, bits, False), _round_fraction(hi, bits, True))

    def neg(self) -> "Interval":
        return Interval(Dyadic(-self.hi.man, self.hi.exp), Dyadic(-self.lo.man, self.lo.exp))

    def sub(self, other: "Interval", bits: int) -> "Interval":
        return self.add(other.neg(), bits)

    def mul(self, other: "Interval", bits: int) -> "Interval":
        a, b = self.lo.as_fraction(), self.hi.as_fraction()
        c, d = other.lo.as_fraction(), other.hi.as_fraction()
        prods = (a * c, a * d, b * c, b * d)
        return Interval(
            _round_fraction(min(prods), bits, False),
            _round_fraction(max(prods), bits, True),
        )

    def div(self, other: "Interval", bits: int) -> "Interval":
        if other.contains_zero():
            raise ExpressionError("division by an interval containing zero")
        a, b = self.lo.as_fraction(), self.hi.as_fraction()
        c, d = other.lo.as_fraction(), other.hi.as_fraction()
        quots = (a / c, a / d, b / c, b / d)
        return Interval(
            _round_fraction(min(quots), bits, False),
            _round_fraction(max(quots), bits, True),
        )

    def sqrt(self, bits: int) -> "Interval":
        if self.lo.man < 0:
            raise DomainError("square root of an interval with negative lower endpoint")
        return Interval(_sqrt_dyadic(self.lo, bits, False), _sqrt_dyadic(self.hi, bits, True))


def sqrt_enclosure(x: Interval, precision_bits: int = 53) -> Interval:
    """Enclosure of {sqrt(t) : t in x}, endpoints by directed integer sqrt."""
    return x.sqrt(precision_bits)


# ---------------------------------------------------------------------------
# pi
# ---------------------------------------------------------------------------

_pi_cache: dict[int, Interval] = {}
_pi_lock = threading.Lock()


def _arctan_recip_bounds(q: int, bits: int) -> tuple[int, int]:
    """Integer bounds L <= 2**bits * arctan(1/q) <= H.

    Alternating series sum_k (-1)^k / ((2k+1) q**(2k+1)); each term is
    floored, so after K terms the accumulated floor error is below K and the
    truncation error is below the first omitted term.
    """
    scale = 1 << bits
    qq = q * q
    qpow = q
    acc = 0
    k = 0
    while True:
        term = scale // (qpow * (2 * k + 1))
        if term == 0:
            break
        acc = acc - term if (k & 1) else acc + term
        qpow *= qq
        k += 1
    slack = k + 1
    return acc - slack, acc + slack


def pi_enclosure(precision_bits: int) -> Interval:
    """Interval of width at most 2**-precision_bits containing pi.

    Machin's identity pi = 16*arctan(1/5) - 4*arctan(1/239), each arctangent
    bounded by its alternating series.  Results are cached per precision.
    """
    if precision_bits < 8:
        raise ParameterError("precision_bits must be >= 8")
    with _pi_lock:
        cached = _pi_cache.get(precision_bits)
    if cached is not None:
        return cached
    bits = precision_bits + 64
    lo5, hi5 = _arctan_recip_bounds(5, bits)
    lo239, hi239 = _arctan_recip_bounds(239, bits)
    lo = 16 * lo5 - 4 * hi239
    hi = 16 * hi5 - 4 * lo239
    result = Interval(Dyadic.normalized(lo, -bits), Dyadic.normalized(hi, -bits))
    with _pi_lock:
        _pi_cache[precision_bits] = result
    return result


# ---------------------------------------------------------------------------
# bound expressions
# ---------------------------------------------------------------------------

class Expr:
    """A bound expression over rational constants, pi, sqrt and +, -, *, /.

    Expressions are built with ordinary operators; integers and Fractions are
    promoted to constants.  ``evaluate`` turns an expression into an interval
    enclosure at a requested precision.
    """

    def __add__(self, other):
        return _BinOp("+", self, _wrap(other))

    def __radd__(self, other):
        return _BinOp("+", _wrap(other), self)

    def __sub__(self, other):
        return _BinOp("-", self, _wrap(other))

    def __rsub__(self, other):
        return _BinOp("-", _wrap(other), self)

    def __mul__(self, other):
        return _BinOp("*", self, _wrap(other))

    def __rmul__(self, other):
        return _BinOp("*", _wrap(other), self)

    def __truediv__(self, other):
        return _BinOp("/", self, _wrap(other))

    def __rtruediv__(self, other):
        return _BinOp("/", _wrap(other), self)


@dataclass(frozen=True)
class Const(Expr):
    value: Fraction

    def __post_init__(self):
        if not isinstance(self.value, Fraction):
            raise ExpressionError(f"constant must be rational, got {self.value!r}")


@dataclass(frozen=True)
class _Pi(Expr):
    pass


@dataclass(frozen=True)
class _Sqrt(Expr):
    arg: Expr


@dataclass(frozen=True)
class _BinOp(Expr):
    op: str
    left: Expr
    right: Expr


PI = _Pi()


def _wrap(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, int):
        return Const(Fraction(x))
    if isinstance(x, Fraction):
        return Const(x)
    raise ExpressionError(f"cannot use {x!r} in a bound expression")


def sqrt_expr(x) -> Expr:
    return _Sqrt(_wrap(x))


def evaluate(expr: Expr, precision_bits: int) -> Interval:
    """Enclosure of a bound expression at the given target precision."""
    bits = precision_bits + _GUARD_BITS
    return _eval(expr, bits)


def _eval(expr: Expr, bits: int) -> Interval:
    if isinstance(expr, Const):
        return Interval.from_fraction(expr.value, bits)
    if isinstance(expr, _Pi):
        return pi_enclosure(bits)
    if isinstance(expr, _Sqrt):
        return _eval(expr.arg, bits).sqrt(bits)
    if isinstance(expr, _BinOp):
        left = _eval(expr.left, bits)
        right = _eval(expr.right, bits)
        if expr.op == "+":
            return left.add(right, bits)
        if expr.op == "-":
            return left.sub(right, bits)
        if expr.op == "*":
            return left.mul(right, bits)
        if expr.op == "/":
            return left.div(right, bits)
    raise ExpressionError(f"not a bound expression: {expr!r}")


# ---------------------------------------------------------------------------
# verdicts
# ---------------------------------------------------------------------------

class Outcome(Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Verdict:
    """Certified result of a strict comparison lhs < rhs.

    ``margin`` encloses rhs - lhs; the outcome is Holds exactly when the
    whole margin is positive and Fails exactly when it is negative.
    """

    outcome: Outcome
    precision_bits_used: int
    margin: Interval

    @property
    def holds(self) -> bool:
        return self.outcome is Outcome.HOLDS


def _as_interval(v: Fraction | int | Interval, bits: int) -> Interval:
    if isinstance(v, Interval):
        return v
    if isinstance(v, int):
        return Interval.point(v)
    return Interval.from_fraction(v, bits)


def verdict_between(lhs, rhs, precision_bits: int) -> Verdict:
    """Certify lhs < rhs where each side is a Fraction or an Interval."""
    bits = precision_bits + _GUARD_BITS
    margin = _as_interval(rhs, bits).sub(_as_interval(lhs, bits), bits)
    if margin.lo.sign > 0:
        outcome = Outcome.HOLDS
    elif margin.hi.sign < 0:
        outcome = Outcome.FAILS
    else:
        outcome = Outcome.INCONCLUSIVE
    return Verdict(outcome, precision_bits, margin)


def certify_less(
    lhs: Fraction,
    rhs_expr: Expr,
    max_precision_bits: int = 4096,
) -> Verdict:
    """Certified verdict for lhs < rhs_expr, escalating precision as needed.

    Evaluation starts at 64 bits and doubles until the margin excludes zero
    or ``max_precision_bits`` is reached; only then is the comparison
    reported Inconclusive.  Division by an interval still straddling zero at
    low precision triggers escalation rather than failure.
    """
    if not isinstance(rhs_expr, Expr):
        raise ExpressionError(f"rhs must be a bound expression, got {rhs_expr!r}")
    lhs = Fraction(lhs)
    precision = min(64, max_precision_bits)
    last: Verdict | None = None
    while True:
        try:
            enclosure = evaluate(rhs_expr, precision)
        except ExpressionError:
            if precision >= max_precision_bits:
                raise
            enclosure = None
        if enclosure is not None:
            last = verdict_between(lhs, enclosure, precision)
            if last.outcome is not Outcome.INCONCLUSIVE:
                return last
        if precision >= max_precision_bits:
            assert last is not None
            return last
        precision = min(precision * 2, max_precision_bits)
