"""High-precision enclosures of the closed-form concentration bounds.

Every irrational value is returned as an interval, never a bare float: the
boundary cases of the sharp bound are decided by margins of a few 1e-4 and
must not depend on rounding luck.  Expression builders are exposed alongside
the evaluated bounds so callers can feed the same formulas to the certified
comparison engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .certify import PI, Const, Expr, Interval, _round_fraction, evaluate, sqrt_expr
from .errors import ParameterError

__all__ = [
    "BoundKind",
    "BoundValue",
    "main_bound",
    "main_bound_expr",
    "corollary_bound",
    "corollary_bound_expr",
    "wallis_bound",
    "wallis_bound_expr",
    "d_sequence",
    "d_sequence_expr",
    "bessel_G",
    "bessel_chain_bound",
    "bessel_chain_expr",
]


class BoundKind(Enum):
    MAIN_BOUND = "MainBound"
    COROLLARY_BOUND = "CorollaryBound"
    WALLIS_BOUND = "WallisBound"
    BESSEL_G = "BesselG"
    BESSEL_CHAIN = "BesselChain"
    D_SEQUENCE = "DSequence"


@dataclass(frozen=True)
class BoundValue:
    value: Interval
    kind: BoundKind


def _check_ell_n(ell: int, n: int) -> None:
    if ell < 2:
        raise ParameterError(f"ell must be >= 2 for bound formulas, got {ell}")
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")


def main_bound_expr(ell: int, n: int) -> Expr:
    """sqrt(6 / (pi * (ell**2 - 1) * n)), the sharp peak-probability bound."""
    _check_ell_n(ell, n)
    return sqrt_expr(6 / (PI * ((ell * ell - 1) * n)))


def main_bound(ell: int, n: int, precision_bits: int) -> BoundValue:
    return BoundValue(evaluate(main_bound_expr(ell, n), precision_bits), BoundKind.MAIN_BOUND)


def corollary_bound_expr(ell: int, n: int) -> Expr:
    """2*sqrt(2/pi) / (ell*sqrt(n)), written as a single square root."""
    _check_ell_n(ell, n)
    return sqrt_expr(8 / (PI * (ell * ell * n)))


def corollary_bound(ell: int, n: int, precision_bits: int) -> BoundValue:
    return BoundValue(
        evaluate(corollary_bound_expr(ell, n), precision_bits), BoundKind.COROLLARY_BOUND
    )


def wallis_bound_expr(k: int) -> Expr:
    """1/sqrt(pi*k), the bound on the central binomial probability."""
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    return sqrt_expr(1 / (PI * k))


def wallis_bound(k: int, precision_bits: int) -> BoundValue:
    return BoundValue(evaluate(wallis_bound_expr(k), precision_bits), BoundKind.WALLIS_BOUND)


def d_sequence_expr(n: int) -> Expr:
    """The majorant 1 - 3/(20n) + 21/(160n**2), plus 1/(sqrt(3)*(n-1)*2**(n-1))
    when n is even.

    The even-n indicator is exact integer parity.  d_1 = 157/160 and the
    sequence stays below one except at n = 2.
    """
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    rational = 1 - Fraction(3, 20 * n) + Fraction(21, 160 * n * n)
    expr: Expr = Const(rational)
    if n % 2 == 0:
        expr = expr + Const(Fraction(1, (n - 1) * 2 ** (n - 1))) / sqrt_expr(3)
    return expr


def d_sequence(n: int, precision_bits: int) -> BoundValue:
    return BoundValue(evaluate(d_sequence_expr(n), precision_bits), BoundKind.D_SEQUENCE)


def bessel_chain_expr(n: int) -> Expr:
    """sqrt(3/(pi*n)), the outer member of the adjacent-pair bound chain."""
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    return sqrt_expr(3 / (PI * n))


def bessel_chain_bound(n: int, precision_bits: int) -> BoundValue:
    return BoundValue(evaluate(bessel_chain_expr(n), precision_bits), BoundKind.BESSEL_CHAIN)


# ---------------------------------------------------------------------------
# G(lambda) = exp(-lambda) * (I0(lambda) + I1(lambda))
# ---------------------------------------------------------------------------

def _series_bounds(x: Fraction, tol: Fraction, step_den) -> tuple[Fraction, Fraction]:
    """Partial sum and a rigorous tail bound for sum_m term_m with
    term_{m+1} = term_m * x / step_den(m+1), term_0 = 1, x >= 0.

    Stops once the upcoming term ratio is below 1/2 and the latest term is
    below tol/8 of the running sum; the remaining tail is then geometric and
    bounded by twice the latest term.
    """
    total = Fraction(1)
    term = Fraction(1)
    m = 0
    while True:
        m += 1
        term = term * x / step_den(m)
        total += term
        if x < Fraction(step_den(m + 1), 2) and term * 8 < tol * total:
            return total, 2 * term


def _exp_bounds(lam: Fraction, tol: Fraction) -> tuple[Fraction, Fraction]:
    """Lower partial sum and upper bound for exp(lam), lam >= 0."""
    total = Fraction(1)
    term = Fraction(1)
    k = 0
    while True:
        k += 1
        term = term * lam / k
        total += term
        if 2 * lam < k + 1 and term * 8 < tol * total:
            return total, total + 2 * term


def bessel_G(lam, tolerance=Fraction(1, 10**12)) -> BoundValue:
    """Enclosure of exp(-lam) * (I0(lam) + I1(lam)) with rigorous tails.

    I0 and I1 are evaluated by their ascending power series in exact rational
    arithmetic; the truncation tails and the exp tail are bounded by
    geometric series, so the returned interval is a true enclosure with
    relative width at most about ``tolerance``.
    """
    lam = Fraction(lam)
    tol = Fraction(tolerance)
    if lam < 0:
        raise ParameterError(f"lambda must be >= 0, got {lam}")
    if tol <= 0:
        raise ParameterError("tolerance must be positive")
    if lam == 0:
        return BoundValue(Interval.point(1), BoundKind.BESSEL_G)
    x = lam * lam / 4
    s0, tail0 = _series_bounds(x, tol, lambda m: m * m)
    s1, tail1 = _series_bounds(x, tol, lambda m: m * (m + 1))
    s1, tail1 = lam / 2 * s1, lam / 2 * tail1
    e_lo, e_hi = _exp_bounds(lam, tol)
    g_lo = (s0 + s1) / e_hi
    g_hi = (s0 + s1 + tail0 + tail1) / e_lo
    bits = max(64, _tol_bits(tol) + 16)
    return BoundValue(
        Interval(_round_fraction(g_lo, bits, False), _round_fraction(g_hi, bits, True)),
        BoundKind.BESSEL_G,
    )


def _tol_bits(tol: Fraction) -> int:
    bits = 0
    v = Fraction(1)
    while v > tol:
        v /= 2
        bits += 1
    return bits
