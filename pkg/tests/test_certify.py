"""Interval endpoints, enclosure soundness, and verdict semantics."""

import random
from fractions import Fraction

import mpmath
import pytest

from uniconc.certify import (
    PI,
    Const,
    Dyadic,
    Interval,
    Outcome,
    certify_less,
    evaluate,
    pi_enclosure,
    sqrt_enclosure,
    sqrt_expr,
    verdict_between,
    _round_ratio,
)
from uniconc.errors import DomainError, ExpressionError, ParameterError


def frac_of_mpf(x) -> Fraction:
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    value = Fraction(man, 1) * Fraction(2) ** exp
    return -value if sign else value


PI_REF = None


def setup_module():
    global PI_REF
    # reference must beat the tightest enclosure under test (1024 bits)
    with mpmath.workprec(1400):
        PI_REF = frac_of_mpf(+mpmath.pi)


class TestRounding:
    def test_directions(self):
        down = _round_ratio(1, 3, 16, up=False)
        up = _round_ratio(1, 3, 16, up=True)
        third = Fraction(1, 3)
        assert down.as_fraction() < third < up.as_fraction()
        assert up.as_fraction() - down.as_fraction() <= Fraction(1, 2**14)

    def test_negative_mirrored(self):
        down = _round_ratio(-1, 3, 16, up=False)
        up = _round_ratio(-1, 3, 16, up=True)
        assert down.as_fraction() < Fraction(-1, 3) < up.as_fraction()

    def test_exact_dyadic_unchanged(self):
        for up in (False, True):
            d = _round_ratio(5, 8, 30, up)
            assert d.as_fraction() == Fraction(5, 8)

    def test_never_rounds_to_zero(self):
        tiny = _round_ratio(1, 10**50, 8, up=False)
        assert tiny.man > 0

    def test_normalization(self):
        d = Dyadic.normalized(8, 0)
        assert (d.man, d.exp) == (1, 3)


class TestIntervalOps:
    def test_add_encloses(self):
        a = Interval.from_fraction(Fraction(1, 3), 24)
        b = Interval.from_fraction(Fraction(1, 7), 24)
        s = a.add(b, 24)
        assert s.contains(Fraction(1, 3) + Fraction(1, 7))

    def test_mul_signs(self):
        a = Interval.from_fraction(Fraction(-2, 3), 40)
        b = Interval.from_fraction(Fraction(5, 7), 40)
        p = a.mul(b, 40)
        assert p.contains(Fraction(-10, 21))
        assert p.lo.sign < 0

    def test_div_encloses(self):
        a = Interval.from_fraction(Fraction(22, 7), 40)
        b = Interval.from_fraction(Fraction(1, 3), 40)
        q = a.div(b, 40)
        assert q.contains(Fraction(66, 7))

    def test_div_by_zero_interval(self):
        a = Interval.point(1)
        b = Interval(Dyadic(-1, -10), Dyadic(1, -10))
        with pytest.raises(ExpressionError):
            a.div(b, 40)

    def test_endpoint_order_enforced(self):
        with pytest.raises(ValueError):
            Interval(Dyadic(1, 0), Dyadic(-1, 0))

    def test_soundness_randomized(self):
        # exact rational evaluation must always land inside the enclosure
        rng = random.Random(20240817)
        for _ in range(1000):
            exact = Fraction(rng.randint(-999, 999), rng.randint(1, 999))
            iv = Interval.from_fraction(exact, 48)
            expr_exact = exact
            for _ in range(rng.randint(1, 6)):
                other = Fraction(rng.randint(-99, 99), rng.randint(1, 99))
                op = rng.choice("+-*/")
                jv = Interval.from_fraction(other, 48)
                if op == "+":
                    expr_exact, iv = expr_exact + other, iv.add(jv, 48)
                elif op == "-":
                    expr_exact, iv = expr_exact - other, iv.sub(jv, 48)
                elif op == "*":
                    expr_exact, iv = expr_exact * other, iv.mul(jv, 48)
                elif other != 0 and not jv.contains_zero():
                    expr_exact, iv = expr_exact / other, iv.div(jv, 48)
            assert iv.contains(expr_exact)


class TestPi:
    def test_contains_reference(self):
        for bits in (16, 53, 256, 1024):
            iv = pi_enclosure(bits)
            assert iv.contains(PI_REF)
            assert iv.width() <= Fraction(1, 2**bits)

    def test_example_windows(self):
        iv = pi_enclosure(53)
        assert Fraction("3.14159265358979") <= iv.lo.as_fraction()
        assert iv.hi.as_fraction() <= Fraction("3.14159265358980")
        iv16 = pi_enclosure(16)
        assert Fraction("3.1415") <= iv16.lo.as_fraction()
        assert iv16.hi.as_fraction() <= Fraction("3.1416")

    def test_monotone_refinement(self):
        assert pi_enclosure(128).width() < pi_enclosure(64).width()

    def test_minimum_precision(self):
        with pytest.raises(ParameterError):
            pi_enclosure(4)


class TestSqrt:
    def test_perfect_square(self):
        iv = sqrt_enclosure(Interval.point(4), 53)
        assert iv.lo == iv.hi == Dyadic(1, 1)

    def test_sqrt_two(self):
        iv = sqrt_enclosure(Interval.point(2), 53)
        with mpmath.workprec(200):
            ref = frac_of_mpf(mpmath.sqrt(2))
        assert iv.contains(ref)
        assert iv.width() <= Fraction(1, 2**50)

    def test_zero(self):
        iv = sqrt_enclosure(Interval.point(0), 53)
        assert iv.lo.man == iv.hi.man == 0

    def test_negative_rejected(self):
        with pytest.raises(DomainError):
            sqrt_enclosure(Interval(Dyadic(-1, 0), Dyadic(1, 0)), 53)

    def test_square_contains_input(self):
        iv = sqrt_enclosure(Interval.point(2), 64)
        assert iv.mul(iv, 64).contains(Fraction(2))


class TestCertifyLess:
    def test_reversed_boundary_case(self):
        v = certify_less(Fraction(1, 5), sqrt_expr(6 / (PI * 48)))
        assert v.outcome is Outcome.FAILS
        margin = float(v.margin.lo)
        assert -6e-4 < margin < -5e-4

    def test_holds_case(self):
        v = certify_less(Fraction(3, 8), sqrt_expr(6 / (PI * 12)))
        assert v.outcome is Outcome.HOLDS

    def test_exception_free_cell(self):
        v = certify_less(Fraction(1, 4), sqrt_expr(6 / (PI * 30)))
        assert v.outcome is Outcome.HOLDS

    def test_margin_sign_matches_outcome(self):
        for lhs, expr in [
            (Fraction(1, 5), sqrt_expr(6 / (PI * 48))),
            (Fraction(3, 8), sqrt_expr(6 / (PI * 12))),
        ]:
            v = certify_less(lhs, expr)
            if v.outcome is Outcome.HOLDS:
                assert v.margin.lo.sign > 0
            elif v.outcome is Outcome.FAILS:
                assert v.margin.hi.sign < 0
            else:
                assert v.margin.contains_zero()

    def test_escalation_decides_tiny_margin(self):
        rhs = Const(Fraction(1, 3)) + Const(Fraction(1, 2**100))
        v = certify_less(Fraction(1, 3), rhs)
        assert v.outcome is Outcome.HOLDS
        assert v.precision_bits_used > 64

    def test_equality_is_inconclusive_at_cap(self):
        v = certify_less(Fraction(1, 3), Const(Fraction(1, 3)), max_precision_bits=512)
        assert v.outcome is Outcome.INCONCLUSIVE
        assert v.precision_bits_used == 512

    def test_stability_under_escalation(self):
        # decisions may sharpen but never flip between precisions
        for ell, n in [(2, 1), (5, 2), (3, 7), (9, 2), (4, 50)]:
            expr = sqrt_expr(6 / (PI * ((ell * ell - 1) * n)))
            from uniconc.exactdist import LatticeParams, concentration

            c = concentration(LatticeParams(ell, n))
            low = certify_less(c, expr, max_precision_bits=64)
            high = certify_less(c, expr, max_precision_bits=4096)
            if low.outcome is not Outcome.INCONCLUSIVE:
                assert low.outcome is high.outcome

    def test_rejects_non_expression(self):
        with pytest.raises(ExpressionError):
            certify_less(Fraction(1, 2), 0.75)

    def test_const_rejects_float(self):
        with pytest.raises(ExpressionError):
            Const(0.5)

    def test_zero_divisor_raises_at_cap(self):
        with pytest.raises(ExpressionError):
            certify_less(Fraction(0), Const(Fraction(1)) / (PI - PI), max_precision_bits=256)

    def test_sqrt_of_negative_expression(self):
        with pytest.raises(DomainError):
            evaluate(sqrt_expr(Const(Fraction(-1))), 64)


class TestVerdictBetween:
    def test_fraction_vs_interval(self):
        iv = evaluate(sqrt_expr(2), 128)
        assert verdict_between(Fraction(7, 5), iv, 128).outcome is Outcome.HOLDS
        assert verdict_between(Fraction(3, 2), iv, 128).outcome is Outcome.FAILS

    def test_overlapping_intervals_inconclusive(self):
        iv = evaluate(sqrt_expr(2), 64)
        assert verdict_between(iv, iv, 64).outcome is Outcome.INCONCLUSIVE
