"""Acceptance suite: every release criterion at its stated tolerance.

Each test prints one `[criterion NN] PASS/FAIL` line (run with `pytest -s`
to see them live).  Criterion 9a is expected to fail: the single-point
two-lattice comparison it asserts is false at six small cells, which the
test reports rather than hides; see the repository notes for the analysis.
"""

import math
import time
from fractions import Fraction
from math import comb

import pytest

from uniconc.asymptotics import clt_ratio, local_clt_sup_dev
from uniconc.bounds import (
    bessel_G,
    bessel_chain_expr,
    corollary_bound_expr,
    d_sequence,
    wallis_bound_expr,
)
from uniconc.certify import Outcome, certify_less, evaluate, verdict_between
from uniconc.exactdist import (
    LatticeParams,
    argmax_set,
    concentration,
    de_moivre_pmf,
    moments,
    pair_concentration,
    power,
)
from uniconc.spectral import SplitParams, fourier_pmf, split_integrals
from uniconc.sweep import (
    CHECKS,
    SweepConfig,
    report_to_csv_bytes,
    report_to_json_bytes,
    run_sweep,
)

PRECISION_BITS = 256


def _report(num: str, ok: bool, detail: str) -> None:
    print(f"[criterion {num}] {'PASS' if ok else 'FAIL'} {detail}")


def test_criterion_01_theorem_sweep():
    """Certified sharp-bound verdicts over ell 2..40, n 1..400."""
    t0 = time.perf_counter()
    config = SweepConfig(
        ell_range=(2, 40),
        n_range=(1, 400),
        checks=("main",),
        precision_bits=PRECISION_BITS,
        parallelism=2,
    )
    report = run_sweep(config)
    elapsed = time.perf_counter() - t0
    s = report.summary
    reversed_cells = {(c.ell, c.n) for c in report.cells if c.expected == "reversed"}
    expected_reversed = {(ell, 2) for ell in range(5, 41)}
    ok = (
        s.cells == 39 * 400
        and s.inconclusive == 0
        and s.mismatches == 0
        and reversed_cells == expected_reversed
        and all(c.verdict in ("Holds", "Fails") for c in report.cells)
        and elapsed < 300.0
    )
    _report(
        "01",
        ok,
        f"theorem sweep: {s.cells} cells, {s.holds} hold, {s.fails} reversed-fail, "
        f"{s.inconclusive} inconclusive, {s.mismatches} mismatches, {elapsed:.1f}s",
    )
    assert ok


def test_criterion_02_oracle_equivalence():
    """Alternating-sum pmf identical to the convolution pmf, every point."""
    points = 0
    for ell in range(2, 9):
        for n in range(1, 13):
            params = LatticeParams(ell, n)
            d = power(params)
            denom = d.denominator
            for k, num in enumerate(d.numerators):
                assert de_moivre_pmf(params, k) == Fraction(num, denom)
                points += 1
    _report("02", True, f"de Moivre vs convolution: {points} point checks, all equal")


def test_criterion_03_first_two_powers():
    """c(ell,1) = c(ell,2) = 1/ell exactly for ell 2..100."""
    for ell in range(2, 101):
        assert concentration(LatticeParams(ell, 1)) == Fraction(1, ell)
        assert concentration(LatticeParams(ell, 2)) == Fraction(1, ell)
    _report("03", True, "c(ell,1) = c(ell,2) = 1/ell for ell 2..100")


def test_criterion_04_central_argmax():
    """The pmf peaks exactly at the one or two central points."""
    for ell in range(2, 9):
        for n in range(1, 13):
            params = LatticeParams(ell, n)
            peak = argmax_set(power(params))
            central = {params.top // 2, (params.top + 1) // 2}
            if n == 1:
                assert central <= peak
            else:
                assert peak == central
    _report("04", True, "argmax is the central point set, ell 2..8, n 1..12")


def test_criterion_05_wallis():
    """Central binomial probabilities below 1/sqrt(pi*k), certified, k 1..2000."""
    for k in range(1, 2001):
        central = Fraction(comb(2 * k, k), 4**k)
        verdict = certify_less(central, wallis_bound_expr(k), PRECISION_BITS)
        assert verdict.outcome is Outcome.HOLDS, f"k={k}"
    for k in range(1, 51):
        central = Fraction(comb(2 * k, k), 4**k)
        assert concentration(LatticeParams(2, 2 * k - 1)) == central
        assert concentration(LatticeParams(2, 2 * k)) == central
    _report("05", True, "Wallis bound certified k 1..2000; pairing identity k 1..50")


def test_criterion_06_bessel_chain():
    """pair < G(2n/3) < sqrt(3/(pi*n)) certified for n 1..200."""
    tol = Fraction(1, 10**12)
    for n in range(1, 201):
        pair = pair_concentration(LatticeParams(3, n))
        middle = bessel_G(Fraction(2 * n, 3), tol).value
        assert middle.width() <= tol
        outer = evaluate(bessel_chain_expr(n), PRECISION_BITS)
        assert verdict_between(pair, middle, PRECISION_BITS).outcome is Outcome.HOLDS, n
        assert verdict_between(middle, outer, PRECISION_BITS).outcome is Outcome.HOLDS, n
    spot = bessel_G(Fraction(4, 3), tol).value
    assert spot.contains(Fraction("0.612214668849917637458479695418"))
    assert verdict_between(Fraction(5, 9), spot, 128).outcome is Outcome.HOLDS
    _report("06", True, "adjacent-pair chain certified n 1..200; G(4/3) spot checked")


def test_criterion_07_fourier_oracle():
    """Quadrature pmf within 1e-10 of exact everywhere; split reproduces the peak."""
    worst = 0.0
    for ell in (2, 3, 5, 10):
        for n in range(1, 21):
            params = LatticeParams(ell, n)
            d = power(params)
            for k in range(params.top + 1):
                approx = fourier_pmf(ell, n, k, 1e-11).value
                worst = max(worst, abs(approx - float(d.pmf(k))))
            inner, outer = split_integrals(SplitParams.for_lattice(ell, n), 1e-11)
            exact_c = float(concentration(params))
            worst = max(worst, abs(inner.value + outer.value - exact_c))
            if n % 2 == 1:
                assert outer.value <= 1e-10, (ell, n)
    assert worst <= 1e-10
    _report("07", True, f"Fourier inversion oracle: max |error| = {worst:.2e} <= 1e-10")


def test_criterion_08_majorant_sequence():
    """d_2 > 1 and d_n < 1 certified; the rescaled peak stays below d_n."""
    d2 = d_sequence(2, 64).value
    assert verdict_between(Fraction(1), d2, 64).outcome is Outcome.HOLDS
    for n in [1] + list(range(3, 10001)):
        dn = d_sequence(n, 64).value
        assert verdict_between(dn, Fraction(1), 64).outcome is Outcome.HOLDS, n
    worst_slack = -math.inf
    for ell in range(2, 11):
        for n in range(1, 201):
            ratio = clt_ratio(ell, n)
            upper = float(d_sequence(n, 64).value.hi.as_fraction())
            worst_slack = max(worst_slack, ratio - upper)
            assert ratio <= upper + 1e-9, (ell, n)
    _report(
        "08",
        True,
        f"d_2 > 1, d_n < 1 for n in {{1}}+3..10000; max(ratio - d_n) = {worst_slack:.2e}",
    )


def test_criterion_09a_two_lattice_reduction():
    """Single-point comparison against the two-point lattice, ell 2..12, n 1..60.

    Known to be false: six small cells violate it.  The test asserts the
    stated relation anyway and fails with the exact counterexamples.
    """
    violations = []
    for ell in range(2, 13):
        for n in range(1, 61):
            c = concentration(LatticeParams(ell, n))
            rhs = Fraction(2, ell) * concentration(LatticeParams(2, n))
            if c > rhs:
                violations.append((ell, n, str(c), str(rhs)))
    _report(
        "09a",
        not violations,
        "two-lattice single-point reduction: "
        + (f"{len(violations)} counterexamples {violations}" if violations else "all cells hold"),
    )
    assert not violations, f"relation is false at {violations}"


def test_criterion_09b_corollary_bound():
    """Simplified bound 2*sqrt(2/pi)/(ell*sqrt(n)) certified, ell 2..12, n 1..60."""
    for ell in range(2, 13):
        for n in range(1, 61):
            c = concentration(LatticeParams(ell, n))
            verdict = certify_less(c, corollary_bound_expr(ell, n), PRECISION_BITS)
            assert verdict.outcome is Outcome.HOLDS, (ell, n)
    _report("09b", True, "corollary bound certified on ell 2..12, n 1..60")


def test_criterion_10_local_clt_sharpness():
    """Peak ratio near one at n = 1000; sup deviation shrinking in n."""
    ratios = {}
    for ell in (2, 3, 4, 5):
        r = clt_ratio(ell, 1000)
        ratios[ell] = r
        assert 0.999 < r < 1.0, (ell, r)
    devs = [local_clt_sup_dev(2, n) for n in (25, 100, 400)]
    assert devs[0] > devs[1] > devs[2]
    assert devs[2] < 0.005
    _report(
        "10",
        True,
        f"ratios at n=1000: {ratios}; sup deviations {[f'{d:.2e}' for d in devs]}",
    )


def test_criterion_11_moment_identities():
    """Exact mean n(ell-1)/2 and variance n(ell^2-1)/12, ell 2..10, n 1..20."""
    for ell in range(2, 11):
        for n in range(1, 21):
            mean, var = moments(power(LatticeParams(ell, n)))
            assert mean == Fraction(n * (ell - 1), 2)
            assert var == Fraction(n * (ell * ell - 1), 12)
    _report("11", True, "moment identities exact on ell 2..10, n 1..20")


def test_criterion_12_determinism():
    """Byte-identical reports from worker pools of size 1 and 8."""
    base = dict(
        ell_range=(2, 8),
        n_range=(1, 20),
        checks=CHECKS,
        precision_bits=PRECISION_BITS,
    )
    serial = run_sweep(SweepConfig(**base, parallelism=1))
    pooled = run_sweep(SweepConfig(**base, parallelism=8))
    csv_equal = report_to_csv_bytes(serial) == report_to_csv_bytes(pooled)
    json_equal = report_to_json_bytes(serial) == report_to_json_bytes(pooled)
    ok = csv_equal and json_equal
    _report(
        "12",
        ok,
        f"all-checks sweep, {serial.summary.cells} cells: csv identical={csv_equal}, "
        f"json identical={json_equal}",
    )
    assert ok
