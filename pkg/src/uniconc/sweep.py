"""Grid sweeps of the certified checks, with deterministic reports.

Cells are independent work items; they may be computed by a worker pool, but
records are always sorted by (check, ell, n) before serialization, so the
report bytes do not depend on the execution order or the level of
parallelism.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction

from . import bounds
from .certify import Interval, Outcome, Verdict, certify_less, evaluate, verdict_between
from .errors import ParameterError
from .exactdist import (
    LatticeParams,
    argmax_set,
    concentration,
    de_moivre_pmf,
    moments,
    pair_concentration,
    power,
)

__all__ = [
    "CHECKS",
    "SweepConfig",
    "SweepCell",
    "SweepSummary",
    "SweepReport",
    "run_sweep",
    "report_to_csv_bytes",
    "report_to_json_bytes",
    "cells_from_csv_bytes",
    "decimal_string",
    "CSV_COLUMNS",
]

CHECKS = (
    "argmax",
    "bessel_chain",
    "bretagnolle",
    "corollary",
    "dsequence",
    "main",
    "moments",
    "oracle_equiv",
    "wallis",
)

CSV_COLUMNS = (
    "ell",
    "n",
    "check",
    "exact",
    "bound_lo",
    "bound_hi",
    "verdict",
    "margin_lo",
    "margin_hi",
    "expected",
)

_BESSEL_G_TOL = Fraction(1, 10**12)


@dataclass(frozen=True)
class SweepConfig:
    ell_range: tuple[int, int]
    n_range: tuple[int, int]
    checks: tuple[str, ...] = ("main",)
    precision_bits: int = 256
    output_format: str = "csv"
    parallelism: int = 1

    def __post_init__(self):
        lo, hi = self.ell_range
        if lo < 2 or hi < lo:
            raise ParameterError(f"ell range must satisfy 2 <= lo <= hi, got {lo}:{hi}")
        lo, hi = self.n_range
        if lo < 1 or hi < lo:
            raise ParameterError(f"n range must satisfy 1 <= lo <= hi, got {lo}:{hi}")
        bad = set(self.checks) - set(CHECKS)
        if bad or not self.checks:
            raise ParameterError(f"unknown checks: {sorted(bad)}; valid: {CHECKS}")
        if self.precision_bits < 64:
            raise ParameterError("precision_bits must be >= 64")
        if self.output_format not in ("csv", "json"):
            raise ParameterError(f"format must be csv or json, got {self.output_format}")
        if self.parallelism < 1:
            raise ParameterError("parallelism must be >= 1")

    def serializable(self) -> dict:
        # parallelism is an execution detail and is deliberately left out so
        # reports are byte-identical across worker-pool sizes
        return {
            "ell_range": list(self.ell_range),
            "n_range": list(self.n_range),
            "checks": sorted(self.checks),
            "precision_bits": self.precision_bits,
            "output_format": self.output_format,
        }


@dataclass(frozen=True)
class SweepCell:
    ell: int
    n: int
    check: str
    exact: str
    exact_fraction: str
    bound_lo: str
    bound_hi: str
    verdict: str
    margin_lo: str
    margin_hi: str
    expected: str


@dataclass(frozen=True)
class SweepSummary:
    cells: int
    holds: int
    fails: int
    inconclusive: int
    mismatches: int

    @property
    def clean(self) -> bool:
        return self.mismatches == 0 and self.inconclusive == 0


@dataclass(frozen=True)
class SweepReport:
    config: SweepConfig
    cells: list[SweepCell]
    summary: SweepSummary


# ---------------------------------------------------------------------------
# decimal rendering (pure integer arithmetic, deterministic)
# ---------------------------------------------------------------------------

def decimal_string(fr: Fraction, sig: int = 30) -> str:
    """Decimal rendering of a rational with ``sig`` significant digits.

    Uses only integer arithmetic: identical inputs give identical strings on
    every platform.  Trailing zeros of the mantissa are stripped.
    """
    if fr == 0:
        return "0"
    sign = "-" if fr < 0 else ""
    num, den = abs(fr.numerator), fr.denominator
    # decimal exponent e with 10**e <= |fr| < 10**(e+1)
    e = len(str(num)) - len(str(den))
    while _ge_pow10(num, den, e + 1):
        e += 1
    while not _ge_pow10(num, den, e):
        e -= 1
    shift = sig - 1 - e
    if shift >= 0:
        scaled_num, scaled_den = num * 10**shift, den
    else:
        scaled_num, scaled_den = num, den * 10 ** (-shift)
    digits = (2 * scaled_num + scaled_den) // (2 * scaled_den)  # round half up
    ds = str(digits)
    if len(ds) > sig:  # carry crossed a power of ten
        e += 1
        ds = ds[:sig]
    ds = ds.rstrip("0") or "0"
    if -4 <= e < 16:
        if e >= 0:
            ipart = ds[: e + 1].ljust(e + 1, "0")
            fpart = ds[e + 1 :]
            return sign + ipart + ("." + fpart if fpart else "")
        return sign + "0." + "0" * (-e - 1) + ds
    mantissa = ds[0] + ("." + ds[1:] if len(ds) > 1 else "")
    return f"{sign}{mantissa}e{e:+03d}"


def _ge_pow10(num: int, den: int, e: int) -> bool:
    if e >= 0:
        return num >= den * 10**e
    return num * 10 ** (-e) >= den


def _interval_strings(iv: Interval) -> tuple[str, str]:
    return decimal_string(iv.lo.as_fraction()), decimal_string(iv.hi.as_fraction())


def _fraction_string(fr: Fraction) -> str:
    return f"{fr.numerator}/{fr.denominator}"


# ---------------------------------------------------------------------------
# per-cell checks
# ---------------------------------------------------------------------------

def _verdict_cell(
    ell: int,
    n: int,
    check: str,
    exact: Fraction,
    bound: Interval,
    verdict: Verdict,
    expected: str,
) -> SweepCell:
    b_lo, b_hi = _interval_strings(bound)
    m_lo, m_hi = _interval_strings(verdict.margin)
    return SweepCell(
        ell=ell,
        n=n,
        check=check,
        exact=decimal_string(exact),
        exact_fraction=_fraction_string(exact),
        bound_lo=b_lo,
        bound_hi=b_hi,
        verdict=verdict.outcome.value,
        margin_lo=m_lo,
        margin_hi=m_hi,
        expected=expected,
    )


def _exact_cell(ell: int, n: int, check: str, exact: Fraction, ok: bool) -> SweepCell:
    return SweepCell(
        ell=ell,
        n=n,
        check=check,
        exact=decimal_string(exact),
        exact_fraction=_fraction_string(exact),
        bound_lo="",
        bound_hi="",
        verdict="Holds" if ok else "Fails",
        margin_lo="",
        margin_hi="",
        expected="holds",
    )


def _cell_main(ell: int, n: int, prec: int) -> SweepCell:
    c = concentration(LatticeParams(ell, n))
    expr = bounds.main_bound_expr(ell, n)
    verdict = certify_less(c, expr, max_precision_bits=prec)
    expected = "reversed" if (n == 2 and ell >= 5) else "holds"
    return _verdict_cell(ell, n, "main", c, evaluate(expr, prec), verdict, expected)


def _cell_corollary(ell: int, n: int, prec: int) -> SweepCell:
    c = concentration(LatticeParams(ell, n))
    expr = bounds.corollary_bound_expr(ell, n)
    verdict = certify_less(c, expr, max_precision_bits=prec)
    return _verdict_cell(ell, n, "corollary", c, evaluate(expr, prec), verdict, "holds")


def _cell_wallis(ell: int, n: int, prec: int) -> SweepCell:
    # only meaningful on the two-point lattice, where the concentration is a
    # central binomial probability; k is matched so that c_{2,n} = C(2k,k)/4**k
    k = (n + 1) // 2
    c = concentration(LatticeParams(2, n))
    expr = bounds.wallis_bound_expr(k)
    verdict = certify_less(c, expr, max_precision_bits=prec)
    return _verdict_cell(ell, n, "wallis", c, evaluate(expr, prec), verdict, "holds")


def _cell_bessel_chain(ell: int, n: int, prec: int) -> SweepCell:
    pair = pair_concentration(LatticeParams(3, n))
    middle = bounds.bessel_G(Fraction(2 * n, 3), _BESSEL_G_TOL).value
    outer = evaluate(bounds.bessel_chain_expr(n), prec)
    left = verdict_between(pair, middle, prec)
    right = verdict_between(middle, outer, prec)
    if left.outcome is Outcome.HOLDS and right.outcome is Outcome.HOLDS:
        outcome = Outcome.HOLDS
    elif Outcome.FAILS in (left.outcome, right.outcome):
        outcome = Outcome.FAILS
    else:
        outcome = Outcome.INCONCLUSIVE
    # report the margin of the binding side
    margin = Interval(
        min(left.margin.lo, right.margin.lo), min(left.margin.hi, right.margin.hi)
    )
    verdict = Verdict(outcome, prec, margin)
    return _verdict_cell(ell, n, "bessel_chain", pair, outer, verdict, "holds")


def _cell_dsequence(ell: int, n: int, prec: int) -> SweepCell:
    # the concentration rescaled by sqrt(pi*(ell**2-1)*n/6) stays below d_n;
    # stated equivalently as c < d_n * main_bound so the left side is rational
    c = concentration(LatticeParams(ell, n))
    expr = bounds.d_sequence_expr(n) * bounds.main_bound_expr(ell, n)
    verdict = certify_less(c, expr, max_precision_bits=prec)
    return _verdict_cell(ell, n, "dsequence", c, evaluate(expr, prec), verdict, "holds")


def _cell_bretagnolle(ell: int, n: int, prec: int) -> SweepCell:
    c = concentration(LatticeParams(ell, n))
    rhs = Fraction(2, ell) * concentration(LatticeParams(2, n))
    margin = rhs - c  # non-strict comparison: equality holds at ell = 2
    rhs_str = decimal_string(rhs)
    margin_str = decimal_string(margin)
    return SweepCell(
        ell=ell,
        n=n,
        check="bretagnolle",
        exact=decimal_string(c),
        exact_fraction=_fraction_string(c),
        bound_lo=rhs_str,
        bound_hi=rhs_str,
        verdict="Holds" if margin >= 0 else "Fails",
        margin_lo=margin_str,
        margin_hi=margin_str,
        expected="holds",
    )


def _central_points(params: LatticeParams) -> set[int]:
    return {params.top // 2, (params.top + 1) // 2}


def _cell_argmax(ell: int, n: int, prec: int) -> SweepCell:
    params = LatticeParams(ell, n)
    d = power(params)
    central = _central_points(params)
    peak = argmax_set(d)
    # for n = 1 the pmf is flat and every point is maximal; the central
    # points must still be among them
    ok = central <= peak if n == 1 else peak == central
    c = Fraction(d.numerators[params.top // 2], d.denominator)
    return _exact_cell(ell, n, "argmax", c, ok)


def _cell_moments(ell: int, n: int, prec: int) -> SweepCell:
    params = LatticeParams(ell, n)
    mean, var = moments(power(params))
    ok = mean == Fraction(n * (ell - 1), 2) and var == Fraction(n * (ell * ell - 1), 12)
    return _exact_cell(ell, n, "moments", mean, ok)


def _cell_oracle_equiv(ell: int, n: int, prec: int) -> SweepCell:
    params = LatticeParams(ell, n)
    d = power(params)
    denom = d.denominator
    ok = all(
        de_moivre_pmf(params, k) == Fraction(num, denom)
        for k, num in enumerate(d.numerators)
    )
    ok = ok and de_moivre_pmf(params, -1) == 0 and de_moivre_pmf(params, params.top + 1) == 0
    c = Fraction(d.numerators[params.top // 2], denom)
    return _exact_cell(ell, n, "oracle_equiv", c, ok)


_CELL_FUNCS = {
    "main": _cell_main,
    "corollary": _cell_corollary,
    "wallis": _cell_wallis,
    "bessel_chain": _cell_bessel_chain,
    "dsequence": _cell_dsequence,
    "bretagnolle": _cell_bretagnolle,
    "argmax": _cell_argmax,
    "moments": _cell_moments,
    "oracle_equiv": _cell_oracle_equiv,
}

# checks that are only defined on one lattice size keep the grid semantics
# honest by skipping other rows instead of silently recomputing them
_CHECK_ELL_FILTER = {"wallis": 2, "bessel_chain": 3}


def _run_cell(task: tuple[str, int, int, int]) -> SweepCell:
    check, ell, n, prec = task
    return _CELL_FUNCS[check](ell, n, prec)


def _tasks(config: SweepConfig) -> list[tuple[str, int, int, int]]:
    out = []
    for check in sorted(config.checks):
        only_ell = _CHECK_ELL_FILTER.get(check)
        for ell in range(config.ell_range[0], config.ell_range[1] + 1):
            if only_ell is not None and ell != only_ell:
                continue
            for n in range(config.n_range[0], config.n_range[1] + 1):
                out.append((check, ell, n, config.precision_bits))
    return out


def run_sweep(config: SweepConfig) -> SweepReport:
    tasks = _tasks(config)
    if config.parallelism == 1 or len(tasks) < 2:
        cells = [_run_cell(t) for t in tasks]
    else:
        chunk = max(1, len(tasks) // (config.parallelism * 8))
        with ProcessPoolExecutor(max_workers=config.parallelism) as pool:
            cells = list(pool.map(_run_cell, tasks, chunksize=chunk))
    cells.sort(key=lambda c: (c.check, c.ell, c.n))
    holds = sum(1 for c in cells if c.verdict == "Holds")
    fails = sum(1 for c in cells if c.verdict == "Fails")
    inconclusive = sum(1 for c in cells if c.verdict == "Inconclusive")
    mismatches = sum(
        1
        for c in cells
        if (c.expected == "holds" and c.verdict == "Fails")
        or (c.expected == "reversed" and c.verdict == "Holds")
    )
    return SweepReport(
        config, cells, SweepSummary(len(cells), holds, fails, inconclusive, mismatches)
    )


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def report_to_csv_bytes(report: SweepReport) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for c in report.cells:
        writer.writerow([getattr(c, col) for col in CSV_COLUMNS])
    return buf.getvalue().encode("utf-8")


def report_to_json_bytes(report: SweepReport) -> bytes:
    obj = {
        "config": report.config.serializable(),
        "cells": [asdict(c) for c in report.cells],
        "summary": asdict(report.summary),
    }
    return (json.dumps(obj, indent=2) + "\n").encode("utf-8")


def cells_from_csv_bytes(data: bytes) -> list[dict]:
    """Parse a CSV report back into row dictionaries (string values)."""
    text = data.decode("utf-8")
    reader = csv.DictReader(io.StringIO(text))
    rows = []
    for row in reader:
        row["ell"] = int(row["ell"])
        row["n"] = int(row["n"])
        rows.append(row)
    return rows
