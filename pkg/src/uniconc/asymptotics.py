"""Finite-n checks of local-CLT sharpness for the peak-probability bound.

The exact rational concentration is computed first and converted to an
extended-precision float only at the end, so no pmf value ever underflows
(the denominators ell**n overflow double precision long before n = 1000).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import ParameterError
from .exactdist import LatticeParams, concentration, power

__all__ = ["CltReport", "clt_ratio", "local_clt_sup_dev", "clt_report"]

_PREC_BITS = 128


@dataclass(frozen=True)
class CltReport:
    ell: int
    n: int
    ratio: float
    sup_deviation: float


def _check(ell: int, n: int) -> None:
    if ell < 2:
        raise ParameterError(f"ell must be >= 2 (ell = 1 has zero variance), got {ell}")
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")


def _mpf(fr: Fraction) -> mpmath.mpf:
    return mpmath.mpf(fr.numerator) / mpmath.mpf(fr.denominator)


def clt_ratio(ell: int, n: int) -> float:
    """Ratio of the exact peak probability to its limiting Gaussian value:
    sqrt(n) * c * sqrt(pi*(ell**2-1)/6).

    Tends to one from below as n grows; exceeds one exactly in the reversed
    regime of the sharp bound.
    """
    _check(ell, n)
    c = concentration(LatticeParams(ell, n))
    with mpmath.workprec(_PREC_BITS):
        value = mpmath.sqrt(n) * _mpf(c) * mpmath.sqrt(mpmath.pi * (ell * ell - 1) / 6)
        return float(value)


def local_clt_sup_dev(ell: int, n: int) -> float:
    """Sup over k of |sqrt(n)*pmf(k) - normal density at the matching point|.

    The scan covers [-n(ell-1), 2n(ell-1)]; outside the support the pmf term
    is zero and only the Gaussian tail contributes, which is dominated by the
    on-support maximum.
    """
    _check(ell, n)
    d = power(LatticeParams(ell, n))
    top = d.params.top
    denom = d.denominator
    with mpmath.workprec(_PREC_BITS):
        sqrt_n = mpmath.sqrt(n)
        mu = mpmath.mpf(ell - 1) / 2
        sigma = mpmath.sqrt(mpmath.mpf(ell * ell - 1) / 12)
        norm = 1 / (sigma * mpmath.sqrt(2 * mpmath.pi))
        mp_denom = mpmath.mpf(denom)
        sup = mpmath.mpf(0)
        for k in range(-top, 2 * top + 1):
            z = (k - n * mu) / (sigma * sqrt_n)
            gauss = norm * mpmath.exp(-z * z / 2)
            if 0 <= k <= top:
                dev = abs(sqrt_n * mpmath.mpf(d.numerators[k]) / mp_denom - gauss)
            else:
                dev = gauss
            if dev > sup:
                sup = dev
        return float(sup)


def clt_report(ell: int, n: int) -> CltReport:
    return CltReport(ell, n, clt_ratio(ell, n), local_clt_sup_dev(ell, n))
