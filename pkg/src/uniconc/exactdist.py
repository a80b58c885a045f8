"""Exact arithmetic for convolution powers of discrete uniform distributions.

Everything in this module is computed with arbitrary-precision integers.
A distribution is stored as the tuple of integer numerators of its pmf over
the common denominator ``ell**n``, so normalization and symmetry can be
checked exactly and no value ever passes through floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import ParameterError

__all__ = [
    "LatticeParams",
    "ExactDensity",
    "uniform_density",
    "convolve",
    "power",
    "de_moivre_pmf",
    "concentration",
    "argmax_set",
    "moments",
    "pair_concentration",
]


@dataclass(frozen=True)
class LatticeParams:
    """Number of support points ``ell`` of the base uniform law and the
    convolution power ``n``.

    ``ell = 1`` is the degenerate point mass at zero and is accepted.
    """

    ell: int
    n: int

    def __post_init__(self):
        if not isinstance(self.ell, int) or self.ell < 1:
            raise ParameterError(f"ell must be an integer >= 1, got {self.ell!r}")
        if not isinstance(self.n, int) or self.n < 1:
            raise ParameterError(f"n must be an integer >= 1, got {self.n!r}")

    @property
    def support_size(self) -> int:
        return self.n * (self.ell - 1) + 1

    @property
    def top(self) -> int:
        """Largest point of the support {0, ..., n*(ell-1)}."""
        return self.n * (self.ell - 1)


@dataclass(frozen=True)
class ExactDensity:
    """Pmf of an n-fold sum of independent uniform draws on {0, ..., ell-1}.

    The probability at k is ``numerators[k] / ell**denominator_exponent``.
    Numerators are kept un-reduced so that the exact normalization
    ``sum(numerators) == ell**n`` is preserved.
    """

    params: LatticeParams
    numerators: tuple[int, ...]
    denominator_exponent: int

    def __post_init__(self):
        if len(self.numerators) != self.params.support_size:
            raise ParameterError(
                f"expected {self.params.support_size} numerators, got {len(self.numerators)}"
            )

    @property
    def denominator(self) -> int:
        return self.params.ell**self.denominator_exponent

    def pmf(self, k: int) -> Fraction:
        """Probability at integer k, exact; zero outside the support."""
        if 0 <= k <= self.params.top:
            return Fraction(self.numerators[k], self.denominator)
        return Fraction(0)


def uniform_density(ell: int) -> ExactDensity:
    """Uniform pmf on {0, ..., ell-1}: mass 1/ell at each point."""
    params = LatticeParams(ell, 1)
    return ExactDensity(params, (1,) * ell, 1)


def convolve(a: ExactDensity, b: ExactDensity) -> ExactDensity:
    """Exact convolution of two densities over the same base lattice.

    The output numerators are the Cauchy product of the input numerator
    sequences.  Both inputs are symmetric about their centers, hence so is
    the product; only the lower half is computed and the rest mirrored.

    The point mass (ell = 1) is the convolution identity and combines with
    any lattice; all other mixed-lattice inputs are rejected.
    """
    if a.params.ell == 1:
        return b
    if b.params.ell == 1:
        return a
    if a.params.ell != b.params.ell:
        raise ParameterError(
            f"mismatched lattices: ell={a.params.ell} vs ell={b.params.ell}"
        )
    ell = a.params.ell
    n_out = a.params.n + b.params.n
    xa, xb = a.numerators, b.numerators
    size = n_out * (ell - 1) + 1
    out = [0] * size
    half = (size - 1) // 2
    for k in range(half + 1):
        lo = max(0, k - len(xb) + 1)
        hi = min(k, len(xa) - 1)
        acc = 0
        for i in range(lo, hi + 1):
            acc += xa[i] * xb[k - i]
        out[k] = acc
    for k in range(half + 1, size):
        out[k] = out[size - 1 - k]
    return ExactDensity(LatticeParams(ell, n_out), tuple(out), n_out)


def power(params: LatticeParams) -> ExactDensity:
    """n-fold self-convolution of the uniform density, by binary powering.

    Exactly equal to folding ``uniform_density(ell)`` into itself n times,
    but uses O(log n) convolutions of growing supports.
    """
    base = uniform_density(params.ell)
    n = params.n
    acc: ExactDensity | None = None
    sq = base
    while n > 0:
        if n & 1:
            acc = sq if acc is None else convolve(acc, sq)
        n >>= 1
        if n > 0:
            sq = convolve(sq, sq)
    assert acc is not None
    return acc


def de_moivre_pmf(params: LatticeParams, k: int) -> Fraction:
    """Pmf at k via de Moivre's alternating binomial sum.

    Evaluates (1/ell**n) * sum_{j=0}^{floor(k/ell)} (-1)^j C(n,j) C(n+k-ell*j-1, n-1)
    with exact integers.  The terms are exponentially larger than the result,
    so the cancellation must happen in integer arithmetic.  For k above the
    support the surviving terms cancel to an exact zero; for k < 0 the empty
    sum gives zero.
    """
    if k < 0:
        return Fraction(0)
    ell, n = params.ell, params.n
    total = 0
    # C(n, j) vanishes for j > n, so the sum is effectively capped at n.
    for j in range(0, min(k // ell, n) + 1):
        term = comb(n, j) * comb(n + k - ell * j - 1, n - 1)
        total = total - term if (j & 1) else total + term
    return Fraction(total, ell**n)


def concentration(params: LatticeParams) -> Fraction:
    """Maximal single-point probability of the n-fold sum, exact.

    The pmf is unimodal and symmetric, so the maximum sits at the one or two
    central support points; the value at floor(n*(ell-1)/2) is returned.
    Tests verify it against the global maximum over the full support.
    """
    return de_moivre_pmf(params, params.top // 2)


def argmax_set(d: ExactDensity) -> set[int]:
    """All support points achieving the maximal probability, by exact
    comparison of numerators."""
    best = max(d.numerators)
    return {k for k, v in enumerate(d.numerators) if v == best}


def moments(d: ExactDensity) -> tuple[Fraction, Fraction]:
    """Exact mean and variance of a density.

    For the n-fold uniform sum these equal n*(ell-1)/2 and n*(ell**2-1)/12.
    """
    denom = d.denominator
    s1 = sum(k * v for k, v in enumerate(d.numerators))
    s2 = sum(k * k * v for k, v in enumerate(d.numerators))
    mean = Fraction(s1, denom)
    var = Fraction(s2, denom) - mean * mean
    return mean, var


def pair_concentration(params: LatticeParams) -> Fraction:
    """Maximum probability of two adjacent points, max_k P({k, k+1}), exact."""
    d = power(params)
    nums = d.numerators
    if len(nums) == 1:
        return Fraction(nums[0], d.denominator)
    best = max(nums[k] + nums[k + 1] for k in range(len(nums) - 1))
    return Fraction(best, d.denominator)
