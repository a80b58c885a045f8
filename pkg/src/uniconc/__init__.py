"""Exact convolution powers of discrete uniform distributions, their maximal
probabilities, and certified verdicts for the sharp concentration bounds."""

from .asymptotics import CltReport, clt_ratio, clt_report, local_clt_sup_dev
from .bounds import (
    BoundKind,
    BoundValue,
    bessel_G,
    bessel_chain_bound,
    corollary_bound,
    d_sequence,
    main_bound,
    wallis_bound,
)
from .certify import (
    PI,
    Const,
    Dyadic,
    Expr,
    Interval,
    Outcome,
    Verdict,
    certify_less,
    evaluate,
    pi_enclosure,
    sqrt_enclosure,
    sqrt_expr,
    verdict_between,
)
from .errors import ConvergenceError, DomainError, ExpressionError, ParameterError
from .exactdist import (
    ExactDensity,
    LatticeParams,
    argmax_set,
    concentration,
    convolve,
    de_moivre_pmf,
    moments,
    pair_concentration,
    power,
    uniform_density,
)
from .spectral import (
    QuadratureResult,
    SplitParams,
    charfn_kernel,
    chebyshev_lemma_check,
    fourier_pmf,
    i1_majorant,
    i2_majorant,
    split_integrals,
    wallis_integral,
)
from .sweep import SweepCell, SweepConfig, SweepReport, SweepSummary, run_sweep

__version__ = "0.1.0"
