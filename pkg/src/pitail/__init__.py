"""Exact asymptotic expansions of the remainders of Ramanujan-type series for 1/pi."""

from .analysis import (
    AccelerationReport,
    EnvelopeReport,
    accelerate,
    envelope_check,
    expansion_value,
    optimal_truncation,
    order_sweep,
    sign_pattern,
)
from .catalog import AlgebraicScale, SeriesParams, get_series, load_catalog
from .errors import PrecisionError, ResourceError, SeriesNotFound, SingularRecursion
from .expansion import (
    CoeffTable,
    DCoeffs,
    a_coeff,
    alpha_series,
    bernoulli,
    c_table,
    d_coeffs,
    theta_series,
)
from .formal import FormalSeries
from .hpeval import (
    HPReal,
    RemainderReport,
    alpha_direct,
    f_n,
    partial_sum,
    pochhammer_prefactor,
    reference_value,
    remainder,
    remainder_report,
    term,
)

__version__ = "0.1.0"
