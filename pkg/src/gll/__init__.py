"""Generalized Log-Lindley distribution: evaluation, sampling, estimation,
regression and distortion premiums."""

from ._backend import BACKEND
from .distribution import (
    GllParams, MeanParams, PiParams, cdf, from_mean, from_pi, hazard, logpdf, mean, mode,
    moment, neg_log_moment, pdf, pdf_pi, quantile, survival, to_mean, to_pi, variance,
    weight_expectation, x_r_log_moment,
)
from .entropy import entropy_closed, entropy_numeric, kl_divergence, weighted_entropy
from .errors import (
    BoundaryError, ConvergenceError, DomainError, GllError, InfeasibleError,
    InvalidParamsError, UnsupportedParamsError,
)
from .estimation import (
    FitOptions, FitResult, Sample, expected_information, fit_mle, log_likelihood,
    observed_hessian, score,
)
from .premium import DistortionSpec, RiskModel, distorted_premium, ph_premium, premium_table
from .sampling import RngState, gamma_variate, sample_gll, sample_ll

__version__ = "0.1.0"
