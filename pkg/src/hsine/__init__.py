"""High-precision evaluation of the harmonic-sine entire function f and its companions."""

from .asymptotics import AsymptoticEval, eval_J_asymptotic, expansion_coefficients, first_order_f
from .dilog import dilog
from .errors import ConvergenceFailure, DomainError, NonConvergence, PrecisionOverflow, SieveTooSmall
from .precision import PrecisionContext, gr_identity, harmonic, lemma_identity
from .quadrature import (
    eval_f_fourier,
    eval_f_laplace,
    eval_J_laplace,
    g_kernel,
    inner_J,
    inner_J_bruteforce,
    triple_integral_direct,
)
from .riesz import halfint_cos_identity, moebius_sieve, riesz_F_mobius, riesz_F_power, riesz_kernel_g
from .series import Evaluation, eval_f_prime, eval_f_series, series_coefficient
from .zeros import ZeroRecord, bracket_zeros, refine_zero, zeros_table

__version__ = "0.1.0"

__all__ = [
    "AsymptoticEval",
    "ConvergenceFailure",
    "DomainError",
    "Evaluation",
    "NonConvergence",
    "PrecisionContext",
    "PrecisionOverflow",
    "SieveTooSmall",
    "ZeroRecord",
    "bracket_zeros",
    "dilog",
    "eval_J_asymptotic",
    "eval_J_laplace",
    "eval_f_fourier",
    "eval_f_laplace",
    "eval_f_prime",
    "eval_f_series",
    "expansion_coefficients",
    "first_order_f",
    "g_kernel",
    "gr_identity",
    "halfint_cos_identity",
    "harmonic",
    "inner_J",
    "inner_J_bruteforce",
    "lemma_identity",
    "moebius_sieve",
    "refine_zero",
    "riesz_F_mobius",
    "riesz_F_power",
    "riesz_kernel_g",
    "series_coefficient",
    "triple_integral_direct",
    "zeros_table",
]
