"""Polyhomogeneous boundary expansions for Fuchsian model equations of complex Monge-Ampere type."""

from .bivariate import BivariatePoly, parse_poly
from .series import (PolyhomSeries, arith, compose_analytic, ddx, residual_order,
                     substitute_d_to_t)
from .fuchsian import (ExpansionResult, FuchsianProblem, IndicialData, apply_operator,
                       indicial, linear_problem, solve_polyhom, verify_expansion)
from .cma_model import (TracePowerInput, assemble_model, ball_benchmark, first_log_coefficient,
                        logdet_series, logdet_truncated)
from .counterexample import CexState, apply_A, build_cex_series, cex_residual, growth_ledger
from .diagnostics import GrowthFit, gevrey_fit, radius_estimate
from .numeric_oracle import GridSolution, fit_coefficients, solve_bvp

__all__ = [
    "BivariatePoly", "parse_poly",
    "PolyhomSeries", "arith", "compose_analytic", "ddx", "residual_order", "substitute_d_to_t",
    "ExpansionResult", "FuchsianProblem", "IndicialData", "apply_operator", "indicial",
    "linear_problem", "solve_polyhom", "verify_expansion",
    "TracePowerInput", "assemble_model", "ball_benchmark", "first_log_coefficient",
    "logdet_series", "logdet_truncated",
    "CexState", "apply_A", "build_cex_series", "cex_residual", "growth_ledger",
    "GrowthFit", "gevrey_fit", "radius_estimate",
    "GridSolution", "fit_coefficients", "solve_bvp",
]
