"""Sparse Tikhonov regularization of nonlinear ill-posed problems.

Minimizes

    Phi_alpha(x) = (1/2) ||F(x) - y_delta||^2 + (alpha/p) ||x||_p^p,
    1 < p <= 2,

by gradient descent in the dual sequence space, run over a decreasing
geometric schedule of regularization weights with warm starts and the
discrepancy principle as the global stopping rule.  Ships the
autoconvolution/Haar-wavelet benchmark problem, a dual modified Landweber
baseline, and calculators for every constant of the convergence analysis.
"""

from .seqspace import (
    Exponent,
    bregman_fp,
    bregman_fq_dual,
    duality_map_p,
    duality_map_q,
    fp_value,
    lp_norm,
)
from .signals import NoiseSpec, add_noise, l2_inner, l2_norm, midpoint_grid
from .operators import Autoconvolution, ComposedForward, HaarBasis, MatrixForward
from .tikhonov import ProblemInstance, phi_gradient, phi_value, residual_norm
from .theory import AssumptionParams, TheoryConstants, params_from_problem
from .solvers import (
    DtigraConfig,
    PracticalSteps,
    SolverResult,
    SolverTrace,
    TheoreticalSteps,
    dtigra_solve,
    dual_step,
    landweber_solve,
    practical_step_size,
    random_start,
    theoretical_step_size,
)
from .experiment import ExperimentConfig, generate_bundle, load_bundle, run_experiment

__version__ = "0.1.0"

__all__ = [
    "Exponent",
    "lp_norm",
    "fp_value",
    "duality_map_p",
    "duality_map_q",
    "bregman_fp",
    "bregman_fq_dual",
    "NoiseSpec",
    "add_noise",
    "l2_inner",
    "l2_norm",
    "midpoint_grid",
    "Autoconvolution",
    "HaarBasis",
    "ComposedForward",
    "MatrixForward",
    "ProblemInstance",
    "phi_value",
    "phi_gradient",
    "residual_norm",
    "AssumptionParams",
    "TheoryConstants",
    "params_from_problem",
    "DtigraConfig",
    "PracticalSteps",
    "TheoreticalSteps",
    "SolverResult",
    "SolverTrace",
    "dtigra_solve",
    "landweber_solve",
    "dual_step",
    "practical_step_size",
    "theoretical_step_size",
    "random_start",
    "ExperimentConfig",
    "generate_bundle",
    "load_bundle",
    "run_experiment",
]
