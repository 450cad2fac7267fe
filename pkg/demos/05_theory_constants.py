"""The analysis constants as computable objects.

Every constant in the convergence analysis has a closed form in the
structural parameters (c, L, s, varrho, delta, p) and the problem-level
bounds A, K.  This script evaluates them on a worked parameter set and shows
the two step-size rules side by side on a small linear problem.
"""

import json

import numpy as np

from dtigra import (
    Exponent,
    MatrixForward,
    ProblemInstance,
    TheoryConstants,
    params_from_problem,
    practical_step_size,
    theoretical_step_size,
)
from dtigra.signals import NoiseSpec, add_noise, l2_norm
from dtigra.tikhonov import evaluate_phi

# a 4-d linear problem where all assumptions hold exactly
rng = np.random.default_rng(5)
q1, _ = np.linalg.qr(rng.standard_normal((4, 4)))
q2, _ = np.linalg.qr(rng.standard_normal((4, 4)))
op = MatrixForward(q1 @ np.diag([1.5, 1.1, 0.8, 0.6]) @ q2)
x_true = np.array([0.5, -0.3, 0.2, 0.1])
y = op.apply(x_true)
y_delta, delta = add_noise(y, NoiseSpec(1e-3 / l2_norm(y), seed=6))

# source element omega with x_true = F'* omega fixes varrho; c is chosen so
# that the smallness condition s*c*varrho = 1/2 holds with margin
omega = np.linalg.solve(op.matrix.T, 4.0 * x_true)
s, varrho = 3.0, l2_norm(omega) * (1 + 1e-9)
params = params_from_problem(c=0.5 / (s * varrho), L=1.0, s=s, varrho=varrho,
                             delta=delta, p=2.0,
                             misfit_at_zero=l2_norm(y_delta),
                             deriv_norm_at_zero=op.derivative_norm())
constants = TheoryConstants(params, alpha0=100.0, qbar=0.7)

print("all constants at alpha = 2 alpha*:")
print(json.dumps(constants.as_dict(2.0 * constants.alpha_star), indent=2))

prob = ProblemInstance(forward=op, data=y_delta, delta=delta,
                       exponent=Exponent(2.0))
alpha = 2.0 * constants.alpha_star
x = x_true + 0.1 * rng.standard_normal(4)
state = evaluate_phi(prob, alpha, x)
beta_theory = theoretical_step_size(prob, alpha, x, constants, state=state)
beta_pract = practical_step_size(state.grad_norm, cap=0.02)
print(f"\nstep sizes at a perturbed iterate (alpha = {alpha:.3e}):")
print(f"  theoretical rule: {beta_theory:.3e}   (provably safe, conservative)")
print(f"  practical rule  : {beta_pract:.3e}   (min(1/||grad||, 0.02))")
