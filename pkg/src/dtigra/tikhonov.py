"""Tikhonov functional with l^p penalty: value, dual-space gradient, residual.

For a forward operator F, noisy data y_delta and penalty exponent p,

    Phi_alpha(x) = (1/2) ||F(x) - y_delta||^2 + alpha * f_p(x),

with gradient

    grad Phi_alpha(x) = F'(x)* (F(x) - y_delta) + alpha * J_p(x)

living in the dual sequence space.  The regularization weight alpha is an
explicit argument throughout because the continuation solver sweeps it
across a geometric schedule.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .seqspace import Exponent, duality_map_p, fp_value
from .signals import l2_norm

__all__ = ["ProblemInstance", "phi_value", "phi_gradient", "residual_norm"]


@dataclass(frozen=True)
class ProblemInstance:
    """Forward operator, noisy data, absolute noise level and exponent.

    ``forward`` may be any object exposing ``apply``, ``deriv`` and
    ``adjoint_deriv`` with matching grid sizes (see :mod:`.operators`).
    """

    forward: object
    data: np.ndarray
    delta: float
    exponent: Exponent

    def __post_init__(self) -> None:
        data = np.asarray(self.data, dtype=float)
        if data.ndim != 1 or not np.all(np.isfinite(data)):
            raise ValueError("data must be a finite 1-d array")
        if data.size != self.forward.n_grid:
            raise ValueError(
                f"data grid {data.size} does not match forward grid {self.forward.n_grid}"
            )
        if self.delta < 0:
            raise ValueError("noise level delta must be nonnegative")
        object.__setattr__(self, "data", data)

    @property
    def n_coef(self) -> int:
        return self.forward.n_coef


def _check_alpha(alpha: float) -> float:
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    return float(alpha)


def phi_value(prob: ProblemInstance, alpha: float, x) -> float:
    """Tikhonov functional value Phi_alpha(x)."""
    alpha = _check_alpha(alpha)
    misfit = l2_norm(prob.forward.apply(x) - prob.data)
    return 0.5 * misfit ** 2 + alpha * fp_value(x, prob.exponent)


def phi_gradient(prob: ProblemInstance, alpha: float, x) -> np.ndarray:
    """Gradient of Phi_alpha at x, a dual coefficient vector."""
    alpha = _check_alpha(alpha)
    residual = prob.forward.apply(x) - prob.data
    return prob.forward.adjoint_deriv(x, residual) + alpha * duality_map_p(x, prob.exponent)


def residual_norm(prob: ProblemInstance, x) -> float:
    """Data misfit ||F(x) - y_delta|| in the data-space norm."""
    return l2_norm(prob.forward.apply(x) - prob.data)


@dataclass
class PhiState:
    """One evaluation of Phi_alpha sharing a single forward application.

    The solver needs the value, gradient, gradient norm and residual of every
    iterate; computing them together avoids re-applying F.  ``grad_norm`` is
    the dual-space l^q norm, the norm in which the step-size rules and the
    inner stopping threshold are stated.
    """

    phi: float
    gradient: np.ndarray
    grad_norm: float
    residual: float
    penalty: float = field(repr=False, default=0.0)


def evaluate_phi(prob: ProblemInstance, alpha: float, x) -> PhiState:
    """Value, gradient and residual of Phi_alpha at x in one forward pass.

    Unlike the individual operations this does not reject non-finite
    intermediate values: a diverging solve must be able to observe them and
    abort with a diagnostic instead of dying inside a validation check.
    """
    alpha = _check_alpha(alpha)
    e = prob.exponent
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        residual_sig = prob.forward.apply(x) - prob.data
        residual = float(np.sqrt(np.dot(residual_sig, residual_sig)
                                 / residual_sig.size))
        penalty = float(np.sum(np.abs(x) ** e.p) / e.p)
        gradient = (prob.forward.adjoint_deriv(x, residual_sig)
                    + alpha * np.sign(x) * np.abs(x) ** (e.p - 1.0))
        grad_norm = float(np.sum(np.abs(gradient) ** e.q) ** (1.0 / e.q))
        phi = 0.5 * residual ** 2 + alpha * penalty
    return PhiState(phi=phi, gradient=gradient, grad_norm=grad_norm,
                    residual=residual, penalty=penalty)
