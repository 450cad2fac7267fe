"""Shared fixtures: a 4-d linear problem with closed-form minimizer and a
small autoconvolution stack.

The linear problem is built so that every structural assumption holds
exactly: F(x) = A x with controlled singular values, a known solution
x_true, a source element omega solving x_true = F'* omega, and noise of
absolute size delta.  The closed-form Tikhonov minimizer
((1/m) A^T A + alpha I)^(-1) (1/m) A^T y_delta serves as the independent
oracle for the solver tests.
"""

from dataclasses import dataclass

import numpy as np
import pytest

from dtigra.operators import ComposedForward, MatrixForward
from dtigra.seqspace import Exponent
from dtigra.signals import NoiseSpec, add_noise, l2_norm
from dtigra.theory import AssumptionParams, TheoryConstants, params_from_problem
from dtigra.tikhonov import ProblemInstance


@dataclass
class LinearFixture:
    op: MatrixForward
    prob: ProblemInstance
    x_true: np.ndarray
    omega: np.ndarray
    omega_norm: float
    y: np.ndarray
    y_delta: np.ndarray
    delta: float
    params: AssumptionParams
    constants: TheoryConstants

    def minimizer(self, alpha: float) -> np.ndarray:
        a, m = self.op.matrix, self.op.n_grid
        gram = a.T @ a / m + alpha * np.eye(a.shape[1])
        return np.linalg.solve(gram, a.T @ self.y_delta / m)


def make_linear_fixture(seed: int = 5, delta_abs: float = 1e-3) -> LinearFixture:
    rng = np.random.default_rng(seed)
    q1, _ = np.linalg.qr(rng.standard_normal((4, 4)))
    q2, _ = np.linalg.qr(rng.standard_normal((4, 4)))
    a = q1 @ np.diag([1.5, 1.1, 0.8, 0.6]) @ q2
    op = MatrixForward(a)
    x_true = np.array([0.5, -0.3, 0.2, 0.1])
    y = op.apply(x_true)
    y_delta, delta = add_noise(y, NoiseSpec(delta_abs / l2_norm(y), seed=seed + 1))

    # source element: x_true = F'(x_true)* omega = (1/m) A^T omega (p = 2)
    omega = np.linalg.solve(a.T, 4.0 * x_true)
    omega_norm = l2_norm(omega)
    s = 3.0
    varrho = omega_norm * (1.0 + 1e-9)
    c = 0.5 / (s * varrho)          # s*c*varrho = 1/2, gamma = 1/4
    params = params_from_problem(
        c=c, L=1.0, s=s, varrho=varrho, delta=delta, p=2.0,
        misfit_at_zero=l2_norm(y_delta),
        deriv_norm_at_zero=op.derivative_norm(),
    )
    prob = ProblemInstance(forward=op, data=y_delta, delta=delta,
                           exponent=Exponent(2.0))
    a_star = params.delta / ((s - 2.0) * varrho)
    constants = TheoryConstants(params, alpha0=max(100.0, 10 * a_star), qbar=0.7)
    return LinearFixture(op=op, prob=prob, x_true=x_true, omega=omega,
                         omega_norm=omega_norm, y=y, y_delta=y_delta,
                         delta=delta, params=params, constants=constants)


@pytest.fixture(scope="session")
def linear_problem() -> LinearFixture:
    return make_linear_fixture()


@dataclass
class AutoconvFixture:
    forward: ComposedForward
    prob: ProblemInstance
    x_true: np.ndarray
    y: np.ndarray
    y_delta: np.ndarray
    delta: float


def make_autoconv_fixture(levels: int = 6, p: float = 1.6,
                          noise: float = 0.01, seed: int = 31) -> AutoconvFixture:
    forward = ComposedForward.haar_autoconvolution(levels)
    n = 2 ** levels
    x_true = np.zeros(n)
    x_true[1], x_true[3], x_true[6] = 3.0, -1.0, 0.5
    y = forward.apply(x_true)
    y_delta, delta = add_noise(y, NoiseSpec(noise, seed=seed))
    prob = ProblemInstance(forward=forward, data=y_delta, delta=delta,
                           exponent=Exponent(p))
    return AutoconvFixture(forward=forward, prob=prob, x_true=x_true,
                           y=y, y_delta=y_delta, delta=delta)


@pytest.fixture(scope="session")
def autoconv_problem() -> AutoconvFixture:
    return make_autoconv_fixture()
