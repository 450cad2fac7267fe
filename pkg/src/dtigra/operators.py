"""Forward operators: autoconvolution, Haar synthesis, and their composition.

The nonlinear model problem is causal autoconvolution on [0, 1],

    G(f)(s) = integral_0^s f(s - t) f(t) dt,

discretized on the midpoint grid as a pure discrete convolution so that the
Frechet derivative and its adjoint are exact companions of the implemented
map (the adjoint is the transpose of the discrete derivative with respect to
the quadrature-weighted inner product, not a separate discretization).
Sparsity is expressed through an orthonormal discrete Haar basis: the
synthesis operator T maps coefficients to a piecewise-constant signal and
its adjoint (= inverse) recovers the coefficients.  The composition
F = G o T maps coefficient vectors to data-space signals.

Every forward operator exposes the same surface: ``apply(x)``,
``deriv(x, h)`` and ``adjoint_deriv(x, w)``, where the adjoint is taken
between the weighted inner product on the data side and the plain pairing
on the coefficient side.
"""

from __future__ import annotations

import numpy as np

from .signals import l2_inner

__all__ = ["Autoconvolution", "HaarBasis", "ComposedForward", "MatrixForward"]


def _check_1d(u, n: int, name: str) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.shape != (n,):
        raise ValueError(f"{name} has shape {u.shape}, expected ({n},)")
    return u


class Autoconvolution:
    """Causal autoconvolution of a signal with itself on the midpoint grid.

    The discrete forward map is

        (G f)_m = (1/n) * sum_{i=1..m} f_i f_{m+1-i},    m = 1..n,

    a left-Riemann style quadrature that keeps G a pure discrete convolution.
    The derivative in direction h is 2 (f * h) and its adjoint is the exact
    transpose (flip, convolve, flip on the grid).  The map is quadratic:

        G(f + h) = G(f) + G'(f) h + G(h)

    holds exactly on the grid, which the tests exploit as an oracle.
    Convolutions run directly in O(n^2); at n = 512 this is fast and exactly
    transposable.
    """

    def __init__(self, grid_size: int):
        if grid_size < 1:
            raise ValueError("grid size must be positive")
        self.n = int(grid_size)

    def apply(self, f) -> np.ndarray:
        f = _check_1d(f, self.n, "f")
        return np.convolve(f, f)[: self.n] / self.n

    def deriv(self, f, h) -> np.ndarray:
        """Directional derivative 2 (f * h), causal part."""
        f = _check_1d(f, self.n, "f")
        h = _check_1d(h, self.n, "h")
        return 2.0 * np.convolve(f, h)[: self.n] / self.n

    def adjoint_deriv(self, f, w) -> np.ndarray:
        """Adjoint of ``deriv(f, .)`` within the data space.

        Computed as flip-convolve-flip, which equals the transpose of the
        discrete derivative with respect to the weighted inner product:
        (G'(f)* w)_i = (2/n) * sum_{m=i..n} f_{m+1-i} w_m.
        """
        f = _check_1d(f, self.n, "f")
        w = _check_1d(w, self.n, "w")
        return 2.0 * np.convolve(f, w[::-1])[: self.n][::-1] / self.n


class HaarBasis:
    """Orthonormal discrete Haar synthesis/analysis on n = 2^levels points.

    Basis ordering (1-based): index 1 is the scaling function (constant 1);
    wavelets follow level-major, level l = 0..levels-1, shift k = 0..2^l - 1,
    so index i = 2^l + k + 1.  All basis vectors have unit discrete L^2 norm,
    hence analysis is the exact inverse of synthesis.
    """

    def __init__(self, levels: int):
        if levels < 0:
            raise ValueError("levels must be nonnegative")
        self.levels = int(levels)
        self.n = 2 ** self.levels
        self._matrix = self._build_matrix()

    def _build_matrix(self) -> np.ndarray:
        n = self.n
        w = np.zeros((n, n))
        w[:, 0] = 1.0
        col = 1
        for lev in range(self.levels):
            support = n >> lev
            half = support // 2
            amp = np.sqrt(float(2 ** lev))
            for k in range(2 ** lev):
                start = k * support
                w[start : start + half, col] = amp
                w[start + half : start + support, col] = -amp
                col += 1
        return w

    def synthesize(self, x) -> np.ndarray:
        """Signal sum_i x_i u_i from a coefficient vector."""
        x = _check_1d(x, self.n, "coefficients")
        return self._matrix @ x

    def analyze(self, f) -> np.ndarray:
        """Coefficients {<f, u_i>}; exact inverse of :meth:`synthesize`."""
        f = _check_1d(f, self.n, "signal")
        return (self._matrix.T @ f) / self.n

    def basis_vector(self, index: int) -> np.ndarray:
        """The 1-based ``index``-th basis signal."""
        if not 1 <= index <= self.n:
            raise ValueError(f"basis index {index} outside 1..{self.n}")
        return self._matrix[:, index - 1].copy()


class ComposedForward:
    """F = G o T : coefficient vectors -> data signals."""

    def __init__(self, synthesis: HaarBasis, autoconv: Autoconvolution):
        if synthesis.n != autoconv.n:
            raise ValueError(
                f"grid mismatch: synthesis {synthesis.n} vs autoconvolution {autoconv.n}"
            )
        self.synthesis = synthesis
        self.autoconv = autoconv
        self.n_coef = synthesis.n
        self.n_grid = autoconv.n

    @classmethod
    def haar_autoconvolution(cls, levels: int) -> "ComposedForward":
        return cls(HaarBasis(levels), Autoconvolution(2 ** levels))

    def apply(self, x) -> np.ndarray:
        return self.autoconv.apply(self.synthesis.synthesize(x))

    def deriv(self, x, h) -> np.ndarray:
        f = self.synthesis.synthesize(x)
        return self.autoconv.deriv(f, self.synthesis.synthesize(h))

    def adjoint_deriv(self, x, w) -> np.ndarray:
        """T* G'(Tx)* w, a dual coefficient vector."""
        f = self.synthesis.synthesize(x)
        return self.synthesis.analyze(self.autoconv.adjoint_deriv(f, w))


class MatrixForward:
    """Linear forward operator F(x) = A x with exact adjoint.

    The data side carries the weighted inner product of :mod:`.signals`,
    the coefficient side the plain pairing, so the adjoint is (1/m) A^T.
    Used for small problems with a closed-form Tikhonov minimizer.
    """

    def __init__(self, matrix):
        a = np.asarray(matrix, dtype=float)
        if a.ndim != 2:
            raise ValueError("matrix must be 2-d")
        self.matrix = a
        self.n_grid, self.n_coef = a.shape

    def apply(self, x) -> np.ndarray:
        return self.matrix @ _check_1d(x, self.n_coef, "x")

    def deriv(self, x, h) -> np.ndarray:
        return self.matrix @ _check_1d(h, self.n_coef, "h")

    def adjoint_deriv(self, x, w) -> np.ndarray:
        return self.matrix.T @ _check_1d(w, self.n_grid, "w") / self.n_grid

    def tikhonov_minimizer(self, y_delta, alpha: float) -> np.ndarray:
        """Closed-form minimizer of the p = 2 Tikhonov functional."""
        a, m = self.matrix, self.n_grid
        gram = a.T @ a / m + alpha * np.eye(self.n_coef)
        return np.linalg.solve(gram, a.T @ np.asarray(y_delta, dtype=float) / m)

    def derivative_norm(self) -> float:
        """Operator norm of x -> A x between the two inner products."""
        return float(np.sqrt(np.linalg.eigvalsh(self.matrix.T @ self.matrix).max()
                             / self.n_grid))


def adjoint_mismatch(op, x, h, w) -> float:
    """Relative defect |<F'(x)h, w> - <h, F'(x)*w>| / (1 + |<F'(x)h, w>|)."""
    lhs = l2_inner(op.deriv(x, h), w)
    rhs = float(np.dot(np.asarray(h, dtype=float), op.adjoint_deriv(x, w)))
    return abs(lhs - rhs) / (1.0 + abs(lhs))
