"""Finite-dimensional l^p / l^q sequence arithmetic.

Coefficient vectors live in a finite truncation of l^p with 1 < p <= 2 and
dual vectors in the conjugate space l^q, 1/p + 1/q = 1.  This module provides
the norms, the penalty functional

    f_p(x) = (1/p) * sum_i |x_i|^p,

the duality mappings J_p / J_q (gradients of f_p / f_q, mutually inverse),
and the Bregman distances induced by f_p and f_q.  All operations are pure
and reject non-finite input and length mismatches.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Exponent",
    "lp_norm",
    "fp_value",
    "duality_map_p",
    "duality_map_q",
    "bregman_fp",
    "bregman_fq_dual",
]


@dataclass(frozen=True)
class Exponent:
    """Penalty exponent p with 1 < p <= 2; the conjugate q is derived."""

    p: float

    def __post_init__(self) -> None:
        p = float(self.p)
        if not np.isfinite(p) or not 1.0 < p <= 2.0:
            raise ValueError(f"exponent p must satisfy 1 < p <= 2, got {p}")
        object.__setattr__(self, "p", p)

    @property
    def q(self) -> float:
        """Conjugate exponent, 1/p + 1/q = 1 (q >= 2)."""
        return self.p / (self.p - 1.0)


def _checked(x, name: str = "vector") -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ValueError(f"{name} must be a nonempty 1-d array")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} contains non-finite entries")
    return x


def _checked_pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    a = _checked(a, "first argument")
    b = _checked(b, "second argument")
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.size} vs {b.size}")
    return a, b


def lp_norm(x, e: Exponent) -> float:
    """l^p norm (sum |x_i|^p)^(1/p) of a coefficient vector."""
    x = _checked(x)
    return float(np.sum(np.abs(x) ** e.p) ** (1.0 / e.p))


def lq_norm(xi, e: Exponent) -> float:
    """l^q norm of a dual vector, q conjugate to e.p."""
    xi = _checked(xi)
    return float(np.sum(np.abs(xi) ** e.q) ** (1.0 / e.q))


def fp_value(x, e: Exponent) -> float:
    """Penalty functional f_p(x) = (1/p) sum |x_i|^p."""
    x = _checked(x)
    return float(np.sum(np.abs(x) ** e.p) / e.p)


def fq_value(xi, e: Exponent) -> float:
    """Dual penalty f_q(xi) = (1/q) sum |xi_i|^q."""
    xi = _checked(xi)
    return float(np.sum(np.abs(xi) ** e.q) / e.q)


def duality_map_p(x, e: Exponent) -> np.ndarray:
    """Duality mapping J_p(x)_i = sign(x_i) |x_i|^(p-1), the gradient of f_p.

    J_p maps the zero vector to zero and is continuous at 0 since p > 1;
    powers are evaluated directly, without smoothing, so that
    ``duality_map_q(duality_map_p(x)) == x`` holds to round-off.
    """
    x = _checked(x)
    return np.sign(x) * np.abs(x) ** (e.p - 1.0)


def duality_map_q(xi, e: Exponent) -> np.ndarray:
    """Inverse duality mapping J_q(xi)_i = sign(xi_i) |xi_i|^(q-1)."""
    xi = _checked(xi)
    return np.sign(xi) * np.abs(xi) ** (e.q - 1.0)


def bregman_fp(z, x, e: Exponent) -> float:
    """Bregman distance D_{f_p}(z, x) = f_p(z) - f_p(x) - <J_p(x), z - x>.

    Nonnegative, and zero exactly when z == x (f_p is strictly convex for
    p > 1).  Note the argument order: the distance is measured *from* x
    (where the gradient is taken) *to* z.
    """
    z, x = _checked_pair(z, x)
    return float(fp_value(z, e) - fp_value(x, e)
                 - np.dot(duality_map_p(x, e), z - x))


def bregman_fq_dual(a, b, e: Exponent) -> float:
    """Bregman distance in the dual space, D_{f_q}(a, b) with f_q = (1/q)||.||_q^q.

    Satisfies the primal-dual identity
    ``bregman_fp(z, x, e) == bregman_fq_dual(J_p(x), J_p(z), e)``.
    """
    a, b = _checked_pair(a, b)
    return float(fq_value(a, e) - fq_value(b, e)
                 - np.dot(duality_map_q(b, e), a - b))
