"""Dual-space gradient descent solvers.

Two methods minimize the sparse Tikhonov functional through the dual
iteration

    xi_{k+1} = J_p(x_k) - beta_k * grad Phi_alpha(x_k),
    x_{k+1}  = J_q(xi_{k+1}):

* :func:`dtigra_solve` — continuation over a geometric schedule
  alpha_j = qbar^j * alpha0.  Each level runs the dual iteration until the
  gradient norm falls below a level threshold C_j, warm-starts the next
  level from the final iterate, and the whole sweep stops once the
  discrepancy principle ||F(x) - y_delta|| <= tau * delta is met.
* :func:`landweber_solve` — a single dual gradient loop with the built-in
  decay alpha_k = ||x0|| / (2 (k + 1000)^0.99), the comparison baseline.

Step sizes come from either the practical rule min(1/||grad||, cap) or the
theoretical rule backed by :class:`.theory.TheoryConstants`.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .seqspace import Exponent, duality_map_p, duality_map_q, lp_norm
from .theory import TheoryConstants
from .tikhonov import PhiState, ProblemInstance, evaluate_phi, phi_gradient, phi_value

__all__ = [
    "PracticalSteps",
    "TheoreticalSteps",
    "DtigraConfig",
    "TraceRecord",
    "SolverTrace",
    "SolverResult",
    "SolveDiverged",
    "practical_step_size",
    "theoretical_step_size",
    "dual_step",
    "dtigra_solve",
    "landweber_solve",
    "random_start",
    "write_trace_csv",
    "result_to_dict",
    "write_result_json",
]

STOP_DISCREPANCY = "Discrepancy"
STOP_OUTER_CAP = "OuterCap"
STOP_ALPHA_FLOOR = "AlphaFloor"


@dataclass(frozen=True)
class PracticalSteps:
    """Step rule beta = min(1/||grad Phi||, cap); reference cap 0.02."""

    cap: float = 0.02

    def __post_init__(self) -> None:
        if not self.cap > 0:
            raise ValueError("step cap must be positive")


@dataclass(frozen=True)
class TheoreticalSteps:
    """Step rule beta = min(gamma cbar alpha / ||grad||^2, 1/(2 M_alpha)).

    The shrink factor cbar needs the gap between Phi at the iterate and its
    minimum along the dual ray; the gap is approximated by golden-section
    search on (0, t_max], t_max = t_max_factor/||grad||.  An under-estimated
    gap only shrinks the step, so the approximation is on the safe side.
    """

    constants: TheoryConstants
    line_search_iters: int = 60
    t_max_factor: float = 10.0


@dataclass(frozen=True)
class DtigraConfig:
    """Continuation solver configuration.

    Defaults mirror the reference experiment: alpha0 = 1e6, qbar = 0.7,
    tau = 2, practical steps capped at 0.02, inner threshold
    C_j = 1.5 * alpha_j, at most 3000 inner iterations per level.  The outer
    cap and alpha floor are safeguards absent from the idealized algorithm;
    they make non-termination observable instead of silent.
    """

    alpha0: float = 1e6
    qbar: float = 0.7
    tau: float = 2.0
    step_policy: PracticalSteps | TheoreticalSteps = field(default_factory=PracticalSteps)
    inner_grad_factor: float = 1.5
    inner_max_iters: int = 3000
    outer_max_iters: int = 200
    alpha_floor: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 < self.qbar < 1.0:
            raise ValueError("update factor qbar must lie in (0, 1)")
        if not self.tau > 1.0:
            raise ValueError("discrepancy multiplier tau must exceed 1")
        if not self.alpha0 > self.alpha_floor:
            raise ValueError("alpha0 must exceed alpha_floor")
        if not self.inner_grad_factor > 0:
            raise ValueError("inner_grad_factor must be positive")
        if self.inner_max_iters < 1 or self.outer_max_iters < 0:
            raise ValueError("iteration caps must be positive")
        if self.alpha_floor < 0:
            raise ValueError("alpha_floor must be nonnegative")

    def inner_threshold(self, alpha: float) -> float:
        """Gradient-norm threshold C_j ending the inner loop at level alpha."""
        if isinstance(self.step_policy, TheoreticalSteps):
            consts = self.step_policy.constants
            return consts.C_alpha(max(alpha, consts.alpha_star))
        return self.inner_grad_factor * alpha


class TraceRecord(NamedTuple):
    j: int
    k: int
    alpha: float
    beta: float
    phi: float
    grad_norm: float
    residual: float


@dataclass
class SolverTrace:
    """Per-iteration observability of a solve.

    One record per gradient evaluation; the final record of each level has
    ``beta = 0`` (no step was taken from it).  Level boundary hashes capture
    the iterate at each level start/end so warm starting is checkable from
    the trace alone.
    """

    records: list[TraceRecord] = field(default_factory=list)
    stop_reason: str = ""
    level_start_hashes: list[tuple[int, str]] = field(default_factory=list)
    level_end_hashes: list[tuple[int, str]] = field(default_factory=list)


@dataclass
class SolverResult:
    x_final: np.ndarray
    alpha_final: float
    j_star: int
    k_star: int
    relative_error: float | None
    trace: SolverTrace

    @property
    def stop_reason(self) -> str:
        return self.trace.stop_reason


class SolveDiverged(RuntimeError):
    """A non-finite functional value or gradient appeared mid-iteration."""

    def __init__(self, j: int, k: int, trace: SolverTrace):
        super().__init__(f"non-finite value at outer level {j}, inner step {k}")
        self.j = j
        self.k = k
        self.trace = trace


def _hash_iterate(x: np.ndarray) -> str:
    return hashlib.sha256(np.ascontiguousarray(x).tobytes()).hexdigest()


def practical_step_size(grad_norm: float, cap: float) -> float:
    """min(1/grad_norm, cap); the caller must not pass a zero gradient."""
    if not grad_norm > 0:
        raise ValueError("step size undefined for zero gradient; stop the loop instead")
    return min(1.0 / grad_norm, cap)


def _line_search_phi_min(prob: ProblemInstance, alpha: float, x, grad,
                         t_max: float, iters: int) -> float:
    """Golden-section estimate of min over t in (0, t_max] of
    Phi_alpha(J_q(J_p(x) - t grad)), tracking the best value seen."""
    e = prob.exponent
    xi = duality_map_p(x, e)

    def value(t: float) -> float:
        return phi_value(prob, alpha, duality_map_q(xi - t * grad, e))

    inv_phi = (np.sqrt(5.0) - 1.0) / 2.0
    lo, hi = 0.0, t_max
    c = hi - inv_phi * (hi - lo)
    d = lo + inv_phi * (hi - lo)
    fc, fd = value(c), value(d)
    best = min(fc, fd)
    for _ in range(iters):
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - inv_phi * (hi - lo)
            fc = value(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + inv_phi * (hi - lo)
            fd = value(d)
        best = min(best, fc, fd)
    return best


def theoretical_step_size(prob: ProblemInstance, alpha: float, x,
                          constants: TheoryConstants, state: PhiState | None = None,
                          line_search_iters: int = 60,
                          t_max_factor: float = 10.0) -> float:
    """Theoretically safe step size at the current iterate (positive)."""
    if state is None:
        state = evaluate_phi(prob, alpha, x)
    if not state.grad_norm > 0:
        raise ValueError("step size undefined for zero gradient")
    # constants are defined for alpha >= alpha*; clamp in case the schedule
    # has descended below the admissible range
    alpha_c = max(alpha, constants.alpha_star)
    t_max = t_max_factor / state.grad_norm
    phi_line = _line_search_phi_min(prob, alpha, x, state.gradient,
                                    t_max, line_search_iters)
    cbar = constants.cbar_step(alpha_c, state.phi - phi_line)
    beta = min(constants.gamma * cbar * alpha / state.grad_norm ** 2,
               0.5 / constants.M_alpha(alpha_c))
    if not beta > 0:
        raise ArithmeticError(
            "theoretical step collapsed to zero (no descent found on the dual ray)"
        )
    return beta


def dual_step(prob: ProblemInstance, alpha: float, x, beta: float) -> np.ndarray:
    """One dual gradient step J_q(J_p(x) - beta * grad Phi_alpha(x))."""
    if beta < 0:
        raise ValueError("step size must be nonnegative")
    e = prob.exponent
    grad = phi_gradient(prob, alpha, x)
    return duality_map_q(duality_map_p(x, e) - beta * grad, e)


def _advance(x, grad, beta: float, e: Exponent) -> np.ndarray:
    return duality_map_q(duality_map_p(x, e) - beta * grad, e)


def _step_size(prob, alpha, x, state, policy) -> float:
    if isinstance(policy, TheoreticalSteps):
        return theoretical_step_size(
            prob, alpha, x, policy.constants, state=state,
            line_search_iters=policy.line_search_iters,
            t_max_factor=policy.t_max_factor,
        )
    return practical_step_size(state.grad_norm, policy.cap)


def _finite_or_raise(state: PhiState, j: int, k: int, trace: SolverTrace) -> None:
    if not (np.isfinite(state.phi) and np.isfinite(state.grad_norm)
            and np.isfinite(state.residual)):
        trace.records.append(TraceRecord(j, k, np.nan, 0.0, state.phi,
                                         state.grad_norm, state.residual))
        raise SolveDiverged(j, k, trace)


def _relative_error(x, x_true) -> float | None:
    if x_true is None:
        return None
    x_true = np.asarray(x_true, dtype=float)
    return float(np.linalg.norm(x - x_true) / np.linalg.norm(x_true))


def dtigra_solve(prob: ProblemInstance, x0, cfg: DtigraConfig,
                 x_true=None) -> SolverResult:
    """Continuation dual gradient descent with discrepancy stopping.

    Runs the dual iteration at alpha_j = qbar^j * alpha0, ending each inner
    loop when the gradient norm drops to C_j (checked before every step, so
    a warm start that already satisfies it advances the outer loop at once)
    or after ``inner_max_iters`` steps.  After each level the discrepancy
    principle is tested; the sweep also ends at the outer iteration cap or
    when the schedule falls below ``alpha_floor``.

    Returns the final iterate together with the level index j*, the total
    number of executed inner steps k*, the relative l^2 error against
    ``x_true`` when given, and the full trace.  Raises :class:`SolveDiverged`
    if a non-finite value appears.
    """
    if prob.delta <= 0:
        raise ValueError("discrepancy stopping needs a positive noise level")
    x = np.asarray(x0, dtype=float).copy()
    if x.shape != (prob.n_coef,):
        raise ValueError(f"x0 has shape {x.shape}, expected ({prob.n_coef},)")
    e = prob.exponent
    trace = SolverTrace()
    alpha = cfg.alpha0
    threshold = cfg.tau * prob.delta
    j = 0
    k_total = 0
    while True:
        trace.level_start_hashes.append((j, _hash_iterate(x)))
        c_j = cfg.inner_threshold(alpha)
        k = 0
        while True:
            state = evaluate_phi(prob, alpha, x)
            _finite_or_raise(state, j, k, trace)
            if state.grad_norm <= c_j or k >= cfg.inner_max_iters:
                trace.records.append(TraceRecord(j, k, alpha, 0.0, state.phi,
                                                 state.grad_norm, state.residual))
                break
            beta = _step_size(prob, alpha, x, state, cfg.step_policy)
            trace.records.append(TraceRecord(j, k, alpha, beta, state.phi,
                                             state.grad_norm, state.residual))
            x = _advance(x, state.gradient, beta, e)
            k += 1
            k_total += 1
        trace.level_end_hashes.append((j, _hash_iterate(x)))
        if state.residual <= threshold:
            trace.stop_reason = STOP_DISCREPANCY
            break
        if j >= cfg.outer_max_iters:
            trace.stop_reason = STOP_OUTER_CAP
            break
        if cfg.qbar * alpha < cfg.alpha_floor:
            trace.stop_reason = STOP_ALPHA_FLOOR
            break
        alpha *= cfg.qbar
        j += 1
    return SolverResult(
        x_final=x,
        alpha_final=alpha,
        j_star=j,
        k_star=k_total,
        relative_error=_relative_error(x, x_true),
        trace=trace,
    )


def landweber_solve(prob: ProblemInstance, x0, tau: float,
                    beta_cap: float = 0.02, max_iters: int = 200000,
                    x_true=None) -> SolverResult:
    """Dual gradient descent with the built-in decay
    alpha_k = ||x0||_p / (2 (k + 1000)^0.99) and discrepancy stopping.

    The size factor ||x0|| uses the l^p norm of the start vector.  Stops at
    the first iterate meeting the discrepancy principle, or after
    ``max_iters`` steps with stop reason ``OuterCap``; the iteration also
    ends early if it reaches a stationary point (zero gradient) without
    meeting the discrepancy, which on sign-symmetric problems happens at the
    origin.
    """
    x = np.asarray(x0, dtype=float).copy()
    if x.shape != (prob.n_coef,):
        raise ValueError(f"x0 has shape {x.shape}, expected ({prob.n_coef},)")
    e = prob.exponent
    norm_x0 = lp_norm(x, e)
    if norm_x0 == 0.0:
        raise ValueError("the decay schedule scales by ||x0||; x0 must be nonzero")
    trace = SolverTrace()
    threshold = tau * prob.delta
    k = 0
    while True:
        alpha = norm_x0 / (2.0 * (k + 1000.0) ** 0.99)
        state = evaluate_phi(prob, alpha, x)
        _finite_or_raise(state, 0, k, trace)
        if state.residual <= threshold:
            trace.records.append(TraceRecord(0, k, alpha, 0.0, state.phi,
                                             state.grad_norm, state.residual))
            trace.stop_reason = STOP_DISCREPANCY
            break
        if k >= max_iters or state.grad_norm == 0.0:
            trace.records.append(TraceRecord(0, k, alpha, 0.0, state.phi,
                                             state.grad_norm, state.residual))
            trace.stop_reason = STOP_OUTER_CAP
            break
        beta = practical_step_size(state.grad_norm, beta_cap)
        trace.records.append(TraceRecord(0, k, alpha, beta, state.phi,
                                         state.grad_norm, state.residual))
        x = _advance(x, state.gradient, beta, e)
        k += 1
    return SolverResult(
        x_final=x,
        alpha_final=alpha,
        j_star=0,
        k_star=k,
        relative_error=_relative_error(x, x_true),
        trace=trace,
    )


def random_start(n: int, target_norm: float, e: Exponent, seed: int) -> np.ndarray:
    """Standard-normal vector rescaled to l^p norm ``target_norm`` exactly."""
    if target_norm < 0:
        raise ValueError("target norm must be nonnegative")
    if target_norm == 0.0:
        return np.zeros(n)
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n)
    return v * (target_norm / lp_norm(v, e))


# -- serialization ---------------------------------------------------------

def write_trace_csv(path, trace: SolverTrace, header_comment: str | None = None) -> None:
    """Trace as CSV rows ``j,k,alpha,beta,phi,grad_norm,residual``."""
    with open(path, "w", newline="") as fh:
        if header_comment:
            fh.write(f"# {header_comment}\n")
        writer = csv.writer(fh)
        writer.writerow(["j", "k", "alpha", "beta", "phi", "grad_norm", "residual"])
        for rec in trace.records:
            writer.writerow([rec.j, rec.k] + [f"{v:.17g}" for v in rec[2:]])


def result_to_dict(result: SolverResult, seed_metadata: dict | None = None) -> dict:
    return {
        "alpha_final": result.alpha_final,
        "j_star": result.j_star,
        "k_star": result.k_star,
        "relative_error": result.relative_error,
        "stop_reason": result.stop_reason,
        "seed_metadata": seed_metadata or {},
    }


def write_result_json(path, result: SolverResult, seed_metadata: dict | None = None) -> None:
    with open(path, "w") as fh:
        json.dump(result_to_dict(result, seed_metadata), fh, indent=2, sort_keys=True)
        fh.write("\n")
