"""Discrete functions on [0, 1]: the data space Y.

A signal is a 1-d float array of samples on the midpoint grid
t_i = (i - 1/2)/n, i = 1..n, carrying the quadrature-weighted inner product

    <u, v> = (1/n) * sum_i u_i v_i  ~  integral_0^1 u(t) v(t) dt.

Noise injection is deterministic in (signal, spec): the perturbation is
drawn from a seeded generator and rescaled so that the noise level delta is
hit exactly rather than in expectation.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

__all__ = [
    "NoiseSpec",
    "midpoint_grid",
    "l2_inner",
    "l2_norm",
    "add_noise",
    "write_signal_csv",
    "read_signal_csv",
]

RNG_NAME = "numpy.random.Generator(PCG64)"


@dataclass(frozen=True)
class NoiseSpec:
    """Relative noise level in (0, 1) and the generator seed."""

    relative_level: float
    seed: int

    def __post_init__(self) -> None:
        if not 0.0 < self.relative_level < 1.0:
            raise ValueError("relative noise level must lie in (0, 1)")


def _checked(u, name: str = "signal") -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.ndim != 1 or u.size == 0:
        raise ValueError(f"{name} must be a nonempty 1-d array")
    if not np.all(np.isfinite(u)):
        raise ValueError(f"{name} contains non-finite samples")
    return u


def midpoint_grid(n: int) -> np.ndarray:
    """Sample points t_i = (i - 1/2)/n, i = 1..n."""
    if n < 1:
        raise ValueError("grid size must be positive")
    return (np.arange(n) + 0.5) / n


def l2_inner(u, v) -> float:
    """Midpoint quadrature of the L^2(0, 1) inner product."""
    u = _checked(u, "u")
    v = _checked(v, "v")
    if u.shape != v.shape:
        raise ValueError(f"grid mismatch: {u.size} vs {v.size}")
    return float(np.dot(u, v) / u.size)


def l2_norm(u) -> float:
    """Discrete L^2 norm sqrt(<u, u>)."""
    u = _checked(u)
    return float(np.sqrt(np.dot(u, u) / u.size))


def add_noise(y, spec: NoiseSpec) -> tuple[np.ndarray, float]:
    """Perturb ``y`` to relative noise level ``spec.relative_level``.

    Draws an i.i.d. standard-normal vector e from a generator seeded with
    ``spec.seed`` and returns

        y_delta = y + (relative_level * ||y|| / ||e||) * e,
        delta   = relative_level * ||y||,

    so that ``l2_norm(y_delta - y) == delta`` up to round-off.  Raises on a
    zero input signal, for which a relative level is undefined.
    """
    y = _checked(y, "y")
    norm_y = l2_norm(y)
    if norm_y == 0.0:
        raise ValueError("cannot add relative noise to the zero signal")
    rng = np.random.default_rng(spec.seed)
    e = rng.standard_normal(y.size)
    delta = spec.relative_level * norm_y
    y_delta = y + (delta / l2_norm(e)) * e
    return y_delta, float(delta)


def write_signal_csv(path, u, header_comment: str | None = None) -> None:
    """Write a signal as CSV rows ``t,value`` in full double precision."""
    u = _checked(u)
    t = midpoint_grid(u.size)
    with open(path, "w", newline="") as fh:
        if header_comment:
            fh.write(f"# {header_comment}\n")
        writer = csv.writer(fh)
        writer.writerow(["t", "value"])
        for ti, ui in zip(t, u):
            writer.writerow([f"{ti:.17g}", f"{ui:.17g}"])


def read_signal_csv(path) -> np.ndarray:
    """Read a signal written by :func:`write_signal_csv`."""
    values = []
    with open(path, newline="") as fh:
        rows = (r for r in fh if not r.startswith("#"))
        reader = csv.reader(rows)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"empty signal CSV: {path}") from None
        if header[:2] != ["t", "value"]:
            raise ValueError(f"unexpected signal CSV header: {header}")
        try:
            for row in reader:
                values.append(float(row[1]))
        except (IndexError, ValueError) as exc:
            raise ValueError(f"corrupt signal CSV {path}: {exc}") from None
    return _checked(np.array(values), "signal file")
