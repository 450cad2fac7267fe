"""Experiment pipeline: synthetic data bundles, solver runs, result tables.

The reference experiment reconstructs a coefficient vector that is sparse in
the Haar basis — entries {2: 3, 4: -1, 7: 0.5} at n = 2^9 = 512 — from noisy
autoconvolution data.  A *bundle* is a directory holding the true
coefficients, the true signal, clean and noisy data as CSV, plus a metadata
JSON echoing the full configuration and seeds, so every run is auditable
and reproducible byte for byte.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .operators import ComposedForward
from .seqspace import Exponent
from .signals import NoiseSpec, RNG_NAME, add_noise, read_signal_csv, write_signal_csv
from .solvers import (
    DtigraConfig,
    PracticalSteps,
    SolverResult,
    dtigra_solve,
    landweber_solve,
    random_start,
)
from .tikhonov import ProblemInstance

__all__ = [
    "ExperimentConfig",
    "Bundle",
    "default_config",
    "true_coefficient_vector",
    "generate_bundle",
    "load_bundle",
    "run_experiment",
    "table1_rows",
    "table2_rows",
    "write_table_csv",
    "TABLE1_HEADER",
    "TABLE2_HEADER",
    "SENTINEL",
]

SENTINEL = "--"

NORM_CONVENTIONS = {
    "noise_norm": "discrete L2 on the midpoint grid",
    "start_norm_space": "lp",
    "error_norm": "l2",
    "rng": RNG_NAME,
}

DEFAULT_TRUE_COEFFICIENTS = ((2, 3.0), (4, -1.0), (7, 0.5))


@dataclass(frozen=True)
class ExperimentConfig:
    """Complete description of one synthetic reconstruction experiment."""

    levels: int = 9
    p: float = 1.2
    noise_level: float = 0.01
    start_norm: float = 1.0
    seed_noise: int = 20260801
    seed_start: int = 20260802
    solver: str = "dtigra"
    true_coefficients: tuple[tuple[int, float], ...] = DEFAULT_TRUE_COEFFICIENTS
    dtigra: DtigraConfig = field(default_factory=DtigraConfig)
    landweber: dict = field(default_factory=lambda: {
        "tau": 2.0, "beta_cap": 0.02, "max_iters": 200000,
    })

    def __post_init__(self) -> None:
        if self.levels < 1:
            raise ValueError("levels must be positive")
        if self.solver not in ("dtigra", "landweber"):
            raise ValueError(f"unknown solver {self.solver!r}")
        n = self.n
        for index, _ in self.true_coefficients:
            if not 1 <= index <= n:
                raise ValueError(f"coefficient index {index} outside 1..{n}")
        Exponent(self.p)
        if not 0.0 < self.noise_level < 1.0:
            raise ValueError("noise_level must lie in (0, 1)")

    @property
    def n(self) -> int:
        return 2 ** self.levels

    def to_dict(self) -> dict:
        d = {
            "levels": self.levels,
            "p": self.p,
            "noise_level": self.noise_level,
            "start_norm": self.start_norm,
            "seed_noise": self.seed_noise,
            "seed_start": self.seed_start,
            "solver": self.solver,
            "true_coefficients": [[i, v] for i, v in self.true_coefficients],
            "dtigra": {
                "alpha0": self.dtigra.alpha0,
                "qbar": self.dtigra.qbar,
                "tau": self.dtigra.tau,
                "step_cap": self.dtigra.step_policy.cap,
                "inner_grad_factor": self.dtigra.inner_grad_factor,
                "inner_max_iters": self.dtigra.inner_max_iters,
                "outer_max_iters": self.dtigra.outer_max_iters,
                "alpha_floor": self.dtigra.alpha_floor,
            },
            "landweber": dict(self.landweber),
        }
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        base = default_config()
        dt = dict(base.to_dict()["dtigra"])
        dt.update(d.get("dtigra", {}))
        dtigra_cfg = DtigraConfig(
            alpha0=dt["alpha0"],
            qbar=dt["qbar"],
            tau=dt["tau"],
            step_policy=PracticalSteps(cap=dt["step_cap"]),
            inner_grad_factor=dt["inner_grad_factor"],
            inner_max_iters=int(dt["inner_max_iters"]),
            outer_max_iters=int(dt["outer_max_iters"]),
            alpha_floor=dt["alpha_floor"],
        )
        lw = dict(base.landweber)
        lw.update(d.get("landweber", {}))
        coeffs = tuple(
            (int(i), float(v))
            for i, v in d.get("true_coefficients", DEFAULT_TRUE_COEFFICIENTS)
        )
        return cls(
            levels=int(d.get("levels", base.levels)),
            p=float(d.get("p", base.p)),
            noise_level=float(d.get("noise_level", base.noise_level)),
            start_norm=float(d.get("start_norm", base.start_norm)),
            seed_noise=int(d.get("seed_noise", base.seed_noise)),
            seed_start=int(d.get("seed_start", base.seed_start)),
            solver=d.get("solver", base.solver),
            true_coefficients=coeffs,
            dtigra=dtigra_cfg,
            landweber=lw,
        )


def default_config() -> ExperimentConfig:
    return ExperimentConfig()


def true_coefficient_vector(n: int, pairs) -> np.ndarray:
    """Dense coefficient vector from 1-based (index, value) pairs."""
    x = np.zeros(n)
    for index, value in pairs:
        x[int(index) - 1] = float(value)
    return x


# -- coefficient CSV --------------------------------------------------------

def write_coef_csv(path, x, header_comment: str | None = None) -> None:
    """Coefficient vector as CSV rows ``index,value`` (1-based index)."""
    with open(path, "w", newline="") as fh:
        if header_comment:
            fh.write(f"# {header_comment}\n")
        writer = csv.writer(fh)
        writer.writerow(["index", "value"])
        for i, v in enumerate(np.asarray(x, dtype=float), start=1):
            writer.writerow([i, f"{v:.17g}"])


def read_coef_csv(path) -> np.ndarray:
    values = []
    with open(path, newline="") as fh:
        rows = (r for r in fh if not r.startswith("#"))
        reader = csv.reader(rows)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"empty coefficient CSV: {path}") from None
        if header[:2] != ["index", "value"]:
            raise ValueError(f"unexpected coefficient CSV header: {header}")
        try:
            for row in reader:
                values.append(float(row[1]))
        except (IndexError, ValueError) as exc:
            raise ValueError(f"corrupt coefficient CSV {path}: {exc}") from None
    arr = np.array(values)
    if arr.size == 0 or not np.all(np.isfinite(arr)):
        raise ValueError(f"corrupt coefficient file: {path}")
    return arr


# -- bundles ----------------------------------------------------------------

BUNDLE_FILES = ("metadata.json", "x_true.csv", "f_true.csv", "y.csv", "y_delta.csv")


@dataclass
class Bundle:
    config: ExperimentConfig
    x_true: np.ndarray
    f_true: np.ndarray
    y: np.ndarray
    y_delta: np.ndarray
    delta: float


def generate_bundle(cfg: ExperimentConfig, out_dir) -> dict:
    """Generate the synthetic data set for ``cfg`` and write it to ``out_dir``.

    Writes x_true.csv, f_true.csv, y.csv, y_delta.csv and metadata.json; the
    metadata echoes the configuration, the achieved absolute noise level and
    the norm conventions.  Identical configurations produce byte-identical
    files.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    forward = ComposedForward.haar_autoconvolution(cfg.levels)
    x_true = true_coefficient_vector(cfg.n, cfg.true_coefficients)
    f_true = forward.synthesis.synthesize(x_true)
    y = forward.autoconv.apply(f_true)
    y_delta, delta = add_noise(y, NoiseSpec(cfg.noise_level, cfg.seed_noise))
    echo = json.dumps(cfg.to_dict(), sort_keys=True)
    write_coef_csv(out / "x_true.csv", x_true, header_comment=f"config: {echo}")
    write_signal_csv(out / "f_true.csv", f_true, header_comment=f"config: {echo}")
    write_signal_csv(out / "y.csv", y, header_comment=f"config: {echo}")
    write_signal_csv(out / "y_delta.csv", y_delta, header_comment=f"config: {echo}")
    metadata = {
        "config": cfg.to_dict(),
        "delta": delta,
        "grid": {"levels": cfg.levels, "n": cfg.n},
        "norm_conventions": NORM_CONVENTIONS,
    }
    with open(out / "metadata.json", "w") as fh:
        json.dump(metadata, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return metadata


def load_bundle(bundle_dir) -> Bundle:
    """Read a bundle back, validating presence and consistency of all files."""
    root = Path(bundle_dir)
    missing = [name for name in BUNDLE_FILES if not (root / name).exists()]
    if missing:
        raise FileNotFoundError(f"bundle {root} is missing {missing}")
    with open(root / "metadata.json") as fh:
        metadata = json.load(fh)
    cfg = ExperimentConfig.from_dict(metadata["config"])
    x_true = read_coef_csv(root / "x_true.csv")
    f_true = read_signal_csv(root / "f_true.csv")
    y = read_signal_csv(root / "y.csv")
    y_delta = read_signal_csv(root / "y_delta.csv")
    n = cfg.n
    for name, arr in (("x_true", x_true), ("f_true", f_true),
                      ("y", y), ("y_delta", y_delta)):
        if arr.size != n:
            raise ValueError(f"{name} has {arr.size} entries, metadata says {n}")
    return Bundle(config=cfg, x_true=x_true, f_true=f_true, y=y,
                  y_delta=y_delta, delta=float(metadata["delta"]))


def run_experiment(bundle: Bundle, cfg: ExperimentConfig | None = None) -> SolverResult:
    """Run the configured solver against a bundle's noisy data."""
    cfg = bundle.config if cfg is None else cfg
    forward = ComposedForward.haar_autoconvolution(cfg.levels)
    prob = ProblemInstance(forward=forward, data=bundle.y_delta,
                           delta=bundle.delta, exponent=Exponent(cfg.p))
    x0 = random_start(cfg.n, cfg.start_norm, Exponent(cfg.p), cfg.seed_start)
    if cfg.solver == "landweber":
        lw = cfg.landweber
        return landweber_solve(prob, x0, tau=lw["tau"], beta_cap=lw["beta_cap"],
                               max_iters=int(lw["max_iters"]), x_true=bundle.x_true)
    return dtigra_solve(prob, x0, cfg.dtigra, x_true=bundle.x_true)


# -- table reproduction ------------------------------------------------------

TABLE1_HEADER = ["delta_rel", "start_norm", "p", "alpha_final", "j_star",
                 "k_star", "rel_error"]
TABLE2_HEADER = ["delta_rel", "start_norm", "p", "alpha_final", "k_star",
                 "rel_error"]

TABLE_NOISE_LEVELS = (0.05, 0.01, 0.005)
TABLE1_START_NORMS = (1.0, 500.0, 1000.0, 10000.0)
TABLE2_START_NORMS = (1.0, 500.0, 1000.0)
TABLE_EXPONENTS = (1.2, 1.6)


def _cell_config(base: ExperimentConfig, noise: float, start_norm: float,
                 p: float, solver: str, cell_index: int) -> ExperimentConfig:
    d = base.to_dict()
    d.update({
        "noise_level": noise,
        "start_norm": start_norm,
        "p": p,
        "solver": solver,
        "seed_noise": base.seed_noise + 97 * cell_index,
        "seed_start": base.seed_start + 89 * cell_index,
    })
    return ExperimentConfig.from_dict(d)


def _run_cell(cfg: ExperimentConfig) -> SolverResult:
    forward = ComposedForward.haar_autoconvolution(cfg.levels)
    x_true = true_coefficient_vector(cfg.n, cfg.true_coefficients)
    y = forward.apply(x_true)
    y_delta, delta = add_noise(y, NoiseSpec(cfg.noise_level, cfg.seed_noise))
    bundle = Bundle(config=cfg, x_true=x_true,
                    f_true=forward.synthesis.synthesize(x_true),
                    y=y, y_delta=y_delta, delta=delta)
    return run_experiment(bundle)


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def table1_rows(base: ExperimentConfig | None = None, progress=None) -> list[list[str]]:
    """Continuation-solver grid over noise level, start norm and exponent."""
    base = base or default_config()
    rows = []
    idx = 0
    for p in TABLE_EXPONENTS:
        for noise in TABLE_NOISE_LEVELS:
            for start_norm in TABLE1_START_NORMS:
                cfg = _cell_config(base, noise, start_norm, p, "dtigra", idx)
                idx += 1
                result = _run_cell(cfg)
                head = [_fmt(noise), _fmt(start_norm), _fmt(p)]
                if result.stop_reason == "Discrepancy":
                    rows.append(head + [_fmt(result.alpha_final),
                                        str(result.j_star), str(result.k_star),
                                        _fmt(result.relative_error)])
                else:
                    rows.append(head + [SENTINEL] * 4)
                if progress:
                    progress(rows[-1])
    return rows


def table2_rows(base: ExperimentConfig | None = None, progress=None) -> list[list[str]]:
    """Baseline-solver grid; cells that never meet the discrepancy emit the
    sentinel, matching how failed runs are reported."""
    base = base or default_config()
    rows = []
    idx = 1000
    for p in TABLE_EXPONENTS:
        for noise in TABLE_NOISE_LEVELS:
            for start_norm in TABLE2_START_NORMS:
                cfg = _cell_config(base, noise, start_norm, p, "landweber", idx)
                idx += 1
                result = _run_cell(cfg)
                head = [_fmt(noise), _fmt(start_norm), _fmt(p)]
                if result.stop_reason == "Discrepancy":
                    rows.append(head + [_fmt(result.alpha_final),
                                        str(result.k_star),
                                        _fmt(result.relative_error)])
                else:
                    rows.append(head + [SENTINEL] * 3)
                if progress:
                    progress(rows[-1])
    return rows


def write_table_csv(path, header: list[str], rows: list[list[str]],
                    header_comment: str | None = None) -> None:
    with open(path, "w", newline="") as fh:
        if header_comment:
            fh.write(f"# {header_comment}\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
