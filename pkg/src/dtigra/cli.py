"""Command-line front end.

Subcommands:

* ``generate``         — write a synthetic data bundle to disk
* ``solve``            — run a solver against a bundle, write result + trace
* ``constants``        — evaluate every analysis constant for given parameters
* ``reproduce-tables`` — sweep the benchmark grids into two CSV tables

``solve`` exits 0 when the run stopped by the discrepancy principle and 2
when a safeguard (iteration cap / alpha floor) ended it; other failures
exit 1 with a diagnostic on stderr and write no partial outputs.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .experiment import (
    ExperimentConfig,
    TABLE1_HEADER,
    TABLE2_HEADER,
    default_config,
    generate_bundle,
    load_bundle,
    run_experiment,
    table1_rows,
    table2_rows,
    write_coef_csv,
    write_table_csv,
)
from .signals import write_signal_csv
from .operators import ComposedForward
from .solvers import SolveDiverged, write_result_json, write_trace_csv
from .theory import TheoryConstants, params_from_problem, AssumptionParams

__all__ = ["main", "entry"]


def _load_config(args) -> ExperimentConfig:
    if getattr(args, "config", None):
        with open(args.config) as fh:
            cfg = ExperimentConfig.from_dict(json.load(fh))
    else:
        cfg = default_config()
    overrides = {}
    for attr, key in (("p", "p"), ("noise", "noise_level"),
                      ("start_norm", "start_norm"), ("seed_noise", "seed_noise"),
                      ("seed_start", "seed_start"), ("solver", "solver")):
        value = getattr(args, attr, None)
        if value is not None:
            overrides[key] = value
    if overrides:
        d = cfg.to_dict()
        d.update(overrides)
        cfg = ExperimentConfig.from_dict(d)
    return cfg


def cmd_generate(args) -> int:
    cfg = _load_config(args)
    metadata = generate_bundle(cfg, args.out)
    print(json.dumps({"out": str(args.out), "delta": metadata["delta"]},
                     sort_keys=True))
    return 0


def cmd_solve(args) -> int:
    cfg_override = _load_config(args) if (args.config or args.p or args.noise
                                          or args.start_norm or args.seed_noise
                                          or args.seed_start or args.solver) else None
    try:
        bundle = load_bundle(args.bundle)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: cannot load bundle: {exc}", file=sys.stderr)
        return 1
    cfg = bundle.config if cfg_override is None else cfg_override
    try:
        result = run_experiment(bundle, cfg)
    except SolveDiverged as exc:
        print(f"error: solver diverged: {exc}", file=sys.stderr)
        return 1
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    echo = json.dumps(cfg.to_dict(), sort_keys=True)
    seed_metadata = {
        "seed_noise": cfg.seed_noise,
        "seed_start": cfg.seed_start,
        "start_norm": cfg.start_norm,
        "start_norm_space": "lp",
        "error_norm": "l2",
    }
    write_result_json(out / "result.json", result, seed_metadata)
    write_trace_csv(out / "trace.csv", result.trace, header_comment=f"config: {echo}")
    write_coef_csv(out / "x_final.csv", result.x_final, header_comment=f"config: {echo}")
    forward = ComposedForward.haar_autoconvolution(cfg.levels)
    write_signal_csv(out / "f_final.csv",
                     forward.synthesis.synthesize(result.x_final),
                     header_comment=f"config: {echo}")
    print(json.dumps({
        "stop_reason": result.stop_reason,
        "alpha_final": result.alpha_final,
        "j_star": result.j_star,
        "k_star": result.k_star,
        "relative_error": result.relative_error,
    }, sort_keys=True))
    return 0 if result.stop_reason == "Discrepancy" else 2


def _params_from_json(d: dict) -> AssumptionParams:
    if "A" in d and "K" in d:
        return AssumptionParams(c=d["c"], L=d["L"], s=d["s"], varrho=d["varrho"],
                                delta=d["delta"], K=d["K"], A=d["A"], p=d["p"])
    return params_from_problem(
        c=d["c"], L=d["L"], s=d["s"], varrho=d["varrho"], delta=d["delta"],
        p=d["p"], misfit_at_zero=d["misfit_at_zero"],
        deriv_norm_at_zero=d.get("deriv_norm_at_zero", 0.0),
    )


def cmd_constants(args) -> int:
    try:
        with open(args.params) as fh:
            raw = json.load(fh)
        params = _params_from_json(raw)
        constants = TheoryConstants(params, alpha0=raw["alpha0"], qbar=raw["qbar"])
        alpha = args.alpha if args.alpha is not None else raw.get("alpha")
        values = constants.as_dict(alpha)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(json.dumps(values, indent=2, sort_keys=True))
    return 0


def cmd_reproduce_tables(args) -> int:
    base = default_config()
    if args.config:
        with open(args.config) as fh:
            base = ExperimentConfig.from_dict(json.load(fh))
    if args.max_landweber_iters is not None:
        d = base.to_dict()
        d["landweber"]["max_iters"] = args.max_landweber_iters
        base = ExperimentConfig.from_dict(d)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    echo = json.dumps(base.to_dict(), sort_keys=True)

    def progress(row):
        print(",".join(row), flush=True)

    if args.table in ("1", "both"):
        rows = table1_rows(base, progress=progress)
        write_table_csv(out / "table1.csv", TABLE1_HEADER, rows,
                        header_comment=f"config: {echo}")
    if args.table in ("2", "both"):
        rows = table2_rows(base, progress=progress)
        write_table_csv(out / "table2.csv", TABLE2_HEADER, rows,
                        header_comment=f"config: {echo}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dtigra",
        description="Sparse Tikhonov reconstruction via dual gradient continuation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="experiment config JSON")
        p.add_argument("--p", type=float, help="penalty exponent in (1, 2]")
        p.add_argument("--noise", type=float, help="relative noise level")
        p.add_argument("--start-norm", dest="start_norm", type=float,
                       help="lp norm of the random start vector")
        p.add_argument("--seed-noise", dest="seed_noise", type=int)
        p.add_argument("--seed-start", dest="seed_start", type=int)
        p.add_argument("--solver", choices=["dtigra", "landweber"])

    gen = sub.add_parser("generate", help="write a synthetic data bundle")
    add_common(gen)
    gen.add_argument("--out", required=True, help="bundle directory")
    gen.set_defaults(func=cmd_generate)

    solve = sub.add_parser("solve", help="run a solver against a bundle")
    add_common(solve)
    solve.add_argument("--bundle", required=True, help="bundle directory")
    solve.add_argument("--out", required=True, help="result directory")
    solve.set_defaults(func=cmd_solve)

    consts = sub.add_parser("constants", help="evaluate the analysis constants")
    consts.add_argument("--params", required=True, help="parameter JSON")
    consts.add_argument("--alpha", type=float, help="evaluation point")
    consts.set_defaults(func=cmd_constants)

    tables = sub.add_parser("reproduce-tables", help="sweep the benchmark grids")
    tables.add_argument("--config", help="master experiment config JSON")
    tables.add_argument("--out", required=True, help="output directory")
    tables.add_argument("--table", choices=["1", "2", "both"], default="both")
    tables.add_argument("--max-landweber-iters", type=int, default=None)
    tables.set_defaults(func=cmd_reproduce_tables)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


def entry() -> None:
    sys.exit(main())
