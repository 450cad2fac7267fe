import json

import numpy as np
import pytest

from dtigra.cli import main


def write_small_config(tmp_path, **overrides):
    d = {"levels": 5, "p": 1.6, "noise_level": 0.05,
         "seed_noise": 7, "seed_start": 8}
    d.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(d))
    return path


class TestGenerate:
    def test_writes_bundle(self, tmp_path, capsys):
        cfg = write_small_config(tmp_path)
        rc = main(["generate", "--config", str(cfg),
                   "--out", str(tmp_path / "bundle")])
        assert rc == 0
        for name in ("metadata.json", "x_true.csv", "f_true.csv", "y.csv",
                     "y_delta.csv"):
            assert (tmp_path / "bundle" / name).exists()
        out = json.loads(capsys.readouterr().out)
        assert out["delta"] > 0

    def test_flag_overrides(self, tmp_path):
        cfg = write_small_config(tmp_path)
        main(["generate", "--config", str(cfg), "--noise", "0.01",
              "--out", str(tmp_path / "bundle")])
        meta = json.loads((tmp_path / "bundle" / "metadata.json").read_text())
        assert meta["config"]["noise_level"] == 0.01

    def test_rerun_byte_identical(self, tmp_path):
        cfg = write_small_config(tmp_path)
        main(["generate", "--config", str(cfg), "--out", str(tmp_path / "a")])
        main(["generate", "--config", str(cfg), "--out", str(tmp_path / "b")])
        assert (tmp_path / "a" / "y_delta.csv").read_bytes() == \
            (tmp_path / "b" / "y_delta.csv").read_bytes()


class TestSolve:
    def test_discrepancy_run_exits_zero(self, tmp_path, capsys):
        cfg = write_small_config(tmp_path)
        main(["generate", "--config", str(cfg), "--out", str(tmp_path / "bundle")])
        rc = main(["solve", "--config", str(cfg),
                   "--bundle", str(tmp_path / "bundle"),
                   "--out", str(tmp_path / "run")])
        assert rc == 0
        result = json.loads((tmp_path / "run" / "result.json").read_text())
        assert result["stop_reason"] == "Discrepancy"
        assert set(result) == {"alpha_final", "j_star", "k_star",
                               "relative_error", "stop_reason", "seed_metadata"}
        trace = (tmp_path / "run" / "trace.csv").read_text().splitlines()
        assert trace[1] == "j,k,alpha,beta,phi,grad_norm,residual"
        assert (tmp_path / "run" / "x_final.csv").exists()
        assert (tmp_path / "run" / "f_final.csv").exists()
        lines = capsys.readouterr().out.strip().splitlines()
        summary = json.loads(lines[-1])
        assert summary["stop_reason"] == "Discrepancy"

    def test_safeguard_stop_exits_two(self, tmp_path):
        cfg = write_small_config(tmp_path, noise_level=0.005,
                                 dtigra={"outer_max_iters": 3})
        main(["generate", "--config", str(cfg), "--out", str(tmp_path / "bundle")])
        rc = main(["solve", "--config", str(cfg),
                   "--bundle", str(tmp_path / "bundle"),
                   "--out", str(tmp_path / "run")])
        assert rc == 2
        result = json.loads((tmp_path / "run" / "result.json").read_text())
        assert result["stop_reason"] == "OuterCap"

    def test_corrupt_bundle_exits_one_without_outputs(self, tmp_path, capsys):
        cfg = write_small_config(tmp_path)
        main(["generate", "--config", str(cfg), "--out", str(tmp_path / "bundle")])
        (tmp_path / "bundle" / "y_delta.csv").unlink()
        rc = main(["solve", "--bundle", str(tmp_path / "bundle"),
                   "--out", str(tmp_path / "run")])
        assert rc == 1
        assert "error" in capsys.readouterr().err
        assert not (tmp_path / "run").exists()

    def test_landweber_solver_flag(self, tmp_path):
        cfg = write_small_config(tmp_path)
        main(["generate", "--config", str(cfg), "--out", str(tmp_path / "bundle")])
        rc = main(["solve", "--config", str(cfg), "--solver", "landweber",
                   "--bundle", str(tmp_path / "bundle"),
                   "--out", str(tmp_path / "run")])
        assert rc in (0, 2)
        trace = (tmp_path / "run" / "trace.csv").read_text().splitlines()
        assert trace[1] == "j,k,alpha,beta,phi,grad_norm,residual"

    @pytest.mark.slow
    def test_landweber_huge_start_exits_two(self, tmp_path):
        # at ||x0|| = 1e4 the baseline collapses into the stationary point
        # at the origin and never meets the discrepancy: safeguard exit code
        cfg = write_small_config(tmp_path, levels=9, p=1.2,
                                 start_norm=1e4, solver="landweber")
        main(["generate", "--config", str(cfg), "--out", str(tmp_path / "bundle")])
        rc = main(["solve", "--config", str(cfg),
                   "--bundle", str(tmp_path / "bundle"),
                   "--out", str(tmp_path / "run")])
        assert rc == 2
        result = json.loads((tmp_path / "run" / "result.json").read_text())
        assert result["stop_reason"] == "OuterCap"


class TestConstants:
    def test_evaluates_closed_forms(self, tmp_path, capsys):
        params = {"c": 1.0, "L": 1.0, "s": 3.0, "varrho": 0.1, "delta": 0.01,
                  "p": 1.5, "A": 1.0, "K": 1.0, "alpha0": 10.0, "qbar": 0.7,
                  "alpha": 1.0}
        path = tmp_path / "params.json"
        path.write_text(json.dumps(params))
        rc = main(["constants", "--params", str(path)])
        assert rc == 0
        values = json.loads(capsys.readouterr().out)
        assert values["alpha_star"] == pytest.approx(0.1, rel=1e-12)
        assert values["gamma"] == pytest.approx(0.35, rel=1e-12)
        assert values["qbar0"] == pytest.approx(0.6 / 1.3, rel=1e-12)
        assert values["tau"] == pytest.approx(2 + 2 / 0.7, rel=1e-12)
        assert values["r_alpha"] > 0 and values["M_alpha"] > 0

    def test_accepts_problem_level_inputs(self, tmp_path, capsys):
        params = {"c": 1.0, "L": 2.0, "s": 3.0, "varrho": 0.1, "delta": 0.01,
                  "p": 1.5, "misfit_at_zero": 3.0, "alpha0": 10.0, "qbar": 0.7}
        path = tmp_path / "params.json"
        path.write_text(json.dumps(params))
        rc = main(["constants", "--params", str(path), "--alpha", "2.0"])
        assert rc == 0
        values = json.loads(capsys.readouterr().out)
        assert values["alpha"] == 2.0
        assert values["K"] == pytest.approx(2.0 * values["A"], rel=1e-12)

    def test_missing_key_exits_one(self, tmp_path, capsys):
        path = tmp_path / "params.json"
        path.write_text(json.dumps({"c": 1.0}))
        rc = main(["constants", "--params", str(path)])
        assert rc == 1
        assert "error" in capsys.readouterr().err


@pytest.mark.slow
class TestReproduceTables:
    def test_small_grid_runs(self, tmp_path):
        # shrink the problem so the full sweep stays fast; the landweber cap
        # is lowered to exercise the sentinel path
        cfg = write_small_config(tmp_path, levels=5)
        rc = main(["reproduce-tables", "--config", str(cfg),
                   "--out", str(tmp_path / "tables"),
                   "--max-landweber-iters", "2000"])
        assert rc == 0
        t1 = (tmp_path / "tables" / "table1.csv").read_text().splitlines()
        assert t1[1] == "delta_rel,start_norm,p,alpha_final,j_star,k_star,rel_error"
        assert len(t1) == 2 + 24        # comment + header + 24 cells
        t2 = (tmp_path / "tables" / "table2.csv").read_text().splitlines()
        assert t2[1] == "delta_rel,start_norm,p,alpha_final,k_star,rel_error"
        assert len(t2) == 2 + 18
