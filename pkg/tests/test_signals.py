import numpy as np
import pytest

from dtigra.signals import (
    NoiseSpec,
    add_noise,
    l2_inner,
    l2_norm,
    midpoint_grid,
    read_signal_csv,
    write_signal_csv,
)

RNG = np.random.default_rng(11)


class TestInnerProduct:
    def test_constant_one(self):
        u = np.ones(37)
        assert l2_inner(u, u) == pytest.approx(1.0, rel=1e-15)

    def test_orthogonal_pair(self):
        assert l2_inner([1.0, -1.0], [1.0, 1.0]) == 0.0

    def test_midpoint_quadrature_of_t_squared(self):
        # int_0^1 t^2 dt = 1/3; midpoint rule error is O(n^-2)
        t = midpoint_grid(512)
        assert l2_inner(t, t) == pytest.approx(1.0 / 3.0, abs=1e-5)

    def test_symmetric_bilinear(self):
        for _ in range(20):
            u, v, w = RNG.standard_normal((3, 32))
            a, b = RNG.standard_normal(2)
            assert l2_inner(u, v) == pytest.approx(l2_inner(v, u), rel=1e-12)
            assert l2_inner(a * u + b * w, v) == pytest.approx(
                a * l2_inner(u, v) + b * l2_inner(w, v), rel=1e-12, abs=1e-14)

    def test_grid_mismatch(self):
        with pytest.raises(ValueError):
            l2_inner(np.ones(4), np.ones(8))


class TestNorm:
    def test_zero(self):
        assert l2_norm(np.zeros(5)) == 0.0

    def test_constant(self):
        assert l2_norm(np.ones(16)) == pytest.approx(1.0, rel=1e-15)

    def test_sine(self):
        # ||sqrt(2) sin(2 pi t)||_{L2} = 1
        t = midpoint_grid(512)
        assert l2_norm(np.sqrt(2.0) * np.sin(2 * np.pi * t)) == pytest.approx(
            1.0, abs=1e-4)


class TestAddNoise:
    def test_level_hit_exactly(self):
        y = RNG.standard_normal(64) + 2.0
        for level in (0.05, 0.01, 0.005):
            y_delta, delta = add_noise(y, NoiseSpec(level, seed=42))
            assert delta == pytest.approx(level * l2_norm(y), rel=1e-15)
            assert l2_norm(y_delta - y) / l2_norm(y) == pytest.approx(
                level, rel=1e-12)

    def test_small_level_stays_close(self):
        y = np.ones(32)
        y_delta, delta = add_noise(y, NoiseSpec(1e-9, seed=3))
        assert delta == pytest.approx(1e-9, rel=1e-12)
        assert np.max(np.abs(y_delta - y)) < 1e-7

    def test_deterministic(self):
        y = RNG.standard_normal(128)
        a, da = add_noise(y, NoiseSpec(0.01, seed=42))
        b, db = add_noise(y, NoiseSpec(0.01, seed=42))
        assert da == db
        np.testing.assert_array_equal(a, b)

    def test_seed_changes_realization(self):
        y = RNG.standard_normal(128)
        a, _ = add_noise(y, NoiseSpec(0.01, seed=1))
        b, _ = add_noise(y, NoiseSpec(0.01, seed=2))
        assert np.max(np.abs(a - b)) > 0

    def test_zero_signal_rejected(self):
        with pytest.raises(ValueError):
            add_noise(np.zeros(8), NoiseSpec(0.01, seed=0))

    def test_bad_level_rejected(self):
        with pytest.raises(ValueError):
            NoiseSpec(0.0, seed=0)
        with pytest.raises(ValueError):
            NoiseSpec(1.5, seed=0)


class TestCsv:
    def test_roundtrip(self, tmp_path):
        u = RNG.standard_normal(32)
        path = tmp_path / "sig.csv"
        write_signal_csv(path, u, header_comment="config: {}")
        back = read_signal_csv(path)
        np.testing.assert_array_equal(back, u)

    def test_header_checked(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1,2\n")
        with pytest.raises(ValueError):
            read_signal_csv(path)
