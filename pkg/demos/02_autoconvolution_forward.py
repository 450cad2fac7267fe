"""The forward-operator stack: autoconvolution composed with Haar synthesis.

Builds the n = 512 benchmark problem, checks the operator calculus that the
solvers rely on (exact adjoints, exact quadratic expansion), and writes the
true signal and data to CSV for plotting.
"""

import pathlib
import tempfile

import numpy as np

from dtigra import ComposedForward, NoiseSpec, add_noise, l2_inner, l2_norm
from dtigra.experiment import true_coefficient_vector
from dtigra.signals import write_signal_csv

rng = np.random.default_rng(1)

forward = ComposedForward.haar_autoconvolution(levels=9)
n = forward.n_grid
print(f"grid size n = {n} (2^9), coefficient count = {forward.n_coef}")

# the benchmark solution: three nonzero Haar coefficients
x_true = true_coefficient_vector(n, [(2, 3.0), (4, -1.0), (7, 0.5)])
f_true = forward.synthesis.synthesize(x_true)
y = forward.autoconv.apply(f_true)
print(f"||f_true||_L2 = {l2_norm(f_true):.6f}, ||y||_L2 = {l2_norm(y):.6f}")

# exact quadratic expansion: G(f + h) = G(f) + G'(f)h + G(h) on the grid
h = rng.standard_normal(n)
lhs = forward.autoconv.apply(f_true + h)
rhs = (forward.autoconv.apply(f_true) + forward.autoconv.deriv(f_true, h)
       + forward.autoconv.apply(h))
print(f"quadratic expansion defect: {np.max(np.abs(lhs - rhs)):.2e}")

# the adjoint is the exact transpose of the implemented derivative
x, hx = rng.standard_normal((2, n))
w = rng.standard_normal(n)
lhs = l2_inner(forward.deriv(x, hx), w)
rhs = float(np.dot(hx, forward.adjoint_deriv(x, w)))
print(f"adjoint identity defect:   {abs(lhs - rhs):.2e}")

# sign ambiguity of the quadratic operator: -f solves the same equation
print(f"||F(x) - F(-x)||:          "
      f"{l2_norm(forward.apply(x_true) - forward.apply(-x_true)):.2e}")

# noisy data at 1% relative level; the level is hit exactly by construction
y_delta, delta = add_noise(y, NoiseSpec(relative_level=0.01, seed=42))
print(f"delta = {delta:.6f}, achieved ||y_delta - y|| = "
      f"{l2_norm(y_delta - y):.6f}")

out = pathlib.Path(tempfile.mkdtemp(prefix="autoconv_demo_"))
write_signal_csv(out / "f_true.csv", f_true)
write_signal_csv(out / "y.csv", y)
write_signal_csv(out / "y_delta.csv", y_delta)
print(f"\nwrote f_true.csv, y.csv, y_delta.csv to {out}")
