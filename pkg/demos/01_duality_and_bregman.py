"""Tour of the sequence-space toolkit: norms, duality maps, Bregman distances.

The solvers in this package do gradient descent in the dual space: instead of
updating x directly, they update its image xi = J_p(x) and map back through
J_q.  This script shows the objects that make that well defined.
"""

import numpy as np

from dtigra import (
    Exponent,
    bregman_fp,
    bregman_fq_dual,
    duality_map_p,
    duality_map_q,
    fp_value,
    lp_norm,
)

rng = np.random.default_rng(0)

e = Exponent(1.2)
print(f"exponent p = {e.p}, conjugate q = {e.q:.4f}")

x = np.array([3.0, -1.0, 0.5])
print(f"\nx = {x}")
print(f"  ||x||_p   = {lp_norm(x, e):.12f}")
print(f"  f_p(x)    = {fp_value(x, e):.12f}   (penalty = ||x||_p^p / p)")

xi = duality_map_p(x, e)
print(f"\nJ_p(x)      = {np.array2string(xi, precision=6)}")
print(f"J_q(J_p(x)) = {np.array2string(duality_map_q(xi, e), precision=6)}"
      "   (exact inverse)")

# the Bregman distance measures progress in the analysis; it is asymmetric
# and can be evaluated on either side of the duality
z = rng.standard_normal(3)
d_primal = bregman_fp(z, x, e)
d_dual = bregman_fq_dual(duality_map_p(x, e), duality_map_p(z, e), e)
print(f"\nz = {np.array2string(z, precision=4)}")
print(f"  D_fp(z, x)                 = {d_primal:.12f}")
print(f"  D_fq(J_p(x), J_p(z))       = {d_dual:.12f}   (same number)")
print(f"  D_fp(x, z)                 = {bregman_fp(x, z, e):.12f}"
      "   (asymmetric)")

# p = 2 collapses everything to the familiar Euclidean picture
e2 = Exponent(2.0)
print(f"\np = 2: D_fp(z, x) = {bregman_fp(z, x, e2):.12f}"
      f" vs ||z - x||^2/2 = {0.5 * float(np.sum((z - x) ** 2)):.12f}")
