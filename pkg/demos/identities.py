"""
Checks behind the lower bound
==============================

The lower bound on ||T_n|| rests on facts that are easy to check
numerically.  Below: the Widom decomposition of a product of Toeplitz
sections, then the L2 bound for (1 + z + ... + z^m)^t, then the tridiagonal
eigenvalue bound for the pair symbol.  The same checks run
from the command line with ``toeplitz-hinf verify``.
"""

import numpy as np

from toeplitz_hinf import ToeplitzSection, operator_norm_dense, tridiag_lambda_max
from toeplitz_hinf.toeplitz import trig_poly, trig_poly_l2_check, widom_terms
from toeplitz_hinf.verify import run_checks

# Widom: T_n(a) T_n(b) = T_n(ab) - P H(a) H(b~) P - W H(a~) H(b) W
rng = np.random.default_rng(0)
a, b = rng.standard_normal(4), rng.standard_normal(3)
t = widom_terms(a, b, 6, a_offset=2, b_offset=1)
print("Widom residual:", np.max(np.abs(t["lhs"] - (t["product"] - t["p_term"] - t["w_term"]))))

# (1 + z + z^2)^2 and its norm bound
print("\ncoefficients of p_2^2:", trig_poly(2, 2).coeffs)
for m, t_ in ((1, 1), (4, 3), (16, 16)):
    exact, lower = trig_poly_l2_check(m, t_, log=True)
    print(f"m = {m:2d}, t = {t_:2d}   log exact = {exact:9.4f}   log lower = {lower:9.4f}")

# ||T_n([1, 1])||^2 never exceeds the top eigenvalue of the tridiagonal K
for n in (4, 16, 64):
    sq = operator_norm_dense(ToeplitzSection([1.0, 1.0], n)) ** 2
    print(f"n = {n:3d}   ||T_n||^2 = {sq:.10f}   lambda_max(K) = {tridiag_lambda_max(1, 1, n):.10f}")

print()
for check in run_checks():
    print(check.line())
