"""
Toeplitz length vs FIR identification
======================================

For G(z) = a + a z^-1 the finite-section gap is 2a(1 - cos(pi/(2n+1))),
so reaching an additive accuracy eps needs n growing like sqrt(a/eps).
Least-squares identification of the two coefficients has an error that
does not depend on a at all: with noise sigma it falls like sigma/sqrt(T).
"""

import io

from toeplitz_hinf import Fir, QueryOracle, fir_least_squares, gap_experiment
from toeplitz_hinf.protocols import write_gap_csv

rows = gap_experiment([1.0, 10.0, 100.0], eps=0.1, sigma=0.1, seed=0)
buf = io.StringIO()
write_gap_csv(rows, buf)
print(buf.getvalue())

# error of the identified filter against the number of trials
for trials in (1, 16, 256, 4096):
    est = fir_least_squares(QueryOracle(Fir((100.0, 100.0)), 2, 0.1, 0), trials)
    print(f"T = {trials:5d}   g_hat = ({est.g0_hat:.4f}, {est.g1_hat:.4f})   "
          f"|dg0| + |dg1| = {est.hinf_err_bound:.2e}")
