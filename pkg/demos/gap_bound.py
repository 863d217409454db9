"""
A certified length for a target accuracy
=========================================

A decay certificate |g_k| <= C rho^(k-1) and a smoothness constant L give a
lower bound on ||T_n||.  Taking C from the scaled norm ||G^gamma||_inf
turns it into a gap bound that needs the two norms ||G||_inf and
||G^gamma||_inf plus |g_0|.  Minimizing over gamma and searching over n answers: how long must an
experiment be so that ||G||_inf - ||T_n|| <= eps?
"""

from toeplitz_hinf import (
    SinglePole,
    ToeplitzSection,
    hinf_norm,
    operator_norm_dense,
    optimize_gamma,
    required_length,
    theorem1_gap_bound,
)

sys = SinglePole(0.5, 1.0, 1.0)
peak = hinf_norm(sys).norm

# fixed gamma against the optimized one
fixed = theorem1_gap_bound(sys, 0.75, 10_000)
gamma, best = optimize_gamma(sys, 10_000)
print(f"gamma = 0.75:  ||G^gamma|| = {fixed.g_gamma_norm:.4f}, bound = {fixed.gap_bound:.6f}")
print(f"gamma* = {gamma:.4f}: bound = {best.gap_bound:.6f}")
print("terms:", best.breakdown.term_n2, best.breakdown.term_n3)

# the bound is loose but sound; compare with the true gap
for n in (30, 300, 2000):
    gap = peak - operator_norm_dense(ToeplitzSection.from_system(sys, n))
    print(f"n = {n:5d}   true gap = {gap:.3e}   bound = {optimize_gamma(sys, n)[1].gap_bound:.3e}")

# required length scales like eps^(-1/2)
for eps in (0.01, 0.001, 0.0005):
    print(f"eps = {eps:<7}  n = {required_length(sys, eps)}")
