"""
Finite models of a spectral element
===================================

An element with atoms (alpha_i, mu_i) is rounded down to the grid 1/n and
realized as an n x n diagonal matrix. The errors shrink like m||X||/n.
"""

import numpy as np

from selfcomm import SpectralElement, approx_error, discretize, error_bounds, pipeline, quantize

X = SpectralElement.from_atoms([(-7 / 3, 0.3), (1.0, 0.7)])
print("trace", X.trace, "norm", X.norm)

ap = quantize(X, 4)
print("counts", ap.counts, "H diagonal", ap.h_diag)

# error against the a priori bounds as n grows
for n in (2, 8, 32, 128, 512):
    dq, d = approx_error(X, quantize(X, n))
    bq, bd = error_bounds(X, n)
    print(f"n={n:4d}  dq={dq:.2e} <= {bq:.2e}   d={d:.3f} <= {bd:.3f}")

# each finite model is itself split as A_n - B_n
for step in pipeline(X, [4, 16, 64]):
    r = step.report
    print(f"n={r.n:3d}  d(X, A_n - B_n)={r.d_output:.3f}  max norm {r.max_norm:.3f} <= {r.norm_budget:.3f}")

# an empirical distribution can be turned into atoms first
samples = np.random.default_rng(1).normal(size=10_000)
E = discretize(samples - samples.mean(), 8)
print("discretized atoms:", [(round(a, 3), w) for a, w in E.atoms])
