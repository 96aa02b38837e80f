# # Spectral measure and the T = A + JB reconstruction
#
# Each eigensphere carries an orthogonal projection. Their sums over
# axially symmetric sets form a projection-valued measure, and `T` is
# rebuilt from the projections together with an anti-self-adjoint `J`.

import numpy as np

from quatspec.qspace import QOperator, adjoint, compose, operator_norm_fro, random_normal
from quatspec.spectral import AxSymSet, reconstruct, spectral_measure, tjb_decompose

T = random_normal(6, seed=7)
E = spectral_measure(T)
for a in E.atoms:
    print(f"sphere ({a.sphere.re:+.4f}, {a.sphere.rad:.4f})  rank {a.multiplicity}")

# ## Measure axioms

print(E.axiom_residuals())
upper = AxSymSet.box(0.0, np.inf)
lower = AxSymSet.box(-np.inf, 0.0)
P, Q = E(upper), E(lower)
print("||E(Re >= 0) E(Re <= 0)||_F =", operator_norm_fro(compose(P, Q)))

# ## The decomposition
#
# `A` is the self-adjoint part, `B = sum rad_k P_k`, and `J` carries the
# imaginary directions.

d = tjb_decompose(T, measure=E)
print("||J* + J||_F =", operator_norm_fro(adjoint(d.J) + d.J))
print("||A + JB - T||_F =", operator_norm_fro(d.A + compose(d.J, d.B) - T))

# Reconstruction from the measure: `sum P_k re_k + J P_k rad_k`.

rec = reconstruct(E, d.J)
print("relative reconstruction error:", operator_norm_fro(rec - T) / T.fro())
