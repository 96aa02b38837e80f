# # Spherical spectrum of a normal operator
#
# A normal quaternionic matrix `T` is embedded as a 2n x 2n complex matrix
# `chi(T)`. Its eigenvalues come in conjugate pairs, and each pair marks
# one eigensphere of `T`.

import numpy as np

from quatspec.eig import eig_normal
from quatspec.qspace import random_normal
from quatspec.slices import chi
from quatspec.spectral import q_residual, spherical_spectrum

T = random_normal(4, seed=1, profile="clustered")
M = chi(T)
print("chi(T) shape:", M.shape)

# The Jacobi-based solver diagonalises `chi(T)`.

dec = eig_normal(M)
print("eigenvalues of chi(T):")
print(np.round(dec.lambdas, 6))
print("residual ||MU - U diag||_F:", dec.residual(M))

# Grouping conjugate pairs gives spheres `(re, rad)` with quaternionic
# multiplicities that add up to `n`.

sp = spherical_spectrum(T)
for sphere, mult in sp:
    print(f"  sphere re={sphere.re:+.6f} rad={sphere.rad:.6f}  multiplicity {mult}")

# ## Cross-check with Q_q
#
# `Q_q(T) = T^2 - 2 Re(q) T + |q|^2` is singular exactly on the spectrum.

from quatspec.quaternion import Quaternion

sphere, _ = next(iter(sp))
direction = Quaternion(0.0, 0.6, 0.0, 0.8)
print("on the sphere: ", q_residual(T, sphere.point(direction)))
print("off the sphere:", q_residual(T, Quaternion(sphere.re + 0.5, 0.3)))
