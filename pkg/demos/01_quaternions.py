# # Quaternions, spheres and slices
#
# Quaternions multiply non-commutatively. The conjugacy class of a
# quaternion is a 2-sphere, and every choice of imaginary unit picks out a
# copy of the complex plane.

import numpy as np

from quatspec.quaternion import I, J, K, ONE, Quaternion, complete_frame, conjugacy_class, conjugate_by, conjugator, inv

# ## The multiplication table

print("ij =", I * J, "  ji =", J * I)
print("(1+i)(1+j) =", (ONE + I) * (ONE + J))

# ## Conjugacy classes
#
# `s q s^-1` keeps the real part and the length of the imaginary part, so
# the class of `q` is the sphere `Re q + |Im q| S`.

q = Quaternion(1.0, 2.0, 0.0, 0.0)
rng = np.random.default_rng(0)
for _ in range(3):
    s = Quaternion(*rng.standard_normal(4))
    p = conjugate_by(q, s)
    print(p, "->", conjugacy_class(p))

# ## Frames
#
# A frame `(i, j, k = ij)` starts from any unit imaginary and is completed
# deterministically.

u = Quaternion(0.0, 1.0, 1.0, 0.0) / np.sqrt(2.0)
f = complete_frame(u)
print("frame:", f.i, f.j, f.k)
print("ij + ji =", f.i * f.j + f.j * f.i)

# The conjugator rotates one slice onto another.

s = conjugator(I, f.i)
print("s^-1 i s =", inv(s) * I * s)
