# # Fuglede and Fuglede-Putnam
#
# Anything commuting with a normal `T` also commutes with its spectral
# projections, and intertwiners of normal operators also intertwine their
# adjoints.

from quatspec import verify
from quatspec.qspace import adjoint, compose, operator_norm_fro, random_normal, random_unitary
from quatspec.spectral import poly_apply, spectral_measure

T = random_normal(5, seed=3)
S = poly_apply(T, {(0, 0): 1.0, (1, 0): -0.5, (1, 1): 2.0})
print("||ST - TS||_F =", operator_norm_fro(compose(S, T) - compose(T, S)))
for a in spectral_measure(T).atoms:
    P = a.projection
    print(f"  sphere ({a.sphere.re:+.3f}, {a.sphere.rad:.3f}): ||SP - PS||_F =",
          operator_norm_fro(compose(S, P) - compose(P, S)))

V = random_unitary(5, seed=4)
T2 = compose(compose(adjoint(V), T), V)
print("||T* V - V T2*||_F =", operator_norm_fro(compose(adjoint(T), V) - compose(V, adjoint(T2))))

# ## The suites
#
# The same checks run over many seeds.  A tolerance of 1e-16 is below
# rounding level and must fail.

for report in (verify.fuglede_suite(n=6, trials=10), verify.fuglede_putnam_suite(n=6, trials=10)):
    print(report.name, "worst", report.worst, "passed", report.passed)
print("negative control passed:", verify.fuglede_suite(n=6, trials=3, tol=1e-16).passed)
