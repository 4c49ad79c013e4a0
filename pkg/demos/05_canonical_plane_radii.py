"""Averaging radii in the canonical plane vs detected Lienard-plane cycles.

For dx = y, dy = -x - mu p(x) y with small mu, cycles hug circles whose radii
solve Phi(r) = 0, the one-turn average of the perturbation against cos.  The
quintic perturbation p(x) = -4 + 75x^2 - 50kx^4 has closed-form radii; the
quadrature reproduces them to machine precision, and as mu shrinks the
detected inner-cycle amplitude converges onto the first radius.
"""

import math

from lienard_lab import (FunctionModel, LienardSystem, PhiProblem, Segment,
                         canonical_to_lienard, find_limit_cycles, phi,
                         phi_roots, quintic_radii)

k = 3.0
problem = PhiProblem((-4.0, 0.0, 75.0, 0.0, -50.0 * k), mu=0.1,
                     r_range=(0.3, 1.0))
r1, r2, disc = quintic_radii(k)
roots = phi_roots(problem, 200)
print(f"k={k}: closed-form radii r1={r1:.12f} r2={r2:.12f}")
print(f"       quadrature roots  {roots.roots[0]:.12f} {roots.roots[1]:.12f}")
closed = -0.25 * math.pi * 0.5 * (25 * k * 0.5 ** 4 - 75 * 0.5 ** 2 + 16)
print(f"Phi(0.5) quadrature-vs-closed-form residual: "
      f"{abs(phi(problem, 0.5) - closed):.2e}")

print("\ninner amplitude -> r1 as the perturbation shrinks:")
g = FunctionModel((Segment.polynomial(0.0, math.inf, (0.0, 1.0)),), name="g")
for mu in (0.1, 0.05, 0.025):
    F = FunctionModel((Segment.polynomial(
        0.0, math.inf, (0.0, -4 * mu, 0.0, 25 * mu, 0.0, -10 * k * mu)),))
    system = LienardSystem(F, g, name=f"quintic(mu={mu})")
    inner = find_limit_cycles(system)[0]
    print(f"  mu={mu:<6g} amplitude={inner.amplitude:.8f} "
          f"|amp - r1|={abs(inner.amplitude - r1):.2e}")

# the plane map ties the two pictures together: the bound point
# (abar, F(abar)) on the Lienard-plane cycle lands at (-abar, 0) on the
# near-circular canonical cycle
F01 = FunctionModel((Segment.polynomial(
    0.0, math.inf, (0.0, -0.4, 0.0, 2.5, 0.0, -k)),))
abar = 0.55324
u, v = canonical_to_lienard(-abar, 0.0, F01)
print(f"\ncanonical (-abar, 0) maps to Lienard ({u:.5f}, {v:.5f}) "
      f"= (abar, F(abar))")
