"""
Checking the curvature equations
================================

Ricci forms are assembled from analytic derivatives of phi in the basis
{omega^T, i dt ^ dbar t}.  Einstein and soliton equations then reduce to
two scalar identities per tau.  For k = p the metric is asymptotic to the
cone and the differences decay like r^{-2m} and r^{-(2m+2)}.
"""

from fractions import Fraction

import numpy as np

from sasaki_forge.curvature_check import (
    asymptotic_decay,
    d_homothetic,
    max_scaled_residual,
    omega_phi,
    ricci_phi,
    soliton_residual,
)
from sasaki_forge.profiles import ke_profile, soliton_profile

taus = np.geomspace(1e-6, 1e6, 200)

prof = ke_profile(1, 2, 4)
print("KE kappa=1: rho =", ricci_phi(prof, 1.0), "\n            omega =", omega_phi(prof, 1.0))
for p in [ke_profile(2, 1, 1), ke_profile(3, 1, 2), soliton_profile(1, 2.0, -1.0), soliton_profile(1, 4.0)]:
    print(f"{p.to_json()}: max scaled residual {max_scaled_residual(p, taus):.1e}")

###############################################################################
# A negative control: a wrong mu leaves a residual mu-error times phi.

sol = soliton_profile(1, 4.0)
print("mu + 1e-3 at tau=2:", soliton_residual(sol, 2.0, mu=sol.mu + 1e-3), " phi(2) =", sol.phi(2.0))

###############################################################################
# D-homothetic rescaling sends kappa = 2p/k to 2(m+1) when a = p/(k(m+1)).

for m, p, k in [(1, 2, 2), (2, 3, 5), (3, 1, 4)]:
    out = d_homothetic(Fraction(2 * p, k), Fraction(p, k * (m + 1)))
    print(f"m={m} p={p} k={k}: a={out.a}  kappa'={out.kappa_out}")

###############################################################################
# Decay of the Calabi-Yau metric towards the cone metric.

for m in (1, 2, 3):
    rep = asymptotic_decay(m)
    print(f"m={m}: slopes {rep.order_first_term:.4f} (expect {-2 * m}), "
          f"{rep.order_second_term:.4f} (expect {-(2 * m + 2)}); r^2m * diff -> {rep.constant_first_term:.8f}")
