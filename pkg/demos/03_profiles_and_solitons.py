"""
Momentum profiles
=================

On the total space of L^k over a Fano base with K = L^p the metric is
determined by a profile phi(tau).  For k >= p it is Kahler-Einstein with
kappa = 2p/k; for k < p one uses a shrinking Kahler-Ricci soliton.
"""

import numpy as np

from sasaki_forge.profiles import (
    eval_phi,
    growth_class,
    growth_coefficient,
    ke_profile,
    residual,
    soliton_nu,
    soliton_profile,
    solve_soliton_mu,
)

###############################################################################
# Kahler-Einstein profiles
# ------------------------

for m, p, k in [(1, 2, 2), (2, 1, 1), (1, 2, 4)]:
    prof = ke_profile(m, p, k)
    phi, d1, d2 = eval_phi(prof, 1.0)
    print(f"m={m} p={p} k={k}: kappa={prof.kappa} alpha={prof.alpha} phi(1)={prof.phi_exact(1)} "
          f"phi'(0)={eval_phi(prof, 0.0)[1]} growth={growth_class(prof).value} "
          f"coef={growth_coefficient(prof):.4f}")

###############################################################################
# The shrinking soliton parameter
# -------------------------------
# mu is the unique positive zero of nu(kappa, mu).  For m = 1, kappa = 4 it
# is sqrt(2).

for m, kappa in [(1, 4.0), (1, 3.0), (2, 4.0), (3, 6.0)]:
    mu = solve_soliton_mu(m, kappa)
    print(f"m={m} kappa={kappa}: mu={mu:.15f}  nu(mu)={soliton_nu(m, kappa, mu):+.1e}")
print("sqrt(2) =", np.sqrt(2))

###############################################################################
# Three soliton families
# ----------------------

taus = np.geomspace(1e-6, 1e6, 200)
for args in [(1, 1.0, -1.0), (1, 2.0, -1.0), (1, 4.0, None)]:
    prof = soliton_profile(*args)
    worst = np.max(np.abs(residual(prof, taus)) / (1 + taus) ** 2)
    print(f"{prof.family.value:9s} kappa={prof.kappa} mu={prof.mu:.6f}  phi(1)={prof.phi(1.0):.12f}  "
          f"min phi={np.min(prof.phi(taus)):.2e}  max ODE residual={worst:.1e}")
