"""
From tau back to the cone radius
================================

The profile lives in the moment coordinate tau.  Integrating 1/phi gives
t = log r, and the zero-section constant e^{c0} measures how the metric
closes up at tau = 0.
"""

import math

import numpy as np

from sasaki_forge.coordinates import (
    coordinate_map,
    coordinate_rows,
    scaling_constant_e_c0,
    t_of_tau,
    tau_of_t,
)
from sasaki_forge.profiles import ke_profile, soliton_profile

###############################################################################
# The Calabi-Yau case in closed form
# ----------------------------------
# For k = p and the anchor 2^{1/(m+1)} - 1 one has
# tau = (r^2 + 1)^{1/(m+1)} - 1.

for m in (1, 2, 3):
    cmap = coordinate_map(ke_profile(m, 1, 1))
    for r in (0.5, 2.0, 4.0):
        tau = tau_of_t(cmap, math.log(r))
        print(f"m={m} r={r}: tau={tau:.14f}  closed form={(r * r + 1) ** (1 / (m + 1)) - 1:.14f}")
    print(f"   e^c0 = {scaling_constant_e_c0(cmap.profile):.15f}  (1/(m+1) = {1 / (m + 1):.15f})")

###############################################################################
# Changing the anchor rescales r
# ------------------------------
# Moving the anchor from a to b multiplies e^{c0} by exp(2 t_a(b)).

prof = soliton_profile(1, 4.0)
ea = scaling_constant_e_c0(prof, tau0=0.1)
eb = scaling_constant_e_c0(prof, tau0=1.0)
shift = t_of_tau(coordinate_map(prof, tau0=0.1), 1.0)
print(f"shrinking soliton: e^c0(0.1)={ea:.12f}  e^c0(1)={eb:.12f}  "
      f"e^c0(0.1) exp(2 t)={ea * math.exp(2 * shift):.12f}")

###############################################################################
# A table of (t, tau, F, phi)
# ---------------------------

for row in coordinate_rows(coordinate_map(ke_profile(1, 1, 1)), np.linspace(-2, 2, 5)):
    print("  ".join(f"{x:12.8f}" for x in row))
