# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: light
# ---

# # Scattering lengths and truncation
#
# Units: hbar = 2m = 1, zero-energy equation u'' = v u / 2.

import numpy as np

from dilute_bose.potentials import RadialPotential, lj_like_table, truncate
from dilute_bose.scattering import (hard_sphere_truncated_a, scattering_length_ode,
                                    scattering_length_variational, truncation_lower_bound)

# A hard sphere has a = R0; the shooting method should reproduce it to round-off.

for R0 in (0.5, 1.0, 2.0):
    print(R0, scattering_length_ode(RadialPotential.hard_core(R0)).a)

# Truncating the hard core to a step with int r^2 v = 2 phi lowers a.
# The quoted closed form describes the same step without the factor 1/2 and overshoots.

print(f"{'phi':>6} {'a_tilde (ode)':>14} {'closed form':>12} {'floor':>10}")
for phi in (2.0, 10.0, 100.0):
    t = truncate(RadialPotential.hard_core(1.0), phi)
    print(f"{phi:6g} {scattering_length_ode(t).a:14.8f} {hard_sphere_truncated_a(1.0, phi):12.8f} "
          f"{truncation_lower_bound(1.0, phi):10.6f}")

# The variational principle on a ball of radius R gives the same number, independent of R.

p = lj_like_table()
print("ode        ", scattering_length_ode(p).a)
for R in (2.0, 4.0, 8.0):
    print(f"variational R={R}", scattering_length_variational(p, R).a)

# Cutting the tabulated potential's inner tail at growing budgets.

for phi in np.geomspace(0.5, 50, 5):
    t = truncate(p, float(phi))
    print(f"phi={phi:8.3f}  cut at {t.cut_radius_s:.4f}  a_tilde={scattering_length_ode(t).a:.6f}")
