# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: light
# ---

# # Ideal Bose gas thermodynamics
#
# Critical density, chemical potential, free energy and specific heat across condensation.

import numpy as np

from dilute_bose import ideal_gas as ig

beta = 1.0
rc = ig.critical_density(beta)
print("rho_c(1) =", rc, " quadrature:", ig.critical_density_quad(beta))
print("f0 at rho_c =", ig.f0(beta, rc))

# Chemical potential and condensate along a density sweep.

print(f"{'rho/rho_c':>9} {'mu0':>12} {'f0':>12} {'cV':>10} {'n0':>10}")
for frac in (0.1, 0.5, 0.9, 0.99, 1.0, 1.5, 3.0):
    pt = ig.ideal_gas_point(beta, frac * rc)
    print(f"{frac:9.2f} {pt.mu0:12.6f} {pt.f0:12.8f} {pt.specific_heat:10.6f} {pt.condensate:10.6f}")

# The third rho-derivative of f0 jumps by 2 (4 pi beta)^2 at rho_c while the second is continuous.

j = ig.rho_derivative_jumps(beta)
print("d3 jump", j["d3_jump"], "exact", ig.third_derivative_jump_exact(beta), "noise", j["d3_noise"])
print("d2 jump", j["d2_jump"], "noise", j["d2_noise"])

# Specific heat across the transition in temperature at fixed density: the cusp sits at T_c.

rho = 0.05
for T in np.linspace(0.6, 1.4, 9):
    print(f"T={T:.2f}  cV={ig.specific_heat(1 / T, rho):.6f}  phase={ig.ideal_gas_point(1 / T, rho).phase}")
