# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: light
# ---

# # Lattice kernels and operator-inequality checks
#
# Small grids so the script runs in seconds; the acceptance suite uses larger ones.

import math

import numpy as np

from dilute_bose import kernels as K
from dilute_bose.potentials import RadialPotential, truncate

print("int t^2 j =", K.hat_moment())
for t in (0.0, 0.3, 0.9):
    print(t, K.hat_j(t), K.hat_j_geometric(t))

# h, f_R and w_R for a smoothstep cutoff at s = 8 on a 32^3 torus.

lat = K.Lattice(32.0, 32)
h = K.build_h(lat, K.CutoffProfile(8.0))
fR = K.build_fR(h, 4.0)
w = K.build_wR(fR)
print("imag part of h:", K.imag_fraction(h), " gradient bound margin:",
      K.gradient_bound_margin(h, 4.0, 8.0))
centers, env = K.radial_envelope(w, np.linspace(0, 16, 9))
for c, e in zip(centers, env):
    print(f"d={c:5.1f}  max w_R={e:.3e}")

# One scatterer, truncated hard core of radius 4; the smallest eigenvalue of
# (left side - right side) should be non-negative.

pot = truncate(RadialPotential.hard_core(4.0), 40.0)
cfg = K.DysonCheckConfig(K.random_scatterers(1, 20.0, 1.6, seed=0), R=8.0)
v = K.certify_dyson(cfg, pot, K.CutoffProfile(8.0), 20.0, grids=(10, 12))
print(v.to_dict())

# Hole-filling inequality on a few (lambda, R0/R) pairs.

for lam in (0.0, math.pi / 4):
    for q in (0.01, 0.09):
        r = K.verify_hole_lemma(q, 1.0, lam, mesh=256)
        print(f"lambda={lam:.3f} R0/R={q}  eigenvalue={r.eigenvalue:.4e}  "
              f"well mass {r.well_mass_fraction:.3f} vs volume {r.well_volume_fraction:.1e}")

# Decay estimate with the stated constant and with the one the cosine bound yields.

for const in ("stated", "derived"):
    for n in (0, 1, 2):
        rep = K.decay_bound_check(K.PolynomialBump(), 8.0, 64.0, 64, n, constant=const)
        print(const, n, rep.holds, f"{rep.min_ratio:.3g}")
