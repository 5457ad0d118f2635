"""Lattice kernels and discretized operator-inequality checks."""
from .decay import DecayReport, PolynomialBump, decay_bound_check, decay_field, decay_rhs_factor
from .decomposition import (BallDecomposition, DifferentiationError, ball_decomposition_m,
                            gaussian_profile, hat_profile, numeric_derivative)
from .dyson import (DysonCheckConfig, DysonResult, DysonVerdict, certify_dyson, dyson_operator,
                    neighbor_set, random_scatterers, verify_dyson)
from .fields import (CutoffProfile, ball_max, build_eta, build_fR, build_h, build_wR,
                     eta_transform_min_ratio, gradient_bound_margin, gradient_magnitude,
                     imag_fraction, radial_envelope, smoothstep7)
from .hat import ball_overlap_volume, hat_j, hat_j_geometric, hat_moment, soft_potential
from .hole import HoleLemmaResult, hole_rhs_constant, verify_hole_lemma
from .lattice import Lattice, PeriodicLatticeField

__all__ = [
    "BallDecomposition", "CutoffProfile", "DecayReport", "DifferentiationError",
    "DysonCheckConfig", "DysonResult", "DysonVerdict", "HoleLemmaResult", "Lattice",
    "PeriodicLatticeField", "PolynomialBump", "ball_decomposition_m", "ball_max",
    "ball_overlap_volume", "build_eta", "build_fR", "build_h", "build_wR", "certify_dyson",
    "decay_bound_check", "decay_field", "decay_rhs_factor", "dyson_operator",
    "eta_transform_min_ratio", "gaussian_profile", "gradient_bound_margin",
    "gradient_magnitude", "hat_j", "hat_j_geometric", "hat_moment", "hat_profile",
    "hole_rhs_constant", "imag_fraction", "numeric_derivative", "radial_envelope",
    "neighbor_set", "random_scatterers", "smoothstep7", "soft_potential", "verify_dyson",
    "verify_hole_lemma",
]
