"""Thermodynamics of the dilute Bose gas: scattering lengths, the ideal gas, a free-energy
lower bound with its error budget, and lattice checks of the kernel inequalities behind it.

Units: hbar = 2m = 1.
"""
from .errors import DomainError, NumericalError, ResolutionError
from .potentials import RadialPotential, TruncatedPotential, cumulative_tail, truncate
from .scattering import (ScatteringSolution, attractive_well_a, hard_sphere_truncated_a,
                         scattering_length_ode, scattering_length_variational,
                         step_scattering_length, truncation_lower_bound)
from .ideal_gas import (IdealGasPoint, bose_fn, condensate_density, critical_density, f0,
                        ideal_gas_point, mu0, specific_heat)
from .bound import (BoundReport, ParameterSet, alpha_exponent, choose_parameters,
                    correction_term, error_budget, ground_state_energy, lower_bound)

__version__ = "0.1.0"
