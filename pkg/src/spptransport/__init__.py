"""Excitation transport between two-level emitters over a drift-biased
plasmonic interface.

The package computes the interface dyadic Green's function, the surface-mode
dispersion, the emitter coupling rates and their reciprocal/nonreciprocal
bounds, the open-system dynamics of the emitter pair, and the pumped
transport efficiency.  A scenario-driven CLI (``spptransport``) reproduces
the standard figure datasets as CSV.
"""

from .couplings import (CouplingSet, CouplingSweep, DipolePotential,
                        coupling_rates, coupling_sweep, dipole_potential,
                        fermi_transfer_rate, nr_limit_margin, r_limit_margin,
                        slope_at_source, spontaneous_rate)
from .dispersion import (DispersionPoint, IsoFrequencyContour,
                         nonreciprocal_window, quasistatic_surface_frequency,
                         scaling_exponent, solve_spp, trace_isofrequency)
from .dynamics import (DensityMatrix, EvolutionResult, build_liouvillian,
                       evolve, generator_matrix, initial_state,
                       lowering_operator, number_operator,
                       ode_rhs_two_atom, oracle_nonreciprocal,
                       oracle_reciprocal)
from .errors import (ConfigError, DomainError, InsufficientDataError,
                     IntegrationError, RootFindError, SppTransportError,
                     StiffnessError)
from .greens import (DEFAULT_QUADRATURE, GreensSample, HalfSpaceScene,
                     QuadratureSettings, gzz_total, scattered_gzz,
                     scattered_gzz_batch, vacuum_gzz)
from .materials import (DEFAULT_DAMPING, DrudeMaterial, doppler_permittivity,
                        permittivity)
from .transport import (TransportTrace, efficiency_trace, extraction_flux,
                        pump_flux, steady_state)

__version__ = "1.0.0"

__all__ = [
    "ConfigError", "CouplingSet", "CouplingSweep", "DEFAULT_DAMPING",
    "DEFAULT_QUADRATURE", "DensityMatrix", "DipolePotential",
    "DispersionPoint", "DomainError", "DrudeMaterial", "EvolutionResult",
    "GreensSample", "HalfSpaceScene", "InsufficientDataError",
    "IntegrationError", "IsoFrequencyContour", "QuadratureSettings",
    "RootFindError", "SppTransportError", "StiffnessError", "TransportTrace",
    "build_liouvillian", "coupling_rates", "coupling_sweep",
    "dipole_potential", "doppler_permittivity", "efficiency_trace", "evolve",
    "extraction_flux", "fermi_transfer_rate", "generator_matrix", "gzz_total",
    "initial_state", "lowering_operator", "nonreciprocal_window",
    "nr_limit_margin", "number_operator", "ode_rhs_two_atom",
    "oracle_nonreciprocal", "oracle_reciprocal", "permittivity", "pump_flux",
    "quasistatic_surface_frequency", "r_limit_margin", "scaling_exponent",
    "scattered_gzz", "scattered_gzz_batch", "slope_at_source", "solve_spp",
    "spontaneous_rate", "steady_state", "trace_isofrequency", "vacuum_gzz",
]
