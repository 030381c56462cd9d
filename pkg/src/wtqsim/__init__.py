"""Simulation and analysis toolkit for the weakly flux-tunable transmon."""

__version__ = "0.1.0"

from .params import (BiasCircuitParams, EnvironmentParams, ValidationError, WtqCircuitParams,
                     validate)
from .network import reduce, dc_flux_biases, effective_two_mode, sine_coupling
from .spectrum import ChargeBasisConfig, sweep_flux
from .analytic import analytic_anharmonicity, analytic_frequency, dispersive_quantities
from .decoherence import combine_t2, t1_time, tphi_time
from .lattice_yield import YieldModel, closed_form_yield, monte_carlo_yield

__all__ = [
    "BiasCircuitParams", "EnvironmentParams", "ValidationError", "WtqCircuitParams", "validate",
    "reduce", "dc_flux_biases", "effective_two_mode", "sine_coupling",
    "ChargeBasisConfig", "sweep_flux",
    "analytic_anharmonicity", "analytic_frequency", "dispersive_quantities",
    "combine_t2", "t1_time", "tphi_time",
    "YieldModel", "closed_form_yield", "monte_carlo_yield",
]
