"""Physical constants and unit conversions.

Internal conventions: energies are frequency equivalents E/h in GHz,
capacitances in fF, critical currents in nA, bias inductances in pH (Lc in
mH) at the parameter level and SI inside the decoherence pipeline. Flux is
given in units of the flux quantum at API boundaries.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# SI 2019 exact defining constants (CODATA 2018).
ELECTRON_CHARGE = 1.602176634e-19  # C
PLANCK = 6.62607015e-34  # J s
BOLTZMANN = 1.380649e-23  # J / K

REDUCED_PLANCK = PLANCK / (2.0 * math.pi)
FLUX_QUANTUM = PLANCK / (2.0 * ELECTRON_CHARGE)  # Wb
REDUCED_FLUX_QUANTUM = FLUX_QUANTUM / (2.0 * math.pi)  # Wb
RESISTANCE_QUANTUM = PLANCK / ELECTRON_CHARGE**2  # Ohm

FEMTO = 1e-15
PICO = 1e-12
NANO = 1e-9
MILLI = 1e-3
GIGA = 1e9

# E_J/h per nA of critical current and e^2/(2h) in GHz*fF.
_GHZ_PER_NA = NANO * REDUCED_FLUX_QUANTUM / PLANCK / GIGA
_GHZ_FF = ELECTRON_CHARGE**2 / (2.0 * PLANCK) / FEMTO / GIGA


class DomainError(ValueError):
    """Raised when a conversion is asked for a physically meaningless input."""


@dataclass(frozen=True)
class PhysicalConstants:
    flux_quantum: float = FLUX_QUANTUM
    reduced_flux_quantum: float = REDUCED_FLUX_QUANTUM
    electron_charge: float = ELECTRON_CHARGE
    planck: float = PLANCK
    reduced_planck: float = REDUCED_PLANCK
    boltzmann: float = BOLTZMANN
    resistance_quantum: float = RESISTANCE_QUANTUM


CONSTANTS = PhysicalConstants()


def josephson_energy_ghz(ic_na):
    """Josephson energy E_J/h in GHz for a critical current in nA."""
    if ic_na < 0:
        raise DomainError(f"critical current must be non-negative, got {ic_na} nA")
    return ic_na * _GHZ_PER_NA


def critical_current_na(ej_ghz):
    """Inverse of :func:`josephson_energy_ghz`."""
    if ej_ghz < 0:
        raise DomainError(f"Josephson energy must be non-negative, got {ej_ghz} GHz")
    return ej_ghz / _GHZ_PER_NA


def charging_energy_ghz(c_ff):
    """Charging energy e^2/(2C) over h in GHz for a capacitance in fF."""
    if not c_ff > 0:
        raise DomainError(f"capacitance must be positive, got {c_ff} fF")
    return _GHZ_FF / c_ff


def capacitance_ff(ec_ghz):
    """Inverse of :func:`charging_energy_ghz`."""
    if not ec_ghz > 0:
        raise DomainError(f"charging energy must be positive, got {ec_ghz} GHz")
    return _GHZ_FF / ec_ghz


def josephson_inductance(ic_na):
    """Josephson inductance in H, L_J = phi_0 / I_c."""
    if not ic_na > 0:
        raise DomainError(f"critical current must be positive, got {ic_na} nA")
    return REDUCED_FLUX_QUANTUM / (ic_na * NANO)


def charging_energy_matrix_ghz(cmat_ff):
    """E_C matrix e^2 C^-1 / (2h) in GHz for a capacitance matrix in fF."""
    return _GHZ_FF * np.linalg.inv(np.asarray(cmat_ff, dtype=float))
