"""Closed-form transmon-pair estimates of the qubit spectrum.

Frequencies are stored as linear GHz; angular quantities are formed
internally where the formulas need them.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .units import (FEMTO, GIGA, RESISTANCE_QUANTUM, charging_energy_ghz, josephson_inductance)

TWO_PI = 2.0 * math.pi


class NonDispersiveError(ArithmeticError):
    """The mode pair is outside the regime where the closed forms apply."""


class DegenerateModesError(NonDispersiveError):
    pass


@dataclass(frozen=True)
class AnalyticSpectrum:
    """Analytic quantities at one flux point.

    fJ1, fJ2, f1, f2, fq, EC1, EC2, alpha, J12 in GHz (J12 as J12/2pi);
    L_JS in nH; Z1, Z2 in Ohm.
    ``eps`` is J12/Delta; ``eps_eff`` subtracts the counter-rotating term
    J12/(w1 + w2) and is the first-order admixture of the SQUID excitation
    into the dressed qubit state.
    """

    phix: float
    EC1: float
    EC2: float
    fJ1: float
    fJ2: float
    f1: float
    f2: float
    fq: float
    r: float
    L_JS: float
    alpha: float
    J12: float
    Z1: float
    Z2: float
    eps: float
    eps_eff: float
    eta1_sq: float
    eta2_sq: float

    @property
    def delta(self):
        return self.f2 - self.f1

    @property
    def eta1(self):
        return math.sqrt(self.eta1_sq)

    @property
    def eta2(self):
        return math.sqrt(self.eta2_sq)

    @property
    def f10(self):
        """High-mode estimate: the bare SQUID-mode frequency."""
        return self.f2


def coupling_ratio(params):
    c1, c2, cc = params.C1p, params.C2p, params.Cc
    return cc / math.sqrt(c1 * c2 + cc * (c1 + c2))


def squid_inductance(params, phix):
    """Effective SQUID inductance L_JS in H (inf when the SQUID energy vanishes)."""
    lj2 = josephson_inductance(params.Ic2)
    lj3 = josephson_inductance(params.Ic3)
    d = (params.Ic3 - params.Ic2) / (params.Ic3 + params.Ic2)
    h = 0.5 * phix
    factor = math.hypot(math.cos(h), d * math.sin(h))
    inv = (1.0 / lj2 + 1.0 / lj3) * factor
    return math.inf if inv == 0 else 1.0 / inv


def _dressed(fj, ec):
    return fj - ec / (1.0 - ec / fj)


def _bare_modes(params, phix):
    r = coupling_ratio(params)
    c1 = (params.C1p + params.Cc) * FEMTO
    c2 = (params.C2p + params.Cc) * FEMTO
    ec1 = charging_energy_ghz(params.C1p + params.Cc)
    ec2 = (1.0 + r * r) * charging_energy_ghz(params.C2p + params.Cc)
    fj1 = 1.0 / (TWO_PI * math.sqrt(josephson_inductance(params.Ic1) * c1)) / GIGA
    ljs = squid_inductance(params, phix)
    fj2 = 0.0 if math.isinf(ljs) else 1.0 / (TWO_PI * math.sqrt(ljs * c2 / (1.0 + r * r))) / GIGA
    f1 = _dressed(fj1, ec1)
    f2 = _dressed(fj2, ec2) if fj2 > ec2 else 0.0
    return r, ec1, ec2, fj1, fj2, f1, f2, ljs


def _dispersive_factor(r, f1, f2):
    denom = f2 * f2 - (1.0 - r * r) * f1 * f1
    if denom <= 0:
        raise NonDispersiveError(
            f"w2^2 - (1 - r^2) w1^2 = {denom:.4g} GHz^2 <= 0: modes are not dispersive")
    factor = 1.0 - r * r * f1 * f1 / denom
    if factor <= 0:
        raise NonDispersiveError(f"SQUID mode ({f2:.4g} GHz) lies below the qubit mode ({f1:.4g} GHz)")
    return factor


def analytic_frequency(params, phix):
    """Qubit frequency f01 in GHz at SQUID flux ``phix`` (rad)."""
    r, _, _, _, _, f1, f2, _ = _bare_modes(params, phix)
    return f1 * math.sqrt(_dispersive_factor(r, f1, f2))


def analytic_anharmonicity(params, phix):
    """Qubit anharmonicity f12 - f01 in GHz at SQUID flux ``phix`` (rad)."""
    r, ec1, _, fj1, _, f1, f2, _ = _bare_modes(params, phix)
    return -ec1 * (fj1 / f1) ** 2 * _dispersive_factor(r, f1, f2) ** 3


def dispersive_quantities(params, phix):
    """Full :class:`AnalyticSpectrum` including coupling and impedances."""
    r, ec1, ec2, fj1, fj2, f1, f2, ljs = _bare_modes(params, phix)
    if f2 == f1:
        raise DegenerateModesError("qubit and SQUID modes are degenerate (Delta = 0)")
    factor = _dispersive_factor(r, f1, f2)
    fq = f1 * math.sqrt(factor)
    alpha = -ec1 * (fj1 / f1) ** 2 * factor**3
    if f2 <= 2.0 * ec2:
        raise NonDispersiveError(
            f"SQUID mode f2 = {f2:.4g} GHz <= 2 EC2 = {2 * ec2:.4g} GHz: outside the transmon regime")
    w1, w2 = TWO_PI * f1 * GIGA, TWO_PI * f2 * GIGA
    c1p, c2p, cc = params.C1p * FEMTO, params.C2p * FEMTO, params.Cc * FEMTO
    z1 = 1.0 / (w1 * (c1p + cc))
    z2 = math.sqrt(ljs / ((c2p + cc) * (1.0 - 2.0 * ec2 / f2)))
    j12 = cc / (c1p * c2p + cc * (c1p + c2p)) / (2.0 * math.sqrt(z1 * z2))
    eps = j12 / (w2 - w1)
    eps_eff = eps - j12 / (w1 + w2)
    if eps * eps >= 0.25:
        warnings.warn(f"eps^2 = {eps * eps:.3g} >= 0.25: weak-dispersive expansion unreliable",
                      RuntimeWarning, stacklevel=2)
    return AnalyticSpectrum(
        phix=phix, EC1=ec1, EC2=ec2, fJ1=fj1, fJ2=fj2, f1=f1, f2=f2, fq=fq, r=r,
        L_JS=ljs * 1e9, alpha=alpha, J12=j12 / TWO_PI / GIGA, Z1=z1, Z2=z2,
        eps=eps, eps_eff=eps_eff,
        eta1_sq=4.0 * math.pi * z1 / RESISTANCE_QUANTUM,
        eta2_sq=4.0 * math.pi * z2 / RESISTANCE_QUANTUM,
    )


def analytic_sweep(params, flux):
    """(f01, alpha, f10) arrays in GHz over a grid in flux quanta."""
    flux = np.asarray(flux, dtype=float)
    f01 = np.array([analytic_frequency(params, TWO_PI * x) for x in flux])
    alpha = np.array([analytic_anharmonicity(params, TWO_PI * x) for x in flux])
    f10 = np.array([_bare_modes(params, TWO_PI * x)[6] for x in flux])
    return f01, alpha, f10
