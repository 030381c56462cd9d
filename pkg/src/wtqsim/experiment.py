"""Measured-device phenomenology: readout thermal photons, bias heating, 1/f flux noise."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .analytic import analytic_frequency
from .decoherence import CoherenceResult, coherence_point, combine_t2
from .network import offset_vector, reduce
from .params import validate
from .units import BOLTZMANN, GIGA, MILLI, PLANCK

TWO_PI = 2.0 * math.pi
US = 1e-6


def _inv(rate):
    return math.inf if rate == 0 else 1.0 / rate


@dataclass(frozen=True)
class HeatingModel:
    """Feedline temperature Te_base (mK) and coil temperature Tm_base (K).

    The same coefficient Theta (mK/mA^2) heats both unless ``heat_coil`` is off.
    """

    Te_base: float
    Theta: float = 0.0
    Tm_base: float | None = None
    heat_coil: bool = True

    @classmethod
    def from_env(cls, env, heat_coil=True):
        return cls(Te_base=env.Te_base, Theta=env.Theta, Tm_base=env.Tm_base, heat_coil=heat_coil)


@dataclass(frozen=True)
class FluxNoiseModel:
    A_phi_sqrt: float = 2.0
    f_IR: float = 1.0
    t_ref: float = 10.0
    echo_factor: float = 0.25

    @classmethod
    def from_env(cls, env):
        return cls(env.A_phi_sqrt, env.f_IR, env.t_ref, env.echo_factor)


def heated_temperature(model, ib_ma):
    """Effective feedline temperature in mK at coil current ``ib_ma``."""
    return model.Te_base + model.Theta * ib_ma**2


def coil_temperature(model, ib_ma, default=None):
    """Bias-circuit temperature in K at ``ib_ma``."""
    base = default if model.Tm_base is None else model.Tm_base
    if base is None:
        raise ValueError("no coil base temperature configured")
    rise = model.Theta * ib_ma**2 * MILLI if model.heat_coil else 0.0
    return base + rise


def thermal_photon_number(f_r, te_mk):
    """Bose-Einstein occupation of the readout mode at f_r (GHz), Te (mK)."""
    if te_mk <= 0:
        return 0.0
    x = PLANCK * f_r * GIGA / (BOLTZMANN * te_mk * MILLI)
    return 1.0 / math.expm1(x)


def thermal_photon_dephasing(kappa, chi, f_r, te_mk):
    """Dephasing rate (1/s) from thermal photons in the readout resonator.

    kappa and chi are kappa/2pi and chi/2pi in MHz.
    """
    k = TWO_PI * kappa * 1e6
    c = TWO_PI * chi * 1e6
    if k <= 0 or c < 0:
        raise ValueError("kappa must be positive and chi non-negative")
    gamma_c = 0.0 if c == 0 else k * c * c / (k * k + c * c)
    nbar = thermal_photon_number(f_r, te_mk)
    if nbar >= 0.1:
        warnings.warn(f"nbar = {nbar:.3g} >= 0.1: low-occupation dephasing formula out of range",
                      RuntimeWarning, stacklevel=2)
    return gamma_c * nbar


def flux_sensitivity(params, flux, step=1e-4, stencil=3):
    """|df01/dflux| in GHz per flux quantum from the analytic frequency."""
    f = lambda x: analytic_frequency(params, TWO_PI * x)
    if stencil == 3:
        slope = (f(flux + step) - f(flux - step)) / (2.0 * step)
    elif stencil == 5:
        slope = (-f(flux + 2 * step) + 8 * f(flux + step) - 8 * f(flux - step) + f(flux - 2 * step)) / (12.0 * step)
    else:
        raise ValueError("stencil must be 3 or 5")
    return abs(slope)


def ramsey_flux_rate(slope, model):
    """Ramsey 1/f flux-noise dephasing rate in 1/s for slope in GHz/Phi0."""
    log_term = abs(math.log(TWO_PI * model.f_IR * model.t_ref * US))
    return abs(slope) * GIGA * TWO_PI * model.A_phi_sqrt * 1e-6 * math.sqrt(log_term)


def flux_noise_dephasing(slope, model=None):
    """Echoed flux-noise Tphi in us (inf at a sweet spot)."""
    model = model or FluxNoiseModel()
    return _inv(ramsey_flux_rate(slope, model) * model.echo_factor) / US


def min_flux_noise_tphi(params, model=None, flux=None):
    """Smallest echoed flux-noise Tphi (us) over half a period."""
    flux = np.linspace(0.0, 0.5, 201) if flux is None else flux
    return min(flux_noise_dephasing(flux_sensitivity(params, x), model) for x in flux)


def compose_predictions(T1, Tphi_flux, gamma_disp=0.0, caps=None, Tphi_noise=math.inf):
    """Combine dephasing channels as parallel rates.

    ``caps`` is an EnvironmentParams-like object; its flux-independent
    dephasing ceiling and optional Tphi_D0 bound are added as rates.
    Times in us, ``gamma_disp`` in 1/s.
    """
    rates = {
        "tphi_bath": 0.0 if math.isinf(Tphi_flux) else float(1.0 / (Tphi_flux * US)),
        "tphi_disp": float(gamma_disp),
        "tphi_noise": 0.0 if math.isinf(Tphi_noise) else 1.0 / (Tphi_noise * US),
        "tphi_cap": 0.0,
        "tphi_d0": 0.0,
    }
    if caps is not None:
        if not math.isinf(caps.tphi_cap):
            rates["tphi_cap"] = 1.0 / (caps.tphi_cap * US)
        if caps.Tphi_D0 is not None:
            rates["tphi_d0"] = 1.0 / (caps.Tphi_D0 * US)
    total = _inv(sum(rates.values())) / US
    return CoherenceResult(T1=T1, Tphi_flux=Tphi_flux, Tphi=total, T2=combine_t2(T1, total),
                           breakdown=rates, Tphi_disp=_inv(gamma_disp) / US, Tphi_noise=Tphi_noise)


def extract_tphi_measured(T2E, T1):
    """Pure-dephasing time (us) implied by measured echo T2E and T1."""
    inv = 1.0 / T2E - 1.0 / (2.0 * T1)
    if inv <= 0:
        warnings.warn(f"T2E = {T2E} us >= 2 T1 = {2 * T1} us: no resolvable pure dephasing",
                      RuntimeWarning, stacklevel=2)
        return math.inf
    return 1.0 / inv


def bias_sweep(params, bias, env, ib_ma, method="analytic", cfg=None, heat_coil=True):
    """Coherence versus coil current with heating, readout photons and flux noise.

    Returns a list of CoherenceResult with ``x`` set to the current in mA.
    """
    validate(params, bias, env)
    net = reduce(params, bias)
    per_ma = offset_vector(net, 1.0)
    slope_rad = per_ma[1] - per_ma[2]
    heating = HeatingModel.from_env(env, heat_coil) if env.Te_base is not None else None
    noise = FluxNoiseModel.from_env(env)
    out = []
    hot = []
    for ib in np.asarray(ib_ma, dtype=float):
        phix = slope_rad * ib
        flux = phix / TWO_PI
        tbath = coil_temperature(heating, ib, bias.Tbath) if heating else bias.Tbath
        bath = coherence_point(params, bias, replace(env, Tphi_D0=None), phix, method, cfg,
                               net=net, Tbath=tbath)
        gamma_d = 0.0
        if env.has_readout:
            te = heated_temperature(heating, ib)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RuntimeWarning)
                gamma_d = thermal_photon_dephasing(env.kappa, env.chi, env.f_r, te)
            if thermal_photon_number(env.f_r, te) >= 0.1:
                hot.append(float(ib))
        tphi_noise = flux_noise_dephasing(flux_sensitivity(params, flux), noise)
        res = compose_predictions(bath.T1, bath.Tphi_flux, gamma_d, env, tphi_noise)
        res.x = float(ib)
        res.method = method
        res.elements = bath.elements
        res.breakdown["t1_bath"] = bath.breakdown["t1_bath"]
        res.breakdown["t1_cap"] = bath.breakdown["t1_cap"]
        out.append(res)
    if hot:
        warnings.warn(f"nbar >= 0.1 for |IB| >= {min(abs(x) for x in hot):.3g} mA: "
                      "low-occupation dephasing formula out of range", RuntimeWarning, stacklevel=2)
    return out
