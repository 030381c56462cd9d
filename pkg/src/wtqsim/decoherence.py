"""Golden-rule relaxation and dephasing from the flux-bias impedance.

The coupling operator is phi_0 * (As1 sin(phi1 + theta1) + At sin(phi2 + theta_s)),
with At the non-negative combined SQUID amplitude. Matrix elements are
dimensionless; multiplying by phi_0 gives flux, which with J(omega) in
1/(Ohm s) closes the rate units.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .analytic import dispersive_quantities
from .network import offsets_for_flux, reduce, effective_two_mode, sine_coupling
from .params import DEFAULT_ENV, validate
from .spectrum import ChargeBasisConfig, solve_spectrum, sin_operator
from .units import BOLTZMANN, GIGA, MILLI, REDUCED_FLUX_QUANTUM, REDUCED_PLANCK

TWO_PI = 2.0 * math.pi
US = 1e-6


@dataclass(frozen=True)
class BathModel:
    """Series bias coil Lc (H) in front of the bath impedance Z (Ohm) at Tbath (K)."""

    R: float
    Lc: float
    Tbath: float
    k1: float = 0.0
    k2: float = 0.0
    X: float = 0.0

    @classmethod
    def from_bias(cls, bias, Tbath=None):
        return cls(R=bias.R, Lc=bias.Lc * MILLI, Tbath=bias.Tbath if Tbath is None else Tbath,
                   k1=bias.k1, k2=bias.k2)

    @property
    def Z(self):
        return complex(self.R, self.X)

    def low_frequency_kernel(self):
        """lim J(w)/w as w -> 0, i.e. Re Z / |Z(0)|^2."""
        z2 = self.R**2 + self.X**2
        return 0.0 if self.R == 0 else self.R / z2


def bath_spectral_density(omega, bath):
    """J(omega) in 1/(Ohm s) for omega in rad/s."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0):
        raise ValueError("bath spectral density is defined for omega >= 0")
    denom = omega**2 * bath.Lc**2 + bath.R**2 + bath.X**2 + 2.0 * omega * bath.Lc * bath.X
    with np.errstate(invalid="ignore", divide="ignore"):
        j = np.where(denom > 0, omega * bath.R / np.where(denom > 0, denom, 1.0), 0.0)
    return j if j.ndim else float(j)


def _coth(x):
    return math.inf if x == 0 else 1.0 / math.tanh(x)


def relaxation_rate(element, f_ghz, bath):
    """1/T1 in 1/s for a dimensionless transition element at f_ghz."""
    omega = TWO_PI * f_ghz * GIGA
    flux = REDUCED_FLUX_QUANTUM * abs(element)
    x = REDUCED_PLANCK * omega / (2.0 * BOLTZMANN * bath.Tbath)
    return 4.0 / REDUCED_PLANCK * flux**2 * bath_spectral_density(omega, bath) * _coth(x)


def dephasing_rate(difference, bath):
    """1/Tphi in 1/s for a dimensionless diagonal-element difference."""
    flux = REDUCED_FLUX_QUANTUM * abs(difference)
    kernel = bath.low_frequency_kernel() / REDUCED_PLANCK
    return flux**2 / REDUCED_PLANCK * kernel * 2.0 * BOLTZMANN * bath.Tbath


def _inv(rate):
    return math.inf if rate == 0 else 1.0 / rate


def _rate(time_us):
    return 0.0 if math.isinf(time_us) else 1.0 / (time_us * US)


def combine_t2(T1, Tphi):
    """1/T2 = 1/(2 T1) + 1/Tphi; any unit, infinities allowed."""
    if not (T1 > 0 and Tphi > 0):
        raise ValueError("T1 and Tphi must be positive")
    inv = 1.0 / (2.0 * T1) + (0.0 if math.isinf(Tphi) else 1.0 / Tphi)
    return _inv(inv)


@dataclass(frozen=True)
class MatrixElements:
    """Dimensionless coupling-operator elements between |0~> and |1~>."""

    transition: float
    difference: float
    qubit_sine: float
    f01: float


@dataclass
class CoherenceResult:
    """Times in us; ``breakdown`` holds rates in 1/s per mechanism."""

    T1: float
    Tphi_flux: float
    Tphi: float
    T2: float
    breakdown: dict
    elements: MatrixElements | None = None
    Tphi_disp: float = math.inf
    Tphi_noise: float = math.inf
    x: float | None = None
    method: str = "exact"


def analytic_matrix_elements(params, net, phix, dressing="first_order"):
    """Harmonic-wavefunction estimates of the coupling-operator elements.

    ``dressing="first_order"`` admixes the SQUID excitation with amplitude
    eps_eff (linear in the coupling). ``dressing="second_order"`` uses eps^2 in    both the transition and dephasing elements, with eps taken without the counter-rotating term.
    """
    a = dispersive_quantities(params, phix)
    coupling = sine_coupling(params, net)
    offsets = offsets_for_flux(net, phix, params)
    amp = coupling.squid_amplitude(phix)
    el1 = a.eta1 * math.exp(-a.eta1_sq / 2.0)
    el2 = a.eta2 * math.exp(-a.eta2_sq / 2.0)
    if dressing == "first_order":
        e = a.eps_eff
        transition = coupling.As1 * el1 - e * amp * el2 * math.cos(offsets.phi_delta)
    elif dressing == "second_order":
        e = a.eps
        transition = coupling.As1 * el1 + e * e * amp * el2 * math.cos(offsets.phi_delta)
    else:
        raise ValueError(f"unknown dressing {dressing!r}")
    difference = e * e * amp * a.eta2_sq * math.exp(-a.eta2_sq / 2.0) * math.sin(offsets.phi_delta)
    return MatrixElements(transition=transition, difference=difference, qubit_sine=el1, f01=a.fq)


def exact_matrix_elements(params, net, phix, cfg=None, spectrum=None):
    """Coupling-operator elements in the exact two-mode eigenbasis."""
    cfg = cfg or ChargeBasisConfig()
    offsets = offsets_for_flux(net, phix, params)
    if spectrum is None:
        spectrum = solve_spectrum(effective_two_mode(params, net, offsets), cfg)
    if spectrum.vectors is None:
        raise ValueError("exact matrix elements need eigenvectors")
    coupling = sine_coupling(params, net)
    i1, i2 = np.eye(2 * cfg.ncut1 + 1), np.eye(2 * cfg.ncut2 + 1)
    s1 = np.kron(sin_operator(cfg.ncut1, offsets.phix1_0), i2)
    s2 = np.kron(i1, sin_operator(cfg.ncut2, offsets.phix_s))
    op = coupling.As1 * s1 + coupling.squid_amplitude(phix) * s2
    g = spectrum.vectors[:, spectrum.indices["00"]]
    e = spectrum.vectors[:, spectrum.indices["10"]]
    transition = abs(g.conj() @ op @ e)
    difference = (g.conj() @ op @ g - e.conj() @ op @ e).real
    qubit_sine = abs(g.conj() @ s1 @ e)
    return MatrixElements(transition=float(transition), difference=float(difference),
                          qubit_sine=float(qubit_sine), f01=spectrum.f01)


def coherence_point(params, bias, env=None, phix=0.0, method="exact", cfg=None,
                    net=None, dressing="first_order", Tbath=None):
    """Bath-limited T1, Tphi and the capped totals at SQUID flux ``phix`` (rad)."""
    env = env or DEFAULT_ENV
    if net is None:
        validate(params, bias, env)
        net = reduce(params, bias)
    bath = BathModel.from_bias(bias, Tbath)
    if method == "exact":
        el = exact_matrix_elements(params, net, phix, cfg)
    elif method == "analytic":
        el = analytic_matrix_elements(params, net, phix, dressing)
    else:
        raise ValueError(f"unknown method {method!r}")
    g1 = relaxation_rate(el.transition, el.f01, bath)
    gphi = dephasing_rate(el.difference, bath)
    g1_cap = _rate(env.T1_cap)
    gphi_cap = _rate(env.tphi_cap)
    T1 = _inv(g1 + g1_cap) / US
    Tphi = _inv(gphi + gphi_cap) / US
    return CoherenceResult(
        T1=float(T1), Tphi_flux=float(_inv(gphi) / US), Tphi=Tphi, T2=combine_t2(T1, Tphi),
        breakdown={"t1_bath": float(g1), "t1_cap": g1_cap, "tphi_bath": float(gphi), "tphi_cap": gphi_cap},
        elements=el, x=phix / TWO_PI, method=method)


def t1_time(params, bias, env=None, phix=0.0, method="exact", cfg=None, **kw):
    """Capped T1 in us."""
    return coherence_point(params, bias, env, phix, method, cfg, **kw).T1


def tphi_time(params, bias, env=None, phix=0.0, method="exact", cfg=None, **kw):
    """Capped pure-dephasing time in us; bath part alone is ``Tphi_flux``."""
    return coherence_point(params, bias, env, phix, method, cfg, **kw).Tphi


@dataclass
class CoherenceCurve:
    flux: np.ndarray
    results: list = field(default_factory=list)
    method: str = "exact"

    def column(self, name):
        return np.array([getattr(r, name) for r in self.results])


def coherence_sweep(params, bias, env=None, flux=(), method="exact", cfg=None, **kw):
    """Coherence over a flux grid given in flux quanta."""
    env = env or DEFAULT_ENV
    validate(params, bias, env)
    net = reduce(params, bias)
    flux = np.asarray(flux, dtype=float)
    results = [coherence_point(params, bias, env, TWO_PI * x, method, cfg, net=net, **kw) for x in flux]
    return CoherenceCurve(flux=flux, results=results, method=method)
