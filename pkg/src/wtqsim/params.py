"""Circuit, bias-circuit and environment parameter records."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, fields, replace

from .units import MILLI, PICO

# Upper bound on the inductive coupling coefficients k = M / sqrt(Lc L).
MAX_COUPLING = 0.1


class ValidationError(ValueError):
    """Raised when parameters violate an invariant.

    ``violations`` holds ``(field, message)`` pairs so callers can report
    every problem at once.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        msg = "; ".join(f"{name}: {text}" for name, text in self.violations)
        super().__init__(msg)

    @property
    def fields(self):
        return [name for name, _ in self.violations]


@dataclass(frozen=True)
class WtqCircuitParams:
    """Junction and capacitor values of the three-junction circuit.

    Currents in nA, capacitances in fF. ``C1p`` and ``C2p`` are the total
    shunt capacitances including the junction self-capacitances, i.e.
    C1' = C1 + CJ1 and C2' = C2 + CJ2 + CJ3.
    """

    Ic1: float
    Ic2: float
    Ic3: float
    C1p: float
    C2p: float
    Cc: float
    CJ1: float = 1.0
    CJ2: float = 1.0
    CJ3: float = 1.0
    alphaJ: float | None = None

    def __post_init__(self):
        if self.alphaJ is None and self.Ic2 != 0:
            object.__setattr__(self, "alphaJ", self.Ic3 / self.Ic2)

    @classmethod
    def from_asymmetry(cls, Ic1, Ic2, alphaJ, C1p, C2p, Cc, CJ1=1.0, CJ2=1.0, CJ3=None):
        """Build from I_c3 = alphaJ I_c2; CJ3 defaults to alphaJ CJ2."""
        if CJ3 is None:
            CJ3 = alphaJ * CJ2
        return cls(Ic1=Ic1, Ic2=Ic2, Ic3=alphaJ * Ic2, C1p=C1p, C2p=C2p, Cc=Cc,
                   CJ1=CJ1, CJ2=CJ2, CJ3=CJ3, alphaJ=alphaJ)

    def with_asymmetry(self, alphaJ):
        """Copy with I_c3 rescaled to alphaJ * I_c2 (capacitances untouched)."""
        return replace(self, Ic3=alphaJ * self.Ic2, alphaJ=alphaJ)

    @property
    def C1(self):
        return self.C1p - self.CJ1

    @property
    def C2(self):
        return self.C2p - self.CJ2 - self.CJ3


@dataclass(frozen=True)
class BiasCircuitParams:
    """Flux-bias circuit: partial loop inductances, coil, bath impedance.

    L1, L2, M1, M2 in pH; Lc in mH; R in Ohm; Tbath in K.
    """

    L1: float = 10.0
    L2: float = 10.0
    Lc: float = 5.5
    M1: float = 0.5
    M2: float = 0.5
    R: float = 0.1
    Tbath: float = 0.02

    @property
    def k1(self):
        return self.M1 / math.sqrt(self.Lc * 1e9 * self.L1)

    @property
    def k2(self):
        return self.M2 / math.sqrt(self.Lc * 1e9 * self.L2)

    @property
    def M_total(self):
        """M1 + M2 in pH."""
        return self.M1 + self.M2

    def si(self):
        """(L1, L2, Lc, M1, M2) in H."""
        return (self.L1 * PICO, self.L2 * PICO, self.Lc * MILLI,
                self.M1 * PICO, self.M2 * PICO)


@dataclass(frozen=True)
class EnvironmentParams:
    """Flux-independent caps, readout and heating inputs, 1/f flux noise.

    Units: T1_cap and t_ref in us; kappa and chi as kappa/2pi, chi/2pi in MHz;
    f_r in GHz; Te_base in mK; Theta in mK/mA^2; Tm_base in K; Tphi_D0 in us
    (``None`` disables the bound); A_phi_sqrt in micro flux quanta; f_IR in Hz.
    """

    T1_cap: float = 100.0
    T2_cap_ratio: float = 1.5
    kappa: float | None = None
    chi: float | None = None
    f_r: float | None = None
    Te_base: float | None = None
    Theta: float = 0.0
    Tm_base: float | None = None
    Tphi_D0: float | None = None
    A_phi_sqrt: float = 2.0
    f_IR: float = 1.0
    t_ref: float = 10.0
    echo_factor: float = 0.25

    @property
    def tphi_cap(self):
        """Pure-dephasing ceiling in us implied by T2_cap = ratio * T1_cap."""
        rate = 1.0 / (self.T2_cap_ratio * self.T1_cap) - 1.0 / (2.0 * self.T1_cap)
        return math.inf if rate <= 0 else 1.0 / rate

    @property
    def has_readout(self):
        return None not in (self.kappa, self.chi, self.f_r, self.Te_base)


@dataclass(frozen=True)
class ParameterBundle:
    circuit: WtqCircuitParams
    bias: BiasCircuitParams
    env: EnvironmentParams = field(default_factory=EnvironmentParams)


def _circuit_violations(p):
    out = []
    for name in ("Ic1", "Ic2", "Ic3", "C1p", "C2p", "Cc", "CJ1", "CJ2", "CJ3"):
        value = getattr(p, name)
        if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
            out.append((name, f"must be strictly positive, got {value!r}"))
    if out:
        return out
    if p.alphaJ is None or abs(p.alphaJ - p.Ic3 / p.Ic2) > 1e-9 * abs(p.Ic3 / p.Ic2):
        out.append(("alphaJ", f"must equal Ic3/Ic2 = {p.Ic3 / p.Ic2:.12g}, got {p.alphaJ!r}"))
    if p.C1p < p.CJ1:
        out.append(("C1p", f"C1' = {p.C1p} fF must include CJ1 = {p.CJ1} fF"))
    if p.C2p < p.CJ2 + p.CJ3:
        out.append(("C2p", f"C2' = {p.C2p} fF must include CJ2 + CJ3 = {p.CJ2 + p.CJ3} fF"))
    return out


def _bias_violations(b):
    out = []
    for name in ("L1", "L2", "Lc"):
        value = getattr(b, name)
        if not (math.isfinite(value) and value > 0):
            out.append((name, f"inductance must be positive, got {value!r}"))
    for name in ("M1", "M2"):
        value = getattr(b, name)
        if not (math.isfinite(value) and value >= 0):
            out.append((name, f"mutual inductance must be non-negative, got {value!r}"))
    if not (math.isfinite(b.R) and b.R >= 0):
        out.append(("R", f"bath resistance must be >= 0, got {b.R!r}"))
    if not (math.isfinite(b.Tbath) and b.Tbath > 0):
        out.append(("Tbath", f"bath temperature must be positive, got {b.Tbath!r}"))
    if out:
        return out
    if b.k1 >= MAX_COUPLING:
        out.append(("k1", f"coupling M1/sqrt(Lc L1) = {b.k1:.3g} outside the small-coupling regime (< {MAX_COUPLING})"))
    if b.k2 >= MAX_COUPLING:
        out.append(("k2", f"coupling M2/sqrt(Lc L2) = {b.k2:.3g} outside the small-coupling regime (< {MAX_COUPLING})"))
    return out


def _env_violations(e):
    out = []
    if not e.T1_cap > 0:
        out.append(("T1_cap", f"must be positive, got {e.T1_cap!r}"))
    if not 0 < e.T2_cap_ratio <= 2:
        out.append(("T2_cap_ratio", f"must lie in (0, 2], got {e.T2_cap_ratio!r}"))
    for name in ("kappa", "chi", "f_r", "Te_base", "Tm_base", "Tphi_D0"):
        value = getattr(e, name)
        if value is not None and not value > 0:
            out.append((name, f"must be positive when given, got {value!r}"))
    if e.Theta < 0:
        out.append(("Theta", f"heating coefficient must be >= 0, got {e.Theta!r}"))
    if e.A_phi_sqrt < 0:
        out.append(("A_phi_sqrt", f"must be >= 0, got {e.A_phi_sqrt!r}"))
    return out


def violations(params=None, bias=None, env=None):
    """All ``(field, message)`` invariant violations of the given records."""
    out = []
    if params is not None:
        out += _circuit_violations(params)
    if bias is not None:
        out += _bias_violations(bias)
    if env is not None:
        out += _env_violations(env)
    return out


def validate(params, bias, env=None):
    """Check every invariant and return a :class:`ParameterBundle`.

    Raises :class:`ValidationError` listing all violations. An asymmetry
    alphaJ < 1 is legal but unconventional and only warns.
    """
    found = violations(params, bias, env)
    if found:
        raise ValidationError(found)
    if params.alphaJ < 1:
        warnings.warn(f"alphaJ = {params.alphaJ:.3g} < 1: the larger SQUID junction is J2, "
                      "contrary to the usual Ic3 > Ic2 labelling", UserWarning, stacklevel=2)
    return ParameterBundle(params, bias, env if env is not None else EnvironmentParams())


def as_dict(record):
    return {f.name: getattr(record, f.name) for f in fields(record)}


# Example device with f01 ~ 5 GHz, |alpha| ~ 300 MHz and 50 MHz tunability.
DESIGN_CIRCUIT = WtqCircuitParams.from_asymmetry(
    Ic1=26.0, Ic2=26.0, alphaJ=3.5, C1p=50.0, C2p=20.0, Cc=20.0, CJ1=1.0, CJ2=1.0)

DEFAULT_BIAS = BiasCircuitParams()
# Alternative bath setting quoted alongside the coherence example.
TEXT_BIAS = BiasCircuitParams(R=0.01, Tbath=0.1)
DEFAULT_ENV = EnvironmentParams()

# Fitted circuit parameters of chip A (C1', C2', Cc, Ic1, Ic2, Ic3).
_CHIP_A_TABLE = {
    "WTQ1": (60.5, 17.8, 20.0, 28.3, 25.0, 65.3),
    "WTQ2": (61.0, 18.4, 20.5, 25.2, 20.0, 69.8),
    "WTQ3": (61.0, 17.8, 20.6, 26.4, 21.3, 60.0),
    "WTQ5": (60.0, 18.4, 20.0, 23.4, 20.2, 70.7),
    "WTQ6": (60.7, 18.3, 20.1, 25.9, 21.3, 60.0),
    "WTQ7": (60.0, 18.1, 20.7, 25.4, 20.0, 60.2),
}

# Readout/heating fit inputs for chip A: kappa/2pi, chi/2pi (MHz), Te (mK),
# Theta (mK/mA^2), Tm (K), R (mOhm), plus f_r (GHz) and the measured T1 (us).
_CHIP_A_READOUT = {
    "WTQ2": (0.45, 0.47, 47.0, 10.0, 0.2, 1.0, 6.9642, 82.0),
    "WTQ3": (0.65, 0.39, 67.0, 7.0, 0.2, 1.0, 6.8372, 64.0),
    "Q4": (0.82, 0.51, 78.0, 5.0, 0.2, 1.0, 6.9567, 65.0),
    "WTQ5": (0.65, 0.26, 55.0, 5.0, 0.2, 1.0, 6.9217, 71.0),
}


def chip_a_circuit(name, CJ2=1.0):
    """Chip A qubit from the fitted-parameter table.

    Junction capacitances are not tabulated; CJ1 = CJ2 = 1 fF and
    CJ3 = alphaJ * CJ2 are assumed, as for the design example.
    """
    C1p, C2p, Cc, Ic1, Ic2, Ic3 = _CHIP_A_TABLE[name]
    alpha = Ic3 / Ic2
    return WtqCircuitParams(Ic1=Ic1, Ic2=Ic2, Ic3=Ic3, C1p=C1p, C2p=C2p, Cc=Cc,
                            CJ1=1.0, CJ2=CJ2, CJ3=alpha * CJ2, alphaJ=alpha)


def chip_a_environment(name):
    """Environment and bias-resistance inputs for a chip A qubit."""
    kappa, chi, te, theta, tm, r_mohm, f_r, t1 = _CHIP_A_READOUT[name]
    env = EnvironmentParams(T1_cap=t1, T2_cap_ratio=2.0, kappa=kappa, chi=chi, f_r=f_r,
                            Te_base=te, Theta=theta, Tm_base=tm)
    return env, r_mohm * 1e-3


CHIP_A_QUBITS = tuple(_CHIP_A_TABLE)
