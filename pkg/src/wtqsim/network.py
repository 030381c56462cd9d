"""Reduction of the three-junction circuit to an effective two-mode problem.

The chain is: Belevitch transformer (diagonal C0, turns ratios), loop matrix
F_CL, inverse inductance matrix M0, source coupling S0, the coordinate change
Rt = R0 R1 R2 A^-1 that maps C0 to the identity, Born-Oppenheimer elimination
of the two stiff loop coordinates, and finally DC phase offsets and the sine
coupling of the junction phases to the bias impedance.

Everything inside this module is SI (F, H, A, Wb); the public records keep
the SI arrays and expose the few quantities needed downstream.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .params import validate
from .units import FEMTO, REDUCED_FLUX_QUANTUM, josephson_energy_ghz, josephson_inductance


class ReductionError(ArithmeticError):
    """The capacitive network is singular and cannot be reduced."""


@dataclass(frozen=True)
class ReducedNetwork:
    """All matrices of the circuit reduction, SI units.

    ``b`` is the fast (f2, f3) block of Rt^T M0 Rt and ``a_unit`` the fast
    block of Rt^T S0, i.e. the linear source term per ampere of bias
    current. The DC minimum of the fast coordinates is ``-inv(b) @ a``.
    """

    C0: np.ndarray
    turns_ratios: tuple
    F_CL: np.ndarray
    M0: np.ndarray
    S0: np.ndarray
    S0_truncated: np.ndarray
    mbar0: np.ndarray
    mbar: np.ndarray
    R0: np.ndarray
    R1: np.ndarray
    R2: np.ndarray
    A: np.ndarray
    Rt: np.ndarray
    Ca: float
    Cb: float
    CA: float
    CB: float
    Ca3: float
    Cb3: float
    Ca2: float
    Cb2: float
    C11: float
    C22: float
    beta: float
    alpha: np.ndarray
    b: np.ndarray
    a_unit: np.ndarray
    C1p: float
    C2p: float
    Cc: float
    CJ2: float
    CJ3: float
    L1: float
    L2: float
    M1: float
    M2: float
    d: float
    params: object = None
    bias: object = None

    @property
    def t12(self):
        return self.turns_ratios[1]

    @property
    def Rt_M0_Rt(self):
        return self.Rt.T @ self.M0 @ self.Rt


@dataclass(frozen=True)
class PhaseOffsets:
    """DC reduced-phase offsets (rad) at a given bias current.

    phix1_0, phix2_0, phix3_0 are the per-junction offsets; phix their SQUID
    difference; phix_2 the offset of the combined SQUID cosine; phix_s the
    offset of the combined sine coupling; phi_delta = phix_s - phix_2 is the
    angle entering the analytic dephasing element.
    """

    phix1_0: float
    phix2_0: float
    phix3_0: float
    phix: float
    phix_2: float
    phix_s: float
    phi_delta: float
    ib_ma: float | None = None


@dataclass(frozen=True)
class SineCoupling:
    """Coefficients of sin(phi_Ji) in mbar^T f, in units of phi_0.

    The physical coupling flux is ``REDUCED_FLUX_QUANTUM * (As1 sin + ...)``.
    ``degenerate`` marks As2 + As3 == 0, for which ``ds`` is undefined and the
    two SQUID terms must be kept separate.
    """

    As1: float
    As2: float
    As3: float
    A: float
    ds: float | None
    degenerate: bool

    @property
    def vector(self):
        return np.array([self.As1, self.As2, self.As3])

    def squid_amplitude(self, phix):
        """Non-negative amplitude of the combined SQUID sine term at flux ``phix``."""
        h = 0.5 * phix
        return math.hypot((self.As2 + self.As3) * math.cos(h), (self.As2 - self.As3) * math.sin(h))

    def phase(self, phix):
        """Shift psi_s with As2 sin(u + h) + As3 sin(u - h) = amplitude * sin(u + psi_s).

        Equals arctan(ds tan(phix/2)) when A > 0 and stays defined when A = 0.
        """
        h = 0.5 * phix
        return math.atan2((self.As2 - self.As3) * math.sin(h), (self.As2 + self.As3) * math.cos(h))


@dataclass(frozen=True)
class TwoModeSpec:
    """Effective Hamiltonian data for the qubit (1) and SQUID (2) modes.

    ``Cmat`` is the capacitance matrix in fF; energies are E/h in GHz.
    """

    Cmat: np.ndarray
    EJ1: float
    EJ2: float
    EJ3: float
    E2: float
    d: float
    offsets: PhaseOffsets

    @property
    def theta1(self):
        return self.offsets.phix1_0

    @property
    def theta2(self):
        return self.offsets.phix_2


def squid_energy(ej2, ej3, phix):
    """E2(phix) = (EJ2+EJ3) |cos(phix/2)| sqrt(1 + d^2 tan^2(phix/2)), pole free."""
    h = 0.5 * np.asarray(phix, dtype=float)
    return np.hypot((ej2 + ej3) * np.cos(h), (ej3 - ej2) * np.sin(h))


def _asym_angle(x, phix):
    # arctan(x tan(phix/2)) continued through the poles of tan
    h = 0.5 * phix
    return math.atan2(x * math.sin(h), math.cos(h))


def _capacitances(params):
    C1p = params.C1p * FEMTO
    C2p = params.C2p * FEMTO
    Cc = params.Cc * FEMTO
    CJ2 = params.CJ2 * FEMTO
    CJ3 = params.CJ3 * FEMTO
    C2 = C2p - CJ2 - CJ3
    return C1p, C2p, Cc, CJ2, CJ3, C2


def reduce(params, bias):
    """Build the full :class:`ReducedNetwork` for validated parameters."""
    validate(params, bias)
    C1p, C2p, Cc, CJ2, CJ3, C2 = _capacitances(params)
    L1, L2, Lc, M1, M2 = bias.si()
    if C2 + Cc == 0:
        raise ReductionError("C2 + Cc = 0: Belevitch transformer undefined")

    t12 = Cc / (C2 + Cc)
    turns = (1.0, t12, 0.0, 1.0)
    CA = C1p + Cc * C2 / (C2 + Cc)
    CB = C2 + Cc
    C0 = np.diag([CA, CJ2, CJ3, CB])

    F_CL = np.array([[-t12, t12], [1.0, 0.0], [0.0, -1.0], [-1.0, 1.0]])
    inv_l = np.diag([1.0 / L1, 1.0 / L2])
    M0 = F_CL @ inv_l @ F_CL.T

    k1 = M1 / math.sqrt(Lc * L1)
    k2 = M2 / math.sqrt(Lc * L2)
    S0 = _source_coupling(F_CL, L1, L2, Lc, M1, M2)
    # Closed form with the k^2 corrections dropped; the exact vector reduces
    # to F_CL diag(1/L) (-M) so the two differ only at O(k^2) roundoff.
    S0_truncated = -F_CL @ np.array([M1 / L1, M2 / L2])
    mbar0 = -S0

    Ca = C1p + C2p * Cc / (C2p + Cc)
    Cb = C2 + Cc + CJ2 + CJ3
    Ca3 = C1p + Cc * (C2 + CJ3) / (C2 + Cc + CJ3)
    Cb3 = C2 + Cc + CJ3
    Ca2 = C1p + Cc * (C2 + CJ2) / (C2 + Cc + CJ2)
    Cb2 = C2 + Cc + CJ2
    C11 = CJ2 * Ca3 * Cb3 / (Ca * Cb)
    C22 = CJ3 * CA * CB / (Ca3 * Cb3)
    beta = math.sqrt(CJ2 * CJ3 / (Ca * Cb)) * (C1p + Cc) / math.sqrt(CA * CB)

    R0 = np.array([[1.0, 0, 0, 0], [t12, 1, 0, 1], [t12, 0, 1, 1], [0, 0, 0, 1]])
    R1 = np.eye(4)
    R1[3] = [-t12 * (CJ2 + CJ3) / Cb, -CJ2 / Cb, -CJ3 / Cb, 1.0]
    R2 = np.eye(4)
    R2[0, 1] = -CJ2 * Cc / (Ca * Cb)
    R2[0, 2] = -CJ3 * Cc / (Ca * Cb)
    A = np.array([[math.sqrt(Ca), 0, 0, 0],
                  [0, math.sqrt(C11), -beta * math.sqrt(C22), 0],
                  [0, 0, math.sqrt(C22), 0],
                  [0, 0, 0, math.sqrt(Cb)]])
    A_inv = np.array([[1 / math.sqrt(Ca), 0, 0, 0],
                      [0, 1 / math.sqrt(C11), beta / math.sqrt(C11), 0],
                      [0, 0, 1 / math.sqrt(C22), 0],
                      [0, 0, 0, 1 / math.sqrt(Cb)]])
    Rt = R0 @ R1 @ R2 @ A_inv

    alpha = _alpha_closed_form(C1p, Cc, CJ2, CJ3, Ca, Cb, CA, CB, Ca3, Cb3)
    b = _b_closed_form(C1p, Cc, CJ2, CJ3, Ca, Cb, CA, CB, Ca3, Cb3, alpha, L1, L2)
    a_unit = _a_closed_form(C1p, Cc, CJ2, CJ3, CA, CB, Ca3, Cb3, alpha, L1, L2, M1, M2)
    mbar = Rt.T @ mbar0

    ej2 = josephson_energy_ghz(params.Ic2)
    ej3 = josephson_energy_ghz(params.Ic3)
    d = (ej3 - ej2) / (ej2 + ej3)

    return ReducedNetwork(
        C0=C0, turns_ratios=turns, F_CL=F_CL, M0=M0, S0=S0, S0_truncated=S0_truncated,
        mbar0=mbar0, mbar=mbar, R0=R0, R1=R1, R2=R2, A=A, Rt=Rt,
        Ca=Ca, Cb=Cb, CA=CA, CB=CB, Ca3=Ca3, Cb3=Cb3, Ca2=Ca2, Cb2=Cb2,
        C11=C11, C22=C22, beta=beta, alpha=alpha, b=b, a_unit=a_unit,
        C1p=C1p, C2p=C2p, Cc=Cc, CJ2=CJ2, CJ3=CJ3, L1=L1, L2=L2, M1=M1, M2=M2, d=d,
        params=params, bias=bias,
    )


def _source_coupling(F_CL, L1, L2, Lc, M1, M2):
    # S0 = F_CB - F_CL (L_LL^-1)^T Fbar_KL^T Ltilde_K^T F_KB with F_CB = 0, F_KB = -1
    M = np.array([M1, M2])
    L_bar = np.diag([L1, L2]) - np.outer(M, M) / Lc
    Fbar_KL = -M / Lc
    Ltilde_K = Lc * (1.0 - M1**2 / (Lc * L1) - M2**2 / (Lc * L2))
    return F_CL @ np.linalg.solve(L_bar.T, Fbar_KL) * Ltilde_K


def _alpha_closed_form(C1p, Cc, CJ2, CJ3, Ca, Cb, CA, CB, Ca3, Cb3):
    s = math.sqrt(Ca * Cb * Ca3 * Cb3)
    alpha = np.zeros((3, 4))
    alpha[0] = [1 / math.sqrt(Ca), -Cc * math.sqrt(CJ2) / s,
                -Cc * math.sqrt(CJ3) / math.sqrt(CA * CB * Ca3 * Cb3), 0.0]
    alpha[1] = [Cc / (Cb * math.sqrt(Ca)), math.sqrt(Ca3 * Cb3 / (Ca * Cb)) / math.sqrt(CJ2),
                0.0, 1 / math.sqrt(Cb)]
    alpha[2] = [Cc / (Cb * math.sqrt(Ca)), -(C1p + Cc) * math.sqrt(CJ2) / s,
                math.sqrt(CA * CB / (Ca3 * Cb3)) / math.sqrt(CJ3), 1 / math.sqrt(Cb)]
    return alpha


def _b_closed_form(C1p, Cc, CJ2, CJ3, Ca, Cb, CA, CB, Ca3, Cb3, alpha, L1, L2):
    a22, a33 = alpha[1, 1], alpha[2, 2]
    off = math.sqrt(CJ3 * Ca * Cb / (CJ2 * CA * CB)) * (C1p + Cc) / (Ca3 * Cb3 * L1)
    return np.array([
        [1 / (a22**2 * CJ2**2 * L1), off],
        [off, 1 / (a33**2 * CJ3**2 * L2) + (C1p + Cc)**2 * CJ3 / (CA * CB * Ca3 * Cb3 * L1)],
    ])


def _a_closed_form(C1p, Cc, CJ2, CJ3, CA, CB, Ca3, Cb3, alpha, L1, L2, M1, M2):
    a22, a33 = alpha[1, 1], alpha[2, 2]
    return np.array([
        -M1 / (a22 * CJ2 * L1),
        -(C1p + Cc) * math.sqrt(CJ3) * M1 / (math.sqrt(CA * CB * Ca3 * Cb3) * L1)
        + M2 / (a33 * CJ3 * L2),
    ])


def offset_vector(net, ib_ma, route="closed"):
    """Per-junction DC phase offsets (rad) for a coil current ``ib_ma`` in mA.

    ``route="closed"`` evaluates the closed-form vector; ``route="matrix"``
    minimizes the fast-sector quadratic form numerically using the exact
    source vector and the full Rt.
    """
    ib = ib_ma * 1e-3
    if route == "closed":
        CaCb = net.Ca * net.Cb
        C1c = net.C1p + net.Cc
        vec = np.array([
            net.Cc * (net.CJ3 * net.M2 - net.CJ2 * net.M1),
            net.Ca3 * net.Cb3 * net.M1 + C1c * net.CJ3 * net.M2,
            -(C1c * net.CJ2 * net.M1 + net.Ca2 * net.Cb2 * net.M2),
        ]) / CaCb
        return vec * ib / REDUCED_FLUX_QUANTUM
    if route == "matrix":
        B = net.Rt_M0_Rt[1:3, 1:3]
        a = (net.Rt.T @ net.S0)[1:3] * ib
        f_fast = -np.linalg.solve(B, a)
        return net.Rt[:3, 1:3] @ f_fast / REDUCED_FLUX_QUANTUM
    raise ValueError(f"unknown route {route!r}")


def sine_coupling(params, net, bias=None, route="closed"):
    """Coefficients A_s of the junction sines in the bath coupling."""
    _check_bias(net, bias)
    lj = np.array([josephson_inductance(params.Ic1), josephson_inductance(params.Ic2),
                   josephson_inductance(params.Ic3)])
    if route == "closed":
        CaCb = net.Ca * net.Cb
        C1c = net.C1p + net.Cc
        As = np.array([
            net.Cc * (net.CJ2 * net.M1 - net.CJ3 * net.M2) / (CaCb * lj[0]),
            -(net.Ca3 * net.Cb3 * net.M1 + C1c * net.CJ3 * net.M2) / (CaCb * lj[1]),
            (C1c * net.CJ2 * net.M1 + net.Ca2 * net.Cb2 * net.M2) / (CaCb * lj[2]),
        ])
    elif route == "matrix":
        B = net.Rt_M0_Rt[1:3, 1:3]
        G = net.Rt[:3, 1:3].T * (REDUCED_FLUX_QUANTUM / lj)[None, :]
        As = net.mbar[1:3] @ (-np.linalg.solve(B, G)) / REDUCED_FLUX_QUANTUM
    else:
        raise ValueError(f"unknown route {route!r}")
    As1, As2, As3 = (float(x) for x in As)
    total = As2 + As3
    degenerate = abs(total) <= 1e-12 * max(abs(As2), abs(As3), 1e-300)
    ds = None if degenerate else (As2 - As3) / total
    return SineCoupling(As1=As1, As2=As2, As3=As3, A=total, ds=ds, degenerate=degenerate)


def phase_offsets(vec, d, coupling=None, ib_ma=None):
    """Combine per-junction offsets into the SQUID and coupling phases."""
    x1, x2, x3 = (float(v) for v in vec)
    phix = x2 - x3
    mean = 0.5 * (x2 + x3)
    psi_d = _asym_angle(d, phix)
    psi_s = 0.0 if coupling is None else coupling.phase(phix)
    return PhaseOffsets(phix1_0=x1, phix2_0=x2, phix3_0=x3, phix=phix,
                        phix_2=mean - psi_d, phix_s=mean + psi_s,
                        phi_delta=psi_d + psi_s, ib_ma=ib_ma)


def _check_bias(net, bias):
    if bias is not None and net.bias is not None and bias != net.bias:
        raise ValueError("bias circuit differs from the one the network was reduced with")


def dc_flux_biases(net, bias, ib_ma, route="closed"):
    """:class:`PhaseOffsets` produced by the coil current ``ib_ma`` (mA)."""
    _check_bias(net, bias)
    vec = offset_vector(net, ib_ma, route=route)
    return phase_offsets(vec, net.d, sine_coupling(net.params, net, route=route), ib_ma)


def current_for_flux(net, phix):
    """Coil current in mA giving SQUID reduced flux ``phix`` (rad)."""
    per_ma = offset_vector(net, 1.0)
    slope = per_ma[1] - per_ma[2]
    if slope == 0:
        raise ReductionError("bias coil does not thread the SQUID (M1 + M2 = 0)")
    return phix / slope


def offsets_for_flux(net, phix, params=None):
    """Offsets for a prescribed SQUID flux.

    With zero mutual inductance there is no coil current to derive them
    from; phix is then split symmetrically between J2 and J3 and J1 gets no
    offset. Any such split is a gauge choice and leaves the spectrum fixed.
    """
    params = net.params if params is None else params
    if net.M1 + net.M2 == 0:
        vec = np.array([0.0, 0.5 * phix, -0.5 * phix])
        return phase_offsets(vec, net.d, None, None)
    ib = current_for_flux(net, phix)
    vec = offset_vector(net, ib)
    return phase_offsets(vec, net.d, sine_coupling(params, net), ib)


def effective_two_mode(params, net, offsets):
    """Two-mode Hamiltonian data at the given DC offsets.

    ``net`` is accepted for symmetry with the reduction chain; the spectrum
    only needs the junction energies and the offsets.
    """
    cmat = np.array([[params.C1p + params.Cc, -params.Cc],
                     [-params.Cc, params.C2p + params.Cc]])
    ej1 = josephson_energy_ghz(params.Ic1)
    ej2 = josephson_energy_ghz(params.Ic2)
    ej3 = josephson_energy_ghz(params.Ic3)
    e2 = float(squid_energy(ej2, ej3, offsets.phix))
    d = (ej3 - ej2) / (ej2 + ej3)
    return TwoModeSpec(Cmat=cmat, EJ1=ej1, EJ2=ej2, EJ3=ej3, E2=e2, d=d, offsets=offsets)


def debug_dump(net, path=None):
    """JSON dump of every reduction matrix; returns the string."""
    out = {}
    for name, value in net.__dict__.items():
        if name in ("params", "bias"):
            out[name] = None if value is None else dict(value.__dict__)
        elif isinstance(value, np.ndarray):
            out[name] = value.tolist()
        elif isinstance(value, tuple):
            out[name] = list(value)
        else:
            out[name] = value
    text = json.dumps(out, indent=2)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text
