"""Structural invariant suite run by ``wtqsim selfcheck``."""
from __future__ import annotations

import math
from dataclasses import replace

import numpy as np

from .decoherence import combine_t2
from .network import effective_two_mode, offset_vector, offsets_for_flux, reduce, squid_energy
from .params import DEFAULT_BIAS, DESIGN_CIRCUIT, WtqCircuitParams
from .spectrum import ChargeBasisConfig, exact_levels
from .units import REDUCED_FLUX_QUANTUM

CASES = (
    DESIGN_CIRCUIT,
    WtqCircuitParams.from_asymmetry(25.2, 20.0, 3.49, 61.0, 18.4, 20.5),
    WtqCircuitParams(Ic1=30.0, Ic2=15.0, Ic3=40.0, C1p=70.0, C2p=30.0, Cc=10.0, CJ1=2.0, CJ2=1.5, CJ3=4.0),
)


def _check_rt(perturb_rt):
    worst = 0.0
    for p in CASES:
        net = reduce(p, DEFAULT_BIAS)
        rt = net.Rt * (1.0 + perturb_rt)
        worst = max(worst, float(np.abs(rt.T @ net.C0 @ rt - np.eye(4)).max()))
    return worst <= 1e-10, f"max |Rt^T C0 Rt - 1| = {worst:.3e}"


def _check_mbar():
    worst = 0.0
    for p in CASES:
        net = reduce(p, DEFAULT_BIAS)
        scale = np.abs(net.S0).max()
        worst = max(worst, float(np.abs(net.mbar0 + net.S0).max() / scale))
    return worst <= 1e-12, f"max |mbar0 + S0| / |S0| = {worst:.3e}"


def _check_flux_linearity():
    worst = 0.0
    for p in CASES:
        net = reduce(p, DEFAULT_BIAS)
        for ib in (0.37, 1.0, 2.9):
            for route in ("closed", "matrix"):
                v = offset_vector(net, ib, route)
                expected = (net.M1 + net.M2) * ib * 1e-3 / REDUCED_FLUX_QUANTUM
                worst = max(worst, abs(v[1] - v[2] - expected))
    return worst <= 1e-12, f"max |phix - (M1+M2) IB / phi0| = {worst:.3e} rad"


def _check_routes():
    worst = 0.0
    for p in CASES:
        net = reduce(p, DEFAULT_BIAS)
        a, b = offset_vector(net, 1.3, "closed"), offset_vector(net, 1.3, "matrix")
        worst = max(worst, float(np.abs(a - b).max() / np.abs(a).max()))
    return worst <= 1e-9, f"closed vs matrix offsets, max relative difference {worst:.3e}"


def _check_gauge():
    net = reduce(DESIGN_CIRCUIT, DEFAULT_BIAS)
    cfg = ChargeBasisConfig(8, 8)
    base = offsets_for_flux(net, 1.1)
    ref = exact_levels(effective_two_mode(DESIGN_CIRCUIT, net, base), cfg)[:8]
    moved = replace(base, phix1_0=base.phix1_0 + 0.7, phix_2=base.phix_2 - 1.9)
    alt = exact_levels(effective_two_mode(DESIGN_CIRCUIT, net, moved), cfg)[:8]
    worst = float(np.abs(ref - alt).max())
    return worst <= 1e-9, f"max level shift under offset change {worst:.3e} GHz"


def _check_convergence():
    net = reduce(DESIGN_CIRCUIT, DEFAULT_BIAS)
    spec = effective_two_mode(DESIGN_CIRCUIT, net, offsets_for_flux(net, 1.0))
    a = exact_levels(spec, ChargeBasisConfig(10, 10))[:8]
    b = exact_levels(spec, ChargeBasisConfig(14, 14))[:8]
    worst = float(np.abs(a - b).max())
    return worst <= 1e-6, f"ncut 10 vs 14 max level difference {worst:.3e} GHz"


def _check_t2():
    worst = 0.0
    for t1, tphi in ((100.0, 300.0), (82.0, 796.0), (10.0, 1e6)):
        t2 = combine_t2(t1, tphi)
        worst = max(worst, abs(1.0 / t2 - (1.0 / (2 * t1) + 1.0 / tphi)) * t2)
    ok = worst <= 1e-12 and combine_t2(50.0, math.inf) == 100.0
    return ok, f"max relative 1/T2 error {worst:.3e}"


def _check_e2():
    phix = np.linspace(-7.0, 7.0, 141)
    a = squid_energy(12.9, 45.2, phix)
    b = squid_energy(12.9, 45.2, phix + 2 * math.pi)
    worst = float(np.abs(a - b).max())
    ends = abs(squid_energy(12.9, 45.2, 0.0) - 58.1) + abs(squid_energy(12.9, 45.2, math.pi) - 32.3)
    return worst <= 1e-12 and ends <= 1e-12, f"E2 periodicity error {worst:.3e} GHz"


def _check_closed_forms():
    worst = 0.0
    for p in CASES:
        net = reduce(p, DEFAULT_BIAS)
        big = net.Rt_M0_Rt[1:3, 1:3]
        a = (net.Rt.T @ net.S0)[1:3]
        worst = max(worst, float(np.abs(net.b - big).max() / np.abs(big).max()),
                    float(np.abs(net.a_unit - a).max() / np.abs(a).max()),
                    float(np.abs(net.alpha - net.Rt[:3]).max() / np.abs(net.Rt).max()))
    return worst <= 1e-10, f"closed-form b, a, alpha vs matrix products: {worst:.3e}"


def run(perturb_rt=0.0, stream=None):
    """Run all checks; returns (passed, failed, lines)."""
    checks = [
        ("rt_identity", lambda: _check_rt(perturb_rt)),
        ("mbar_equals_minus_s0", _check_mbar),
        ("flux_linearity", _check_flux_linearity),
        ("offset_routes", _check_routes),
        ("closed_forms", _check_closed_forms),
        ("gauge_invariance", _check_gauge),
        ("ncut_convergence", _check_convergence),
        ("t2_combination", _check_t2),
        ("e2_periodicity", _check_e2),
    ]
    lines = []
    passed = failed = 0
    for name, fn in checks:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashing check is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        passed += ok
        failed += not ok
        lines.append(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    lines.append(f"selfcheck: {passed} passed, {failed} failed")
    if stream is not None:
        stream.write("\n".join(lines) + "\n")
    return passed, failed, lines
