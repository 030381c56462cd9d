import math

import numpy as np
import pytest

from hypothesis import given, strategies as st

from wtqsim.analytic import dispersive_quantities
from wtqsim.decoherence import (
    BathModel, analytic_matrix_elements, bath_spectral_density, coherence_point, coherence_sweep,
    combine_t2, dephasing_rate, exact_matrix_elements, relaxation_rate, t1_time, tphi_time,
)
from wtqsim.network import reduce
from wtqsim.params import DEFAULT_BIAS, DEFAULT_ENV, DESIGN_CIRCUIT, BiasCircuitParams
from wtqsim.spectrum import ChargeBasisConfig

HBAR = 6.62607015e-34 / (2 * math.pi)
KB = 1.380649e-23
PHI0 = 6.62607015e-34 / (2 * 1.602176634e-19) / (2 * math.pi)
CFG = ChargeBasisConfig(8, 8)


def test_spectral_density_limits():
    bath = BathModel(R=0.1, Lc=5.5e-3, Tbath=0.02)
    assert bath_spectral_density(0.0, bath) == 0.0
    w = 2 * math.pi * 5e9
    assert bath_spectral_density(w, BathModel(0.0, 5.5e-3, 0.02)) == 0.0
    approx = 0.1 / (w * 5.5e-3**2)
    assert bath_spectral_density(w, bath) == pytest.approx(approx, rel=1e-6)
    assert bath_spectral_density(w, bath) == pytest.approx(1.05e-7, rel=0.01)
    with pytest.raises(ValueError):
        bath_spectral_density(-1.0, bath)


def test_relaxation_rate_oracle():
    bath = BathModel(R=0.1, Lc=5.5e-3, Tbath=0.05)
    m, f = 3e-5, 5.0
    w = 2 * math.pi * f * 1e9
    j = w * 0.1 / (w**2 * 5.5e-3**2 + 0.01)
    coth = 1 / math.tanh(HBAR * w / (2 * KB * 0.05))
    assert relaxation_rate(m, f, bath) == pytest.approx(4 / HBAR * (PHI0 * m) ** 2 * j * coth, rel=1e-12)


def test_dephasing_rate_oracle():
    bath = BathModel(R=0.05, Lc=5.5e-3, Tbath=0.2)
    dm = 2e-7
    expected = (PHI0 * dm) ** 2 / HBAR**2 / 0.05 * 2 * KB * 0.2
    assert dephasing_rate(dm, bath) == pytest.approx(expected, rel=1e-12)
    assert dephasing_rate(dm, BathModel(0.0, 5.5e-3, 0.2)) == 0.0


def test_t2_combination_examples():
    assert combine_t2(100.0, math.inf) == 200.0
    assert combine_t2(100.0, 300.0) == pytest.approx(120.0)
    # sweet-spot caps: T1 = 100 us and T2 = 150 us
    assert combine_t2(100.0, DEFAULT_ENV.tphi_cap) == pytest.approx(150.0)
    with pytest.raises(ValueError):
        combine_t2(0.0, 1.0)


@given(st.floats(1e-3, 1e6), st.floats(1e-3, 1e9))
def test_t2_identity(t1, tphi):
    t2 = combine_t2(t1, tphi)
    assert 1 / t2 == pytest.approx(1 / (2 * t1) + 1 / tphi, rel=1e-12)
    assert t2 <= 2 * t1 and t2 <= tphi


@pytest.mark.parametrize("method", ["analytic", "exact"])
def test_zero_mutual_hits_caps(method):
    bias = BiasCircuitParams(M1=0.0, M2=0.0)
    res = coherence_point(DESIGN_CIRCUIT, bias, None, 1.1, method, CFG)
    assert res.T1 == pytest.approx(100.0, rel=1e-12)
    assert math.isinf(res.Tphi_flux)
    assert res.Tphi == pytest.approx(600.0)


@pytest.mark.parametrize("method", ["analytic", "exact"])
def test_sweet_spot_has_no_bath_dephasing(method):
    res = coherence_point(DESIGN_CIRCUIT, DEFAULT_BIAS, None, 0.0, method, CFG)
    assert res.Tphi_flux > 1e12 or math.isinf(res.Tphi_flux)
    assert res.T2 == pytest.approx(150.0, rel=1e-6)


def test_methods_agree_on_relaxation(design, design_net):
    phix = 0.3 * 2 * math.pi
    ra = coherence_point(design, DEFAULT_BIAS, None, phix, "analytic", net=design_net)
    re_ = coherence_point(design, DEFAULT_BIAS, None, phix, "exact", ChargeBasisConfig(10, 10), net=design_net)
    g_a, g_e = ra.breakdown["t1_bath"], re_.breakdown["t1_bath"]
    assert abs(g_a - g_e) / g_e < 0.25
    # regression on the exact elements
    assert abs(re_.elements.transition) == pytest.approx(5.360089e-06, rel=1e-4)
    assert re_.elements.difference == pytest.approx(-1.5475108e-07, rel=1e-4)


def test_dressing_variants(design, design_net):
    first = analytic_matrix_elements(design, design_net, 1.5)
    second = analytic_matrix_elements(design, design_net, 1.5, dressing="second_order")
    a = dispersive_quantities(design, 1.5)
    assert first.qubit_sine == second.qubit_sine
    assert second.difference / first.difference == pytest.approx((a.eps / a.eps_eff) ** 2, rel=1e-12)
    assert second.transition != pytest.approx(first.transition, rel=1e-3)
    with pytest.raises(ValueError):
        analytic_matrix_elements(design, design_net, 1.5, dressing="other")


def test_exact_elements_need_vectors(design, design_net):
    from wtqsim.network import effective_two_mode, offsets_for_flux
    from wtqsim.spectrum import solve_spectrum
    spec = effective_two_mode(design, design_net, offsets_for_flux(design_net, 1.0))
    res = solve_spectrum(spec, CFG, keep_vectors=False)
    with pytest.raises(ValueError):
        exact_matrix_elements(design, design_net, 1.0, CFG, spectrum=res)


def test_t1_bounded_by_cap(design):
    curve = coherence_sweep(design, DEFAULT_BIAS, None, np.linspace(0, 0.5, 11), "analytic")
    t1 = curve.column("T1")
    assert np.all(t1 <= 100.0 + 1e-9)
    assert np.all(curve.column("Tphi") <= 600.0 + 1e-9)


def _min_tphi(bias, method="analytic"):
    flux = np.linspace(0.05, 0.45, 9)
    return coherence_sweep(DESIGN_CIRCUIT, bias, None, flux, method, CFG).column("Tphi_flux").min()


def test_dips_deepen_with_smaller_resistance():
    mins = [_min_tphi(BiasCircuitParams(R=r, Tbath=0.02)) for r in (1.0, 0.1, 0.05, 0.01)]
    assert all(a > b for a, b in zip(mins, mins[1:]))
    # bath-only dephasing rate scales as 1/R
    assert mins[0] / mins[1] == pytest.approx(10.0, rel=1e-9)


def test_dips_deepen_with_temperature():
    mins = [_min_tphi(BiasCircuitParams(R=0.1, Tbath=t)) for t in (0.02, 0.2, 0.4, 1.0)]
    assert all(a > b for a, b in zip(mins, mins[1:]))


def test_zero_resistance_no_flux_dephasing():
    curve = coherence_sweep(DESIGN_CIRCUIT, BiasCircuitParams(R=0.0), None, [0.1, 0.3], "analytic")
    assert all(math.isinf(t) for t in curve.column("Tphi_flux"))


def test_helpers(design):
    assert t1_time(design, DEFAULT_BIAS, phix=0.0, method="analytic") <= 100.0 + 1e-9
    assert tphi_time(design, DEFAULT_BIAS, phix=0.0, method="analytic") == pytest.approx(600.0, rel=1e-6)
    with pytest.raises(ValueError):
        coherence_point(design, DEFAULT_BIAS, method="bogus")
