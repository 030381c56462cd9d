import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wtqsim.analytic import (
    NonDispersiveError, analytic_anharmonicity, analytic_frequency, analytic_sweep, coupling_ratio,
    dispersive_quantities, squid_inductance,
)
from wtqsim.params import CHIP_A_QUBITS, DESIGN_CIRCUIT, WtqCircuitParams, chip_a_circuit
from wtqsim.spectrum import ChargeBasisConfig, spectrum_at_flux

H = 6.62607015e-34
E = 1.602176634e-19
R_Q = H / E**2


def test_design_top_sweet_spot_against_exact(design, design_net):
    exact = spectrum_at_flux(design, design_net, 0.0, ChargeBasisConfig(10, 10)).f01
    f = analytic_frequency(design, 0.0)
    assert f == pytest.approx(5.0, rel=0.02)
    assert f == pytest.approx(exact, rel=0.01)


def test_design_tunability(design):
    delta = analytic_frequency(design, 0.0) - analytic_frequency(design, math.pi)
    assert delta == pytest.approx(0.050, abs=0.010)


def test_design_anharmonicity(design):
    assert abs(analytic_anharmonicity(design, 0.0)) == pytest.approx(0.300, rel=0.05)


def test_no_coupling_reduces_to_bare_transmon():
    p = WtqCircuitParams.from_asymmetry(26, 26, 3.5, 50, 20, 0.0)
    a = dispersive_quantities(p, 0.7)
    assert a.r == 0.0
    assert a.fq == a.f1
    assert a.J12 == 0.0 and a.eps == 0.0
    assert a.alpha == pytest.approx(-a.EC1 * (a.fJ1 / a.f1) ** 2, rel=1e-14)


@pytest.mark.parametrize("name", CHIP_A_QUBITS)
def test_anharmonicity_negative(name):
    for phix in np.linspace(0, 2 * math.pi, 9):
        assert analytic_anharmonicity(chip_a_circuit(name), phix) < 0
    assert analytic_anharmonicity(DESIGN_CIRCUIT, 1.0) < 0


def test_design_dispersive_regression(design):
    a = dispersive_quantities(design, 0.0)
    assert a.eps**2 == pytest.approx(0.03180725750108459, rel=1e-9)
    assert a.eps**2 < 0.05
    assert a.r == pytest.approx(20 / math.sqrt(50 * 20 + 20 * 70), rel=1e-12)
    assert a.eps_eff < a.eps


def test_impedance_and_lamb_dicke_oracle(design):
    a = dispersive_quantities(design, 0.4)
    z1 = 1.0 / (2 * math.pi * a.f1 * 1e9 * 70e-15)
    assert a.Z1 == pytest.approx(z1, rel=1e-12)
    assert a.eta1_sq == pytest.approx(4 * math.pi * z1 / R_Q, rel=1e-12)
    assert a.eta2_sq == pytest.approx(4 * math.pi * a.Z2 / R_Q, rel=1e-12)


def test_squid_inductance():
    lj2 = 1.0545718176461565e-34 / (2 * E) / 26e-9
    lj3 = lj2 / 3.5
    parallel = lj2 * lj3 / (lj2 + lj3)
    assert squid_inductance(DESIGN_CIRCUIT, 0.0) == pytest.approx(parallel, rel=1e-9)
    sym = WtqCircuitParams.from_asymmetry(26, 26, 1.0, 50, 20, 20)
    assert squid_inductance(sym, math.pi) > 1e6 * squid_inductance(sym, 0.0)


def test_non_dispersive_raises():
    with pytest.raises(NonDispersiveError):
        dispersive_quantities(WtqCircuitParams.from_asymmetry(26, 2, 1.2, 50, 20, 20), 0.0)
    with pytest.raises(NonDispersiveError):
        dispersive_quantities(WtqCircuitParams.from_asymmetry(26, 5, 1.5, 50, 20, 20), 0.0)


def test_strong_hybridization_warns():
    with pytest.warns(RuntimeWarning, match="eps"):
        dispersive_quantities(WtqCircuitParams.from_asymmetry(26, 10, 1.5, 50, 20, 20), 0.0)


@settings(max_examples=100, deadline=None)
@given(st.floats(-1, 1))
def test_even_and_periodic(x):
    f = analytic_frequency(DESIGN_CIRCUIT, 2 * math.pi * x)
    assert analytic_frequency(DESIGN_CIRCUIT, -2 * math.pi * x) == pytest.approx(f, abs=1e-12)
    assert analytic_frequency(DESIGN_CIRCUIT, 2 * math.pi * (x + 1)) == pytest.approx(f, abs=1e-9)


def test_sweep_shapes(design):
    flux = np.linspace(0, 0.5, 11)
    f01, alpha, f10 = analytic_sweep(design, flux)
    assert f01.shape == alpha.shape == f10.shape == (11,)
    assert np.all(np.diff(f01) < 0)
    assert f10[0] == pytest.approx(dispersive_quantities(design, 0.0).f2)
    assert coupling_ratio(design) == pytest.approx(dispersive_quantities(design, 0.0).r)
