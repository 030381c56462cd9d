import math

import pytest
from hypothesis import given, strategies as st

from wtqsim import units
from wtqsim.params import (
    CHIP_A_QUBITS, DEFAULT_BIAS, DEFAULT_ENV, DESIGN_CIRCUIT, BiasCircuitParams, EnvironmentParams,
    ValidationError, WtqCircuitParams, chip_a_circuit, chip_a_environment, validate,
)

E = 1.602176634e-19
H = 6.62607015e-34


def test_constants_are_exact_si():
    assert units.FLUX_QUANTUM == pytest.approx(2.067833848e-15, rel=1e-9)
    assert units.RESISTANCE_QUANTUM == pytest.approx(25812.80745, rel=1e-9)


@pytest.mark.parametrize("ic, expected", [(26.0, 12.9138), (20.0, 9.9337), (0.0, 0.0)])
def test_josephson_energy(ic, expected):
    # EJ/h = Ic / (4 pi e), independent of the module's constant
    oracle = ic * 1e-9 / (4 * math.pi * E) / 1e9
    assert units.josephson_energy_ghz(ic) == pytest.approx(oracle, rel=1e-12, abs=1e-15)
    assert units.josephson_energy_ghz(ic) == pytest.approx(expected, abs=5e-4)


@pytest.mark.parametrize("c, expected", [(70.0, 0.2766), (40.0, 0.4842), (1e6, 1.937e-5)])
def test_charging_energy(c, expected):
    oracle = E**2 / (2 * H * c * 1e-15) / 1e9
    assert units.charging_energy_ghz(c) == pytest.approx(oracle, rel=1e-12)
    assert units.charging_energy_ghz(c) == pytest.approx(expected, rel=1e-3)


def test_domain_errors():
    with pytest.raises(units.DomainError):
        units.josephson_energy_ghz(-1.0)
    with pytest.raises(units.DomainError):
        units.charging_energy_ghz(0.0)
    with pytest.raises(units.DomainError):
        units.josephson_inductance(0.0)


@given(st.floats(1e-3, 1e4))
def test_energy_conversions_round_trip(x):
    assert units.critical_current_na(units.josephson_energy_ghz(x)) == pytest.approx(x, rel=1e-12)
    assert units.capacitance_ff(units.charging_energy_ghz(x)) == pytest.approx(x, rel=1e-12)


def test_josephson_inductance():
    assert units.josephson_inductance(26.0) == pytest.approx(units.REDUCED_FLUX_QUANTUM / 26e-9)


def test_design_parameters_accepted():
    bundle = validate(DESIGN_CIRCUIT, DEFAULT_BIAS, DEFAULT_ENV)
    assert bundle.circuit.Ic3 == pytest.approx(91.0)
    assert DESIGN_CIRCUIT.CJ3 == pytest.approx(3.5)


def test_negative_cc_rejected():
    bad = WtqCircuitParams.from_asymmetry(26, 26, 3.5, 50, 20, -1.0)
    with pytest.raises(ValidationError) as err:
        validate(bad, DEFAULT_BIAS)
    assert "Cc" in err.value.fields


def test_strong_coupling_rejected():
    # k1 = M1 / sqrt(Lc L1) = 0.5
    lc = 5.5
    m1 = 0.5 * math.sqrt(lc * 1e9 * 10.0)
    bias = BiasCircuitParams(M1=m1)
    assert bias.k1 == pytest.approx(0.5)
    with pytest.raises(ValidationError) as err:
        validate(DESIGN_CIRCUIT, bias)
    assert "k1" in err.value.fields


def test_all_violations_reported():
    bad = WtqCircuitParams(Ic1=-1, Ic2=26, Ic3=91, C1p=50, C2p=20, Cc=-3)
    with pytest.raises(ValidationError) as err:
        validate(bad, DEFAULT_BIAS)
    assert {"Ic1", "Cc"} <= set(err.value.fields)


def test_shunt_must_include_junction_capacitance():
    bad = WtqCircuitParams(Ic1=26, Ic2=26, Ic3=91, C1p=50, C2p=1.5, Cc=20)
    with pytest.raises(ValidationError) as err:
        validate(bad, DEFAULT_BIAS)
    assert err.value.fields == ["C2p"]


def test_small_asymmetry_warns():
    p = WtqCircuitParams.from_asymmetry(26, 26, 0.5, 50, 20, 20)
    with pytest.warns(UserWarning):
        validate(p, DEFAULT_BIAS)


def test_tphi_cap_from_t2_ratio():
    assert EnvironmentParams().tphi_cap == pytest.approx(600.0)
    assert math.isinf(EnvironmentParams(T2_cap_ratio=2.0).tphi_cap)


@pytest.mark.parametrize("name", CHIP_A_QUBITS)
def test_chip_a_tables_validate(name):
    validate(chip_a_circuit(name), DEFAULT_BIAS)


def test_chip_a_environment():
    env, r = chip_a_environment("WTQ2")
    assert r == pytest.approx(1e-3)
    assert env.T1_cap == 82.0 and env.has_readout
