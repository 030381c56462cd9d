import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wtqsim.network import (
    ReductionError, current_for_flux, dc_flux_biases, debug_dump, effective_two_mode, offset_vector,
    offsets_for_flux, phase_offsets, reduce, sine_coupling, squid_energy,
)
from wtqsim.params import DEFAULT_BIAS, DESIGN_CIRCUIT, BiasCircuitParams, WtqCircuitParams
from wtqsim.units import FLUX_QUANTUM, REDUCED_FLUX_QUANTUM, josephson_energy_ghz

circuits = st.builds(
    WtqCircuitParams.from_asymmetry,
    Ic1=st.floats(5, 80), Ic2=st.floats(5, 80), alphaJ=st.floats(1.0, 6.0),
    C1p=st.floats(20, 120), C2p=st.floats(12, 60), Cc=st.floats(1, 40),
    CJ1=st.floats(0.5, 2.0), CJ2=st.floats(0.5, 1.5),
)
biases = st.builds(
    BiasCircuitParams,
    L1=st.floats(2, 50), L2=st.floats(2, 50), Lc=st.floats(1, 10),
    M1=st.floats(0.0, 2.0), M2=st.floats(0.0, 2.0),
)


def test_turns_ratio(design_net):
    assert design_net.t12 == pytest.approx(20.0 / 35.5, rel=1e-12)
    assert design_net.t12 == pytest.approx(0.56338, abs=1e-5)


@settings(max_examples=1000, deadline=None)
@given(circuits, biases)
def test_rt_normalizes_capacitance(p, b):
    net = reduce(p, b)
    assert np.abs(net.Rt.T @ net.C0 @ net.Rt - np.eye(4)).max() <= 1e-10


@settings(max_examples=200, deadline=None)
@given(circuits, biases)
def test_structure(p, b):
    net = reduce(p, b)
    assert np.linalg.matrix_rank(net.M0, tol=1e-9 * np.abs(net.M0).max()) <= 2
    assert np.allclose(net.M0, net.M0.T)
    np.testing.assert_array_equal(net.mbar0, -net.S0)
    scale = max(np.abs(net.S0).max(), 1e-30)
    assert np.abs(net.S0 - net.S0_truncated).max() <= 1e-9 * scale
    # closed-form inverse of A
    assert np.abs(net.A @ np.linalg.inv(net.A) - np.eye(4)).max() < 1e-12


def test_source_vector_oracle(design_net):
    # source coupling = -F_CL diag(1/L) (M1, M2)
    f_cl = np.array([[-design_net.t12, design_net.t12], [1, 0], [0, -1], [-1, 1]])
    expected = -f_cl @ np.array([design_net.M1 / design_net.L1, design_net.M2 / design_net.L2])
    np.testing.assert_allclose(design_net.S0, expected, rtol=1e-12, atol=1e-14 * np.abs(expected).max())


def test_zero_current_zero_offsets(design_net):
    np.testing.assert_array_equal(offset_vector(design_net, 0.0), np.zeros(3))


def test_current_for_half_flux_quantum(design_net):
    oracle_ma = FLUX_QUANTUM / (2 * 1e-12) * 1e3
    assert current_for_flux(design_net, math.pi) == pytest.approx(oracle_ma, rel=1e-12)
    assert current_for_flux(design_net, math.pi) == pytest.approx(1.034, abs=1e-3)


@settings(max_examples=200, deadline=None)
@given(circuits, biases, st.floats(-5, 5))
def test_flux_linear_in_current(p, b, ib):
    net = reduce(p, b)
    expected = (b.M1 + b.M2) * 1e-12 * ib * 1e-3 / REDUCED_FLUX_QUANTUM
    for route in ("closed", "matrix"):
        v = offset_vector(net, ib, route)
        assert v[1] - v[2] == pytest.approx(expected, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(circuits, biases)
def test_offset_routes_agree(p, b):
    net = reduce(p, b)
    a, m = offset_vector(net, 1.0, "closed"), offset_vector(net, 1.0, "matrix")
    np.testing.assert_allclose(a, m, rtol=1e-8, atol=1e-14)
    sa, sm = sine_coupling(p, net, route="closed"), sine_coupling(p, net, route="matrix")
    np.testing.assert_allclose(sa.vector, sm.vector, rtol=1e-8, atol=1e-16)


def test_unknown_route(design_net):
    with pytest.raises(ValueError):
        offset_vector(design_net, 1.0, "nope")


@pytest.mark.parametrize("phix", [math.pi, 3 * math.pi, -math.pi])
def test_symmetric_squid_vanishes_at_half_flux(phix):
    assert squid_energy(20.0, 20.0, phix) == pytest.approx(0.0, abs=1e-12)


def test_squid_energy_limits():
    ej2, ej3 = josephson_energy_ghz(26), josephson_energy_ghz(91)
    assert squid_energy(ej2, ej3, 0.0) == pytest.approx(ej2 + ej3)
    # limit at half flux is the junction energy difference
    assert squid_energy(ej2, ej3, math.pi) == pytest.approx(ej3 - ej2, rel=1e-12)
    assert squid_energy(ej2, ej3, math.pi) == pytest.approx(32.28, abs=0.01)


@given(st.floats(0.1, 50), st.floats(0.1, 50), st.floats(-20, 20))
def test_squid_energy_periodic_and_even(ej2, ej3, phix):
    e = squid_energy(ej2, ej3, phix)
    assert squid_energy(ej2, ej3, phix + 2 * math.pi) == pytest.approx(e, abs=1e-9)
    assert squid_energy(ej2, ej3, -phix) == pytest.approx(e, abs=1e-12)
    # textbook form away from the tangent pole
    h = phix / 2
    if abs(math.cos(h)) > 1e-3:
        d = (ej3 - ej2) / (ej2 + ej3)
        ref = (ej2 + ej3) * abs(math.cos(h)) * math.sqrt(1 + d**2 * math.tan(h) ** 2)
        assert e == pytest.approx(ref, rel=1e-9)


def test_no_mutual_no_coupling():
    bias = BiasCircuitParams(M1=0.0, M2=0.0)
    net = reduce(DESIGN_CIRCUIT, bias)
    c = sine_coupling(DESIGN_CIRCUIT, net)
    np.testing.assert_array_equal(c.vector, np.zeros(3))
    with pytest.raises(ReductionError):
        current_for_flux(net, 1.0)
    # flux still prescribable; split symmetrically
    off = offsets_for_flux(net, 1.0)
    assert off.phix == pytest.approx(1.0)
    assert off.phix1_0 == 0.0


def test_sine_coefficients_mirror_symmetry():
    # swapping the two SQUID arms (junctions and coil mutuals) mirrors As2, As3
    p = WtqCircuitParams(Ic1=26, Ic2=26, Ic3=91, C1p=50, C2p=20, Cc=20, CJ1=1, CJ2=1, CJ3=3.5)
    q = WtqCircuitParams(Ic1=26, Ic2=91, Ic3=26, C1p=50, C2p=20, Cc=20, CJ1=1, CJ2=3.5, CJ3=1)
    b = BiasCircuitParams(L1=8, L2=12, M1=0.3, M2=0.7)
    bs = BiasCircuitParams(L1=12, L2=8, M1=0.7, M2=0.3)
    with pytest.warns(UserWarning):
        cq = sine_coupling(q, reduce(q, bs))
    cp = sine_coupling(p, reduce(p, b))
    assert cq.As2 == pytest.approx(-cp.As3, rel=1e-12)
    assert cq.As3 == pytest.approx(-cp.As2, rel=1e-12)
    assert cq.As1 == pytest.approx(-cp.As1, rel=1e-12)


def test_design_sine_coefficients_regression(design, design_net):
    c = sine_coupling(design, design_net)
    np.testing.assert_allclose(c.vector, [-8.22936534e-07, -4.23812315e-05, 1.28172365e-04], rtol=1e-8)
    assert c.ds == pytest.approx((c.As2 - c.As3) / (c.As2 + c.As3))


@given(st.floats(-10, 10), st.floats(-10, 10), st.floats(-1e-4, 1e-4), st.floats(-1e-4, 1e-4))
def test_combined_sine_identity(u, phix, as2, as3):
    # As2 sin(u + h) + As3 sin(u - h) = amplitude sin(u + psi)
    from wtqsim.network import SineCoupling
    c = SineCoupling(0.0, as2, as3, as2 + as3, None, False)
    h = phix / 2
    lhs = as2 * math.sin(u + h) + as3 * math.sin(u - h)
    rhs = c.squid_amplitude(phix) * math.sin(u + c.phase(phix))
    assert lhs == pytest.approx(rhs, abs=1e-15)
    assert c.squid_amplitude(phix) >= 0


@given(st.floats(-10, 10), st.floats(0.01, 50), st.floats(0.01, 50), st.floats(-10, 10))
def test_combined_cosine_identity(u, ej2, ej3, phix):
    # EJ2 cos(u + x2) + EJ3 cos(u + x3) = E2 cos(u + theta2)
    x2, x3 = 0.3 + phix / 2, 0.3 - phix / 2
    d = (ej3 - ej2) / (ej2 + ej3)
    off = phase_offsets([0.0, x2, x3], d)
    lhs = ej2 * math.cos(u + x2) + ej3 * math.cos(u + x3)
    rhs = squid_energy(ej2, ej3, phix) * math.cos(u + off.phix_2)
    assert lhs == pytest.approx(rhs, abs=1e-9)


def test_effective_two_mode(design, design_net):
    off = dc_flux_biases(design_net, DEFAULT_BIAS, 0.5)
    spec = effective_two_mode(design, design_net, off)
    assert spec.Cmat[0, 1] == -20.0 and spec.Cmat[0, 0] == 70.0 and spec.Cmat[1, 1] == 40.0
    assert spec.theta1 == off.phix1_0 and spec.theta2 == off.phix_2
    assert spec.E2 == pytest.approx(squid_energy(spec.EJ2, spec.EJ3, off.phix))


def test_bias_mismatch_rejected(design_net):
    with pytest.raises(ValueError):
        dc_flux_biases(design_net, BiasCircuitParams(R=5.0), 1.0)


def test_debug_dump_round_trips(design_net, tmp_path):
    text = debug_dump(design_net, tmp_path / "net.json")
    data = json.loads((tmp_path / "net.json").read_text())
    assert data == json.loads(text)
    np.testing.assert_allclose(np.array(data["Rt"]), design_net.Rt)
