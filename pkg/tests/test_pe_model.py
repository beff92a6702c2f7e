import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import LN_1550
from pecvqkd import pe_model as pm
from pecvqkd.errors import DegenerateConductivity, InvalidParameter


def random_material(rng):
    draw = {k: v * 10 ** rng.uniform(-1, 1) for k, v in LN_1550.items()}
    draw["eta_q"] = rng.uniform(0.05, 1.0)
    return pm.MaterialParams(**draw)


def test_photoconductivity_zero_and_linear(material):
    assert pm.photoconductivity(material, 0.0) == 0.0
    assert pm.photoconductivity(material, 6.0) == pytest.approx(2 * pm.photoconductivity(material, 3.0), rel=1e-15)


def test_photoconductivity_frozen_value(material):
    # e*mu*tau0*eta_q*alpha / h nu at 30 digits (mpmath)
    assert pm.photoconductivity(material, 1.0) == pytest.approx(9.2517417804135778385e-16, rel=1e-14)


def test_photoconductivity_rejects_negative(material):
    with pytest.raises(InvalidParameter):
        pm.photoconductivity(material, -1.0)


def test_material_invariants():
    with pytest.raises(InvalidParameter):
        pm.MaterialParams(**{**LN_1550, "eta_q": 1.5})
    with pytest.raises(InvalidParameter):
        pm.MaterialParams(**{**LN_1550, "sigma_d": 0.0})
    with pytest.raises(InvalidParameter):
        pm.ArmState(I_ir=-1.0)


def test_degenerate_conductivity(material):
    # unreachable through the validated constructor; forced here to exercise the guard
    object.__setattr__(material, "sigma_d", 0.0)
    with pytest.raises(DegenerateConductivity):
        pm.saturated_field(material, pm.ArmState(0.0, 1.0))
    with pytest.raises(DegenerateConductivity):
        pm.arm_phase_deviation_closed(material, pm.ArmState(0.0, 1.0))


def test_saturated_field_dark_crystal(material):
    assert pm.saturated_field(material, pm.ArmState(0.0, 5.0)) == 0.0


def test_saturated_field_photovoltaic_only(material):
    I = 250.0
    expected = material.kappa * material.alpha * I / (material.sigma_d + pm.photoconductivity(material, I))
    assert pm.saturated_field(material, pm.ArmState(I, 0.0)) == pytest.approx(expected, rel=1e-15)


def test_saturated_field_frozen_value(material):
    # exact rational substitution (sympy) at I = 1000 W/m^2, V_app = 3 V
    assert pm.saturated_field(material, pm.ArmState(1000.0, 3.0)) == pytest.approx(
        208554.55613280011086, rel=1e-12)


def test_index_change_from_saturated_field(material):
    E = pm.saturated_field(material, pm.ArmState(1000.0, 3.0))
    assert pm.index_change(material, E) == pytest.approx(-0.000031387989990429706213, rel=1e-12)
    assert pm.index_change(material, 0.0) == 0.0
    assert pm.index_change(material, -E) == -pm.index_change(material, E)


def test_transient_endpoints(material):
    Es, E0, I = 1.0e4, -2.0e3, 500.0
    assert pm.field_transient(material, Es, 0.0, E_init=E0, I_ir=I) == E0
    assert pm.field_transient(material, Es, 1e6 * pm.time_constant(material, I), E_init=E0, I_ir=I) == pytest.approx(Es)
    tau = pm.time_constant(material, I)
    assert pm.field_transient(material, Es, tau, E_init=E0, I_ir=I) == pytest.approx(
        E0 + (Es - E0) * (1 - math.exp(-1)), rel=1e-12)
    assert pm.field_transient(material, Es, tau) != Es  # default start from zero field


def test_transient_rejects_negative_time(material):
    with pytest.raises(InvalidParameter):
        pm.field_transient(material, 1.0, -1.0)


@settings(max_examples=200, deadline=None)
@given(Es=st.floats(-1e6, 1e6), E0=st.floats(-1e6, 1e6),
       t=st.floats(0, 1e3), I=st.floats(0, 1e4))
def test_transient_bounded(Es, E0, t, I):
    material = pm.MaterialParams(**LN_1550)
    E = pm.field_transient(material, Es, t, E_init=E0, I_ir=I)
    lo, hi = min(Es, E0), max(Es, E0)
    assert lo - 1e-9 * max(1, abs(hi)) <= E <= hi + 1e-9 * max(1, abs(hi))


def test_arm_phase_zero_irradiation(material):
    assert pm.arm_phase_deviation(material, pm.ArmState(0.0, 4.0)) == 0.0
    assert pm.arm_phase_deviation_closed(material, pm.ArmState(0.0, 4.0)) == 0.0


def test_arm_phase_equals_plain_length_formula_when_lengths_match(material):
    m = dataclasses.replace(material, L_E=material.L)
    arm = pm.ArmState(800.0, 2.0)
    dn = pm.index_change(m, pm.saturated_field(m, arm))
    assert pm.arm_phase_deviation(m, arm) == pytest.approx(2 * math.pi / m.wavelength * dn * m.L, rel=1e-13)


def test_arm_phase_dual_formula_random(material):
    rng = np.random.default_rng(7)
    for _ in range(200):
        m = random_material(rng)
        arm = pm.ArmState(10 ** rng.uniform(-2, 5), rng.uniform(-20, 20))
        a, b = pm.arm_phase_deviation(m, arm), pm.arm_phase_deviation_closed(m, arm)
        assert a == pytest.approx(b, rel=1e-10, abs=1e-300)


def test_arm_phase_sign_flip(material):
    # numerator factor h nu kappa L + e mu tau0 eta_q L_E E_app changes sign at V*
    m = material
    g = m.e_charge * m.mu * m.tau0 * m.eta_q
    v_star = -m.photon_energy * m.kappa * m.L * m.d / (g * m.L_E)
    above = pm.arm_phase_deviation(m, pm.ArmState(500.0, v_star * 0.9))
    below = pm.arm_phase_deviation(m, pm.ArmState(500.0, v_star * 1.1))
    assert above < 0 < below
    assert abs(pm.arm_phase_deviation(m, pm.ArmState(500.0, v_star))) < 1e-12 * abs(above)


def test_arm_phase_monotone_in_irradiation(material):
    for v in (0.0, 1.0, -1.0):
        phases = [pm.arm_phase_deviation(material, pm.ArmState(I, v)) for I in np.linspace(0, 1e4, 400)]
        d = np.diff(phases)
        assert np.all(d <= 0) or np.all(d >= 0)


def test_differential_symmetric_arms(material):
    arm = pm.ArmState(700.0, 0.0)
    assert pm.differential_phase(material, arm, arm) == 0.0
    assert pm.differential_phase(material, pm.ArmState(0.0, 3.0), pm.ArmState(0.0, 3.0)) == 0.0


def test_differential_antisymmetric_without_voltage(material):
    a1, a2 = pm.ArmState(900.0), pm.ArmState(150.0)
    assert pm.differential_phase(material, a2, a1) == pytest.approx(-pm.differential_phase(material, a1, a2), rel=1e-14)


def test_differential_requires_shared_voltage(material):
    with pytest.raises(InvalidParameter):
        pm.differential_phase(material, pm.ArmState(1.0, 1.0), pm.ArmState(1.0, 2.0))


def test_differential_grouped_matches_subtraction(material):
    rng = np.random.default_rng(11)
    for _ in range(200):
        m = random_material(rng)
        v = rng.uniform(-20, 20)
        a1 = pm.ArmState(10 ** rng.uniform(-2, 5), v)
        a2 = pm.ArmState(10 ** rng.uniform(-2, 5), v)
        assert pm.differential_phase_grouped(m, a1, a2) == pytest.approx(
            pm.differential_phase(m, a1, a2), rel=1e-10)


def test_differential_is_push_pull(material):
    a1, a2 = pm.ArmState(900.0, 2.0), pm.ArmState(150.0, 2.0)
    expected = (pm.arm_phase_deviation(material, a1)
                - pm.arm_phase_deviation(material, pm.ArmState(150.0, -2.0)))
    assert pm.differential_phase(material, a1, a2) == expected
