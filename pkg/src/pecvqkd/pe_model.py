"""Steady-state photorefractive response of a lithium-niobate waveguide arm.

Unit system is SI throughout. The Glass constant ``kappa`` is taken in m/V
(equivalently A*m/W), so that the photovoltaic current density
``kappa * alpha * I_ir`` is in A/m^2 and the saturated field comes out in V/m.

The applied field across an arm is ``V_app / d``. In the modulator the
electrodes are driven push-pull: arm 1 sees ``+V_app/d`` and arm 2 sees
``-V_app/d``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateConductivity, InvalidParameter


@dataclass(frozen=True)
class MaterialParams:
    """Crystal and waveguide constants.

    Field names follow the usual symbols: ``sigma_d`` dark conductivity (S/m),
    ``kappa`` Glass constant (m/V), ``alpha`` absorption (1/m), ``mu``
    mobility (m^2/V/s), ``tau0`` carrier lifetime (s), ``eta_q`` quantum
    efficiency, ``photon_energy`` h*nu (J), ``L`` interaction length (m),
    ``L_E`` electrode length (m), ``d`` electrode gap (m).
    """

    n0: float
    r33: float
    gamma_eff: float
    sigma_d: float
    kappa: float
    alpha: float
    e_charge: float
    mu: float
    tau0: float
    eta_q: float
    photon_energy: float
    eps_r: float
    eps0: float
    L: float
    L_E: float
    d: float
    wavelength: float

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if not (math.isfinite(value) and value > 0):
                raise InvalidParameter(f"material.{name} must be finite and > 0, got {value!r}")
        if self.eta_q > 1:
            raise InvalidParameter(f"material.eta_q must lie in (0, 1], got {self.eta_q!r}")

    @property
    def a(self) -> float:
        """Grouping e*mu*tau0*eta_q / (h*nu), so that sigma_ph = a*alpha*I_ir."""
        return self.e_charge * self.mu * self.tau0 * self.eta_q / self.photon_energy


@dataclass(frozen=True)
class ArmState:
    I_ir: float
    V_app: float = 0.0

    def __post_init__(self):
        if not self.I_ir >= 0:
            raise InvalidParameter(f"I_ir must be >= 0, got {self.I_ir!r}")


def applied_field(m: MaterialParams, arm: ArmState) -> float:
    return arm.V_app / m.d


def photoconductivity(m: MaterialParams, I_ir: float) -> float:
    if I_ir < 0:
        raise InvalidParameter(f"I_ir must be >= 0, got {I_ir!r}")
    return m.e_charge * m.mu * m.tau0 * m.eta_q * m.alpha * I_ir / m.photon_energy


def _total_conductivity(m: MaterialParams, I_ir: float) -> float:
    total = m.sigma_d + photoconductivity(m, I_ir)
    if total <= 0:
        raise DegenerateConductivity(f"sigma_d + sigma_ph = {total!r}")
    return total


def saturated_field(m: MaterialParams, arm: ArmState) -> float:
    """Saturated space-charge field E_s (V/m): drift term plus photovoltaic term."""
    sigma_ph = photoconductivity(m, arm.I_ir)
    total = _total_conductivity(m, arm.I_ir)
    return sigma_ph / total * applied_field(m, arm) + m.kappa * m.alpha / total * arm.I_ir


def time_constant(m: MaterialParams, I_ir: float) -> float:
    """Dielectric relaxation time eps_r*eps0 / (sigma_d + sigma_ph)."""
    return m.eps_r * m.eps0 / _total_conductivity(m, I_ir)


def field_transient(m: MaterialParams, E_s: float, t: float, *, E_init: float = 0.0,
                    I_ir: float = 0.0) -> float:
    """Space-charge field at time ``t`` relaxing from ``E_init`` toward ``E_s``.

    ``I_ir`` sets the photoconductive part of the relaxation rate; it should be
    the irradiation that produced ``E_s``.
    """
    if t < 0:
        raise InvalidParameter(f"t must be >= 0, got {t!r}")
    rate = _total_conductivity(m, I_ir) / (m.eps_r * m.eps0)
    return (E_s - E_init) * -math.expm1(-rate * t) + E_init


def index_change(m: MaterialParams, E_sc: float) -> float:
    return -0.5 * m.n0**3 * m.gamma_eff * m.r33 * E_sc


def arm_phase_deviation(m: MaterialParams, arm: ArmState) -> float:
    """Phase deviation (rad) accumulated along one arm at saturation.

    The saturated index change is split into its photovoltaic part, which acts
    over the full interaction length ``L``, and its field-driven part, which
    acts only under the electrodes (``L_E``). With ``L_E == L`` this is plain
    ``(2*pi/lambda) * dn_s * L``.
    """
    total = _total_conductivity(m, arm.I_ir)
    sigma_ph = photoconductivity(m, arm.I_ir)
    E_drift = sigma_ph / total * applied_field(m, arm)
    E_pv = m.kappa * m.alpha / total * arm.I_ir
    k0 = 2 * math.pi / m.wavelength
    return k0 * (index_change(m, E_pv) * m.L + index_change(m, E_drift) * m.L_E)


def arm_phase_deviation_closed(m: MaterialParams, arm: ArmState) -> float:
    """Closed form of :func:`arm_phase_deviation` with h*nu kept explicit.

    Obtained by substituting sigma_ph = e*mu*tau0*eta_q*alpha*I/(h*nu) into the
    saturated index change and clearing the h*nu denominators.
    """
    hv = m.photon_energy
    g = m.e_charge * m.mu * m.tau0 * m.eta_q
    E_app = applied_field(m, arm)
    num = hv * math.pi * m.n0**3 * m.r33 * m.gamma_eff * m.alpha * arm.I_ir * (
        hv * m.kappa * m.L + g * m.L_E * E_app)
    den = hv**2 * m.wavelength * m.sigma_d + hv * g * m.wavelength * m.alpha * arm.I_ir
    if den == 0:
        raise DegenerateConductivity("sigma_d + sigma_ph = 0")
    return -num / den


def _push_pull(arm1: ArmState, arm2: ArmState) -> ArmState:
    if arm1.V_app != arm2.V_app:
        raise InvalidParameter(
            f"both arms must share V_app (got {arm1.V_app!r} and {arm2.V_app!r})")
    return ArmState(I_ir=arm2.I_ir, V_app=-arm2.V_app)


def differential_phase(m: MaterialParams, arm1: ArmState, arm2: ArmState) -> float:
    """Differential PE phase between the arms, dphi(arm1) - dphi(arm2).

    Both arms carry the same electrode voltage; arm 2 sees it with opposite
    polarity.
    """
    return arm_phase_deviation(m, arm1) - arm_phase_deviation(m, _push_pull(arm1, arm2))


def differential_phase_grouped(m: MaterialParams, arm1: ArmState, arm2: ArmState) -> float:
    """Same quantity as :func:`differential_phase`, in the saturating-intensity form.

    Each arm contributes ``I/(1 + a*alpha*I/sigma_d)``; the photovoltaic term
    takes their difference and the push-pull drift term their sum.
    """
    _push_pull(arm1, arm2)
    a = m.a
    if m.sigma_d <= 0:
        raise DegenerateConductivity("sigma_d = 0")
    s1 = arm1.I_ir / (1 + a * m.alpha / m.sigma_d * arm1.I_ir)
    s2 = arm2.I_ir / (1 + a * m.alpha / m.sigma_d * arm2.I_ir)
    pref = m.alpha * math.pi * m.n0**3 * m.r33 * m.gamma_eff / (m.wavelength * m.sigma_d)
    return -pref * (m.kappa * m.L * (s1 - s2) + a * m.L_E / m.d * (s1 + s2) * arm1.V_app)
