"""Mach-Zehnder amplitude modulator transfer with and without PE phase shift.

Intensities are in arbitrary linear power units. All functions broadcast over
numpy arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter, NullOperatingPoint

DEFAULT_NULL_FLOOR = 1e-12


@dataclass(frozen=True)
class ModulatorParams:
    T_mod: float = 1.0
    V_pi: float = 1.0
    dphi0: float = 0.0

    def __post_init__(self):
        if not 0 < self.T_mod <= 1:
            raise InvalidParameter(f"T_mod must lie in (0, 1], got {self.T_mod!r}")
        if not self.V_pi > 0:
            raise InvalidParameter(f"V_pi must be > 0, got {self.V_pi!r}")


@dataclass(frozen=True)
class TransferPoint:
    V_DC: float
    I_in: float = 1.0
    dphi_p: float = 0.0

    def __post_init__(self):
        if np.any(np.asarray(self.I_in) < 0):
            raise InvalidParameter(f"I_in must be >= 0, got {self.I_in!r}")


def _bias_phase(p: ModulatorParams, V_DC):
    return np.pi * np.asarray(V_DC, dtype=float) / p.V_pi


def transfer_nominal(p: ModulatorParams, V_DC, I_in):
    return p.T_mod * np.asarray(I_in, dtype=float) / 2 * (1 + np.cos(_bias_phase(p, V_DC) - p.dphi0))


def transfer_pe(p: ModulatorParams, pt: TransferPoint):
    arg = _bias_phase(p, pt.V_DC) - (p.dphi0 + np.asarray(pt.dphi_p, dtype=float))
    return p.T_mod * np.asarray(pt.I_in, dtype=float) / 2 * (1 + np.cos(arg))


def pe_index(p: ModulatorParams, pt: TransferPoint, floor: float = DEFAULT_NULL_FLOOR):
    """PE index k = I'_out / I_out at the operating point.

    Independent of ``pt.I_in``. Raises :class:`NullOperatingPoint` when the
    nominal transfer ``1 + cos(...)`` falls below ``floor`` anywhere.
    """
    theta = _bias_phase(p, pt.V_DC)
    den = 1 + np.cos(theta - p.dphi0)
    if np.any(den < floor):
        raise NullOperatingPoint(
            f"nominal transfer {float(np.min(den)):.3e} below floor {floor:g}; k undefined")
    k = (1 + np.cos(theta - (p.dphi0 + np.asarray(pt.dphi_p, dtype=float)))) / den
    return float(k) if np.ndim(k) == 0 else k


def transfer_curve(p: ModulatorParams, dphi_p: float, V_grid, I_in: float = 1.0):
    """Rows ``(v_dc, i_out_nominal, i_out_pe, k)`` over ``V_grid`` in grid order.

    ``k`` is NaN at points where the nominal transfer is at its null.
    """
    V = np.asarray(V_grid, dtype=float)
    if V.size == 0:
        raise InvalidParameter("V_grid must be nonempty")
    nominal = transfer_nominal(p, V, I_in)
    shifted = transfer_pe(p, TransferPoint(V_DC=V, I_in=I_in, dphi_p=dphi_p))
    den = 1 + np.cos(_bias_phase(p, V) - p.dphi0)
    with np.errstate(divide="ignore", invalid="ignore"):
        k = np.where(den < DEFAULT_NULL_FLOOR, np.nan,
                     (1 + np.cos(_bias_phase(p, V) - p.dphi0 - dphi_p)) / den)
    return [(float(v), float(a), float(b), float(c)) for v, a, b, c in zip(V, nominal, shifted, k)]


def voltage_shift(p: ModulatorParams, dphi_p: float) -> float:
    """Bias offset (V) by which a PE phase ``dphi_p`` translates the transfer curve."""
    return p.V_pi * dphi_p / math.pi
