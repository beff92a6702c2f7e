"""Method-of-moments channel estimation as the legitimate parties perform it.

The parties use their nominal record of Alice's quadratures. If the modulator
output was scaled by sqrt(k), the estimates converge to (k*T, eps/k) instead
of the true (T, eps).
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .channel import ChannelParams, QuadratureBatch
from .errors import InvalidCount, InvalidParameter, NonPositiveCorrelation


@dataclass(frozen=True)
class ParamEstimate:
    T_hat: float
    eps_hat: float
    n_used: int
    cov_xAxB: float
    var_xB: float

    @property
    def flags(self) -> list[str]:
        out = []
        if not 0 < self.T_hat <= 1:
            out.append("T_out_of_range")
        if self.eps_hat < 0:
            out.append("negative_eps")
        return out

    def to_dict(self) -> dict:
        return {**asdict(self), "flags": self.flags}


def estimate_naive(batch: QuadratureBatch, c: ChannelParams) -> ParamEstimate:
    """Estimate (T, eps) from <x_A x_B> and <x_B^2>, with eta, v_el, N0, V_A known."""
    if batch.n < 2:
        raise InvalidCount(f"batch needs >= 2 samples, got {batch.n}")
    cov = float(np.mean(batch.x_A * batch.x_B))
    var_b = float(np.mean(batch.x_B**2))
    if cov <= 0:
        raise NonPositiveCorrelation(f"<x_A x_B> = {cov:.6g}")
    T_hat = (cov / c.V_A) ** 2 / c.eta
    eps_hat = (var_b - c.eta * T_hat * c.V_A - c.N0 - c.v_el) / (c.eta * T_hat)
    return ParamEstimate(T_hat, eps_hat, batch.n, cov, var_b)


def biased_params(c: ChannelParams, k: float) -> tuple[float, float]:
    """Asymptotic naive estimates (k*T, eps/k) under PE index ``k``."""
    if not k > 0:
        raise InvalidParameter(f"k must be > 0, got {k!r}")
    return k * c.T, c.eps / k


def standard_errors(c: ChannelParams, k: float, n: int) -> tuple[float, float]:
    """Delta-method standard errors of (T_hat, eps_hat) for Gaussian data.

    Used to judge Monte-Carlo agreement; depends only on the true parameters.
    """
    s = np.sqrt(c.eta * c.T * k)
    var_a = c.V_A
    sigma2 = c.eta * c.T * c.eps + c.N0 + c.v_el
    cov = s * var_a
    var_b = s * s * var_a + sigma2
    # covariance of (x_A x_B, x_B^2) sample means, bivariate normal moments
    v11 = var_a * var_b + cov**2
    v22 = 2 * var_b**2
    v12 = 2 * cov * var_b
    sigma = np.array([[v11, v12], [v12, v22]]) / n
    T_hat = (cov / var_a) ** 2 / c.eta
    dT = np.array([2 * cov / (var_a**2 * c.eta), 0.0])
    # eps_hat = (var_b - N0 - v_el) / (eta*T_hat) - V_A
    resid = var_b - c.N0 - c.v_el
    de_dT = -resid / (c.eta * T_hat**2)
    de = de_dT * dT + np.array([0.0, 1 / (c.eta * T_hat)])
    return float(np.sqrt(dT @ sigma @ dT)), float(np.sqrt(de @ sigma @ de))
