"""Synthetic GMCS quadrature data through a linear channel.

Only the x quadrature is simulated. Variances are in shot-noise units with
N0 = 1.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .errors import InvalidCount, InvalidParameter

RNG_NAME = "numpy.random.Generator(PCG64)"
DB_PER_KM = 0.2


@dataclass(frozen=True)
class ChannelParams:
    """CVQKD link parameters.

    ``eps`` is the excess noise referred to the channel input; ``f_rep`` the
    pulse repetition rate used to turn bit/symbol into bit/s.
    """

    V_A: float = 4.0
    T: float = 0.5
    eps: float = 0.05
    eta: float = 0.6
    v_el: float = 0.01
    beta: float = 0.95
    f_rep: float = 300e6
    N0: float = 1.0

    def __post_init__(self):
        checks = [
            (self.V_A > 0, "V_A must be > 0"),
            (0 < self.T <= 1, "T must lie in (0, 1]"),
            (self.eps >= 0, "eps must be >= 0"),
            (0 < self.eta <= 1, "eta must lie in (0, 1]"),
            (self.v_el >= 0, "v_el must be >= 0"),
            (0 < self.beta < 1, "beta must lie in (0, 1)"),
            (self.f_rep > 0, "f_rep must be > 0"),
            (self.N0 == 1.0, "N0 is fixed to 1 SNU"),
        ]
        for ok, msg in checks:
            if not ok:
                raise InvalidParameter(f"{msg} (got {self!r})")

    def with_(self, **changes) -> "ChannelParams":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return asdict(self)


def transmittance_from_distance(distance_km, db_per_km: float = DB_PER_KM):
    return 10 ** (-db_per_km * np.asarray(distance_km, dtype=float) / 10)


def distance_from_transmittance(T, db_per_km: float = DB_PER_KM):
    return -10 * np.log10(np.asarray(T, dtype=float)) / db_per_km


@dataclass
class QuadratureBatch:
    x_A: np.ndarray
    x_B: np.ndarray
    k_true: float
    seed: int | None
    params: ChannelParams | None = None
    generator: str = RNG_NAME
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.x_A = np.asarray(self.x_A, dtype=float)
        self.x_B = np.asarray(self.x_B, dtype=float)
        if self.x_A.shape != self.x_B.shape or self.x_A.ndim != 1 or self.x_A.size == 0:
            raise InvalidCount(
                f"x_A and x_B must be equal-length nonempty 1-D arrays "
                f"(got {self.x_A.shape} and {self.x_B.shape})")

    @property
    def n(self) -> int:
        return int(self.x_A.size)

    def tap_variance(self) -> float:
        """Variance of Alice's actual output quadrature, as a power tap would read it.

        The transmitted amplitude is sqrt(k) * x_A, so this is k * <x_A^2>.
        """
        return float(self.k_true * np.mean(self.x_A**2))

    def window(self, start: int, stop: int) -> "QuadratureBatch":
        return QuadratureBatch(self.x_A[start:stop], self.x_B[start:stop], self.k_true,
                               self.seed, self.params, self.generator, dict(self.meta))

    def header(self) -> dict:
        return {
            "params": self.params.to_dict() if self.params else None,
            "k_true": self.k_true,
            "seed": self.seed,
            "n": self.n,
            "generator": self.generator,
            "tap_variance": self.tap_variance(),
            **self.meta,
        }


def noise_variance(c: ChannelParams) -> float:
    return c.eta * c.T * c.eps + c.N0 + c.v_el


def generate(c: ChannelParams, k: float, n: int, seed: int) -> QuadratureBatch:
    """Draw ``n`` paired Alice/Bob quadratures with Alice's output scaled by sqrt(k)."""
    if n < 2:
        raise InvalidCount(f"n must be >= 2, got {n!r}")
    if not k > 0:
        raise InvalidParameter(f"k must be > 0, got {k!r}")
    rng = np.random.default_rng(seed)
    x_A = rng.normal(0.0, math.sqrt(c.V_A), n)
    z = rng.normal(0.0, math.sqrt(noise_variance(c)), n)
    x_B = math.sqrt(c.eta * c.T * k) * x_A + z
    return QuadratureBatch(x_A, x_B, float(k), int(seed), c)
