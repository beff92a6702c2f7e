"""Real-time modulation-variance monitoring against PE manipulation.

k is not identifiable from (x_A, x_B) alone: scaling Alice's output by sqrt(k)
looks exactly like a transmittance change k*T. The monitor therefore takes a
separate reading of the variance actually leaving Alice's modulator (a power
tap), infers k from it, and undoes the estimation bias.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

from .channel import ChannelParams, QuadratureBatch, generate
from .errors import InvalidParameter, WindowTooSmall
from .estimation import estimate_naive

MIN_WINDOW = 100


@dataclass(frozen=True)
class MonitorConfig:
    reference: ChannelParams
    window: int = 100_000
    threshold: float = 0.05

    def __post_init__(self):
        if self.window < MIN_WINDOW:
            raise InvalidParameter(f"window must be >= {MIN_WINDOW}, got {self.window!r}")
        if not self.threshold > 0:
            raise InvalidParameter(f"threshold must be > 0, got {self.threshold!r}")


@dataclass(frozen=True)
class MonitorVerdict:
    k_hat: float
    T_corrected: float
    eps_corrected: float
    alarm: bool
    window_index: int

    def to_dict(self) -> dict:
        return asdict(self)


def assess_window(cfg: MonitorConfig, batch: QuadratureBatch, monitored_variance: float,
                  window_index: int = 0) -> MonitorVerdict:
    if batch.n < cfg.window:
        raise WindowTooSmall(f"batch has {batch.n} samples, window needs {cfg.window}")
    if not monitored_variance > 0:
        raise InvalidParameter(f"monitored_variance must be > 0, got {monitored_variance!r}")
    k_hat = monitored_variance / cfg.reference.V_A
    est = estimate_naive(batch, cfg.reference)
    return MonitorVerdict(
        k_hat=k_hat,
        T_corrected=est.T_hat / k_hat,
        eps_corrected=est.eps_hat * k_hat,
        alarm=bool(abs(k_hat - 1) > cfg.threshold),
        window_index=window_index,
    )


def stream(cfg: MonitorConfig, batch: QuadratureBatch):
    """Split a long batch into consecutive windows and yield a verdict per window.

    The tap reading for each window is taken from that window's own samples.
    A trailing partial window is dropped.
    """
    for i in range(batch.n // cfg.window):
        w = batch.window(i * cfg.window, (i + 1) * cfg.window)
        yield assess_window(cfg, w, w.tap_variance(), window_index=i)


def run_trials(cfg: MonitorConfig, k: float, trials: int, seed: int) -> list[MonitorVerdict]:
    """Verdicts on ``trials`` independent windows generated at true index ``k``.

    Window ``i`` uses seed ``seed + i``.
    """
    if trials < 1:
        raise InvalidParameter(f"trials must be >= 1, got {trials!r}")
    out = []
    for i in range(trials):
        b = generate(cfg.reference, k, cfg.window, seed + i)
        out.append(assess_window(cfg, b, b.tap_variance(), window_index=i))
    return out


def detection_power(cfg: MonitorConfig, k: float, trials: int, seed: int) -> float:
    """Fraction of independent windows at true index ``k`` that raise an alarm."""
    if trials < 100:
        raise InvalidParameter(f"trials must be >= 100, got {trials!r}")
    return sum(v.alarm for v in run_trials(cfg, k, trials, seed)) / trials
