"""Nominal, practical and estimated key rates over parameter grids.

For a PE index k:

* nominal    K   uses (V_A, T, eps)
* practical  K_p uses (k*V_A, T, eps), the link as it really is
* estimated  K_e uses (V_A, k*T, eps/k), what the parties infer from their data

A leg whose parameters leave the physical domain (k*T > 1, say) is recorded as
an error on that row and the sweep continues.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .channel import ChannelParams
from .errors import DomainError, InsufficientGrid, InvalidParameter
from .estimation import biased_params
from .keyrate import secret_key_rate

K_EQ_TOL = 1e-12


@dataclass(frozen=True)
class ScenarioGrid:
    T_values: tuple[float, ...]
    k_values: tuple[float, ...]
    eps_values: tuple[float, ...]
    base: ChannelParams

    def __post_init__(self):
        for name in ("T_values", "k_values", "eps_values"):
            vals = tuple(float(v) for v in getattr(self, name))
            if not vals:
                raise InvalidParameter(f"{name} must be nonempty")
            object.__setattr__(self, name, vals)
        if any(k <= 0 for k in self.k_values):
            raise InvalidParameter("all k must be > 0")

    def points(self):
        return itertools.product(self.T_values, self.k_values, self.eps_values)


@dataclass(frozen=True)
class ScenarioRow:
    T: float
    k: float
    eps: float
    K_nominal: float
    K_practical: float
    K_estimated: float
    gap: float
    status: str
    min_lambda: float = math.nan

    @property
    def complete(self) -> bool:
        return self.status == "ok"

    @property
    def rel_gap(self) -> float:
        """gap / |K_estimated|: the over- or under-estimate as a fraction of the claimed rate."""
        if not self.complete or self.K_estimated == 0:
            return math.nan
        return self.gap / abs(self.K_estimated)


def _leg(params_factory):
    try:
        report = secret_key_rate(params_factory())
    except DomainError as exc:
        return math.nan, exc.code, math.nan
    return report.K, None, min(report.lambdas)


def evaluate_point(base: ChannelParams, T: float, k: float, eps: float) -> ScenarioRow:
    if not k > 0:
        raise InvalidParameter(f"k must be > 0, got {k!r}")
    nominal = base.with_(T=T, eps=eps)
    T_est, eps_est = biased_params(nominal, k)
    legs = {
        "nominal": _leg(lambda: nominal),
        "practical": _leg(lambda: nominal.with_(V_A=k * base.V_A)),
        "estimated": _leg(lambda: nominal.with_(T=T_est, eps=eps_est)),
    }
    errors = [f"{name}={err}" for name, (_, err, _) in legs.items() if err]
    K_n, K_p, K_e = (legs[n][0] for n in ("nominal", "practical", "estimated"))
    if abs(k - 1) <= K_EQ_TOL and not errors:
        # identical parameter sets, but rounding in k*T, eps/k can leave ulp-level noise
        K_p = K_e = K_n
    gap = K_p - K_e
    lams = [leg[2] for leg in legs.values() if not math.isnan(leg[2])]
    return ScenarioRow(
        T=float(T), k=float(k), eps=float(eps),
        K_nominal=K_n, K_practical=K_p, K_estimated=K_e, gap=gap,
        status="ok" if not errors else "partial:" + ";".join(errors),
        min_lambda=min(lams) if lams else math.nan,
    )


def _evaluate_args(args):
    return evaluate_point(*args)


def sweep(grid: ScenarioGrid, workers: int | None = None) -> list[ScenarioRow]:
    """Evaluate every grid point, T-major then k then eps.

    ``workers > 1`` fans points out to a process pool; the returned order is the
    same either way.
    """
    jobs = [(grid.base, T, k, eps) for T, k, eps in grid.points()]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_evaluate_args, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    return [evaluate_point(*job) for job in jobs]


def gap_monotonicity_report(rows: list[ScenarioRow]) -> dict:
    """Check that |gap| grows with distance of k from 1 at fixed (T, eps).

    On the k > 1 branch |gap| must be non-decreasing in k; on the k < 1 branch
    it must be non-increasing as k rises toward 1. Observed gap signs per branch
    are reported alongside.
    """
    groups: dict[tuple[float, float], list[ScenarioRow]] = {}
    for r in rows:
        if r.complete and not math.isclose(r.k, 1.0, abs_tol=K_EQ_TOL):
            groups.setdefault((r.T, r.eps), []).append(r)

    violations = []
    checked = 0
    signs = {"above": {"positive": 0, "negative": 0, "zero": 0},
             "below": {"positive": 0, "negative": 0, "zero": 0}}
    for (T, eps), members in sorted(groups.items()):
        for branch, sel in (("above", lambda r: r.k > 1), ("below", lambda r: r.k < 1)):
            pts = sorted((r for r in members if sel(r)), key=lambda r: r.k)
            for r in pts:
                signs[branch]["positive" if r.gap > 0 else "negative" if r.gap < 0 else "zero"] += 1
            if len(pts) < 2:
                continue
            checked += 1
            for prev, cur in zip(pts, pts[1:]):
                ok = abs(cur.gap) >= abs(prev.gap) if branch == "above" else abs(cur.gap) <= abs(prev.gap)
                if not ok:
                    violations.append({
                        "T": T, "eps": eps, "branch": branch,
                        "k_prev": prev.k, "k": cur.k,
                        "abs_gap_prev": abs(prev.gap), "abs_gap": abs(cur.gap),
                    })
    if checked == 0:
        raise InsufficientGrid("need >= 2 computed rows with k on the same side of 1 at fixed (T, eps)")
    return {"checked_series": checked, "violations": violations, "gap_signs": signs}
