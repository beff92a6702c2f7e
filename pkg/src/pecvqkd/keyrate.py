"""Asymptotic key rate of GMCS CVQKD, homodyne detection, reverse reconciliation.

Collective attacks, trusted detector noise. Eve's information is the Holevo
bound computed from the closed-form symplectic eigenvalues of the
entanglement-based model.

Eigenvalue convention
---------------------
The closed forms give ``x_pm = (A +- sqrt(A^2 - 4B)) / 2``, which can be read
either as the eigenvalues themselves or as their squares. Both readings are
evaluated on every call and each is checked for (i) lambda >= 1 and (ii) the
determinant invariant of the two-mode state, ``lambda_1 * lambda_2 = sqrt(B)``
(B is det of the AB1 covariance matrix). The literal reading is used only if it
passes both; otherwise the squared reading, ``lambda = sqrt(x_pm)``, is used.
In practice the literal reading gives ``lambda_1 * lambda_2 = B`` and is
rejected. The decision is recorded in :attr:`KeyRateReport.convention`.

The conditional determinant uses ``D = sqrt(B) * (V + sqrt(B) * chi_hom) /
(T * (V + chi_tot))``, the form for which ``lambda_3 * lambda_4`` equals the
square root of the conditional covariance determinant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .channel import ChannelParams
from .errors import ComplexEigenvalue, UnphysicalEigenvalue

DISCRIMINANT_TOL = 1e-9
PHYSICALITY_TOL = 1e-6
DET_RTOL = 1e-9

CONVENTION_SQUARED = "squared"
CONVENTION_LITERAL = "literal"


@dataclass(frozen=True)
class NoiseBreakdown:
    chi_line: float
    chi_hom: float
    chi_tot: float


@dataclass(frozen=True)
class ConventionRecord:
    adopted: str
    literal_physical: bool
    literal_det_consistent: bool
    literal_min_lambda: float
    squared_min_lambda: float

    def to_dict(self) -> dict:
        return {
            "adopted": self.adopted,
            "literal_physical": self.literal_physical,
            "literal_det_consistent": self.literal_det_consistent,
            "literal_min_lambda": self.literal_min_lambda,
            "squared_min_lambda": self.squared_min_lambda,
        }


@dataclass(frozen=True)
class HolevoResult:
    chi_BE: float
    lambdas: tuple[float, float, float, float, float]
    A: float
    B: float
    C: float
    D: float
    convention: ConventionRecord


@dataclass(frozen=True)
class KeyRateReport:
    K: float
    I_AB: float
    chi_BE: float
    lambdas: tuple[float, ...]
    noise: NoiseBreakdown
    params_used: ChannelParams
    convention: ConventionRecord = field(repr=False)

    @property
    def rate_per_symbol(self) -> float:
        return self.params_used.beta * self.I_AB - self.chi_BE

    def to_dict(self) -> dict:
        return {
            "K": self.K,
            "K_per_symbol": self.rate_per_symbol,
            "I_AB": self.I_AB,
            "chi_BE": self.chi_BE,
            "lambdas": list(self.lambdas),
            "noise": {
                "chi_line": self.noise.chi_line,
                "chi_hom": self.noise.chi_hom,
                "chi_tot": self.noise.chi_tot,
            },
            "params_used": self.params_used.to_dict(),
            "eigenvalue_convention": self.convention.to_dict(),
        }


def g_entropy(x: float) -> float:
    """(x+1) log2(x+1) - x log2 x, with the x -> 0 limit taken explicitly."""
    if x <= 0:
        return 0.0
    return (x + 1) * math.log2(x + 1) - x * math.log2(x)


def noise_breakdown(c: ChannelParams) -> NoiseBreakdown:
    chi_line = 1 / c.T + c.eps - 1
    chi_hom = ((1 - c.eta) + c.v_el) / c.eta
    return NoiseBreakdown(chi_line, chi_hom, chi_line + chi_hom / c.T)


def mutual_information(c: ChannelParams) -> float:
    V = c.V_A + 1
    chi_tot = noise_breakdown(c).chi_tot
    return 0.5 * math.log2((V + chi_tot) / (1 + chi_tot))


def _roots(s: float, p: float, label: str) -> tuple[float, float]:
    disc = s * s - 4 * p
    if disc < -DISCRIMINANT_TOL * max(1.0, s * s):
        raise ComplexEigenvalue(f"{label}: discriminant {disc:.3e} < 0")
    root = math.sqrt(max(disc, 0.0))
    return 0.5 * (s + root), 0.5 * (s - root)


def holevo_bound(c: ChannelParams) -> HolevoResult:
    V = c.V_A + 1
    T = c.T
    nb = noise_breakdown(c)
    A = V**2 * (1 - 2 * T) + 2 * T + T**2 * (V + nb.chi_line) ** 2
    B = T**2 * (V * nb.chi_line + 1) ** 2
    sqB = math.sqrt(B)
    den = T * (V + nb.chi_tot)
    C = (A * nb.chi_hom + V * sqB + T * (V + nb.chi_line)) / den
    D = sqB * (V + sqB * nb.chi_hom) / den

    x1, x2 = _roots(A, B, "AB1 state")
    x3, x4 = _roots(C, D, "conditional state")
    literal = (x1, x2, x3, x4)
    squared = tuple(math.sqrt(max(x, 0.0)) for x in literal)
    literal_physical = min(literal) >= 1 - PHYSICALITY_TOL
    literal_det = math.isclose(x1 * x2, sqB, rel_tol=DET_RTOL)
    use_literal = literal_physical and literal_det
    record = ConventionRecord(
        adopted=CONVENTION_LITERAL if use_literal else CONVENTION_SQUARED,
        literal_physical=literal_physical,
        literal_det_consistent=literal_det,
        literal_min_lambda=min(literal),
        squared_min_lambda=min(squared),
    )
    lambdas = (*(literal if use_literal else squared), 1.0)
    if min(lambdas) < 1 - PHYSICALITY_TOL:
        raise UnphysicalEigenvalue(f"symplectic eigenvalue {min(lambdas):.9f} < 1 for {c!r}")

    chi = (g_entropy((lambdas[0] - 1) / 2) + g_entropy((lambdas[1] - 1) / 2)
           - sum(g_entropy((lam - 1) / 2) for lam in lambdas[2:]))
    return HolevoResult(chi, lambdas, A, B, C, D, record)


def secret_key_rate(c: ChannelParams) -> KeyRateReport:
    """K = f_rep * (beta * I_AB - chi_BE) in bit/s. Negative values are kept."""
    hol = holevo_bound(c)
    i_ab = mutual_information(c)
    K = c.f_rep * (c.beta * i_ab - hol.chi_BE)
    return KeyRateReport(K, i_ab, hol.chi_BE, hol.lambdas, noise_breakdown(c), c, hol.convention)


def survey_conventions(params) -> dict:
    """Evaluate both eigenvalue readings over an iterable of ChannelParams.

    Returns counts of parameter sets on which each reading passes its checks;
    this is the evidence behind the adopted convention.
    """
    total = literal_ok = literal_det = squared_ok = 0
    literal_min = squared_min = math.inf
    adopted = set()
    for c in params:
        rec = holevo_bound(c).convention
        total += 1
        adopted.add(rec.adopted)
        literal_ok += rec.literal_physical
        literal_det += rec.literal_det_consistent
        squared_ok += rec.squared_min_lambda >= 1 - PHYSICALITY_TOL
        literal_min = min(literal_min, rec.literal_min_lambda)
        squared_min = min(squared_min, rec.squared_min_lambda)
    return {
        "adopted": "+".join(sorted(adopted)),
        "points": total,
        "literal_physical_points": literal_ok,
        "literal_det_consistent_points": literal_det,
        "squared_physical_points": squared_ok,
        "literal_min_lambda": literal_min,
        "squared_min_lambda": squared_min,
    }
