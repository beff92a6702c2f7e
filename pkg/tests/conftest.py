import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pecvqkd.channel import ChannelParams  # noqa: E402
from pecvqkd.pe_model import MaterialParams  # noqa: E402

LN_1550 = dict(
    n0=2.138, r33=30.8e-12, gamma_eff=1.0, sigma_d=1e-14, kappa=1e-12, alpha=10.0,
    e_charge=1.602176634e-19, mu=7.4e-5, tau0=1e-12, eta_q=1.0, photon_energy=1.2815e-19,
    eps_r=28.0, eps0=8.8541878128e-12, L=0.04, L_E=0.03, d=1.5e-5, wavelength=1.55e-6,
)

# 300 MHz, eta 0.6, v_el 0.01, eps 0.05, V_A 4, beta 0.95
FIG3 = dict(V_A=4.0, eps=0.05, eta=0.6, v_el=0.01, beta=0.95, f_rep=300e6)


@pytest.fixture
def material():
    return MaterialParams(**LN_1550)


@pytest.fixture
def fig3():
    return ChannelParams(T=0.5, **FIG3)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
