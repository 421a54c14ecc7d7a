import math

import pytest

from landauer_lab import CavitySpec, CouplingConfig, QubitState

LN2 = math.log(2.0)


@pytest.fixture
def cfg():
    """Resonant coupling with lambda|I| = 0.1."""
    return CouplingConfig(lam=0.01, Omega=1.0, omega=1.0, T=10.0)


@pytest.fixture
def qubit():
    return QubitState(0.25, 0.1)


@pytest.fixture
def thermal_unit():
    """Thermal reservoir with n_bar = 1 (omega / T_R = ln 2)."""
    return CavitySpec.thermal(T_R=1.0 / LN2, omega=1.0)
