import numpy as np
import pytest

from thermal_shadows.pauli_algebra import build_xxz

XXZ_COUPLINGS = {"jx": 1.1, "jy": 1.1, "jz": 1.0, "hx": -1.0}


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def xxz_hamiltonian():
    def make(n):
        return build_xxz(n, **XXZ_COUPLINGS)
    return make


@pytest.fixture
def random_density(rng):
    def make(n):
        a = rng.normal(size=(2 ** n, 2 ** n)) + 1j * rng.normal(size=(2 ** n, 2 ** n))
        rho = a @ a.conj().T
        return rho / np.trace(rho)
    return make
