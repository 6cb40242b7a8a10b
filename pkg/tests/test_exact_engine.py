import numpy as np
import pytest
from scipy import linalg

from thermal_shadows.errors import NotHermitianError, ValidationError
from thermal_shadows.exact_engine import (
    FIXED_GATES,
    H,
    X,
    apply_gate,
    born_sample,
    eig_hermitian,
    expectation,
    func_of_hermitian,
    gibbs_state,
    purity,
    same_up_to_phase,
    u3,
    zyz_angles,
)
from thermal_shadows.pauli_algebra import Hamiltonian, PauliString, matrix_of, observable_set
from thermal_shadows.random_circuits import MeasurementBasis


@pytest.mark.parametrize("beta", [0.0, 0.3, 1.0, 1.5, 3.0])
def test_gibbs_of_single_z(beta):
    h = Hamiltonian.from_terms(1, [(1.0, "Z")])
    rho = gibbs_state(h, beta)
    assert expectation(rho, PauliString("Z")) == pytest.approx(-np.tanh(beta), abs=1e-12)


def test_gibbs_commutes_with_hamiltonian(xxz_hamiltonian):
    h = xxz_hamiltonian(4)
    m = matrix_of(h)
    rho = gibbs_state(h, 1.5)
    np.testing.assert_allclose(rho @ m, m @ rho, atol=1e-10)


def test_purity_grows_as_temperature_drops(xxz_hamiltonian):
    h = xxz_hamiltonian(4)
    spectrum = eig_hermitian(h)
    values = [purity(gibbs_state(h, b, spectrum)) for b in np.arange(0.0, 3.01, 0.5)]
    assert values[0] == pytest.approx(1 / 16)
    assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))


def test_exp_then_log_round_trip(rng):
    a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    a = (a + a.conj().T) / 4
    back = func_of_hermitian(func_of_hermitian(a, np.exp), np.log)
    np.testing.assert_allclose(back, a, atol=1e-8)


def test_gibbs_is_a_density_matrix(xxz_hamiltonian):
    rho = gibbs_state(xxz_hamiltonian(3), 1.5)
    assert np.trace(rho).real == pytest.approx(1.0)
    np.testing.assert_allclose(rho, rho.conj().T, atol=1e-12)
    assert np.linalg.eigvalsh(rho).min() > -1e-12


def test_infinite_temperature(xxz_hamiltonian):
    rho = gibbs_state(xxz_hamiltonian(3), 0.0)
    np.testing.assert_allclose(rho, np.eye(8) / 8, atol=1e-12)
    assert purity(rho) == pytest.approx(1 / 8)


def test_gibbs_rejects_negative_beta(xxz_hamiltonian):
    with pytest.raises(ValidationError):
        gibbs_state(xxz_hamiltonian(2), -1.0)


def test_non_hermitian_rejected():
    with pytest.raises(NotHermitianError):
        eig_hermitian(np.array([[0, 1], [0, 0]], dtype=complex))


def test_func_of_hermitian_matches_expm(xxz_hamiltonian):
    m = matrix_of(xxz_hamiltonian(3))
    np.testing.assert_allclose(func_of_hermitian(m, lambda x: np.exp(-0.7 * x)), linalg.expm(-0.7 * m), atol=1e-10)


def test_spectrum_is_ascending(xxz_hamiltonian):
    spectrum = eig_hermitian(xxz_hamiltonian(3))
    assert np.all(np.diff(spectrum.eigenvalues) >= 0)
    assert spectrum.lambda_min == spectrum.eigenvalues[0]


def test_pauli_expectation_matches_dense(rng, random_density):
    rho = random_density(3)
    psi = rng.normal(size=8) + 1j * rng.normal(size=8)
    psi /= np.linalg.norm(psi)
    for p in observable_set(3):
        m = matrix_of(p)
        assert expectation(rho, p) == pytest.approx(np.trace(rho @ m).real, abs=1e-12)
        assert expectation(psi, p) == pytest.approx(np.vdot(psi, m @ psi).real, abs=1e-12)


def test_born_sample_eigenstates(rng):
    zero = np.array([1, 0], dtype=complex)
    plus = np.array([1, 1], dtype=complex) / np.sqrt(2)
    plus_i = np.array([1, 1j], dtype=complex) / np.sqrt(2)
    for _ in range(20):
        assert born_sample(zero, MeasurementBasis("Z"), rng) == "0"
        assert born_sample(plus, MeasurementBasis("X"), rng) == "0"
        assert born_sample(plus_i, MeasurementBasis("Y"), rng) == "0"
        assert born_sample(-plus_i.conj(), MeasurementBasis("Y"), rng) == "1"


def test_born_sample_bit_order(rng):
    psi = np.zeros(4, dtype=complex)
    psi[1] = 1.0
    assert born_sample(psi, MeasurementBasis("ZZ"), rng) == "01"


def test_born_sample_frequencies(rng):
    plus = np.array([1, 1], dtype=complex) / np.sqrt(2)
    ones = sum(born_sample(plus, MeasurementBasis("Z"), rng) == "1" for _ in range(4000))
    assert abs(ones / 4000 - 0.5) < 0.03


def test_born_sample_rejects_unnormalized(rng):
    with pytest.raises(ValidationError):
        born_sample(np.array([1, 1], dtype=complex), MeasurementBasis("Z"), rng)


def test_apply_gate_controls():
    psi = np.zeros(4, dtype=complex)
    psi[2] = 1.0  # |10>
    out = apply_gate(psi, X, 1, 2, controls=(0,))
    assert out[3] == 1.0
    out = apply_gate(psi, X, 1, 2, controls=(0,), control_values=(0,))
    assert out[2] == 1.0


def test_apply_gate_on_column_stack():
    cnot = apply_gate(np.eye(4, dtype=complex), X, 1, 2, controls=(0,))
    expected = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    np.testing.assert_allclose(cnot, expected)
    np.testing.assert_allclose(apply_gate(np.eye(2, dtype=complex), H, 0, 1), H)


@pytest.mark.parametrize("kind", ["H", "S", "SDG", "T", "R", "R2", "X", "Y", "Z"])
def test_zyz_angles(kind):
    gate = FIXED_GATES[kind]
    assert same_up_to_phase(u3(*zyz_angles(gate)), gate)
