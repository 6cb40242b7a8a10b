import numpy as np
import pytest
from scipy import linalg

from thermal_shadows import minimax_poly
from thermal_shadows.errors import ValidationError
from thermal_shadows.exact_engine import expectation
from thermal_shadows.pauli_algebra import Hamiltonian, PauliString, matrix_of
from thermal_shadows.random_circuits import prepare, sample_two_design
from thermal_shadows.thermal_states import (
    ExactGibbsSource,
    ExactTPQSource,
    QSPTPQSource,
    exact_tpq,
    imaginary_time_operator,
    make_state_source,
    qsp_tpq,
    rescale,
    tpq_vector,
)


def test_rescaled_spectrum_spans_unit_interval(xxz_hamiltonian):
    h = xxz_hamiltonian(3)
    rescaled = rescale(h, 1.5)
    values = np.linalg.eigvalsh(rescaled.matrix)
    assert values.min() == pytest.approx(0.0, abs=1e-12)
    assert values.max() == pytest.approx(1.0, abs=1e-12)
    assert rescaled.tau == pytest.approx(1.5 * (rescaled.lambda_max - rescaled.lambda_min) / 2)


def test_imaginary_time_operator_is_proportional(xxz_hamiltonian):
    h = xxz_hamiltonian(3)
    rescaled = rescale(h, 1.2)
    op = imaginary_time_operator(rescaled)
    expected = linalg.expm(-0.6 * matrix_of(h)) * np.exp(0.6 * rescaled.lambda_min)
    np.testing.assert_allclose(op, expected, atol=1e-10)


def test_degenerate_spectrum_rejected():
    with pytest.raises(ValidationError):
        rescale(Hamiltonian.from_terms(1, []), 1.0)


def test_zero_beta_keeps_random_state(xxz_hamiltonian, rng):
    circuit = sample_two_design(3, rng)
    np.testing.assert_allclose(exact_tpq(xxz_hamiltonian(3), 0.0, circuit), prepare(circuit), atol=1e-12)


def test_unnormalized_norm(xxz_hamiltonian, rng):
    h = xxz_hamiltonian(3)
    circuit = sample_two_design(3, rng)
    psi = tpq_vector(h, 1.5, circuit, normalized=False)
    phi = prepare(circuit)
    expected = np.vdot(phi, linalg.expm(-1.5 * matrix_of(h)) @ phi).real
    assert np.vdot(psi, psi).real == pytest.approx(expected, rel=1e-10)


def test_exact_tpq_is_normalized(xxz_hamiltonian, rng):
    psi = exact_tpq(xxz_hamiltonian(4), 1.5, sample_two_design(4, rng))
    assert np.linalg.norm(psi) == pytest.approx(1.0)


def test_qsp_matches_exact_at_high_degree(xxz_hamiltonian, rng):
    h = xxz_hamiltonian(3)
    poly = minimax_poly.remez_fit(rescale(h, 1.5).tau, 30)
    assert poly.achieved_error <= 1e-10
    for _ in range(3):
        circuit = sample_two_design(3, rng)
        overlap = abs(np.vdot(exact_tpq(h, 1.5, circuit), qsp_tpq(h, 1.5, circuit, poly))) ** 2
        assert overlap >= 1 - 1e-8


def test_qsp_fidelity_improves_with_degree(xxz_hamiltonian, rng):
    h = xxz_hamiltonian(3)
    tau = rescale(h, 1.5).tau
    circuit = sample_two_design(3, rng)
    exact = exact_tpq(h, 1.5, circuit)
    infidelity = []
    for degree in (4, 8, 16, 24):
        psi = qsp_tpq(h, 1.5, circuit, minimax_poly.remez_fit(tau, degree))
        infidelity.append(1 - abs(np.vdot(exact, psi)) ** 2)
    assert all(b <= a + 1e-12 for a, b in zip(infidelity, infidelity[1:]))


def test_constant_polynomial_keeps_random_state(xxz_hamiltonian, rng):
    h = xxz_hamiltonian(3)
    circuit = sample_two_design(3, rng)
    poly = minimax_poly.remez_fit(rescale(h, 1.5).tau, 0)
    np.testing.assert_allclose(qsp_tpq(h, 1.5, circuit, poly), prepare(circuit), atol=1e-12)


def test_tau_mismatch_rejected(xxz_hamiltonian, rng):
    h = xxz_hamiltonian(3)
    poly = minimax_poly.remez_fit(1.0, 4)
    with pytest.raises(ValidationError):
        qsp_tpq(h, 1.5, sample_two_design(3, rng), poly)
    with pytest.raises(ValidationError):
        QSPTPQSource(h, 1.5, 4, poly=poly)


def test_gibbs_source_draws_average_to_gibbs(xxz_hamiltonian, rng):
    source = ExactGibbsSource(xxz_hamiltonian(2), 1.0)
    total = np.zeros((4, 4), dtype=complex)
    for _ in range(4000):
        psi = source.draw_state(rng)
        total += np.outer(psi, psi.conj())
    np.testing.assert_allclose(total / 4000, source.gibbs(), atol=0.05)


def test_tpq_ratio_estimates_thermal_values(xxz_hamiltonian):
    h = xxz_hamiltonian(3)
    source = ExactTPQSource(h, 1.5)
    rho = source.gibbs()
    observables = [PauliString("ZZI"), PauliString("XII"), PauliString("IYY")]
    numerators = np.zeros(len(observables))
    denominator = 0.0
    for i in range(3000):
        phi = prepare(sample_two_design(3, np.random.default_rng([17, i])))
        raw = source.operator @ phi
        weight = np.vdot(raw, raw).real
        denominator += weight
        numerators += [expectation(raw, p) for p in observables]
    for p, num in zip(observables, numerators):
        assert num / denominator == pytest.approx(expectation(rho, p), abs=0.1)


def test_make_state_source(xxz_hamiltonian):
    h = xxz_hamiltonian(2)
    assert make_state_source("exact-gibbs", h, 1.0).name == "exact-gibbs"
    assert make_state_source("qsp-tpq", h, 1.0, degree=8).poly.degree == 8
    with pytest.raises(ValidationError):
        make_state_source("thermal-bath", h, 1.0)
