import itertools
import math

import numpy as np
import pytest

from thermal_shadows.errors import ValidationError
from thermal_shadows.exact_engine import same_up_to_phase
from thermal_shadows.fitting import linear_fit, log_fit
from thermal_shadows.pauli_algebra import PauliString, matrix_of
from thermal_shadows.random_circuits import (
    GATE_KINDS,
    CliffordCircuit,
    Gate,
    MeasurementBasis,
    apply_clifford,
    circuit_matrix,
    parity_tree,
    prepare,
    sample_pauli_basis,
    sample_two_design,
)


def _all_paulis(n):
    return [PauliString("".join(w)) for w in itertools.product("IXYZ", repeat=n)]


@pytest.mark.parametrize("n", [1, 2, 4, 7])
def test_two_design_is_well_formed(n, rng):
    circuit = sample_two_design(n, rng)
    assert circuit.n == n
    for g in circuit.gates:
        assert g.kind in GATE_KINDS
        assert all(0 <= q < n for q in g.qubits)
    assert len(circuit.gates) <= 40 * n


def test_two_design_is_reproducible():
    a = sample_two_design(5, np.random.default_rng(99))
    b = sample_two_design(5, np.random.default_rng(99))
    assert a.to_json() == b.to_json()
    assert CliffordCircuit.from_json(a.to_json()) == a


def test_sampled_circuits_are_clifford(rng):
    n = 3
    paulis = _all_paulis(n)
    mats = [matrix_of(p) for p in paulis]
    for _ in range(5):
        u = circuit_matrix(sample_two_design(n, rng))
        for q in range(n):
            for letter in "XZ":
                word = ["I"] * n
                word[q] = letter
                image = u @ matrix_of(PauliString("".join(word))) @ u.conj().T
                overlaps = [np.trace(m @ image).real / 2 ** n for m in mats]
                hits = [o for o in overlaps if abs(o) > 1e-9]
                assert len(hits) == 1
                assert abs(abs(hits[0]) - 1) < 1e-9


def test_inverse_circuit(rng):
    circuit = sample_two_design(3, rng)
    u = circuit_matrix(circuit)
    assert same_up_to_phase(circuit_matrix(circuit.inverse()) @ u, np.eye(8))


@pytest.mark.parametrize("k", [1, 2, 3, 5, 8])
def test_parity_tree_matches_direct_cnots(k):
    n = k + 1
    tree = CliffordCircuit(n, tuple(parity_tree(list(range(1, n)), 0)))
    direct = CliffordCircuit(n, tuple(Gate("CNOT", (c, 0)) for c in range(1, n)))
    np.testing.assert_allclose(circuit_matrix(tree), circuit_matrix(direct), atol=1e-12)
    assert tree.depth() <= 2 * math.ceil(math.log2(k)) + 1


def test_parity_tree_empty():
    assert parity_tree([], 0) == []


def test_first_moment_vanishes(rng):
    n, samples = 2, 2000
    z0 = matrix_of(PauliString("ZI"))
    total = np.zeros((4, 4), dtype=complex)
    for _ in range(samples):
        u = circuit_matrix(sample_two_design(n, rng))
        total += u @ z0 @ u.conj().T
    assert np.max(np.abs(total / samples)) < 0.12


def test_random_states_average_to_maximally_mixed(rng):
    n, samples = 2, 2000
    total = np.zeros((4, 4), dtype=complex)
    for _ in range(samples):
        psi = prepare(sample_two_design(n, rng))
        total += np.outer(psi, psi.conj())
    np.testing.assert_allclose(total / samples, np.eye(4) / 4, atol=0.06)


def test_apply_clifford_rejects_wrong_size(rng):
    with pytest.raises(ValidationError):
        apply_clifford(sample_two_design(2, rng), np.ones(8))


def test_bad_gates_rejected():
    with pytest.raises(ValidationError):
        CliffordCircuit(2, (Gate("T", (0,)),))
    with pytest.raises(ValidationError):
        CliffordCircuit(2, (Gate("CNOT", (1, 1)),))
    with pytest.raises(ValidationError):
        CliffordCircuit(2, (Gate("H", (2,)),))


def test_pauli_basis_is_uniform(rng):
    draws = "".join(sample_pauli_basis(1, rng).axes for _ in range(30000))
    for axis in "XYZ":
        assert abs(draws.count(axis) / 30000 - 1 / 3) < 0.02


def test_basis_rotation_gates_depth():
    basis = MeasurementBasis("XYZY")
    gates = basis.rotation_gates()
    circuit = CliffordCircuit(4, tuple(gates))
    assert circuit.depth() <= 2
    with pytest.raises(ValidationError):
        MeasurementBasis("XQ")


def test_depth_grows_logarithmically():
    sizes = [2, 4, 8, 16, 32]
    means = []
    for n in sizes:
        depths = [sample_two_design(n, np.random.default_rng([5, i])).depth() for i in range(200)]
        means.append(np.mean(depths))
    assert np.all(np.diff(means) > 0)
    assert log_fit(sizes, means).residual_ss < linear_fit(sizes, means).residual_ss


def test_pauli_frame_balances_signs(rng):
    z0 = matrix_of(PauliString("ZI"))
    mats = [matrix_of(p) for p in _all_paulis(2)]
    signs = []
    for _ in range(400):
        u = circuit_matrix(sample_two_design(2, rng))
        image = u @ z0 @ u.conj().T
        overlaps = [np.trace(m @ image).real / 4 for m in mats]
        signs.append(np.sign(max(overlaps, key=abs)))
    assert abs(np.mean(signs)) < 0.2
