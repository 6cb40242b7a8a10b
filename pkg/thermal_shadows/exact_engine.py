# exact_engine.py
"""Dense linear algebra: spectra, matrix functions, Gibbs states and
state-vector gate kernels.

Gate kernels act on arrays of shape ``(2**n,)`` or ``(2**n, m)``; the trailing
axis lets a whole unitary be pushed through a circuit column by column.
"""
import logging
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .errors import NotHermitianError, ValidationError
from .pauli_algebra import Hamiltonian, PauliString, matrix_of, pauli_action

logger = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-8
NORM_TOL = 1e-8

# --- Gate matrices ---

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
S = np.diag([1, 1j]).astype(complex)
SDG = S.conj().T
T = np.diag([1, np.exp(1j * np.pi / 4)]).astype(complex)
TDG = T.conj().T
R = S @ H
R2 = R @ R

FIXED_GATES = {
    "I": I2, "X": X, "Y": Y, "Z": Z, "H": H, "S": S, "SDG": SDG,
    "T": T, "TDG": TDG, "R": R, "R2": R2,
}

# Rotation taking the +1 eigenstate of each axis to |0>.
AXIS_ROTATIONS = {"X": H, "Y": H @ SDG, "Z": I2}


def rx(theta):
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def ry(theta):
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz(theta):
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def u3(theta, phi, lam):
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array(
        [[c, -np.exp(1j * lam) * s], [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c]],
        dtype=complex,
    )


def zyz_angles(u):
    """Angles ``(theta, phi, lam)`` with ``u3(*angles)`` equal to ``u`` up to phase."""
    v = u / np.sqrt(linalg.det(u))
    a, b = v[0, 0], v[1, 0]
    theta = 2 * np.arctan2(abs(b), abs(a))
    total = -2 * np.angle(a) if abs(a) > 1e-12 else 0.0
    diff = 2 * np.angle(b) if abs(b) > 1e-12 else 0.0
    return float(theta), float((total + diff) / 2), float((total - diff) / 2)


def same_up_to_phase(a, b, atol=1e-9):
    """True when ``a = e^{i phi} b`` for some global phase."""
    a = np.asarray(a)
    b = np.asarray(b)
    k = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if abs(b[k]) < atol:
        return bool(np.allclose(a, b, atol=atol))
    phase = a[k] / b[k]
    if abs(abs(phase) - 1) > 1e-6:
        return False
    return bool(np.allclose(a, phase * b, atol=atol))


# --- State-vector kernels ---

def apply_gate(state, matrix, target, n, controls=(), control_values=None):
    """Apply a (possibly controlled) single-qubit ``matrix`` to ``target``."""
    if target in controls:
        raise ValidationError(f"qubit {target} is both control and target")
    state = np.asarray(state)
    if control_values is None:
        control_values = (1,) * len(controls)
    psi = state.reshape((2,) * n + state.shape[1:]).astype(complex, copy=True)
    index = [slice(None)] * psi.ndim
    for c, v in zip(controls, control_values):
        index[c] = int(v)
    axis = target - sum(1 for c in controls if c < target)
    sub = psi[tuple(index)]
    psi[tuple(index)] = np.moveaxis(np.tensordot(matrix, sub, axes=([1], [axis])), 0, axis)
    return psi.reshape(state.shape)


def apply_controlled_phase(state, phase, n, controls=(), control_values=None):
    """Multiply the subspace selected by ``controls`` by ``phase``."""
    state = np.asarray(state)
    if control_values is None:
        control_values = (1,) * len(controls)
    psi = state.reshape((2,) * n + state.shape[1:]).astype(complex, copy=True)
    index = [slice(None)] * psi.ndim
    for c, v in zip(controls, control_values):
        index[c] = int(v)
    psi[tuple(index)] *= phase
    return psi.reshape(state.shape)


def zero_state(n):
    psi = np.zeros(2 ** n, dtype=complex)
    psi[0] = 1.0
    return psi


def normalize(psi):
    psi = np.asarray(psi, dtype=complex)
    norm = np.linalg.norm(psi)
    if norm == 0 or not np.isfinite(norm):
        raise ValidationError("cannot normalize a zero or non-finite vector")
    return psi / norm


# --- Hermitian spectra ---

@dataclass(frozen=True)
class HermitianSpectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def lambda_min(self):
        return float(self.eigenvalues[0])

    @property
    def lambda_max(self):
        return float(self.eigenvalues[-1])

    def apply(self, f):
        values = np.asarray(f(self.eigenvalues))
        if not np.all(np.isfinite(values)):
            raise ValidationError("matrix function produced non-finite values")
        return (self.eigenvectors * values) @ self.eigenvectors.conj().T


def _as_matrix(obj):
    if isinstance(obj, (Hamiltonian, PauliString)):
        return matrix_of(obj)
    return np.asarray(obj)


def check_hermitian(a):
    a = _as_matrix(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {a.shape}")
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    if np.max(np.abs(a - a.conj().T)) > HERMITIAN_TOL * scale:
        raise NotHermitianError("matrix is not Hermitian within tolerance")
    return (a + a.conj().T) / 2


def eig_hermitian(a):
    """Ascending eigenvalues with orthonormal eigenvector columns."""
    values, vectors = linalg.eigh(check_hermitian(a))
    return HermitianSpectrum(eigenvalues=values, eigenvectors=vectors)


def func_of_hermitian(a, f, spectrum=None):
    """``V diag(f(lambda)) V^dagger`` for Hermitian ``a``."""
    if spectrum is None:
        spectrum = eig_hermitian(a)
    return spectrum.apply(f)


def gibbs_state(h, beta, spectrum=None):
    """``e^{-beta H} / Tr e^{-beta H}``, computed with shifted energies."""
    if beta < 0 or not np.isfinite(beta):
        raise ValidationError("beta must be finite and >= 0")
    if spectrum is None:
        spectrum = eig_hermitian(h)
    weights = np.exp(-beta * (spectrum.eigenvalues - spectrum.lambda_min))
    weights = weights / weights.sum()
    return spectrum.apply(lambda _: weights)


def purity(rho):
    rho = np.asarray(rho)
    return float(np.real(np.sum(rho * rho.T)))


def expectation(state, observable):
    """``<psi|O|psi>`` for a state vector or ``Tr(rho O)`` for a density matrix."""
    state = np.asarray(state)
    if isinstance(observable, PauliString):
        dim = 2 ** observable.n
        if state.shape[0] != dim:
            raise ValidationError(f"state dimension {state.shape[0]} != {dim}")
        rows, phases = pauli_action(observable)
        if state.ndim == 1:
            return float(np.real(np.vdot(state[rows], phases * state)))
        return float(np.real(np.sum(state[np.arange(dim), rows] * phases)))
    op = _as_matrix(observable)
    if op.shape[0] != state.shape[0]:
        raise ValidationError(f"state dimension {state.shape[0]} != {op.shape[0]}")
    if state.ndim == 1:
        return float(np.real(np.vdot(state, op @ state)))
    return float(np.real(np.trace(state @ op)))


def born_sample(psi, basis, rng):
    """Measure every qubit of ``psi`` along ``basis.axes``; returns a bitstring.

    Consumes exactly one uniform draw from ``rng``.
    """
    psi = np.asarray(psi, dtype=complex)
    n = len(basis.axes)
    if psi.shape != (2 ** n,):
        raise ValidationError(f"state of shape {psi.shape} does not match {n} qubits")
    if abs(np.linalg.norm(psi) - 1) > NORM_TOL:
        raise ValidationError("born_sample needs a normalized state")
    for q, axis in enumerate(basis.axes):
        if axis != "Z":
            psi = apply_gate(psi, AXIS_ROTATIONS[axis], q, n)
    return format(sample_index(np.abs(psi) ** 2, rng), f"0{n}b")


def sample_index(probabilities, rng):
    """Inverse-CDF draw over lexicographic outcomes with one uniform."""
    cumulative = np.cumsum(probabilities)
    u = rng.random() * cumulative[-1]
    index = int(np.searchsorted(cumulative, u, side="right"))
    return min(index, len(cumulative) - 1)
