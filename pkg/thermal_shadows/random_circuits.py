# random_circuits.py
"""Random Clifford circuits approximating a unitary 2-design, and random
Pauli measurement bases.
"""
import logging
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .exact_engine import AXIS_ROTATIONS, FIXED_GATES, X as X_MATRIX, apply_gate, zero_state

logger = logging.getLogger(__name__)

SINGLE_QUBIT_KINDS = ("H", "S", "SDG", "R", "R2", "X", "Y", "Z")
GATE_KINDS = SINGLE_QUBIT_KINDS + ("CNOT",)

INVERSE_KIND = {"H": "H", "S": "SDG", "SDG": "S", "R": "R2", "R2": "R", "X": "X", "Y": "Y", "Z": "Z", "CNOT": "CNOT"}

XOR_INCLUDE_PROB = 0.75


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple

    def to_json(self):
        return {"kind": self.kind, "qubits": list(self.qubits)}


@dataclass(frozen=True)
class CliffordCircuit:
    n: int
    gates: tuple

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError("a circuit needs at least one qubit")
        for g in self.gates:
            arity = 2 if g.kind == "CNOT" else 1
            if g.kind not in GATE_KINDS:
                raise ValidationError(f"unknown Clifford gate kind {g.kind!r}")
            if len(g.qubits) != arity or len(set(g.qubits)) != arity:
                raise ValidationError(f"gate {g.kind} has bad qubits {g.qubits}")
            if any(q < 0 or q >= self.n for q in g.qubits):
                raise ValidationError(f"gate {g.kind} on {g.qubits} is outside 0..{self.n - 1}")

    def inverse(self):
        """Inverse circuit, exact up to a global phase."""
        return CliffordCircuit(self.n, tuple(Gate(INVERSE_KIND[g.kind], g.qubits) for g in reversed(self.gates)))

    def depth(self):
        return len(schedule_layers([g.qubits for g in self.gates]))

    def to_json(self):
        return {"n": self.n, "gates": [g.to_json() for g in self.gates]}

    @classmethod
    def from_json(cls, data):
        try:
            gates = tuple(Gate(g["kind"], tuple(int(q) for q in g["qubits"])) for g in data["gates"])
            return cls(int(data["n"]), gates)
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed circuit document: {exc}") from None


@dataclass(frozen=True)
class MeasurementBasis:
    axes: str

    def __post_init__(self):
        if not self.axes or set(self.axes) - set("XYZ"):
            raise ValidationError(f"invalid measurement basis {self.axes!r}")

    def rotation(self, q):
        return AXIS_ROTATIONS[self.axes[q]]

    def rotation_gates(self):
        """Clifford gates mapping each axis eigenbasis onto Z, in circuit order."""
        gates = []
        for q, axis in enumerate(self.axes):
            if axis == "X":
                gates.append(Gate("H", (q,)))
            elif axis == "Y":
                gates.extend([Gate("SDG", (q,)), Gate("H", (q,))])
        return gates


def schedule_layers(qubit_sets):
    """ASAP layering; returns the list of layers as index lists."""
    free = {}
    layers = []
    for i, qubits in enumerate(qubit_sets):
        layer = max((free.get(q, 0) for q in qubits), default=0)
        for q in qubits:
            free[q] = layer + 1
        if layer == len(layers):
            layers.append([])
        layers[layer].append(i)
    return layers


# --- Sampling ---

def twirl(q, rng):
    """Uniform element of {I, R, R^2} on qubit ``q``."""
    i = int(rng.integers(3))
    return [[], [Gate("R", (q,))], [Gate("R2", (q,))]][i]


def parity_tree(controls, target):
    """CNOTs adding the parity of ``controls`` onto ``target`` in log depth.

    The controls are folded pairwise into the first one, the result is copied
    onto the target, then the fold is undone.
    """
    if not controls:
        return []
    compute = []
    alive = list(controls)
    while len(alive) > 1:
        nxt = []
        for k in range(0, len(alive) - 1, 2):
            compute.append(Gate("CNOT", (alive[k + 1], alive[k])))
            nxt.append(alive[k])
        if len(alive) % 2:
            nxt.append(alive[-1])
        alive = nxt
    return compute + [Gate("CNOT", (alive[0], target))] + list(reversed(compute))


def random_xor_block(target, candidates, rng):
    controls = [c for c in candidates if rng.random() < XOR_INCLUDE_PROB]
    return parity_tree(controls, target)


def sample_two_design(n, rng):
    """Random Clifford circuit drawn from the twirl/XOR construction.

    A uniform Pauli frame closes the circuit so that the ensemble also
    averages every non-identity Pauli to zero.
    """
    if n < 1:
        raise ValidationError("n must be >= 1")
    head, rest = 0, list(range(1, n))
    gates = []
    for q in range(n):
        gates += twirl(q, rng)
    gates += random_xor_block(head, rest, rng)
    gates.append(Gate("H", (head,)))
    for q in rest:
        gates += twirl(q, rng)
    gates += random_xor_block(head, rest, rng)
    gates.append(Gate("H", (head,)))
    for q in rest:
        gates += twirl(q, rng)
    if rng.random() < 0.5:
        gates.append(Gate("S", (head,)))
    gates += random_xor_block(head, rest, rng)
    gates += twirl(head, rng)
    for q, letter in enumerate(rng.integers(4, size=n)):
        if letter:
            gates.append(Gate("IXYZ"[letter], (q,)))
    return CliffordCircuit(n, tuple(gates))


def sample_pauli_basis(n, rng):
    if n < 1:
        raise ValidationError("n must be >= 1")
    return MeasurementBasis("".join("XYZ"[i] for i in rng.integers(3, size=n)))


# --- Simulation ---

def apply_clifford(circuit, psi):
    """Apply ``circuit`` to a state vector (or a stack of columns)."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape[0] != 2 ** circuit.n:
        raise ValidationError(f"state dimension {psi.shape[0]} does not match n={circuit.n}")
    for g in circuit.gates:
        if g.kind == "CNOT":
            psi = apply_gate(psi, X_MATRIX, g.qubits[1], circuit.n, controls=(g.qubits[0],))
        else:
            psi = apply_gate(psi, FIXED_GATES[g.kind], g.qubits[0], circuit.n)
    return psi


def prepare(circuit):
    """``U|0...0>``."""
    return apply_clifford(circuit, zero_state(circuit.n))


def circuit_matrix(circuit):
    return apply_clifford(circuit, np.eye(2 ** circuit.n, dtype=complex))
