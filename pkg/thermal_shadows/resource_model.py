# resource_model.py
"""Circuit IR for QSP and random-unitary circuits, lowering to fault-tolerant
(Clifford+T) or NISQ gate sets, and resource counting.

Lowering is a generator so that large circuits can be counted without
holding every primitive gate in memory.
"""
import logging
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import DenseLimitError, UnknownGateError, ValidationError
from .exact_engine import (
    FIXED_GATES,
    X as X_MATRIX,
    Y as Y_MATRIX,
    Z as Z_MATRIX,
    apply_controlled_phase,
    apply_gate,
    rx,
    ry,
    rz,
    u3,
    zyz_angles,
)
from .pauli_algebra import build_xxz
from .random_circuits import sample_two_design, schedule_layers
from .settings import get_settings

logger = logging.getLogger(__name__)

TAGS = ("random_unitary", "prep", "select", "multi_cz", "phase", "basis_rotation")
TARGETS = ("ft", "nisq")

SINGLE_FIXED = ("H", "S", "SDG", "T", "TDG", "X", "Y", "Z", "R", "R2")
ROTATIONS = ("RX", "RY", "RZ", "U3")
T_KINDS = ("T", "TDG")
CLIFFORD_KINDS = ("H", "S", "SDG", "X", "Y", "Z", "R", "R2", "CNOT", "CZ")
TWO_QUBIT_KINDS = ("CNOT", "CZ")
MULTI_KINDS = ("TOFFOLI", "MCPAULI", "MCZ", "MCRY")

FT_GATE_SET = frozenset({"H", "S", "SDG", "CNOT", "T", "TDG"})
NISQ_GATE_SET = frozenset({"RX", "RY", "RZ", "U3", "CNOT", "CZ"})

# Clifford words over {H, S, SDG} in circuit order.
FT_WORDS = {
    "X": ("H", "S", "S", "H"),
    "Y": ("S", "S", "H", "S", "S", "H"),
    "Z": ("S", "S"),
    "R": ("H", "S"),
    "R2": ("H", "S", "H", "S"),
}

PLACEHOLDER_PHASE = 0.5
DEFAULT_FIDELITY = 0.995


class Op(NamedTuple):
    kind: str
    qubits: tuple
    tag: str
    angles: tuple = ()
    num_controls: int = 0
    control_values: tuple = ()
    word: str = ""
    sign: int = 1

    @property
    def controls(self):
        return self.qubits[: self.num_controls]

    @property
    def targets(self):
        return self.qubits[self.num_controls:]


@dataclass(frozen=True)
class CircuitIR:
    num_system: int
    num_qubits: int
    ops: tuple = field(repr=False)

    @property
    def ancillae(self):
        return self.num_qubits - self.num_system


# --- Builders ---

def clifford_to_ir(circuit, tag="random_unitary", offset=0):
    ops = []
    for g in circuit.gates:
        ops.append(Op(g.kind, tuple(q + offset for q in g.qubits), tag))
    return ops


def basis_rotation_ops(basis, offset=0):
    return clifford_to_ir_gates(basis.rotation_gates(), "basis_rotation", offset)


def clifford_to_ir_gates(gates, tag, offset=0):
    return [Op(g.kind, tuple(q + offset for q in g.qubits), tag) for g in gates]


def _bits(value, width):
    return tuple((value >> (width - 1 - k)) & 1 for k in range(width))


def prep_ops(weights, index_qubits, tag="prep"):
    """Binary tree of controlled RY rotations loading ``sqrt(weights)`` on the index register."""
    m = len(index_qubits)
    count = len(weights)
    cumulative = np.concatenate([[0.0], np.cumsum(weights)])

    def mass(lo, hi):
        lo, hi = min(lo, count), min(hi, count)
        return cumulative[hi] - cumulative[lo]

    ops = []
    for level in range(m):
        span = 2 ** (m - level)
        for prefix in range(2 ** level):
            start = prefix * span
            mid = start + span // 2
            if mid >= count:
                break
            total = mass(start, start + span)
            ratio = mass(start, mid) / total if total > 0 else 1.0
            theta = 2 * math.acos(math.sqrt(min(1.0, max(0.0, ratio))))
            ops.append(Op(
                "MCRY",
                tuple(index_qubits[:level]) + (index_qubits[level],),
                tag,
                angles=(theta,),
                num_controls=level,
                control_values=_bits(prefix, level),
            ))
    return ops


def _adjoint(ops):
    return [op._replace(angles=tuple(-a for a in op.angles)) for op in reversed(ops)]


def build_qsp_circuit(h, degree, phases=None):
    """QSP sequence for a degree-``degree`` polynomial of ``h``'s block encoding.

    Layout: system qubits, then the ``ceil(log2 L)`` index register, then the
    phase qubit. ``2*degree`` walk steps are interleaved with ``2*degree + 1``
    phase rotations.
    """
    if degree < 0:
        raise ValidationError("degree must be >= 0")
    if h.num_terms == 0:
        raise ValidationError("cannot block-encode an empty Hamiltonian")
    num_phases = 2 * degree + 1
    if phases is None:
        phases = [PLACEHOLDER_PHASE] * num_phases
    if len(phases) != num_phases:
        raise ValidationError(f"expected {num_phases} phases, got {len(phases)}")
    n = h.n
    num_terms = h.num_terms
    m = (num_terms - 1).bit_length()
    index = tuple(range(n, n + m))
    phase_qubit = n + m

    weights = np.array([abs(c) for c, _ in h.terms]) / h.one_norm
    prep = prep_ops(weights, index)
    unprep = _adjoint(prep)
    select = []
    for ell, (coeff, p) in enumerate(h.terms):
        support = p.support
        select.append(Op(
            "MCPAULI",
            index + support,
            "select",
            num_controls=m,
            control_values=_bits(ell, m),
            word="".join(p.ops[q] for q in support),
            sign=1 if coeff > 0 else -1,
        ))
    reflect = Op("MCZ", index + (phase_qubit,), "multi_cz", num_controls=m, control_values=(0,) * m)

    ops = [Op("RZ", (phase_qubit,), "phase", angles=(float(phases[0]),))]
    for k in range(1, num_phases):
        ops += prep + select + unprep
        ops.append(reflect)
        ops.append(Op("RZ", (phase_qubit,), "phase", angles=(float(phases[k]),)))
    return CircuitIR(num_system=n, num_qubits=n + m + 1, ops=tuple(ops))


def build_shadow_circuit(h, degree, circuit, basis, phases=None):
    """Random unitary, QSP filter and measurement-basis change as one circuit."""
    if circuit.n != h.n or len(basis.axes) != h.n:
        raise ValidationError("circuit, basis and Hamiltonian sizes differ")
    qsp = build_qsp_circuit(h, degree, phases)
    ops = clifford_to_ir(circuit) + list(qsp.ops) + basis_rotation_ops(basis)
    return CircuitIR(num_system=h.n, num_qubits=qsp.num_qubits, ops=tuple(ops))


def random_unitary_circuit(circuit):
    return CircuitIR(num_system=circuit.n, num_qubits=circuit.n, ops=tuple(clifford_to_ir(circuit)))


# --- Lowering ---

def rotation_t_cost(eps=None):
    """T gates charged for one synthesized rotation at precision ``eps``."""
    if eps is None:
        eps = get_settings().rotation_eps
    if not 0 < eps < 1:
        raise ValidationError("rotation precision must lie in (0, 1)")
    return int(math.ceil(3 * math.log2(1 / eps)))


class _Lowerer:
    def __init__(self, circuit, target, rotation_cost):
        if target not in TARGETS:
            raise ValidationError(f"unknown target {target!r}, expected one of {TARGETS}")
        self.target = target
        self.rotation_cost = rotation_cost
        self.base = circuit.num_qubits
        self.chain_length = 0

    # primitives

    def single(self, kind, q, tag, angles=()):
        if self.target == "ft":
            if kind in ("H", "S", "SDG", "T", "TDG"):
                yield Op(kind, (q,), tag)
            elif kind in FT_WORDS:
                for k in FT_WORDS[kind]:
                    yield Op(k, (q,), tag)
            elif kind in ROTATIONS:
                for _ in range(self.rotation_cost):
                    yield Op("H", (q,), tag)
                    yield Op("T", (q,), tag)
            else:
                raise UnknownGateError(f"no fault-tolerant rule for {kind!r}")
        else:
            if kind in ROTATIONS:
                yield Op(kind, (q,), tag, angles)
            elif kind in SINGLE_FIXED:
                yield Op("U3", (q,), tag, zyz_angles(FIXED_GATES[kind]))
            else:
                raise UnknownGateError(f"no NISQ rule for {kind!r}")

    def cnot(self, c, t, tag):
        yield Op("CNOT", (c, t), tag)

    def cz(self, a, b, tag):
        if self.target == "ft":
            yield from self.single("H", b, tag)
            yield Op("CNOT", (a, b), tag)
            yield from self.single("H", b, tag)
        else:
            yield Op("CZ", (a, b), tag)

    def toffoli(self, c0, c1, t, tag):
        # H . CCZ . H with CCZ as the phase polynomial of c0*c1*t.
        yield from self.single("H", t, tag)
        for q in (c0, c1, t):
            yield from self.single("T", q, tag)
        for control, kind in ((c0, "TDG"), (c1, "T"), (c0, "TDG")):
            yield from self.cnot(control, t, tag)
            yield from self.single(kind, t, tag)
        yield from self.cnot(c1, t, tag)
        yield from self.cnot(c0, c1, tag)
        yield from self.single("TDG", c1, tag)
        yield from self.cnot(c0, c1, tag)
        yield from self.single("H", t, tag)

    def controlled_pauli(self, c, t, letter, tag):
        if letter == "X":
            yield from self.cnot(c, t, tag)
        elif letter == "Z":
            yield from self.cz(c, t, tag)
        elif letter == "Y":
            yield from self.single("SDG", t, tag)
            yield from self.cnot(c, t, tag)
            yield from self.single("S", t, tag)
        else:
            raise UnknownGateError(f"not a Pauli letter: {letter!r}")

    # multi-controlled gates

    def _chain(self, controls, values, tag):
        """Compute the AND of ``controls`` into a chain of clean ancillae.

        Returns ``(effective_control, blocks)``. Every block is self-inverse, so
        uncomputing replays the blocks in reverse order.
        """
        compute = []
        for c, v in zip(controls, values):
            if not v:
                compute.append(list(self.single("X", c, tag)))
        k = len(controls)
        if k == 0:
            return None, compute
        if k == 1:
            return controls[0], compute
        self.chain_length = max(self.chain_length, k - 1)
        ancilla = [self.base + i for i in range(k - 1)]
        compute.append(list(self.toffoli(controls[0], controls[1], ancilla[0], tag)))
        for i in range(2, k):
            compute.append(list(self.toffoli(ancilla[i - 2], controls[i], ancilla[i - 1], tag)))
        return ancilla[-1], compute

    def lower_op(self, op):
        kind, tag = op.kind, op.tag
        if kind in SINGLE_FIXED or kind in ROTATIONS:
            yield from self.single(kind, op.qubits[0], tag, op.angles)
        elif kind == "CNOT":
            yield from self.cnot(*op.qubits, tag)
        elif kind == "CZ":
            yield from self.cz(*op.qubits, tag)
        elif kind == "TOFFOLI":
            yield from self.toffoli(*op.qubits, tag)
        elif kind in ("MCPAULI", "MCZ", "MCRY"):
            eff, compute = self._chain(op.controls, op.control_values, tag)
            for block in compute:
                yield from block
            yield from self._controlled_body(op, eff)
            for block in reversed(compute):
                yield from block
        else:
            raise UnknownGateError(f"unknown gate kind {kind!r}")

    def _controlled_body(self, op, eff):
        tag = op.tag
        if op.kind == "MCPAULI":
            for q, letter in zip(op.targets, op.word):
                if eff is None:
                    yield from self.single(letter, q, tag)
                else:
                    yield from self.controlled_pauli(eff, q, letter, tag)
            if op.sign < 0 and eff is not None:
                yield from self.single("Z", eff, tag)
        elif op.kind == "MCZ":
            t = op.targets[0]
            if eff is None:
                yield from self.single("Z", t, tag)
            else:
                yield from self.cz(eff, t, tag)
        else:
            t, theta = op.targets[0], op.angles[0]
            if eff is None:
                yield from self.single("RY", t, tag, (theta,))
            else:
                yield from self.single("RY", t, tag, (theta / 2,))
                yield from self.cnot(eff, t, tag)
                yield from self.single("RY", t, tag, (-theta / 2,))
                yield from self.cnot(eff, t, tag)


def lower_ops(circuit, target, rotation_eps=None):
    """Yield the primitive gates of ``circuit`` for ``target``.

    The number of chain ancillae is known once the generator is exhausted;
    ``lower`` collects it.
    """
    lowerer = _Lowerer(circuit, target, rotation_t_cost(rotation_eps))
    for op in circuit.ops:
        yield from lowerer.lower_op(op)
    return lowerer.chain_length


def lower(circuit, target, rotation_eps=None):
    ops = []
    gen = lower_ops(circuit, target, rotation_eps)
    while True:
        try:
            ops.append(next(gen))
        except StopIteration as stop:
            chain = stop.value
            break
    return CircuitIR(num_system=circuit.num_system, num_qubits=circuit.num_qubits + chain, ops=tuple(ops))


# --- Counting ---

@dataclass(frozen=True)
class GateTally:
    t_count: int
    clifford_count: int
    two_qubit_count: int
    rotation_count: int
    multi_qubit_count: int
    total: int
    depth: int


@dataclass(frozen=True)
class ResourceReport:
    totals: GateTally
    by_tag: dict
    num_qubits: int
    ancillae: int
    success_probability: float = None


class _Accumulator:
    def __init__(self):
        self.kinds = defaultdict(Counter)
        self.free = {}
        self.tag_free = defaultdict(dict)
        self.depth = 0
        self.tag_depth = Counter()

    def add(self, op):
        self.kinds[op.tag][op.kind] += 1
        layer = max((self.free.get(q, 0) for q in op.qubits), default=0)
        for q in op.qubits:
            self.free[q] = layer + 1
        self.depth = max(self.depth, layer + 1)
        free = self.tag_free[op.tag]
        layer = max((free.get(q, 0) for q in op.qubits), default=0)
        for q in op.qubits:
            free[q] = layer + 1
        self.tag_depth[op.tag] = max(self.tag_depth[op.tag], layer + 1)


def _tally(kinds, depth):
    def total_of(names):
        return sum(kinds[k] for k in names)

    return GateTally(
        t_count=total_of(T_KINDS),
        clifford_count=total_of(CLIFFORD_KINDS),
        two_qubit_count=total_of(TWO_QUBIT_KINDS),
        rotation_count=total_of(ROTATIONS),
        multi_qubit_count=total_of(MULTI_KINDS),
        total=sum(kinds.values()),
        depth=depth,
    )


def success_probability(report, two_qubit_fidelity):
    """Chance that no two-qubit gate fails; ``report`` is a ResourceReport or a bare two-qubit count."""
    if not 0 < two_qubit_fidelity <= 1:
        raise ValidationError("fidelity must lie in (0, 1]")
    count = report.totals.two_qubit_count if isinstance(report, ResourceReport) else int(report)
    return float(two_qubit_fidelity) ** count


def _report(acc, num_qubits, num_system, fidelity):
    by_tag = {tag: _tally(kinds, acc.tag_depth[tag]) for tag, kinds in acc.kinds.items()}
    merged = Counter()
    for kinds in acc.kinds.values():
        merged.update(kinds)
    totals = _tally(merged, acc.depth)
    prob = success_probability(totals.two_qubit_count, fidelity) if fidelity is not None else None
    return ResourceReport(totals, by_tag, num_qubits, num_qubits - num_system, prob)


def count(circuit, fidelity=None):
    """Gate counts by class, per tag and in total, plus ASAP depth."""
    acc = _Accumulator()
    for op in circuit.ops:
        acc.add(op)
    return _report(acc, circuit.num_qubits, circuit.num_system, fidelity)


def count_lowered(circuit, target, fidelity=None, rotation_eps=None):
    """``count(lower(circuit, target))`` without materializing the lowered circuit."""
    acc = _Accumulator()
    gen = lower_ops(circuit, target, rotation_eps)
    while True:
        try:
            acc.add(next(gen))
        except StopIteration as stop:
            chain = stop.value
            break
    return _report(acc, circuit.num_qubits + chain, circuit.num_system, fidelity)


def depth_layers(circuit):
    """Explicit ASAP layers (lists of op indices); used to check depth."""
    return schedule_layers([op.qubits for op in circuit.ops])


# --- Dense semantics ---

def _op_matrix(op):
    if op.kind in FIXED_GATES:
        return FIXED_GATES[op.kind]
    if op.kind == "U3":
        return u3(*op.angles)
    return {"RX": rx, "RY": ry, "RZ": rz}[op.kind](op.angles[0])


def circuit_unitary(circuit):
    """Dense unitary of an IR circuit, multi-controlled gates included."""
    n = circuit.num_qubits
    limit = get_settings().dense_limit
    if n > limit:
        raise DenseLimitError(n, limit)
    u = np.eye(2 ** n, dtype=complex)
    letters = {"X": X_MATRIX, "Y": Y_MATRIX, "Z": Z_MATRIX}
    for op in circuit.ops:
        if op.kind in SINGLE_FIXED or op.kind in ROTATIONS:
            u = apply_gate(u, _op_matrix(op), op.qubits[0], n)
        elif op.kind == "CNOT":
            u = apply_gate(u, X_MATRIX, op.qubits[1], n, controls=(op.qubits[0],))
        elif op.kind == "CZ":
            u = apply_gate(u, Z_MATRIX, op.qubits[1], n, controls=(op.qubits[0],))
        elif op.kind == "TOFFOLI":
            u = apply_gate(u, X_MATRIX, op.qubits[2], n, controls=op.qubits[:2])
        elif op.kind == "MCPAULI":
            for q, letter in zip(op.targets, op.word):
                u = apply_gate(u, letters[letter], q, n, op.controls, op.control_values)
            if op.sign < 0:
                u = apply_controlled_phase(u, -1.0, n, op.controls, op.control_values)
        elif op.kind == "MCZ":
            u = apply_gate(u, Z_MATRIX, op.targets[0], n, op.controls, op.control_values)
        elif op.kind == "MCRY":
            u = apply_gate(u, ry(op.angles[0]), op.targets[0], n, op.controls, op.control_values)
        else:
            raise UnknownGateError(f"unknown gate kind {op.kind!r}")
    return u


def ancilla_block(unitary, num_ancillae):
    """Restriction of a unitary to inputs and outputs with trailing ancillae in |0>."""
    step = 2 ** num_ancillae
    return unitary[::step, ::step]


# --- Studies ---

@dataclass(frozen=True)
class RandomUnitaryStats:
    n: int
    target: str
    depths: np.ndarray = field(repr=False)

    @property
    def mean(self):
        return float(np.mean(self.depths))

    @property
    def std(self):
        return float(np.std(self.depths))

    def histogram(self):
        values, counts = np.unique(self.depths, return_counts=True)
        return [(int(v), int(c)) for v, c in zip(values, counts)]


def random_unitary_stats(n, samples, target, seed):
    """Lowered depth of ``samples`` random Clifford circuits; sample ``i`` is seeded by ``(seed, i)``."""
    if samples < 1:
        raise ValidationError("need at least one sample")
    depths = np.empty(samples, dtype=int)
    for i in range(samples):
        circuit = sample_two_design(n, np.random.default_rng([seed, i]))
        depths[i] = count_lowered(random_unitary_circuit(circuit), target).totals.depth
    return RandomUnitaryStats(n=n, target=target, depths=depths)


def xxz_hamiltonian(n, jx=1.1, jy=1.1, jz=1.0, hx=-1.0, hy=0.0, hz=0.0):
    return build_xxz(n, jx, jy, jz, hx, hy, hz)


def scaling_study(ns, degree, targets=TARGETS, fidelity=DEFAULT_FIDELITY, hamiltonian=xxz_hamiltonian):
    """Per-tag and total resources of the QSP circuit for every ``n`` and target."""
    rows = []
    for n in ns:
        circuit = build_qsp_circuit(hamiltonian(n), degree)
        for target in targets:
            report = count_lowered(circuit, target, fidelity=fidelity)
            logger.info(
                "n=%d %s: %d gates, depth %d, %d ancillae",
                n, target, report.totals.total, report.totals.depth, report.ancillae,
            )
            entries = [("total", report.totals)] + sorted(report.by_tag.items())
            for tag, tally in entries:
                rows.append({
                    "n": n,
                    "d": degree,
                    "target": target,
                    "tag": tag,
                    "t_count": tally.t_count,
                    "two_qubit_count": tally.two_qubit_count,
                    "rotation_count": tally.rotation_count,
                    "clifford_count": tally.clifford_count,
                    "depth": tally.depth,
                    "ancillae": report.ancillae,
                    "total": tally.total,
                    "success_probability": report.success_probability if tag == "total" else "",
                })
    return rows
