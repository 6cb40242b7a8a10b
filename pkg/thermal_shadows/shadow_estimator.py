# shadow_estimator.py
"""Classical-shadow snapshots, sample budgets and median-of-means estimation."""
import logging
import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from tqdm import tqdm

from .errors import DenseLimitError, ValidationError
from .exact_engine import born_sample, expectation, purity, sample_index
from .pauli_algebra import PauliString, locality, observable_set
from .random_circuits import MeasurementBasis, apply_clifford, sample_pauli_basis, sample_two_design
from .settings import get_settings
from .thermal_states import ExactTPQSource

logger = logging.getLogger(__name__)

BOUNDS = ("original", "tight")
ENSEMBLES = ("pauli", "clifford")
AXIS_CODE = {"X": 1, "Y": 2, "Z": 3}
_CEIL_SLACK = 1e-9


@dataclass(frozen=True)
class Snapshot:
    basis: MeasurementBasis
    outcome: str

    def __post_init__(self):
        if len(self.outcome) != len(self.basis.axes) or set(self.outcome) - set("01"):
            raise ValidationError(f"outcome {self.outcome!r} does not match basis {self.basis.axes}")


@dataclass(frozen=True)
class SampleBudget:
    num_observables: int
    variance_bound: float
    epsilon: float
    delta: float
    bound: str
    set_size: int
    num_sets: int

    @property
    def num_shadows(self):
        return self.set_size * self.num_sets


@dataclass(frozen=True)
class ShadowEstimate:
    observable: PauliString
    value: float
    set_means: np.ndarray = field(repr=False)


def _ceil(x):
    return int(math.ceil(x - _CEIL_SLACK))


def _check_budget_args(num_observables, loc, epsilon, delta):
    if num_observables < 1:
        raise ValidationError("need at least one observable")
    if loc < 1:
        raise ValidationError("locality must be >= 1")
    if not (epsilon > 0 and math.isfinite(epsilon)):
        raise ValidationError("epsilon must be finite and > 0")
    if not 0 < delta < 1:
        raise ValidationError("delta must lie in (0, 1)")


def sample_budget(num_observables, loc, epsilon, delta, bound="tight"):
    """Shadow count for estimating ``num_observables`` ``loc``-local Paulis."""
    _check_budget_args(num_observables, loc, epsilon, delta)
    variance = 3.0 ** loc
    if bound == "original":
        set_size = _ceil(34 * variance / epsilon ** 2)
        num_sets = _ceil(2 * math.log(2 * num_observables / delta))
    elif bound == "tight":
        log_term = math.log(num_observables / delta)
        target = 27 * variance / epsilon ** 2 * log_term
        num_sets = max(1, _ceil(2 * log_term))
        set_size = max(1, int(round(target / num_sets)))
    else:
        raise ValidationError(f"unknown bound {bound!r}, expected one of {BOUNDS}")
    return SampleBudget(
        num_observables=num_observables,
        variance_bound=variance,
        epsilon=epsilon,
        delta=delta,
        bound=bound,
        set_size=set_size,
        num_sets=num_sets,
    )


def epsilon_for(num_shadows, num_observables, loc, delta):
    """Accuracy the tight bound guarantees for a given shadow count."""
    _check_budget_args(num_observables, loc, 1.0, delta)
    if num_shadows < 1:
        raise ValidationError("need at least one shadow")
    return math.sqrt(27 * 3.0 ** loc * math.log(num_observables / delta) / num_shadows)


# --- Single-snapshot estimators ---

def pauli_snapshot_estimate(snapshot, observable):
    """``Tr(rho_hat O)`` for a Pauli-basis snapshot: a product of per-qubit factors."""
    if observable.n != len(snapshot.basis.axes):
        raise ValidationError("observable and snapshot sizes differ")
    value = 1.0
    for q, letter in enumerate(observable.ops):
        if letter == "I":
            continue
        if snapshot.basis.axes[q] != letter:
            return 0.0
        value *= -3.0 if snapshot.outcome[q] == "1" else 3.0
    return value


def global_clifford_snapshot(circuit, outcome):
    """Dense snapshot ``(2^n + 1) V^dagger|b><b|V - I``."""
    n = circuit.n
    if n > get_settings().dense_limit:
        raise DenseLimitError(n, get_settings().dense_limit)
    if len(outcome) != n:
        raise ValidationError("outcome length does not match the circuit")
    v = _pulled_back(circuit, int(outcome, 2))
    return (2 ** n + 1) * np.outer(v, v.conj()) - np.eye(2 ** n)


def _pulled_back(circuit, index):
    basis_vector = np.zeros(2 ** circuit.n, dtype=complex)
    basis_vector[index] = 1.0
    return apply_clifford(circuit.inverse(), basis_vector)


def median_of_means(values, num_sets):
    """Median of ``num_sets`` contiguous block means; the length must be a multiple of ``num_sets``."""
    values = np.asarray(values, dtype=float)
    if num_sets < 1:
        raise ValidationError("num_sets must be >= 1")
    if len(values) == 0 or len(values) % num_sets:
        raise ValidationError(f"{len(values)} values do not split into {num_sets} equal sets")
    size = len(values) // num_sets
    means = values.reshape(num_sets, size).mean(axis=1)
    return float(np.median(means)), means


# --- Snapshot collection ---

class PauliSnapshotTable:
    """Bases and outcomes of many Pauli-basis snapshots, scored lazily."""

    def __init__(self, bases, outcomes, observables):
        self.bases = bases
        self.outcomes = outcomes
        self.observables = list(observables)

    def __len__(self):
        return len(self.bases)

    def column(self, j, count=None):
        p = self.observables[j]
        rows = slice(None) if count is None else slice(0, count)
        support = list(p.support)
        codes = np.array([AXIS_CODE[p.ops[q]] for q in support], dtype=np.int8)
        match = np.all(self.bases[rows][:, support] == codes, axis=1)
        flips = np.sum(self.outcomes[rows][:, support], axis=1) % 2
        return np.where(match, (3.0 ** len(support)) * (1 - 2 * flips), 0.0)

    def snapshot(self, i):
        axes = "".join(" XYZ"[c] for c in self.bases[i])
        return Snapshot(MeasurementBasis(axes), "".join(str(b) for b in self.outcomes[i]))


class ScoreTable:
    """Precomputed per-snapshot scores, one column per observable."""

    def __init__(self, scores, observables):
        self.scores = scores
        self.observables = list(observables)

    def __len__(self):
        return len(self.scores)

    def column(self, j, count=None):
        return self.scores[:count, j] if count is not None else self.scores[:, j]


def _shot_seed(seed, i):
    return np.random.default_rng([seed, i])


def _pauli_chunk(source, n, seed, indices, tick):
    bases = np.zeros((len(indices), n), dtype=np.int8)
    outcomes = np.zeros((len(indices), n), dtype=np.int8)
    for row, i in enumerate(indices):
        rng = _shot_seed(seed, i)
        psi = source.draw_state(rng)
        basis = sample_pauli_basis(n, rng)
        bits = born_sample(psi, basis, rng)
        bases[row] = [AXIS_CODE[a] for a in basis.axes]
        outcomes[row] = [int(b) for b in bits]
        tick()
    return bases, outcomes


def _clifford_chunk(source, n, seed, indices, observables, tick):
    scores = np.zeros((len(indices), len(observables)))
    dim = 2 ** n
    offsets = np.array([dim if locality(p) == 0 else 0 for p in observables], dtype=float)
    for row, i in enumerate(indices):
        rng = _shot_seed(seed, i)
        psi = source.draw_state(rng)
        circuit = sample_two_design(n, rng)
        rotated = apply_clifford(circuit, psi)
        v = _pulled_back(circuit, sample_index(np.abs(rotated) ** 2, rng))
        values = np.array([expectation(v, p) for p in observables])
        scores[row] = (dim + 1) * values - offsets
        tick()
    return scores


def collect_snapshots(source, observables, num_shadows, seed, workers=1, ensemble="pauli", progress=None):
    """Draw ``num_shadows`` snapshots of ``source``.

    Snapshot ``i`` uses its own generator seeded from ``(seed, i)``, so the
    table does not depend on the worker count.
    """
    if ensemble not in ENSEMBLES:
        raise ValidationError(f"unknown ensemble {ensemble!r}, expected one of {ENSEMBLES}")
    if num_shadows < 1:
        raise ValidationError("need at least one shadow")
    if seed < 0:
        raise ValidationError("seed must be >= 0")
    observables = list(observables)
    n = source.n
    for p in observables:
        if p.n != n:
            raise ValidationError(f"observable {p} does not act on {n} qubits")
    if progress is None:
        progress = get_settings().progress
    chunks = [c for c in np.array_split(np.arange(num_shadows), max(1, workers)) if len(c)]
    bar = tqdm(total=num_shadows, disable=not progress, desc=f"{ensemble} shadows")
    lock = threading.Lock()

    def tick():
        with lock:
            bar.update(1)

    def run(indices):
        if ensemble == "pauli":
            return _pauli_chunk(source, n, seed, indices, tick)
        return _clifford_chunk(source, n, seed, indices, observables, tick)

    logger.debug("Collecting %d %s snapshots on %d worker(s)", num_shadows, ensemble, len(chunks))
    try:
        if len(chunks) == 1:
            parts = [run(chunks[0])]
        else:
            with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
                parts = list(pool.map(run, chunks))
    finally:
        bar.close()
    if ensemble == "pauli":
        return PauliSnapshotTable(
            np.concatenate([p[0] for p in parts]),
            np.concatenate([p[1] for p in parts]),
            observables,
        )
    return ScoreTable(np.concatenate(parts), observables)


def estimate_from_table(table, num_sets, count=None):
    """Median-of-means estimate for every observable in ``table``."""
    out = []
    for j, p in enumerate(table.observables):
        value, means = median_of_means(table.column(j, count), num_sets)
        out.append(ShadowEstimate(observable=p, value=value, set_means=means))
    return out


def estimate_rows(estimates, exact_values, num_shadows, num_sets, epsilon, delta, source):
    """CSV rows for estimates made from ``num_shadows`` snapshots in ``num_sets`` sets."""
    rows = []
    for est, exact in zip(estimates, exact_values):
        rows.append({
            "observable_word": est.observable.ops,
            "estimate": est.value,
            "exact_value": float(exact),
            "abs_error": abs(est.value - float(exact)),
            "n_s": num_shadows,
            "S": num_shadows // num_sets,
            "K": num_sets,
            "epsilon": epsilon,
            "delta": delta,
            "source": source,
        })
    return rows


def run_experiment(source, observables, budget, seed, workers=1, ensemble="pauli", progress=None):
    """Collect ``budget.num_shadows`` snapshots and estimate every observable."""
    table = collect_snapshots(
        source, observables, budget.num_shadows, seed, workers=workers, ensemble=ensemble, progress=progress
    )
    logger.info(
        "Estimated %d observables from %d shadows (%d sets of %d)",
        len(table.observables), budget.num_shadows, budget.num_sets, budget.set_size,
    )
    return estimate_from_table(table, budget.num_sets)


# --- Concentration of TPQ expectations ---

@dataclass(frozen=True)
class TailCheck:
    observables: list
    exceed_fraction: np.ndarray
    bound: float
    purity: float
    samples: int


def tpq_tail_check(h, beta, epsilon, samples, seed, observables=None):
    """Fraction of random TPQ states whose expectation misses the thermal value by >= epsilon.

    Compared against ``(4 / epsilon^2) * Tr(rho_beta^2)`` for unit-norm observables.
    """
    if epsilon <= 0:
        raise ValidationError("epsilon must be > 0")
    if samples < 1:
        raise ValidationError("need at least one sample")
    observables = list(observables) if observables is not None else observable_set(h.n)
    source = ExactTPQSource(h, beta)
    rho = source.gibbs()
    truth = np.array([expectation(rho, p) for p in observables])
    hits = np.zeros(len(observables))
    for s in range(samples):
        psi = source.draw_state(_shot_seed(seed, s))
        values = np.array([expectation(psi, p) for p in observables])
        hits += np.abs(values - truth) >= epsilon
    rho_purity = purity(rho)
    return TailCheck(
        observables=observables,
        exceed_fraction=hits / samples,
        bound=4.0 / epsilon ** 2 * rho_purity,
        purity=rho_purity,
        samples=samples,
    )
