# experiments.py
"""Experiment configuration and the sweep runners behind each CLI command.

Every runner takes an ``ExperimentConfig`` and returns ``(rows, summary)``:
lists of flat dicts ready for ``csv.DictWriter``. ``summary`` may be empty.
"""
import json
import logging
from dataclasses import asdict, dataclass, fields, replace
from functools import partial

import numpy as np

from . import minimax_poly, resource_model
from .errors import ConfigError
from .exact_engine import expectation
from .pauli_algebra import build_xxz, locality, observable_set
from .shadow_estimator import (
    BOUNDS,
    ENSEMBLES,
    collect_snapshots,
    epsilon_for,
    estimate_from_table,
    estimate_rows,
    sample_budget,
)
from .thermal_states import SOURCES, ExactGibbsSource, make_state_source

logger = logging.getLogger(__name__)

ERROR_VS_SIZE_RANGE = (3, 10)

# A one-element tuple marks a list field.
FIELD_TYPES = {
    "n": int, "beta": float, "jx": float, "jy": float, "jz": float,
    "hx": float, "hy": float, "hz": float,
    "epsilon": float, "delta": float, "bound": str, "degree": int, "seed": int,
    "samples": int, "source": str, "sources": (str,), "ensemble": str, "workers": int,
    "sizes": (int,), "resource_sizes": (int,), "ru_sizes": (int,),
    "shadow_fractions": (float,), "betas": (float,), "degrees": (int,),
    "threshold": float, "kernel_scale": float, "targets": (str,), "fidelity": float,
}


def _is_instance(value, kind):
    if isinstance(value, bool):
        return False
    if kind is float:
        return isinstance(value, (int, float))
    return isinstance(value, kind)


@dataclass(frozen=True)
class ExperimentConfig:
    n: int = 6
    beta: float = 1.5
    jx: float = 1.1
    jy: float = 1.1
    jz: float = 1.0
    hx: float = -1.0
    hy: float = 0.0
    hz: float = 0.0
    epsilon: float = 0.2
    delta: float = 0.01
    bound: str = "tight"
    degree: int = 24
    seed: int = 7
    samples: int = 1000
    source: str = "exact-tpq"
    sources: tuple = SOURCES
    ensemble: str = "pauli"
    workers: int = 1
    sizes: tuple = (3, 4, 5, 6, 7, 8, 9, 10)
    resource_sizes: tuple = (3, 4, 5, 6, 7, 8, 9, 10, 11, 12)
    ru_sizes: tuple = (3,)
    shadow_fractions: tuple = (0.0625, 0.125, 0.25, 0.5, 1.0)
    betas: tuple = (0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 2.75, 3.0)
    degrees: tuple = (4, 8, 16, 24)
    threshold: float = 1e-5
    kernel_scale: float = 1.0
    targets: tuple = resource_model.TARGETS
    fidelity: float = 0.995

    def validate(self):
        self._check_types()
        if self.n < 2:
            raise ConfigError("n", "must be >= 2")
        for name in ("samples", "workers"):
            if getattr(self, name) < 1:
                raise ConfigError(name, "must be >= 1")
        if self.degree < 0:
            raise ConfigError("degree", "must be >= 0")
        if self.seed < 0:
            raise ConfigError("seed", "must be >= 0")
        if not self.beta >= 0:
            raise ConfigError("beta", "must be >= 0")
        if not self.epsilon > 0:
            raise ConfigError("epsilon", "must be > 0")
        if not 0 < self.delta < 1:
            raise ConfigError("delta", "must lie in (0, 1)")
        if not 0 < self.fidelity <= 1:
            raise ConfigError("fidelity", "must lie in (0, 1]")
        if not self.threshold > 0:
            raise ConfigError("threshold", "must be > 0")
        if self.bound not in BOUNDS:
            raise ConfigError("bound", f"expected one of {BOUNDS}")
        if self.ensemble not in ENSEMBLES:
            raise ConfigError("ensemble", f"expected one of {ENSEMBLES}")
        for name, value in [("source", self.source)] + [("sources", s) for s in self.sources]:
            if value not in SOURCES:
                raise ConfigError(name, f"unknown source {value!r}")
        for target in self.targets:
            if target not in resource_model.TARGETS:
                raise ConfigError("targets", f"unknown target {target!r}")
        for name, smallest in (("sizes", 1), ("resource_sizes", 2), ("ru_sizes", 1)):
            if not getattr(self, name) or min(getattr(self, name)) < smallest:
                raise ConfigError(name, f"needs at least one size, all >= {smallest}")
        if any(not 0 < f <= 1 for f in self.shadow_fractions):
            raise ConfigError("shadow_fractions", "fractions must lie in (0, 1]")
        return self

    def _check_types(self):
        for f in fields(self):
            value = getattr(self, f.name)
            kind = FIELD_TYPES[f.name]
            items = value if isinstance(kind, tuple) else (value,)
            if isinstance(kind, tuple):
                if not isinstance(value, tuple):
                    raise ConfigError(f.name, "must be a list")
                kind = kind[0]
            for item in items:
                if not _is_instance(item, kind):
                    raise ConfigError(f.name, f"expected {kind.__name__} values, got {item!r}")

    @classmethod
    def from_dict(cls, data):
        known = {f.name: f for f in fields(cls)}
        values = {}
        for key, value in data.items():
            if key not in known:
                raise ConfigError(key, "unknown configuration field")
            values[key] = tuple(value) if isinstance(value, list) else value
        try:
            return cls(**values).validate()
        except TypeError as exc:
            raise ConfigError("config", f"wrong value type: {exc}") from None

    @classmethod
    def from_json_file(cls, path):
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError("config", f"cannot read {path}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"invalid JSON in {path}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config", "top level must be an object")
        return cls.from_dict(data)

    def with_overrides(self, **overrides):
        return replace(self, **{k: v for k, v in overrides.items() if v is not None}).validate()

    def to_dict(self):
        return asdict(self)

    def hamiltonian(self, n=None):
        return build_xxz(self.n if n is None else n, self.jx, self.jy, self.jz, self.hx, self.hy, self.hz)


def _thermal_truth(h, beta, observables):
    rho = ExactGibbsSource(h, beta).gibbs()
    return np.array([expectation(rho, p) for p in observables])


def _budget(config, observables):
    loc = max(locality(p) for p in observables)
    return sample_budget(len(observables), loc, config.epsilon, config.delta, config.bound), loc


# --- Shadow accuracy ---

def shadows_vs_count(config):
    """Estimation error against shadow count for every configured state source.

    Partial counts are rounded down to a multiple of the number of sets.
    """
    h = config.hamiltonian()
    observables = observable_set(config.n)
    truth = _thermal_truth(h, config.beta, observables)
    budget, loc = _budget(config, observables)
    k = budget.num_sets
    counts = sorted({max(k, int(f * budget.num_shadows) // k * k) for f in config.shadow_fractions})
    rows = []
    for name in config.sources:
        logger.info("Source %s: %d shadows for %d observables", name, budget.num_shadows, len(observables))
        source = make_state_source(name, h, config.beta, config.degree)
        table = collect_snapshots(
            source, observables, budget.num_shadows, config.seed,
            workers=config.workers, ensemble=config.ensemble,
        )
        for count in counts:
            bound = epsilon_for(count, len(observables), loc, config.delta)
            estimates = estimate_from_table(table, k, count)
            for row in estimate_rows(estimates, truth, count, k, config.epsilon, config.delta, name):
                row["epsilon_bound"] = bound
                rows.append(row)
    return rows, summarize_errors(rows, config.epsilon)


def summarize_errors(rows, epsilon):
    """Mean and max error per ``(source, n_s)`` with the share above ``epsilon``."""
    groups = {}
    for row in rows:
        groups.setdefault((row["source"], row["n_s"]), []).append(row["abs_error"])
    out = []
    for (source, count), errors in groups.items():
        errors = np.asarray(errors)
        out.append({
            "source": source,
            "n_s": count,
            "mean_error": float(errors.mean()),
            "max_error": float(errors.max()),
            "fraction_exceeding": float(np.mean(errors > epsilon)),
        })
    return out


def error_vs_size(config):
    """Worst-case estimation error at the sampled budget for each system size."""
    lo, hi = ERROR_VS_SIZE_RANGE
    if any(not lo <= n <= hi for n in config.sizes):
        raise ConfigError("sizes", f"error-vs-size needs sizes within [{lo}, {hi}]")
    rows = []
    for n in config.sizes:
        h = config.hamiltonian(n)
        observables = observable_set(n)
        truth = _thermal_truth(h, config.beta, observables)
        budget, _ = _budget(config, observables)
        source = make_state_source(config.source, h, config.beta, config.degree)
        table = collect_snapshots(
            source, observables, budget.num_shadows, config.seed,
            workers=config.workers, ensemble=config.ensemble,
        )
        errors = np.abs([e.value for e in estimate_from_table(table, budget.num_sets)] - truth)
        logger.info("n=%d: max error %.4f over %d observables", n, errors.max(), len(observables))
        rows.append({
            "n": n,
            "source": config.source,
            "M": len(observables),
            "n_s": budget.num_shadows,
            "S": budget.set_size,
            "K": budget.num_sets,
            "mean_error": float(errors.mean()),
            "max_error": float(errors.max()),
            "epsilon": config.epsilon,
            "delta": config.delta,
            "fraction_exceeding": float(np.mean(errors > config.epsilon)),
        })
    return rows, []


def budget_sweep(config):
    """Shadow budgets of both bounds for every system size."""
    rows = []
    for n in config.sizes:
        observables = observable_set(n)
        loc = max(locality(p) for p in observables)
        for bound in BOUNDS:
            budget = sample_budget(len(observables), loc, config.epsilon, config.delta, bound)
            rows.append({
                "n": n,
                "M": len(observables),
                "locality": loc,
                "S": budget.set_size,
                "K": budget.num_sets,
                "n_s": budget.num_shadows,
                "bound": bound,
                "epsilon": config.epsilon,
                "delta": config.delta,
            })
    return rows, []


# --- Polynomial fits ---

def polyfit_sweep(config):
    """Smallest degree meeting ``threshold`` for each beta."""
    rows = minimax_poly.degree_sweep(config.betas, config.threshold, scale=config.kernel_scale)
    for row in rows:
        row["threshold"] = config.threshold
    return rows, []


def polyfit_grid(config):
    return minimax_poly.error_grid(config.betas, config.degrees, scale=config.kernel_scale), []


# --- Resources ---

def resources_sweep(config):
    hamiltonian = partial(
        build_xxz, jx=config.jx, jy=config.jy, jz=config.jz, hx=config.hx, hy=config.hy, hz=config.hz
    )
    rows = resource_model.scaling_study(
        config.resource_sizes, config.degree, config.targets, config.fidelity, hamiltonian=hamiltonian
    )
    return rows, []


def ru_stats(config):
    """Depth histogram of lowered random unitaries, with a per-size summary."""
    rows, summary = [], []
    for n in config.ru_sizes:
        for target in config.targets:
            stats = resource_model.random_unitary_stats(n, config.samples, target, config.seed)
            for depth, freq in stats.histogram():
                rows.append({"n": n, "target": target, "depth": depth, "count": freq})
            summary.append({
                "n": n,
                "target": target,
                "samples": config.samples,
                "mean_depth": stats.mean,
                "std_depth": stats.std,
            })
            logger.info("n=%d %s: depth %.2f +- %.2f", n, target, stats.mean, stats.std)
    return rows, summary
