# thermal_states.py
"""Thermal pure quantum (TPQ) states and the thermal state sources the
shadow estimator measures.
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from . import minimax_poly
from .errors import ValidationError
from .exact_engine import HermitianSpectrum, eig_hermitian, gibbs_state, normalize, purity, sample_index
from .pauli_algebra import matrix_of
from .random_circuits import prepare, sample_two_design

logger = logging.getLogger(__name__)

SOURCES = ("exact-gibbs", "exact-tpq", "qsp-tpq")
WIDTH_TOL = 1e-12
TAU_RTOL = 1e-9


@dataclass(frozen=True)
class RescaledHamiltonian:
    """``(H - lambda_min) / (lambda_max - lambda_min)`` together with ``tau``."""

    beta: float
    spectrum: HermitianSpectrum = field(repr=False)

    @property
    def lambda_min(self):
        return self.spectrum.lambda_min

    @property
    def lambda_max(self):
        return self.spectrum.lambda_max

    @property
    def width(self):
        return self.lambda_max - self.lambda_min

    @property
    def tau(self):
        return self.beta * self.width / 2

    @property
    def eigenvalues(self):
        scaled = (self.spectrum.eigenvalues - self.lambda_min) / self.width
        return np.clip(scaled, 0.0, 1.0)

    @property
    def matrix(self):
        values = self.eigenvalues
        return self.spectrum.apply(lambda _: values)

    def operator(self, f):
        """``f(H~)`` through the eigendecomposition."""
        values = self.eigenvalues
        return self.spectrum.apply(lambda _: f(values))


def _check_beta(beta):
    if not (np.isfinite(beta) and beta >= 0):
        raise ValidationError("beta must be finite and >= 0")


def rescale(h, beta):
    _check_beta(beta)
    spectrum = eig_hermitian(matrix_of(h))
    if spectrum.lambda_max - spectrum.lambda_min <= WIDTH_TOL:
        raise ValidationError("cannot rescale a Hamiltonian with a degenerate spectrum")
    return RescaledHamiltonian(beta=float(beta), spectrum=spectrum)


def imaginary_time_operator(rescaled):
    """``e^{-tau H~}``, proportional to ``e^{-beta H / 2}``."""
    tau = rescaled.tau
    return rescaled.operator(lambda x: np.exp(-tau * x))


def tpq_vector(h, beta, circuit, normalized=True):
    """``e^{-beta H / 2} U|0>``; the raw vector has squared norm ``<0|U^dag e^{-beta H} U|0>``."""
    _check_beta(beta)
    spectrum = eig_hermitian(matrix_of(h))
    if normalized:
        weights = np.exp(-beta * (spectrum.eigenvalues - spectrum.lambda_min) / 2)
    else:
        weights = np.exp(-beta * spectrum.eigenvalues / 2)
    psi = spectrum.apply(lambda _: weights) @ prepare(circuit)
    return normalize(psi) if normalized else psi


def exact_tpq(h, beta, circuit):
    if circuit.n != h.n:
        raise ValidationError("circuit and Hamiltonian sizes differ")
    return tpq_vector(h, beta, circuit)


def qsp_tpq(h, beta, circuit, poly):
    """TPQ state with the exponential replaced by a fitted polynomial of ``H~``."""
    if circuit.n != h.n:
        raise ValidationError("circuit and Hamiltonian sizes differ")
    rescaled = rescale(h, beta)
    _check_tau(poly, rescaled)
    return normalize(rescaled.operator(poly) @ prepare(circuit))


def _check_tau(poly, rescaled):
    if not np.isclose(poly.tau, rescaled.tau, rtol=TAU_RTOL, atol=1e-12):
        raise ValidationError(f"polynomial was fitted for tau={poly.tau}, state needs tau={rescaled.tau}")


# --- State sources ---

class ExactGibbsSource:
    """Draws eigenstates with Gibbs weights, which measures exactly like ``rho_beta``."""

    name = "exact-gibbs"

    def __init__(self, h, beta):
        _check_beta(beta)
        self.n = h.n
        self.beta = float(beta)
        self.spectrum = eig_hermitian(matrix_of(h))
        weights = np.exp(-beta * (self.spectrum.eigenvalues - self.spectrum.lambda_min))
        self.weights = weights / weights.sum()

    def draw_state(self, rng):
        return self.spectrum.eigenvectors[:, sample_index(self.weights, rng)]

    def gibbs(self):
        return gibbs_state(None, self.beta, spectrum=self.spectrum)


class ExactTPQSource:
    """Fresh random-Clifford TPQ state per draw."""

    name = "exact-tpq"

    def __init__(self, h, beta):
        _check_beta(beta)
        self.n = h.n
        self.beta = float(beta)
        self.spectrum = eig_hermitian(matrix_of(h))
        shifted = self.spectrum.eigenvalues - self.spectrum.lambda_min
        self.operator = self.spectrum.apply(lambda _: np.exp(-beta * shifted / 2))

    def draw_state(self, rng):
        return normalize(self.operator @ prepare(sample_two_design(self.n, rng)))

    def gibbs(self):
        return gibbs_state(None, self.beta, spectrum=self.spectrum)

    def purity(self):
        return purity(self.gibbs())


class QSPTPQSource(ExactTPQSource):
    """TPQ draws filtered by a degree-``d`` minimax polynomial of ``H~``."""

    name = "qsp-tpq"

    def __init__(self, h, beta, degree, poly=None):
        _check_beta(beta)
        self.n = h.n
        self.beta = float(beta)
        self.rescaled = rescale(h, beta)
        self.spectrum = self.rescaled.spectrum
        if poly is None:
            poly = minimax_poly.remez_fit(self.rescaled.tau, degree)
        _check_tau(poly, self.rescaled)
        self.poly = poly
        self.operator = self.rescaled.operator(poly)
        logger.info("QSP filter degree %d, tau %.4f, fit error %.3e", poly.degree, poly.tau, poly.achieved_error)


def make_state_source(name, h, beta, degree=24):
    if name == "exact-gibbs":
        return ExactGibbsSource(h, beta)
    if name == "exact-tpq":
        return ExactTPQSource(h, beta)
    if name == "qsp-tpq":
        return QSPTPQSource(h, beta, degree)
    raise ValidationError(f"unknown state source {name!r}, expected one of {SOURCES}")
