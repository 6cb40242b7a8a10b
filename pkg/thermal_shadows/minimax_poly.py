# minimax_poly.py
"""Remez fits of the imaginary-time kernel ``e^{-tau x}`` on a closed interval.

Polynomials are stored as Chebyshev coefficients on the interval mapped to
[-1, 1] and evaluated with numpy's Clenshaw recurrence.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import chebyshev
from numpy.polynomial import Chebyshev, Polynomial

from .errors import ConvergenceError, ValidationError

logger = logging.getLogger(__name__)

DEFAULT_DOMAIN = (0.0, 1.0)
CONVERGENCE_TOL = 1e-3
POLISH_TOL = 1e-9
POLISH_STEPS = 3
MAX_ITERATIONS = 50
NOISE_FLOOR = 1e-13
DOMAIN_SLACK = 1e-9


@dataclass(frozen=True)
class MinimaxPoly:
    degree: int
    coefficients: np.ndarray = field(repr=False)
    tau: float
    domain: tuple
    achieved_error: float
    iterations: int

    def __call__(self, x):
        return evaluate(self, x)

    def power_coefficients(self):
        """Monomial coefficients in ``x`` (not the mapped variable)."""
        series = Chebyshev(self.coefficients, domain=list(self.domain))
        return series.convert(kind=Polynomial).coef


def _to_unit(x, domain):
    a, b = domain
    return (2 * np.asarray(x, dtype=float) - (a + b)) / (b - a)


def _from_unit(t, domain):
    a, b = domain
    return (np.asarray(t, dtype=float) * (b - a) + (a + b)) / 2


def evaluate(poly, x):
    """Evaluate ``poly`` at points of its domain."""
    a, b = poly.domain
    x = np.asarray(x, dtype=float)
    if np.any(x < a - DOMAIN_SLACK) or np.any(x > b + DOMAIN_SLACK):
        raise ValidationError(f"evaluation points fall outside the domain {poly.domain}")
    return chebyshev.chebval(_to_unit(np.clip(x, a, b), poly.domain), poly.coefficients)


def _refine(t, r, i, residual):
    """Parabolic refinement of the grid extremum at index ``i``."""
    if i == 0 or i == len(t) - 1:
        return t[i], r[i]
    c2, c1, _ = np.polyfit(t[i - 1:i + 2], r[i - 1:i + 2], 2)
    if c2 == 0:
        return t[i], r[i]
    vertex = -c1 / (2 * c2)
    if not t[i - 1] <= vertex <= t[i + 1]:
        return t[i], r[i]
    value = float(residual(vertex))
    if abs(value) < abs(r[i]):
        return t[i], r[i]
    return vertex, value


def _alternating_extrema(t, r, count, residual):
    """Pick ``count`` alternating-sign extrema of ``r``, or ``None`` if too few."""
    signs = np.sign(r)
    for i in range(1, len(signs)):
        if signs[i] == 0:
            signs[i] = signs[i - 1]
    cuts = np.flatnonzero(np.diff(signs) != 0) + 1
    points = []
    for run in np.split(np.arange(len(t)), cuts):
        i = run[np.argmax(np.abs(r[run]))]
        points.append(_refine(t, r, i, residual))
    while len(points) > count:
        mags = [abs(v) for _, v in points]
        i = int(np.argmin(mags))
        if i in (0, len(points) - 1) or len(points) == count + 1:
            end = 0 if mags[0] <= mags[-1] else len(points) - 1
            del points[i if i in (0, len(points) - 1) else end]
        else:
            weaker = i - 1 if mags[i - 1] <= mags[i + 1] else i + 1
            for k in sorted((i, weaker), reverse=True):
                del points[k]
    if len(points) < count:
        return None
    return np.array([p[0] for p in points]), np.array([p[1] for p in points])


def _grid(degree):
    size = max(2000, 50 * (degree + 2))
    return -np.cos(np.pi * np.arange(size) / (size - 1))


def remez_fit(tau, degree, domain=DEFAULT_DOMAIN, tol=CONVERGENCE_TOL, max_iter=MAX_ITERATIONS):
    """Best uniform approximation of ``e^{-tau x}`` of the given degree."""
    if degree < 0:
        raise ValidationError("degree must be >= 0")
    if not (np.isfinite(tau) and tau >= 0):
        raise ValidationError("tau must be finite and >= 0")
    a, b = domain
    if not a < b:
        raise ValidationError(f"empty domain {domain}")
    domain = (float(a), float(b))
    if tau == 0:
        coeffs = np.zeros(degree + 1)
        coeffs[0] = 1.0
        return MinimaxPoly(degree, coeffs, 0.0, domain, 0.0, 0)

    def target(t):
        return np.exp(-tau * _from_unit(t, domain))

    grid = _grid(degree)
    f_grid = target(grid)
    reference = -np.cos(np.pi * np.arange(degree + 2) / (degree + 1))
    alternation = (-1.0) ** np.arange(degree + 2)
    converged_at = None
    for iteration in range(1, max_iter + 1):
        system = np.column_stack([chebyshev.chebvander(reference, degree), alternation])
        solution = np.linalg.solve(system, target(reference))
        coeffs, level = solution[:-1], solution[-1]

        def residual(t, coeffs=coeffs):
            return target(t) - chebyshev.chebval(t, coeffs)

        r = f_grid - chebyshev.chebval(grid, coeffs)
        error = float(np.max(np.abs(r)))
        if abs(level) < NOISE_FLOOR:
            return MinimaxPoly(degree, coeffs, float(tau), domain, error, iteration)
        picked = _alternating_extrema(grid, r, degree + 2, residual)
        if picked is None:
            if error <= 10 * NOISE_FLOOR:
                return MinimaxPoly(degree, coeffs, float(tau), domain, error, iteration)
            raise ConvergenceError(
                f"lost alternation at degree {degree}, tau={tau} (error {error:.3e})"
            )
        reference, values = picked
        mags = np.abs(values)
        error = max(error, float(mags.max()))
        spread = float((mags.max() - mags.min()) / mags.max())
        if spread <= tol and converged_at is None:
            converged_at = iteration
        if converged_at is not None and (spread <= POLISH_TOL or iteration - converged_at >= POLISH_STEPS):
            logger.debug("Remez degree %d tau %.4g: error %.3e after %d iterations", degree, tau, error, iteration)
            return MinimaxPoly(degree, coeffs, float(tau), domain, error, iteration)
    if converged_at is not None:
        logger.warning(
            "Remez degree %d tau %.4g stopped at the %d-iteration cap before polishing (error %.3e)",
            degree, tau, max_iter, error,
        )
        return MinimaxPoly(degree, coeffs, float(tau), domain, error, max_iter)
    raise ConvergenceError(f"Remez did not converge in {max_iter} iterations (degree {degree}, tau={tau})")


def min_degree_for(beta, threshold=1e-5, d_max=128, scale=1.0, start=0):
    """Smallest degree whose fit of ``e^{-scale*beta*x}`` meets ``threshold``."""
    if beta < 0:
        raise ValidationError("beta must be >= 0")
    if threshold <= 0:
        raise ValidationError("threshold must be > 0")
    tau = beta * scale
    if tau == 0:
        return 0
    for degree in range(start, d_max + 1):
        if remez_fit(tau, degree).achieved_error <= threshold:
            return degree
    raise ConvergenceError(f"no degree <= {d_max} reaches {threshold:g} at beta={beta}")


def degree_sweep(betas, threshold=1e-5, d_max=128, scale=1.0):
    """``(beta, min_degree, error)`` rows; ascending betas reuse the previous degree as a start."""
    rows = []
    start, last_beta = 0, None
    for beta in betas:
        if last_beta is None or beta < last_beta:
            start = 0
        degree = min_degree_for(beta, threshold, d_max=d_max, scale=scale, start=start)
        error = remez_fit(beta * scale, degree).achieved_error
        rows.append({"beta": beta, "min_degree": degree, "linf_error": error})
        start, last_beta = degree, beta
    return rows


def error_grid(betas, degrees, scale=1.0):
    """``(beta, degree, linf_error)`` for every pair of the two grids."""
    rows = []
    for degree in degrees:
        for beta in betas:
            rows.append({"beta": beta, "degree": degree, "linf_error": remez_fit(beta * scale, degree).achieved_error})
    return rows
