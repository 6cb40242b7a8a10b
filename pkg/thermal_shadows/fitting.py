# fitting.py
"""Least-squares trend fits used by the sweep studies."""
from dataclasses import dataclass

import numpy as np
from scipy import stats


@dataclass(frozen=True)
class TrendFit:
    slope: float
    intercept: float
    r_squared: float
    residual_ss: float


def linear_fit(x, y):
    """Fit ``y = a + b*x`` and report R^2 and the residual sum of squares."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    result = stats.linregress(x, y)
    residual = y - (result.intercept + result.slope * x)
    return TrendFit(
        slope=float(result.slope),
        intercept=float(result.intercept),
        r_squared=float(result.rvalue ** 2),
        residual_ss=float(np.sum(residual ** 2)),
    )


def log_fit(x, y):
    """Fit ``y = a + b*log(x)``."""
    return linear_fit(np.log(np.asarray(x, dtype=float)), y)
