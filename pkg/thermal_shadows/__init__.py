# thermal_shadows
"""Numerical lab for classical shadows of thermal pure quantum states."""

from .errors import (
    ConfigError,
    ConvergenceError,
    DenseLimitError,
    NotHermitianError,
    ThermalShadowsError,
    UnknownGateError,
    ValidationError,
)
from .pauli_algebra import Hamiltonian, PauliString, build_xxz, locality, matrix_of, observable_set

__version__ = "0.1.0"
