# errors.py
"""Exception hierarchy shared by every thermal_shadows module."""


class ThermalShadowsError(Exception):
    """Root of every error raised by this package."""


class ValidationError(ThermalShadowsError, ValueError):
    """A precondition of an operation was not met."""


class DenseLimitError(ValidationError):
    """The requested qubit count exceeds the dense-operator limit."""

    def __init__(self, n, limit):
        super().__init__(f"n={n} exceeds the dense limit of {limit} qubits")
        self.n = n
        self.limit = limit


class NotHermitianError(ValidationError):
    """Matrix failed the Hermiticity check."""


class ConvergenceError(ThermalShadowsError, RuntimeError):
    """An iterative fit did not reach its tolerance."""


class UnknownGateError(ValidationError):
    """Lowering met a gate kind it has no rule for."""


class ConfigError(ValidationError):
    """Environment or experiment configuration is invalid."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message
