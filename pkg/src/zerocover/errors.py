"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: configuration problems exit with 2,
infeasible runtime requests (schedule violations, empty regions, solver
failures) exit with 3.
"""


class ZerocoverError(Exception):
    """Base class for package errors."""


class ConfigError(ZerocoverError):
    """A configuration payload failed validation."""


class InfeasibleError(ZerocoverError):
    """The requested computation is infeasible for the given parameters."""


class NormalizationPendingError(ZerocoverError):
    """A density was evaluated before its normalization constant was set."""

    def __init__(self, model_id: str):
        super().__init__(
            f"density {model_id!r} has a pending normalization constant; "
            "call normalize() before evaluating"
        )


class QuadratureError(InfeasibleError):
    """Adaptive quadrature failed to reach the requested tolerance."""

    def __init__(self, message: str, value: float, error_estimate: float):
        super().__init__(f"{message} (achieved value={value!r}, error estimate={error_estimate!r})")
        self.value = value
        self.error_estimate = error_estimate
