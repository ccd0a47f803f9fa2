"""Exception hierarchy shared by all modules."""


class BilliardError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(BilliardError, ValueError):
    pass


class DomainError(BilliardError, ValueError):
    """A point is not where the operation needs it (on M, outside M, ...)."""


class SolverError(BilliardError, RuntimeError):
    """An inner root-find or optimization did not converge."""

    def __init__(self, message, residual=float("nan"), state=None):
        super().__init__(f"{message} (best residual {residual:.3e})")
        self.residual = residual
        self.state = state or {}


class OrientationError(SolverError):
    """A converged reflection has the wrong ray orientation (s <= 0)."""


class ConsistencyError(BilliardError, RuntimeError):
    pass


class IntegrationError(BilliardError, RuntimeError):
    pass


class EstimationError(BilliardError, RuntimeError):
    pass


class ConfigError(BilliardError, ValueError):
    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class ValidationError(ConfigError):
    pass
