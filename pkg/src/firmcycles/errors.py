"""Exception types raised by the solvers."""


class ModelError(Exception):
    """Base class for numerical failures inside the model."""


class DivergentMoment(ModelError, ValueError):
    pass


class EmptyDistribution(ModelError):
    pass


class EmptyEconomy(ModelError):
    pass


class NegativeMass(ModelError, ValueError):
    pass


class NoRoot(ModelError):
    pass


class NonConvergence(ModelError):
    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class IterationCap(NonConvergence):
    pass


class DegenerateCycle(ModelError):
    pass


class RegimeMismatch(ModelError):
    pass


class NonPositiveCost(ModelError, ValueError):
    pass


class Infeasible(ModelError):
    pass


class TargetUnreachable(ModelError):
    pass


class DomainError(ModelError, ValueError):
    pass


class DegenerateDenominator(ModelError, ZeroDivisionError):
    pass


class UndefinedAtAlphaZero(ModelError, ZeroDivisionError):
    pass


class ConfigError(Exception):
    """Bad or unreadable run configuration (CLI exit code 2)."""
