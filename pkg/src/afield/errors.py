"""Exception types raised by the toolkit."""


class AFieldError(Exception):
    """Base class for all toolkit errors."""


class InvalidStepError(AFieldError, ValueError):
    """Finite-difference step is non-positive, non-finite or below the precision floor."""


class QuadratureBudgetExceeded(AFieldError, RuntimeError):
    """A quadrature would need more nodes than the configured budget."""


class SingularPointError(AFieldError, ValueError):
    """Evaluation requested at a point where the closed form is singular."""


class UnsupportedGeometryError(AFieldError, ValueError):
    pass


class CausalityBudgetExceeded(AFieldError, RuntimeError):
    """A periodic run has lasted long enough for signals to wrap around the box."""


class ConfigError(AFieldError, ValueError):
    """Configuration text could not be parsed or validated."""

    def __init__(self, message, *, key=None, line=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key '{key}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.key = key
        self.line = line
