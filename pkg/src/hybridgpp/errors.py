"""Exception types raised across the package."""


class HybridGppError(Exception):
    """Base class for all package errors."""


class RangeError(HybridGppError, ValueError):
    """A parameter lies outside its allowed range."""

    def __init__(self, field, value, lo, hi):
        self.field = field
        self.value = value
        super().__init__(f"{field}={value!r} outside [{lo}, {hi}]")


class DomainError(HybridGppError, ValueError):
    pass


class DegenerateInputError(HybridGppError, ValueError):
    pass


class CoverageError(HybridGppError, ValueError):
    pass


class NumericalError(HybridGppError, ArithmeticError):
    def __init__(self, message, scenario_id=None):
        self.scenario_id = scenario_id
        if scenario_id is not None:
            message = f"{message} (scenario {scenario_id})"
        super().__init__(message)


class InsufficientDataError(HybridGppError, ValueError):
    def __init__(self, message, input_name=None):
        self.input_name = input_name
        super().__init__(message)


class DivergenceError(HybridGppError, ArithmeticError):
    def __init__(self, epoch):
        self.epoch = epoch
        super().__init__(f"training loss became non-finite at epoch {epoch}")


class ModelLoadError(HybridGppError):
    pass


class SensorMismatchError(HybridGppError, ValueError):
    pass


class MissingMeteoError(HybridGppError, ValueError):
    pass
