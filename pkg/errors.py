class VarnetError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(VarnetError, ValueError):
    pass


class UsageError(VarnetError, ValueError):
    pass


class DomainError(VarnetError, ValueError):
    pass


class ConfigError(VarnetError, ValueError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class ParseError(VarnetError, ValueError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class NumericalError(VarnetError, ArithmeticError):
    pass


class TrainingError(VarnetError, RuntimeError):
    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace
