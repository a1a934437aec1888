"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class QCEntropyError(Exception):
    exit_code = 1
    code = "error"


class ConfigError(QCEntropyError, ValueError):
    """Invalid scenario, grid or state configuration."""

    exit_code = 1

    def __init__(self, message, code="config"):
        super().__init__(message)
        self.code = code


class DomainError(QCEntropyError, ValueError):
    """Argument outside the domain of an analytic formula."""

    exit_code = 1
    code = "domain"


class NumericalIntegrityError(QCEntropyError, ArithmeticError):
    """A conservation law or consistency check failed during a run."""

    exit_code = 2

    def __init__(self, message, code="integrity"):
        super().__init__(message)
        self.code = code


class OutputError(QCEntropyError, OSError):
    exit_code = 3
    code = "io"
