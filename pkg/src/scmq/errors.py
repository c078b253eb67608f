"""Exception hierarchy shared by all modules."""


class ScmqError(Exception):
    """Base class for library errors."""


class ParseError(ScmqError, ValueError):
    """Malformed input text (FCIDUMP, labels, Pauli files, configs)."""


class ConfigurationError(ScmqError, ValueError):
    """Inconsistent symmetry constraints or mismatched group tables."""


class SizeError(ScmqError, ValueError):
    """Matrix or list dimensions that do not fit the operation."""


class DomainError(ScmqError, ValueError):
    """Argument outside the mathematical domain of a function."""


class MitigationError(ScmqError, ArithmeticError):
    """Calibration matrix too ill-conditioned to invert."""
