"""Exception hierarchy shared by every module of the package."""


class QIGError(Exception):
    """Base class for all errors raised by :mod:`qig`."""


class ContractError(QIGError, ValueError):
    """An input violates a documented precondition."""


class ShapeError(ContractError):
    """Operands have incompatible dimensions."""


class DomainError(QIGError, ValueError):
    """A spectral function is not finite on some eigenvalue."""


class SolverError(QIGError, ArithmeticError):
    """The eigen-solver failed to converge."""


class DegeneracyError(QIGError, ArithmeticError):
    """A spectral gap is too small for the requested construction."""


class ConfigError(QIGError, ValueError):
    """Invalid model name, parameters or scan configuration."""
