"""Exception hierarchy shared by the library and the command entrypoints."""

from __future__ import annotations


class FibratureError(Exception):
    """Base class for every error raised on purpose by fibrature."""


class ScalarFieldError(FibratureError, ValueError):
    """Arithmetic between incompatible quadratic fields or a bad radicand."""


class ScalarModeError(FibratureError, ValueError):
    """Exact verification requested for float-valued data."""


class ConvergenceError(FibratureError, RuntimeError):
    def __init__(self, message: str, *, index: int | None = None) -> None:
        super().__init__(message)
        self.index = index


class DegenerateMomentsError(FibratureError, ValueError):
    """The moment sequence does not define a positive measure of the needed size."""


class UnsupportedMomentError(FibratureError, ValueError):
    pass


class OrbitCapError(FibratureError, RuntimeError):
    pass


class SearchCapError(FibratureError, RuntimeError):
    def __init__(self, message: str, *, cap: int) -> None:
        super().__init__(message)
        self.cap = cap


class PreconditionError(FibratureError, ValueError):
    """A check was asked of a formula that does not meet its own degree claim."""


class FormulaFormatError(FibratureError, ValueError):
    pass


class UnknownCatalogIdError(FibratureError, KeyError):
    pass


class UnavailableCatalogIdError(FibratureError, LookupError):
    pass


class MissingFiberDesignError(FibratureError, KeyError):
    pass


class HadamardUnavailableError(FibratureError, ValueError):
    pass


__all__ = [
    "ConvergenceError",
    "DegenerateMomentsError",
    "FibratureError",
    "FormulaFormatError",
    "HadamardUnavailableError",
    "MissingFiberDesignError",
    "OrbitCapError",
    "PreconditionError",
    "ScalarFieldError",
    "ScalarModeError",
    "SearchCapError",
    "UnavailableCatalogIdError",
    "UnknownCatalogIdError",
    "UnsupportedMomentError",
]
