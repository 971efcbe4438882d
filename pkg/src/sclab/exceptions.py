"""Exception hierarchy shared by every module of the lab."""


class SclabError(Exception):
    """Base class for all errors raised by sclab."""


class ContractError(SclabError, ValueError):
    """An operation was called outside its documented preconditions."""


class DomainError(SclabError, ValueError):
    """A scalar argument lies outside the domain of a formula."""


class SingularityError(SclabError, ArithmeticError):
    """A linear system is numerically singular."""


class ConvergenceError(SclabError, RuntimeError):
    """An iterative construction did not reach its tolerance."""

    def __init__(self, message, gap):
        super().__init__(message)
        self.gap = gap


class DegenerateDiagonalError(SclabError, ArithmeticError):
    """A readout Gram diagonal entry is too small to rescale."""

    def __init__(self, index, value, eps):
        super().__init__(
            f"diagonal entry {index} of G @ Psi is {value!r}, below eps_diag={eps!r}"
        )
        self.index = index
        self.value = value


class FormatError(SclabError, ValueError):
    """A code or readout file does not follow the binary layout."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset
