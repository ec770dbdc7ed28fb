"""Errors raised by koszulkit computations."""
from typing import Any, Optional

from .const import EXIT_INPUT_ERROR, EXIT_INTERNAL, EXIT_RESOURCE_GUARD


class KoszulKitError(Exception):
    """Base exception for koszulkit errors."""

    exit_code = EXIT_INTERNAL

    def __init__(self, message: str, detail: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.detail = detail

    def __str__(self) -> str:
        if self.detail:
            return f"{self.message}: {self.detail}"
        return self.message


class InputError(KoszulKitError):
    """Exception for malformed or inconsistent input."""
    exit_code = EXIT_INPUT_ERROR


class RingMismatchError(InputError):
    """Exception for operands living in different rings."""
    pass


class NotGroebnerError(InputError):
    """Exception for reductions against a basis not known to be Groebner."""
    pass


class InhomogeneousError(InputError):
    """Exception for inhomogeneous data where a grading is required."""
    pass


class DegreeError(InputError):
    """Exception for a Koszul V basis element that is not linear."""
    pass


class SubmoduleError(InputError):
    """Exception for a generator that does not lie in the ambient module."""
    pass


class ActionError(InputError):
    """Exception for a group action that does not descend to a module."""

    def __init__(self, message: str, detail: Optional[str] = None, witness: Any = None):
        super().__init__(message, detail)
        self.witness = witness


class CharacteristicError(InputError):
    """Exception for a field whose characteristic divides the group order."""
    pass


class PreconditionError(InputError):
    """Exception for numeric preconditions of a formula."""
    pass


class ResourceGuardError(KoszulKitError):
    """Exception for computations stopped by a size guard."""
    exit_code = EXIT_RESOURCE_GUARD


class BasisLimitError(ResourceGuardError):
    """Exception for a Groebner basis exceeding the size limit."""

    def __init__(self, message: str, detail: Optional[str] = None, size: Optional[int] = None):
        super().__init__(message, detail)
        self.size = size


class ResolutionLengthError(ResourceGuardError):
    """Exception for a resolution that did not terminate in time."""
    pass


class StabilizationError(ResourceGuardError):
    """Exception for a presentation that did not stabilize."""
    pass


class GuardError(ResourceGuardError):
    """Exception for polygraph size guards."""
    pass


class CertificateError(KoszulKitError):
    """Exception for a failed internal assertion."""
    exit_code = EXIT_INTERNAL
