"""Exception types shared across the package."""


class LinkedTDError(Exception):
    """Base class for all package errors."""


class FamilyError(LinkedTDError):
    """A graph family violated its generator contract (asymmetry, bad root, ...)."""


class HorizonError(LinkedTDError):
    """The truncation window is too small for a certified answer.

    `required` carries the horizon that would suffice, when known.
    """

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class AuditError(LinkedTDError):
    """A precondition or contract audit failed; the message names the clause."""


class UncrossError(LinkedTDError):
    """No nested end-linked replacement region was found within the search budget."""
