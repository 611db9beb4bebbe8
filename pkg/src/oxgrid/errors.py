"""Exception hierarchy shared across the package.

The CLI maps these onto its exit-code contract: domain/validation errors
exit 1, I/O errors exit 2, anything unexpected exits 3.
"""


class OxgridError(Exception):
    """Base class for all package errors."""


class DomainError(OxgridError, ValueError):
    """A mathematically valid input lies outside the operation's domain
    (e.g. requesting a truncated-Poisson rate for a mean <= 1)."""


class InputError(OxgridError, ValueError):
    """Malformed or out-of-range input (non-finite values, bad indices,
    probabilities outside [0, 1], violated generator preconditions)."""


class AttemptsExhausted(OxgridError, RuntimeError):
    """A rejection-sampling loop hit its attempt budget."""


class ParseError(OxgridError, ValueError):
    """A dataset file could not be parsed; the message names the line."""


class EmptyError(OxgridError, ValueError):
    """A dataset file contained no usable content."""


class SizeError(OxgridError, ValueError):
    """An exhaustive computation was requested above its size cap."""
