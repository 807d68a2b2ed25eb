"""Exception classes shared by all modules.

Each class maps to a distinct CLI exit code (see ``cli.EXIT_CODES``).
"""


class FusionSharpError(Exception):
    """Base class."""


class InputError(FusionSharpError, ValueError):
    """Malformed or inconsistent user input."""


class ResourceError(FusionSharpError):
    """A configured budget was exceeded.

    ``partial`` is set when the operation produced an incomplete result
    that must not be mistaken for a complete one.
    """

    def __init__(self, message, *, bound=None, partial=False, counts=None):
        super().__init__(message)
        self.bound = bound
        self.partial = partial
        self.counts = counts


class InternalError(FusionSharpError, RuntimeError):
    """An internal consistency check failed."""


class CertificateError(FusionSharpError, RuntimeError):
    """A randomized certificate could not be produced within the retry limit."""
