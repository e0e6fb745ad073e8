"""Exception hierarchy shared by every module."""


class HMConvexError(Exception):
    """Base class for all library errors."""


class DomainError(HMConvexError, ValueError):
    """A point or parameter lies outside the admissible domain."""


class ConfigurationError(HMConvexError, ValueError):
    """Invalid combination of options, schemes or parameters."""


class MixedAlphaError(ConfigurationError):
    """Two objects governed by different fractal orders were combined."""


class UnsupportedRepresentationError(HMConvexError, TypeError):
    """The operation is not defined for this function representation."""


class PreconditionError(HMConvexError):
    """A theorem hypothesis does not hold for the supplied case."""


class ConvergenceError(HMConvexError):
    """A numerical procedure stopped before reaching its tolerance.

    ``best`` carries the best available estimate (a result object or value).
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
