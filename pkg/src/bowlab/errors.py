"""Exception types shared across the package.

Everything derives from BowlabError so callers (and the CLI) can separate
"the configuration made no sense" from "the computation could not finish".
"""


class BowlabError(Exception):
    """Base class for all package errors."""


class ValidationError(BowlabError):
    """Malformed input rejected at a type boundary (NaN, wrong length, bad spec)."""


class ConeViolation(BowlabError):
    """Curvature vector outside the admissible cone of the curvature function."""


class NotExtendable(BowlabError):
    """The curvature function has no continuous zero extension to its cone boundary."""


class NoBracket(BowlabError):
    """The implicit-curve solve found no sign change on the admissible range."""


class NoRoot(BowlabError):
    """The slope solve has no root: the tangential term alone meets or exceeds
    the required speed (flavor='saturated'), or the speed cannot be reached
    below the search cap (flavor='capped')."""

    def __init__(self, message, flavor):
        super().__init__(message)
        self.flavor = flavor


class StepFailure(BowlabError):
    """The adaptive step controller underflowed; carries the last state."""

    def __init__(self, message, r=None, v=None, h=None):
        super().__init__(message)
        self.r = r
        self.v = v
        self.h = h


class NoOverlap(BowlabError):
    """Two graph samples share no valid domain points."""


class PreconditionViolation(BowlabError):
    """A convexity precondition failed; carries the offending grid point."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class ConfigError(BowlabError):
    """Unusable run configuration (CLI/front-end level)."""
