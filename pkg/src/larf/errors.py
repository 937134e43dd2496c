"""Exception types shared across the package."""


class LarfError(Exception):
    """Base class for all package-specific errors."""


class RangeError(LarfError, ValueError):
    """A numeric argument or span offset is outside its allowed range."""


class OverlapError(LarfError, ValueError):
    """Annotation spans overlap in a way the document model forbids."""


class EmptyInput(LarfError, ValueError):
    """An operation that requires nonempty text received none."""


class EmptyCategories(LarfError, ValueError):
    """A custom prompt was requested without any annotation categories."""


class NoScoreFound(LarfError, ValueError):
    """A rater reply contained no recognizable "Score:" marker."""


class ScoreOutOfRange(LarfError, ValueError):
    """A rater reply contained a score outside the 0-10 scale."""


class TransportError(LarfError):
    """The LLM endpoint could not be reached or returned an unusable reply."""


class AuthError(LarfError):
    """The LLM endpoint rejected the configured credentials."""
