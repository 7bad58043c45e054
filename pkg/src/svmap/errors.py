"""Exception types shared across the package."""


class SvmapError(Exception):
    """Base class for all package errors."""


class SceneFormatError(SvmapError):
    """Malformed scene/pixel text; carries a 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SceneValidationError(SvmapError):
    """Scene violates an invariant (nonpositive z, degeneracy, overlap)."""


class DegenerateTriangleError(SceneValidationError):
    """Collinear projection / z-parallel supporting plane."""


class UsageError(SvmapError):
    """Bad CLI invocation or argument combination."""


class BudgetExceededError(SvmapError):
    """An oracle or brute-force scan exceeded its configured budget."""


class InternalError(SvmapError):
    """A convention invariant failed; indicates a bug, fail loudly."""


class PreconditionError(SvmapError):
    """An operation was called outside its contract."""
