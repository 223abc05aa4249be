"""Exception types shared across the package."""


class ShapeSigError(Exception):
    """Base class for all shapesig errors."""


class ValidationError(ShapeSigError, ValueError):
    """Input data violates a documented invariant (bad values, not bad I/O)."""


class FrameError(ValidationError):
    """A point cloud arrived in the wrong coordinate frame."""


class EmptyViewError(ShapeSigError):
    """A view has no points, so no hull ("no-shape"); callers fall back to prototypes."""


class UnresolvableClassError(ShapeSigError):
    """A degenerate object has no prototype for its class."""


class SchemaError(ValidationError):
    """An annotation record is missing fields or carries invalid values."""


class PointParseError(ValidationError):
    """A point file could not be parsed; message carries line or byte offset."""


class ExportError(OSError):
    """Writing an export failed partway; ``rows_written`` counts completed rows."""

    def __init__(self, message: str, rows_written: int):
        super().__init__(message)
        self.rows_written = rows_written
