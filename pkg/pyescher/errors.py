from typing import Any, Optional


class InvariantViolation(Exception):
    """Raised when a mathematical invariant the library relies on fails."""

    def __init__(self, message: str, payload: Optional[dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.payload = payload or {}


class CalibrationError(InvariantViolation):
    pass


class SweepConfigError(ValueError):
    pass


class ReportMergeError(ValueError):
    pass
