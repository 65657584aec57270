"""Exception hierarchy shared by every fockport module."""

from typing import Any, Dict, Optional

from fockport.models import ErrorResponse


class FockportError(Exception):
    """Base error carrying a stable code, a message and optional details."""

    code = "FOCKPORT_ERROR"
    status = 1

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None, code: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.details = details
        if code is not None:
            self.code = code

    def to_response(self) -> ErrorResponse:
        """
        Build the error body printed by the command-line interface.

        Returns:
            ErrorResponse with status, code, message and details
        """
        return ErrorResponse(status=self.status, code=self.code, message=self.message, details=self.details)


class DomainError(FockportError):
    """Invalid parameter or state."""

    code = "DOMAIN_ERROR"


class DimensionError(FockportError):
    """Mode counts or matrix sizes do not agree."""

    code = "DIMENSION_MISMATCH"


class CutoffError(FockportError):
    """An operation would exceed a per-mode photon cutoff."""

    code = "CUTOFF_EXCEEDED"


class ZeroProbabilityError(FockportError):
    """A pipeline stage heralded with probability zero."""

    code = "ZERO_PROBABILITY"

    def __init__(self, stage: str, details: Optional[Dict[str, Any]] = None):
        merged = {"stage": stage}
        merged.update(details or {})
        super().__init__(f"Stage '{stage}' succeeds with probability zero", merged)
        self.stage = stage


class DocumentError(FockportError):
    """A JSON document could not be parsed or validated."""

    code = "PARSE_ERROR"
    status = 2
