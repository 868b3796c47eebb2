"""Exception types shared across the evaluation engine."""


class CapevalError(Exception):
    """Base class for all engine errors."""


class ValidationError(CapevalError, ValueError):
    """Invalid value or inconsistent inputs (bad box, dimension mismatch, ...)."""


class BoxParseError(CapevalError, ValueError):
    """Malformed box-group text. Carries the byte offset of the offending span."""

    def __init__(self, message: str, offset: int = 0):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class IngestionError(CapevalError):
    """Annotation file could not be ingested; message names the offending record."""


class ScoringError(CapevalError):
    """Predictions reference ids unknown to the evaluation corpus / question set."""


class GenerationError(CapevalError):
    """Benchmark generation could not reach the requested size."""

    def __init__(self, message: str, achievable: int = 0):
        super().__init__(message)
        self.achievable = achievable


class TransportError(CapevalError):
    """Provider call failed after retries (network, timeout, bad status)."""


class FixtureError(CapevalError):
    """Fixture-backed provider was asked for inputs it has no recording for."""

    def __init__(self, message: str, missing: list | None = None):
        super().__init__(message)
        self.missing = missing or []
