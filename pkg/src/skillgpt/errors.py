"""Error taxonomy shared across the package.

Every error raised by this package derives from :class:`SkillGptError`.
Module-specific errors live next to the code that raises them; the three
backend errors are defined here because both the chat and the embedding
clients raise them.
"""

from __future__ import annotations


class SkillGptError(Exception):
    """Base class for all package errors.

    ``stage`` names the pipeline phase that produced the error
    ("summarize", "embed" or "retrieve") when known; the API layer
    includes it in error responses.
    """

    def __init__(self, message: str, *, stage: str | None = None):
        super().__init__(message)
        self.stage = stage


class BackendUnreachable(SkillGptError):
    """The remote backend could not be reached (connect failure or timeout)."""

    def __init__(self, message: str, *, timeout: bool = False, stage: str | None = None):
        super().__init__(message, stage=stage)
        self.timeout = timeout


class BackendError(SkillGptError):
    """The remote backend answered with a non-2xx status."""

    def __init__(self, status: int, body: str, *, stage: str | None = None):
        super().__init__(f"backend returned HTTP {status}", stage=stage)
        self.status = status
        self.body = body


class BadResponse(SkillGptError):
    """The remote backend answered 2xx but the payload has the wrong shape."""
