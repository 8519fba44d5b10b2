"""Error types shared across the package.

The split matters at the boundaries: validation problems map to CLI exit
code 1 / HTTP 400, unknown ids to HTTP 404, version conflicts to HTTP 409,
and job failures to CLI exit code 2.
"""

from __future__ import annotations


class ValidationError(ValueError):
    """Input violates a documented precondition or file-format rule."""

    def __init__(self, message: str, **context):
        super().__init__(message)
        self.message = message
        self.context = {k: v for k, v in context.items() if v is not None}


class UnknownIdError(ValidationError):
    """A referenced id (node, entity, artifact, session, job) does not exist."""


class CapacityError(ValidationError):
    """A size cap was exceeded (for example the qubit limit)."""


class VersionError(ValidationError):
    """A persisted file declares an unsupported format version."""


class CorruptFileError(ValidationError):
    """A persisted file cannot be parsed at all."""


class JobFailedError(RuntimeError):
    """A pipeline job ended in the failed state."""
