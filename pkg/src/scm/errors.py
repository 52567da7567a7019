"""Exception hierarchy shared by every engine module.

Each class maps to one HTTP status in the service layer; keep the set closed.
"""


class MemoryError_(Exception):
    """Base class for all engine errors."""


class InvalidArgumentError(MemoryError_):
    """Caller passed a value outside an operation's contract (HTTP 400)."""


class NotFoundError(MemoryError_):
    """Referenced concept, episode, or file does not exist (HTTP 404)."""


class ProtectedConceptError(MemoryError_):
    """Attempted to remove a protected concept (HTTP 403)."""


class BusyError(MemoryError_):
    """Engine is inside a sleep cycle and cannot take the request (HTTP 409)."""


class ConfigurationError(MemoryError_):
    """Invalid engine configuration or remote endpoint contract violation."""


class UnsupportedVersionError(MemoryError_):
    """Snapshot file carries a version this build cannot read (HTTP 422)."""


class CorruptSnapshotError(MemoryError_):
    """Snapshot file is unreadable or fails integrity validation (HTTP 422)."""
