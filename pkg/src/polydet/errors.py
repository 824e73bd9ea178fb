"""Exception types shared across the package."""


class PolydetError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(PolydetError):
    """Malformed polynomial matrix document."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class PlanningError(PolydetError):
    """Planning could not complete (e.g. the prime scan window ran out)."""


class WorkspaceError(PolydetError):
    """Problem with an on-disk checkpoint workspace."""


class StaleWorkspaceError(WorkspaceError):
    """Workspace belongs to a different input or plan."""


class CorruptWorkspaceError(WorkspaceError):
    """Workspace contents do not match their recorded checksums."""
