"""Exception types shared across the workbench."""


class WorkbenchError(Exception):
    """Base class for all errors raised by this package."""


class BoundaryMismatch(WorkbenchError):
    """Domains/codomains of composed functions do not line up."""


class BaseMismatch(WorkbenchError):
    """Presheaves or morphisms live over different base categories."""


class BoundExceeded(WorkbenchError):
    """A presentation did not close within the given path-length bound."""


class IllFormedRelation(WorkbenchError):
    """A presentation relation is not a parallel pair of composable paths."""


class UnknownObject(WorkbenchError):
    """An object id is not part of the category it was used with."""


class NotACocone(WorkbenchError):
    """Candidate legs do not commute with the diagram edges."""


class StaleMove(WorkbenchError):
    """A game move's witnesses do not validate against the configuration."""


class ParseError(WorkbenchError):
    """A document could not be parsed.

    Carries a location string (dotted path into the document) so the CLI
    can point at the offending entry.
    """

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location
        self.message = message


class ValidationError(WorkbenchError):
    """A parsed structure failed its module validator."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class UnknownSession(WorkbenchError):
    """No session with the given id."""
