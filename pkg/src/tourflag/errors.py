"""Shared exception types."""


class CapabilityError(Exception):
    """Raised when a request exceeds a documented size or budget limit.

    Distinct from ValueError so callers (and the CLI, which maps it to
    exit code 3) can tell "you asked for too much" apart from "the input
    is malformed".
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
