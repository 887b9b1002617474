"""Error types shared across the package.

The CLI maps UnknownNameError to exit code 2 and CapExceededError to 3.
"""


class BfkError(Exception):
    """Base class for package errors."""


class UnknownNameError(BfkError):
    """Unknown catalog family, group name, or scenario id."""


class InvalidParametersError(BfkError):
    """Structurally inconsistent parameters (e.g. SD8, Iso on non-isomorphism)."""


class CapExceededError(BfkError):
    """A construction would exceed the configured order cap."""
