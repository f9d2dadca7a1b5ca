"""Exception types shared across the package."""


class DataError(Exception):
    """Raised for unreadable, malformed, or inconsistent input data."""
