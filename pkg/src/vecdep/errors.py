"""Exception hierarchy shared by the library, service and CLI."""


class VecdepError(Exception):
    """Base class for all vecdep errors."""


class UsageError(VecdepError):
    """Invalid arguments or flag combinations (CLI exit code 2)."""


class DataError(VecdepError):
    """Malformed input data, e.g. CSV parse failures (CLI exit code 3)."""


class DegenerateError(VecdepError):
    """Numeric degeneracy: zero variance, boundary estimates (CLI exit code 4)."""
