"""Exception types shared across the package."""


class ParseError(ValueError):
    """Malformed input file; message names the offending row where possible."""


class GapViolationError(ValueError):
    """Gap to the leader is zero or negative, i.e. a crash state."""
