"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: bad user input exits 2, an
infeasible problem (disconnected graph with repair disabled or
impossible) exits 3, anything else exits 4.
"""


class RegionKitError(Exception):
    """Base class for all regionkit errors."""


class InputError(RegionKitError, ValueError):
    """Invalid user input: bad files, bad parameters, misaligned data."""


class ParseError(InputError):
    """Malformed input file; carries the 1-based line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InfeasibleError(RegionKitError):
    """The problem cannot be solved as posed (e.g. disconnected graph)."""
