"""Exception types shared across the package.

The CLI maps these onto exit codes: bad parameters / parse problems exit
with 2, numerical failures (impossible measurement outcomes, leaked
states, broken invariants) exit with 3.
"""


class NumericalError(Exception):
    """A computation reached a numerically invalid configuration."""


class ImpossibleOutcomeError(NumericalError):
    """A projection was requested onto a branch of (near) zero weight."""


class LeakageError(NumericalError):
    """A state left the logical subspace beyond tolerance."""


class StateTooLargeError(ValueError):
    """Requested Hilbert space exceeds the configured dense cap."""


class BraidParseError(ValueError):
    """A braid program line could not be parsed."""

    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")
