"""Exception hierarchy for the workbench.

Library code raises these; only the CLI turns them into exit codes.
"""

from typing import List, Sequence


class WorkbenchError(Exception):
    """Base class for every error raised by the workbench."""


class DeviceValidationError(WorkbenchError):
    """A device description violates one of its structural invariants."""

    def __init__(self, violations: Sequence[str], kind: str = "device"):
        self.violations: List[str] = list(violations)
        self.kind = kind
        super().__init__(f"invalid {kind}: " + "; ".join(self.violations))


class DomainError(WorkbenchError):
    """A numeric parameter is outside the domain of an operation."""


class WordAlphabetError(WorkbenchError):
    """A word contains a symbol the device does not know."""

    def __init__(self, symbol: str, alphabet: Sequence[str]):
        self.symbol = symbol
        self.alphabet = sorted(alphabet)
        super().__init__(
            f"symbol {symbol!r} is not in the alphabet {{{', '.join(self.alphabet)}}}"
        )


class BudgetExceededError(WorkbenchError):
    """A search ran out of its node, word or candidate budget.

    This is never the same as a negative answer.
    """

    def __init__(self, what: str, budget: int):
        self.what = what
        self.budget = budget
        super().__init__(f"{what}: budget of {budget} exceeded")


class FormatError(WorkbenchError):
    """A grammar, automaton or machine file could not be parsed."""

    def __init__(self, message: str, source: str = "<string>", line: int = 0):
        self.source = source
        self.line = line
        where = f"{source}:{line}" if line else source
        super().__init__(f"{where}: {message}")


class UnsupportedError(WorkbenchError):
    """The requested combination of options has no construction."""
