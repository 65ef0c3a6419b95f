"""Exception hierarchy shared by the codecs, oracles and CLI."""


class CodingError(Exception):
    """Base class for every error raised by this package."""


class DomainError(CodingError, ValueError):
    """A coordinate, array or parameter lies outside the admissible domain."""


class UnsupportedSizeError(CodingError):
    """The requested (n, d, q) cannot host the codec's payloads."""


class CorruptionError(CodingError):
    """A decoder input is not a valid encoder output."""


class BudgetExceededError(CodingError):
    """An exhaustive enumeration would exceed the configured budget."""

    def __init__(self, total: int, budget: int):
        super().__init__(f"enumeration needs {total} arrays, budget is {budget}")
        self.total = total
        self.budget = budget
