"""Exception hierarchy shared by every module of the package."""


class ActiveRankError(Exception):
    """Base class for all package errors."""


class InvalidParam(ActiveRankError, ValueError):
    """A numeric parameter lies outside its admissible range."""


class InvalidInstance(ActiveRankError, ValueError):
    """An instance violates the ranking assumptions (ties, inconsistency, bad shape)."""


class InvalidSet(ActiveRankError, ValueError):
    """A comparison set has duplicates, out-of-range items, or fewer than two items."""


class ListwiseUnsupported(ActiveRankError):
    """A set of more than two items was offered to a pairwise-only oracle."""


class EmptyList(ActiveRankError, ValueError):
    """A preference interval tree was requested for an empty list."""


class ScheduleExhausted(ActiveRankError):
    """Iterative insertion ran out of attempts without inserting the item."""

    def __init__(self, item, attempts):
        super().__init__(f"item {item} not inserted after {attempts} attempts")
        self.item = item
        self.attempts = attempts
