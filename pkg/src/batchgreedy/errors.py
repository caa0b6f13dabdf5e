"""Exception hierarchy and the shared enumeration budget."""

import os

DEFAULT_BUDGET = 10**7
#: Hard cap for any operation that walks all 2^N subsets.
EXHAUSTIVE_LIMIT = 24


class BatchGreedyError(Exception):
    """Base class for every error raised by this package."""


class MalformedSubsetError(BatchGreedyError, ValueError):
    pass


class PreconditionError(BatchGreedyError, ValueError):
    pass


class DivisibilityError(PreconditionError):
    pass


class EnumerationLimitError(BatchGreedyError):
    pass


class MatroidNotCertifiedError(BatchGreedyError):
    pass


class DegenerateInstanceError(BatchGreedyError):
    pass


class InstanceFormatError(BatchGreedyError, ValueError):
    """Invalid instance file; the message starts with the offending field path."""


def resolve_budget(budget=None):
    """Return ``budget`` or, when None, the ``BATCHGREEDY_BUDGET`` env value."""
    if budget is not None:
        return int(budget)
    env = os.environ.get("BATCHGREEDY_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise PreconditionError(f"BATCHGREEDY_BUDGET is not an integer: {env!r}") from None
    return DEFAULT_BUDGET


def check_budget(count, budget=None, what="subsets"):
    limit = resolve_budget(budget)
    if count > limit:
        raise EnumerationLimitError(f"{count} {what} exceed the enumeration budget of {limit}")


def check_exhaustive(n):
    if n > EXHAUSTIVE_LIMIT:
        raise EnumerationLimitError(
            f"exhaustive enumeration needs N <= {EXHAUSTIVE_LIMIT}, got N = {n}"
        )
