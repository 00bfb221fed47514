"""Exception types shared across the package."""


class PatsError(Exception):
    """Base class for all package errors."""


class FormatError(PatsError):
    """Malformed text input (pattern, tile set, instance, ...)."""


class NotDirected(PatsError):
    """Operation requires a directed tile set."""


class CapExceeded(PatsError):
    """An enumeration exceeded its configured cap."""


class AlphabetError(PatsError):
    """Input string contains a symbol outside the transducer alphabet."""


class ValidationError(PatsError):
    """An instance violates a structural invariant."""


class PackingError(PatsError):
    """A partition does not pack: part sums or rod usage are wrong."""


class MissingOrder(PatsError):
    """The operation needs the traversal-order sequence of the instance."""


class VariantError(PatsError):
    """The instance variant does not match the operation's requirement."""


class SearchBudgetExceeded(PatsError):
    """Backtracking search ran past its node cap."""


class BudgetExhausted(PatsError):
    """Solver reached its size cap without finding a solution."""
