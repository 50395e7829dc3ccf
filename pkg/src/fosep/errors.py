"""Exception types shared across the package."""


class FosepError(Exception):
    """Base class for all errors raised by this package."""


class ResourceLimitError(FosepError):
    """A configurable cap (element count, antichain size, recursion depth) was hit."""

    def __init__(self, message, *, limit=None, context=None):
        super().__init__(message)
        self.limit = limit
        self.context = context


class RegexSyntaxError(FosepError):
    """Malformed regular expression; carries the offending position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class FormulaError(FosepError):
    """Malformed formula: unbound variable, bad surface syntax, or non-sentence input."""


class FormatError(FosepError):
    """Malformed input file (semigroup table, NFA JSON, omega-semigroup JSON)."""


class NotSeparableError(FosepError):
    """Separator synthesis was requested for a pair that is not separable.

    Carries the inseparability witness: a pair of semigroup elements, one per
    accepting set, that no first-order definable language can split.
    """

    def __init__(self, witness_pair, witness_words=None):
        t0, t1 = witness_pair
        super().__init__(f"languages are not separable; witness pair ({t0}, {t1})")
        self.witness_pair = witness_pair
        self.witness_words = witness_words


class InvalidAlgebraError(FosepError):
    """An omega-semigroup failed a coherence axiom; carries the failing instance."""

    def __init__(self, message, failing=None):
        super().__init__(message)
        self.failing = failing


class EpsilonDroppedWarning(UserWarning):
    """The denoted language contained the empty word, which was dropped."""
