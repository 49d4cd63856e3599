"""Exception hierarchy for the rank-one analysis package."""


class RankOneError(Exception):
    """Base class for all package errors."""


class BudgetExceeded(RankOneError):
    """A length, word or gap count grew past the configured budget."""


class ReplayBudgetExceeded(BudgetExceeded):
    """Certificate replay needed more than the replay budget allows."""


class SpecError(RankOneError, ValueError):
    """Malformed or invalid parameter specification.

    ``field`` is a dotted path into the spec document (``prefix[1].q``),
    ``line`` a 1-based line number when parsing text.
    """

    def __init__(self, message, field=None, line=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.field = field
        self.line = line


class DegenerateSpec(SpecError):
    """The induced infinite word is periodic (finite subshift)."""


class NotAFactor(RankOneError, ValueError):
    """The word does not occur in the context word."""


class AmbiguousAnchor(RankOneError):
    """Occurrences of a window disagree on its expected-occurrence decomposition."""


class NeedTwoDistinctValues(RankOneError, ValueError):
    pass


class NotConstructible(RankOneError):
    """Preconditions of a witness construction are not met."""


class UnboundedSpacer(RankOneError):
    """Operation only defined for bounded spacer parameters."""


class NoAnchoredOccurrence(RankOneError):
    pass


class IllDefinedFactorMap(RankOneError):
    """Two anchors of one window map to different residues."""
