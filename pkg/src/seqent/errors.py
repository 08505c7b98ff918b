"""Exception types and global computation budgets."""


class SeqentError(Exception):
    """Base class for all library errors."""


class ValidationError(SeqentError, ValueError):
    """A value fails a structural invariant (bad partition, bad vector, ...)."""


class DomainError(SeqentError, ValueError):
    """A point lies outside the domain of a map."""


class AliasingError(SeqentError):
    """An iteration horizon would expose the rational stand-in for an
    irrational rotation number."""


class BudgetError(SeqentError):
    """A requested computation exceeds a configured hard budget."""


class DegenerateInputError(SeqentError, ValueError):
    """An input is structurally valid but makes the requested statistic
    meaningless (e.g. a one-atom partition in an entropy ratio)."""


# Hard budgets.  Chosen so every shipped experiment finishes in minutes
# on a desktop; the CLI may lower but never raise them.
MAX_FAMILY_SIZE = 4096
MAX_POWER = 10**6
MAX_JOIN_CUTS = 10**7
