"""Exception types raised across the package."""


class RopdbError(Exception):
    """Base class; ``code`` is the machine-readable tag used by the CLI."""

    code = "error"


class ParseError(RopdbError, ValueError):
    code = "parse_error"


class SelfJoinError(ParseError):
    code = "self_join"


class HeadVariableError(ParseError):
    code = "non_boolean_head"


class DomainError(RopdbError, ValueError):
    code = "domain_error"


class DuplicateTupleError(RopdbError, ValueError):
    code = "duplicate_tuple"


class CapExceededError(RopdbError):
    """An exhaustive oracle was asked to work beyond its configured size."""

    code = "cap_exceeded"


class EmptyResultError(RopdbError):
    """The boolean query has no satisfying tuple combination (probability 0)."""

    code = "empty_result"


class PlanError(RopdbError, ValueError):
    code = "plan_error"
