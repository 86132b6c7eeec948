"""Evaluation errors."""


from toolforge.core.util.errors import ToolForgeError


class TooFewVotes(ToolForgeError, ValueError):
    """Majority voting needs at least 4 votes."""


class UnsureOperand(ToolForgeError, ValueError):
    """Paths are compared only when both passed or both failed."""


class EmptyInput(ToolForgeError, ValueError):
    """A rate over zero items is undefined."""


class InconsistentFacts(ToolForgeError, ValueError):
    """Path facts contradict the task metadata they are judged against."""
