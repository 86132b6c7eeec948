"""Agent-kernel errors."""


from toolforge.core.util.errors import ToolForgeError


class DuplicateFunctionName(ToolForgeError, ValueError):
    """Two APIs render to the same function name even after tool qualification."""


class MalformedAction(ToolForgeError, ValueError):
    """Policy output is not a well-formed action."""


class EpisodeNotRunning(ToolForgeError, RuntimeError):
    """A step was applied to a finished episode."""
