"""Simulation-environment errors."""


from toolforge.core.util.errors import ToolForgeError


class ScriptExhausted(ToolForgeError, LookupError):
    """A scripted policy was asked for an action its script does not have."""


class DuplicateKey(ToolForgeError, ValueError):
    """Two simulated APIs share a (tool, API) key."""


class InvalidScript(ToolForgeError, ValueError):
    """Script tree violates its structural invariants."""
