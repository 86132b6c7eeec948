"""Dataset-pipeline errors."""


from toolforge.core.util.errors import ToolForgeError


class InsufficientTools(ToolForgeError, ValueError):
    """No category/collection has enough tools for a multi-tool scenario."""


class PoolTooSmall(ToolForgeError, ValueError):
    """Fewer seed examples than need to be drawn."""


class GeneratorOutputUnparseable(ToolForgeError, ValueError):
    """Instruction-generator output is not in the bracketed record format."""
