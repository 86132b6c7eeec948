"""Root of `ToolForge`'s exception hierarchy."""


class ToolForgeError(Exception):
    """Base class for all errors raised by `ToolForge`."""


class ConfigError(ToolForgeError, ValueError):
    """Invalid or incomplete run configuration."""


class ProviderError(ToolForgeError, RuntimeError):
    """An external provider (LM, judge, live API host) failed."""


class DecodeError(ToolForgeError, ValueError):
    """A structured-text document could not be decoded.

    `position` locates the problem: a character offset for syntax errors,
    or a field path such as `steps[2].observation` for schema violations.
    """

    def __init__(self, message: str, position: int | str | None = None):
        super().__init__(message if position is None else f'{message} (at {position})')
        self.position: int | str | None = position
