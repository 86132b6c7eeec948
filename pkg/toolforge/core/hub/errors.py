"""API-hub errors."""


from toolforge.core.util.errors import ToolForgeError, ProviderError


class MissingField(ToolForgeError, ValueError):
    """A required key is absent (or empty) in a tool document."""

    def __init__(self, key: str, detail: str = ''):
        super().__init__(f'missing field "{key}"' + (f': {detail}' if detail else ''))
        self.key: str = key


class BadEnum(ToolForgeError, ValueError):
    """A field holds a value outside its enumeration (e.g., HTTP method "FETCH")."""

    def __init__(self, field_name: str, value: object, allowed: list[str]):
        super().__init__(f'bad value {value!r} for "{field_name}"; expected one of {allowed}')
        self.field_name: str = field_name
        self.value: object = value


class HubInvariantError(ToolForgeError, ValueError):
    """Hub/tool/API structural invariant violated."""


class ExecutorUnavailable(ProviderError):
    """The API executor itself failed (as opposed to the API it called)."""


class MissingReport(ToolForgeError, KeyError):
    """An API of the hub has no health report."""

    def __init__(self, tool_name: str, api_name: str):
        super().__init__(f'no health report for {tool_name}/{api_name}')
        self.tool_name: str = tool_name
        self.api_name: str = api_name


class UnparseableExample(ToolForgeError, ValueError):
    """An example response is not a key-value structure."""
