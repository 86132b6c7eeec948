"""
=============================
LANGUAGE MODEL (LM) INTERFACE
=============================

Every "external" provider in `ToolForge` (step policy, judge, instruction generator, compression-schema proposer)
talks to its model through this interface, so that a provider can be swapped without touching the algorithms.
"""


from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Self as SameType

from openai.types.chat.chat_completion_message_param import ChatCompletionMessageParam


type LMChatHist = list[ChatCompletionMessageParam]


@dataclass
class LMFunctionCall:
    """A model turn: free text plus an optional function call."""

    content: str
    function_name: str | None = None
    arguments: str | None = None

    def to_structured(self) -> dict[str, Any]:
        """Return the structured policy-output form accepted by the action parser."""
        if self.function_name is None:
            return {'thought': self.content}
        return {'thought': self.content,
                'function_call': {'name': self.function_name, 'arguments': self.arguments or '{}'}}


@dataclass
class BaseLM(ABC):
    """Abstract base class for consistent API for different LM services."""

    model: str
    api_base: str
    api_key: str = field(default_factory=str,
                         init=True,
                         repr=False,
                         hash=None,
                         compare=True,
                         metadata=None,
                         kw_only=False)

    @classmethod
    @abstractmethod
    def from_defaults(cls) -> SameType:
        """Get LM instance with default parameters."""

    @abstractmethod
    def get_response(self, prompt: str, history: LMChatHist | None = None, json_format: bool = False, **kwargs) -> Any:
        """Call LM API and return response content (parsed JSON if `json_format`)."""

    @abstractmethod
    def call_functions(self, messages: LMChatHist, functions: list[dict], **kwargs) -> LMFunctionCall:
        """Call LM API with function schemas and return the model's turn."""
