"""
============================
OPENAI LANGUAGE MODELS (LMs)
============================
"""


from __future__ import annotations

from dataclasses import dataclass, field
import json
from typing import Any, TYPE_CHECKING

from loguru import logger
from openai import OpenAI, OpenAIError  # pylint: disable=import-self

from toolforge.core.util.config import ToolForgeConfig
from toolforge.core.util.errors import ProviderError

from .base import BaseLM, LMFunctionCall

if TYPE_CHECKING:
    from openai.types.chat.chat_completion import ChatCompletion
    from .base import LMChatHist


MAX_JSON_RETRIES: int = 3


@dataclass
class OpenAILM(BaseLM):
    """OpenAI(-compatible) LM."""

    client: OpenAI = field(init=False)

    def __post_init__(self):
        """Initialize OpenAI client."""
        self.client: OpenAI = OpenAI(api_key=self.api_key, base_url=self.api_base)

    @classmethod
    def from_defaults(cls) -> OpenAILM:
        """Get OpenAI LM instance with default parameters."""
        if not ToolForgeConfig.PROVIDER_KEY:
            raise ProviderError('*** TOOLFORGE_PROVIDER_KEY IS NOT SET ***')
        # pylint: disable=unexpected-keyword-arg
        return cls(model=ToolForgeConfig.DEFAULT_MODEL,
                   api_key=ToolForgeConfig.PROVIDER_KEY,
                   api_base=ToolForgeConfig.PROVIDER_URL)

    def call(self, messages: LMChatHist, **kwargs) -> ChatCompletion:
        """Call OpenAI LM API and return response object."""
        try:
            return self.client.chat.completions.create(messages=messages,
                                                       model=self.model,
                                                       seed=kwargs.pop('seed', ToolForgeConfig.DEFAULT_SEED),
                                                       temperature=kwargs.pop('temperature',
                                                                              ToolForgeConfig.DEFAULT_TEMPERATURE),
                                                       **kwargs)
        except OpenAIError as err:
            raise ProviderError(f'LM call failed: {err}') from err

    def get_response(self, prompt: str, history: LMChatHist | None = None, json_format: bool = False, **kwargs) -> Any:
        """Call OpenAI LM API and return response content."""
        messages: LMChatHist = list(history or [])
        messages.append({'role': 'user', 'content': prompt})

        if json_format:
            kwargs['response_format'] = {'type': 'json_object'}

            for _ in range(MAX_JSON_RETRIES):
                response: str = self.call(messages, **kwargs).choices[0].message.content
                try:
                    return json.loads(response)
                except json.decoder.JSONDecodeError:
                    logger.debug(f'INVALID JSON, TO BE RETRIED:\n{response}')

            raise ProviderError(f'*** LM RETURNED INVALID JSON {MAX_JSON_RETRIES} TIMES ***')

        return self.call(messages, **kwargs).choices[0].message.content

    def call_functions(self, messages: LMChatHist, functions: list[dict], **kwargs) -> LMFunctionCall:
        """Call OpenAI LM API with tool schemas and return the model's turn."""
        message = self.call(messages,
                            tools=[{'type': 'function', 'function': f} for f in functions],
                            tool_choice='auto',
                            **kwargs).choices[0].message

        if message.tool_calls:
            tool_call = message.tool_calls[0]
            return LMFunctionCall(content=message.content or '',
                                  function_name=tool_call.function.name,
                                  arguments=tool_call.function.arguments)

        return LMFunctionCall(content=message.content or '')
