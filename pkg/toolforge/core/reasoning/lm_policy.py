"""
=========
LM POLICY
=========

`LMPolicy` casts the search as a multi-round function-calling conversation:
system prompt, user task, then for each step the assistant's function call and the function's result.
When a search expands a sibling, the diversity prompt listing previous candidates closes the conversation.
"""


from __future__ import annotations

from dataclasses import dataclass, field
import json
from typing import TYPE_CHECKING

from toolforge.core.agent.episode import MALFORMED_ACTION_NAME
from toolforge.core.util.lm.openai import OpenAILM

from ._prompts import SYSTEM_PROMPT_TEMPLATE, USER_TASK_PROMPT_TEMPLATE
from .base import BasePolicy

if TYPE_CHECKING:
    from toolforge.core.util.lm.base import BaseLM, LMChatHist
    from .base import PolicyOutput, PolicyRequest


def task_description(request: PolicyRequest) -> str:
    tools: list[str] = [f['name'] for f in request.functions]
    return ('You should use functions to help handle the real time user querys. '
            f'You have access of the following functions: {", ".join(tools)}')


def build_messages(request: PolicyRequest, system_prompt_template: str = SYSTEM_PROMPT_TEMPLATE) -> LMChatHist:
    """Conversation presented to the LM for the next step."""
    messages: LMChatHist = [{'role': 'system',
                             'content': system_prompt_template.format(task_description=task_description(request))},
                            {'role': 'user', 'content': USER_TASK_PROMPT_TEMPLATE.format(instruction=request.instruction)}]

    for i, s in enumerate(request.history):
        if s.action.api_name == MALFORMED_ACTION_NAME:
            messages.append({'role': 'assistant', 'content': s.action.thought})
            messages.append({'role': 'user', 'content': s.observation})
            continue

        call_id: str = f'call_{i}'
        messages.append({'role': 'assistant',
                         'content': s.action.thought,
                         'tool_calls': [{'id': call_id, 'type': 'function',
                                         'function': {'name': s.action.function_name,
                                                      'arguments': json.dumps(s.action.arguments,
                                                                              ensure_ascii=False)}}]})
        messages.append({'role': 'tool', 'tool_call_id': call_id, 'content': s.observation})

    if request.diversity:
        messages.append({'role': 'user', 'content': request.diversity})

    return messages


@dataclass
class LMPolicy(BasePolicy):
    """Function-calling LM as step policy."""

    lm: BaseLM = field(default_factory=OpenAILM.from_defaults,
                       init=True,
                       repr=True,
                       hash=None,
                       compare=True,
                       metadata=None,
                       kw_only=False)

    system_prompt_template: str = SYSTEM_PROMPT_TEMPLATE

    def act(self, request: PolicyRequest) -> PolicyOutput:
        return self.lm.call_functions(messages=build_messages(request, self.system_prompt_template),
                                      functions=request.functions).to_structured()
