from collections.abc import Iterator

from toolforge.core.agent.action import Action
from toolforge.core.agent.episode import EpisodeState, step
from toolforge.core.reasoning import LMPolicy, Outcome, build_messages, run_react
from toolforge.core.reasoning.base import Episode, PolicyRequest
from toolforge.core.simenv.hub import default_sim_hub
from toolforge.core.util.lm.base import BaseLM, LMFunctionCall


class _ScriptedFunctionLM(BaseLM):
    def __init__(self, turns: list[LMFunctionCall]):
        super().__init__(model='scripted', api_base='')
        self.turns: Iterator[LMFunctionCall] = iter(turns)
        self.conversations: list[list[dict]] = []

    @classmethod
    def from_defaults(cls) -> BaseLM:
        return cls(turns=[])

    def get_response(self, prompt: str, history=None, json_format: bool = False, **kwargs):
        raise NotImplementedError

    def call_functions(self, messages, functions, **kwargs) -> LMFunctionCall:
        self.conversations.append(list(messages))
        return next(self.turns)


def test_lm_policy_drives_react():
    hub, executor = default_sim_hub()
    lm = _ScriptedFunctionLM([LMFunctionCall(content='Look up the quote.', function_name='quote',
                                             arguments='{"symbol": "MSFT"}'),
                              LMFunctionCall(content='Done.', function_name='Finish',
                                             arguments='{"return_type": "give_answer", "final_answer": "187.44"}')])

    episode: Episode = run_react('MSFT price?', hub.tool('stock_feed').api_list, LMPolicy(lm=lm), executor)

    assert episode.outcome == Outcome.PASS_CANDIDATE
    assert episode.answer == '187.44'

    second_turn: list[dict] = lm.conversations[1]
    assert [m['role'] for m in second_turn] == ['system', 'user', 'assistant', 'tool']
    assert second_turn[2]['tool_calls'][0]['function']['name'] == 'quote'
    assert '"symbol": "MSFT"' in second_turn[3]['content']


def test_text_turn_is_malformed_and_fed_back():
    hub, executor = default_sim_hub()
    lm = _ScriptedFunctionLM([LMFunctionCall(content='I am not sure.'),
                              LMFunctionCall(content='', function_name='Finish',
                                             arguments='{"return_type": "give_up_and_restart"}')])

    episode: Episode = run_react('q', hub.tool('stock_feed').api_list, LMPolicy(lm=lm), executor)
    assert episode.outcome == Outcome.GAVE_UP
    assert episode.path.steps[0].error

    fed_back: list[dict] = lm.conversations[1]
    assert fed_back[-2] == {'role': 'assistant', 'content': repr({'thought': 'I am not sure.'})}
    assert fed_back[-1]['role'] == 'user'
    assert fed_back[-1]['content'].startswith('malformed action')


def test_diversity_prompt_closes_the_conversation():
    hub, executor = default_sim_hub()
    state = EpisodeState.start('q', hub.tool('stock_feed').api_list)
    step(state, Action.call('quote', {'symbol': 'AAPL'}), executor)

    messages = build_messages(PolicyRequest(instruction='q', functions=state.functions, history=tuple(state.history),
                                            diversity='Try something different.'))
    assert messages[-1] == {'role': 'user', 'content': 'Try something different.'}
    assert 'quote, company_news, Finish' in messages[0]['content']
