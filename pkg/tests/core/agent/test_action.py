from hypothesis import given, settings, strategies as st
import pytest

from toolforge.core.agent import Action, ActionKind, MalformedAction, ReturnType, parse_action, render_action
from toolforge.core.agent.action import FINISH_FUNCTION_NAME


def test_parse_textual_api_call():
    action: Action = parse_action('Thought: I need the forecast.\n'
                                  'API Name: forecast\n'
                                  'Parameters: {"city": "Lisbon", "days": 3}')
    assert action.kind == ActionKind.API_CALL
    assert action.api_name == 'forecast'
    assert action.parameters == {'city': 'Lisbon', 'days': 3}
    assert action.thought == 'I need the forecast.'


def test_parse_textual_finish():
    action: Action = parse_action('Thought: done\nAPI Name: Finish\n'
                                  'Parameters: {"return_type": "give_answer", "final_answer": "18 C"}')
    assert action.is_finish
    assert action.is_answer
    assert action.final_answer == '18 C'


def test_parse_structured_function_call():
    action: Action = parse_action({'thought': 'look it up',
                                   'function_call': {'name': 'quote', 'arguments': '{"symbol": "AAPL"}'}})
    assert action == Action.call('quote', {'symbol': 'AAPL'}, thought='look it up')

    give_up: Action = parse_action({'name': 'Finish', 'arguments': {'return_type': 'give_up_and_restart'}})
    assert give_up.is_give_up
    assert give_up.final_answer is None


def test_empty_parameters_parse_as_empty_object():
    assert parse_action('API Name: random_word\nParameters: ').parameters == {}


@pytest.mark.parametrize('raw', ['Thought: hmm, no action here',
                                 'API Name: quote\nParameters: {"symbol": ',
                                 'API Name: quote\nParameters: [1, 2]',
                                 'API Name: Finish\nParameters: {"return_type": "shrug"}',
                                 'API Name: Finish\nParameters: {"return_type": "give_answer"}',
                                 {'thought': 'no call'},
                                 42])
def test_malformed_policy_output(raw):
    with pytest.raises(MalformedAction):
        parse_action(raw)


json_values = st.recursive(st.none() | st.booleans() | st.integers() | st.floats(allow_nan=False, allow_infinity=False)
                           | st.text(max_size=20),
                           lambda children: st.lists(children, max_size=4)
                           | st.dictionaries(st.text(max_size=8), children, max_size=4),
                           max_leaves=20)

api_names = st.from_regex(r'[A-Za-z_][A-Za-z0-9_ .-]{0,30}[A-Za-z0-9_.]', fullmatch=True).filter(
    lambda name: name != FINISH_FUNCTION_NAME)

actions = st.one_of(
    st.builds(Action.call, api_name=api_names,
              parameters=st.dictionaries(st.text(max_size=8), json_values, max_size=5), thought=st.text()),
    st.builds(Action.give_answer, final_answer=st.text(), thought=st.text()),
    st.builds(Action.give_up, thought=st.text()))


@settings(max_examples=500, deadline=None)
@given(action=actions)
def test_render_then_parse(action):
    assert parse_action(render_action(action)) == action


def test_thought_mentioning_fields_survives_render():
    action: Action = Action.call('forecast', {'city': 'Lisbon'}, thought='call API Name: forecast next')
    assert parse_action(render_action(action)) == action

    multiline: Action = Action.give_up(thought='tried\nAPI Name: quote\nParameters: {}\nno luck')
    assert parse_action(render_action(multiline)) == multiline

    assert parse_action(render_action(Action.call('v1.'))).api_name == 'v1.'


def test_multiline_parameters_parse():
    action: Action = parse_action('Thought: look\nAPI Name: quote\nParameters: {\n  "symbol": "AAPL"\n}\n')
    assert action == Action.call('quote', {'symbol': 'AAPL'}, thought='look')


def test_finish_arguments():
    assert Action.give_up().arguments == {'return_type': ReturnType.GIVE_UP_AND_RESTART}
    assert Action.give_answer('x').arguments == {'return_type': 'give_answer', 'final_answer': 'x'}
