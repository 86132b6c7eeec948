import json

import pytest

from toolforge.core.agent import (Action, SolutionPath, Step, decode_path, encode_path,
                                  path_from_dict, path_to_dict)
from toolforge.core.evaluation.labels import PassLabel
from toolforge.core.util.errors import DecodeError


def _path() -> SolutionPath:
    return SolutionPath(instruction='Convert 2000 USD to EUR',
                        steps=[Step(action=Action.call('convert', {'amount': 2000, 'source': 'USD', 'target': 'EUR'},
                                                       thought='convert it'),
                                    observation='{"result": 1840.5}', tool_name='fx_rates'),
                               Step(action=Action.call('nope', thought='?'), observation='hallucinated API: nope',
                                    error=True),
                               Step(action=Action.give_answer('1840.5 EUR', thought='done'))],
                        final=Action.give_answer('1840.5 EUR', thought='done'),
                        pass_label=PassLabel.PASS,
                        extras={'solvable': True})


def test_document_field_order():
    d: dict = path_to_dict(_path())
    assert list(d) == ['instruction', 'steps', 'final', 'pass_label', 'extras']
    assert list(d['steps'][0]) == ['thought', 'api_name', 'parameters', 'observation', 'cost', 'tool_name']
    assert d['steps'][1]['error'] is True
    assert d['steps'][2]['api_name'] == 'Finish'
    assert d['final'] == {'thought': 'done', 'return_type': 'give_answer', 'final_answer': '1840.5 EUR'}


def test_encode_then_decode():
    path: SolutionPath = _path()
    text: str = encode_path(path)

    assert '\n' not in text
    assert decode_path(text) == path
    assert encode_path(decode_path(text)) == text


def test_path_cost_and_api_steps():
    path: SolutionPath = _path()
    assert path.cost == 3
    assert len(path.api_steps) == 2
    assert path.answered


def test_final_must_be_finish():
    with pytest.raises(ValueError):
        SolutionPath(instruction='q', steps=[], final=Action.call('x'))


def test_invalid_json_is_located_by_offset():
    with pytest.raises(DecodeError) as err:
        decode_path('{"instruction": "q", ')
    assert isinstance(err.value.position, int)


@pytest.mark.parametrize(('mutate', 'position'), [
    (lambda d: d.pop('instruction'), 'instruction'),
    (lambda d: d['steps'][0].pop('observation'), 'steps[0].observation'),
    (lambda d: d['steps'][1].update(cost='one'), 'steps[1].cost'),
    (lambda d: d['final'].update(return_type='maybe'), 'final.return_type'),
    (lambda d: d.update(pass_label='Great'), 'pass_label'),
])
def test_schema_violations_are_located_by_field_path(mutate, position):
    d: dict = json.loads(encode_path(_path()))
    mutate(d)

    with pytest.raises(DecodeError) as err:
        path_from_dict(d)
    assert err.value.position == position
