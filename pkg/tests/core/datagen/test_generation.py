import json

import pytest

from toolforge.core.datagen import (GenerationRequest, GeneratorOutputUnparseable, InstructionPair,
                                    LMInstructionGenerator, Scenario, TemplateInstructionGenerator,
                                    build_generation_prompt, build_instruction_set, dedup_instructions,
                                    filter_hallucinated, generate_instructions, load_seed_pool,
                                    parse_generator_output, select_seeds, subset_tools)
from toolforge.core.simenv.hub import default_sim_hub
from toolforge.core.util.errors import DecodeError
from toolforge.core.util.lm.base import BaseLM, LMFunctionCall


HUB, _ = default_sim_hub()

WEATHER = [('weather_now', 'current_weather'), ('weather_now', 'forecast')]
MIXED = [('weather_now', 'forecast'), ('geo_lookup', 'timezone'), ('fx_rates', 'convert')]


def _request(scenario: Scenario, subset: list) -> GenerationRequest:
    return GenerationRequest(scenario=scenario, tools=subset_tools(HUB, subset), seeds=[])


def test_subset_tools_keeps_only_sampled_apis():
    tools = subset_tools(HUB, MIXED)
    assert [tool.tool_name for tool in tools] == ['weather_now', 'geo_lookup', 'fx_rates']
    assert [[api.name for api in tool.api_list] for tool in tools] == [['forecast'], ['timezone'], ['convert']]
    assert tools[0].category == 'Weather'


def test_prompt_shows_seeds_and_documents_without_hidden_fields():
    seeds = select_seeds(load_seed_pool(), Scenario.I3, seed=0)
    request = GenerationRequest(scenario=Scenario.I3, tools=subset_tools(HUB, MIXED), seeds=seeds, n_queries=4)
    prompt: str = build_generation_prompt(request)

    assert all(f'{{{example.text}}}' in prompt for example in seeds)
    assert 'multiple tools' in prompt
    assert 'create 4 varied' in prompt
    assert '"name": "timezone"' in prompt
    assert 'example_response' not in prompt
    assert 'response_template' not in prompt


def test_parse_json_records():
    text = ('Sure! [{"Query": "Forecast for Porto then the weather now", '
            '"related_apis": ["forecast", "current_weather"]}] Hope this helps.')
    pairs = parse_generator_output(text, _request(Scenario.I1, WEATHER))

    assert len(pairs) == 1
    assert pairs[0].related_apis == [('weather_now', 'forecast'), ('weather_now', 'current_weather')]
    assert pairs[0].subset == WEATHER
    assert pairs[0].scenario == Scenario.I1


def test_parse_python_literal_records():
    text = "[{'Query': 'Time zone of Lisbon and 3-day forecast', 'related_apis': [['geo_lookup', 'timezone'], " \
           "['weather_now', 'forecast']]}]"
    pairs = parse_generator_output(text, _request(Scenario.I3, MIXED))
    assert pairs[0].related_tools == {'geo_lookup', 'weather_now'}


def test_parse_recovers_records_one_by_one():
    text = ('[{"Query": "a", "related_apis": ["forecast"]}, {broken}, '
            '{"Query": "b", "related_apis": ["current_weather"]}]')
    pairs = parse_generator_output(text, _request(Scenario.I1, WEATHER))
    assert [pair.query for pair in pairs] == ['a', 'b']


def test_parse_skips_malformed_records():
    text = json.dumps([{'Query': '', 'related_apis': ['forecast']},
                       {'Query': 'no apis'},
                       {'Query': 'bare names in a multi-tool call', 'related_apis': ['forecast']},
                       {'query': 'lower-case key', 'related_apis': [['weather_now', 'forecast']]}])
    pairs = parse_generator_output(text, _request(Scenario.I2, MIXED))
    assert [pair.query for pair in pairs] == ['lower-case key']


def test_unparseable_output():
    with pytest.raises(GeneratorOutputUnparseable):
        parse_generator_output('I cannot help with that.', _request(Scenario.I1, WEATHER))
    with pytest.raises(GeneratorOutputUnparseable):
        parse_generator_output('[not, records]', _request(Scenario.I1, WEATHER))


def test_filter_hallucinated():
    real = InstructionPair('q1', [('weather_now', 'forecast'), ('fx_rates', 'convert')], Scenario.I3, MIXED)
    invented = InstructionPair('q2', [('weather_now', 'forecast'), ('weather_now', 'tides')], Scenario.I3, MIXED)
    one_tool = InstructionPair('q3', [('weather_now', 'forecast')], Scenario.I3, MIXED)
    single = InstructionPair('q4', [('weather_now', 'forecast')], Scenario.I1, WEATHER)

    assert filter_hallucinated([real, invented, one_tool, single]) == [real, single]


def test_dedup_normalizes_whitespace():
    first = InstructionPair('Weather  in\nLisbon', [('weather_now', 'forecast')], Scenario.I1)
    again = InstructionPair('Weather in Lisbon', [('weather_now', 'current_weather')], Scenario.I1)
    other = InstructionPair('Weather in Porto', [('weather_now', 'forecast')], Scenario.I1)
    assert dedup_instructions([first, again, other]) == [first, other]


def test_instruction_pair_records():
    pair = InstructionPair('q', [('weather_now', 'forecast')], Scenario.I2, MIXED)
    assert InstructionPair.from_dict(json.loads(json.dumps(pair.to_dict()))) == pair

    with pytest.raises(DecodeError):
        InstructionPair.from_dict({'query': 'q', 'scenario': 'I1'})
    with pytest.raises(DecodeError):
        InstructionPair.from_dict({'query': 'q', 'related_apis': [], 'scenario': 'I9'})


@pytest.mark.parametrize('scenario', list(Scenario))
def test_template_instruction_set(scenario):
    pool = load_seed_pool()
    pairs = build_instruction_set(HUB, scenario, count=6, seed=11, generator=TemplateInstructionGenerator(), pool=pool)

    assert len(pairs) == 6
    assert len({pair.query for pair in pairs}) == 6
    assert all(set(pair.related_apis) <= set(pair.subset) for pair in pairs)
    if scenario.multi_tool:
        assert all(len(pair.related_tools) >= 2 for pair in pairs)
    else:
        assert all(len(pair.related_tools) == 1 for pair in pairs)

    again = build_instruction_set(HUB, scenario, count=6, seed=11, generator=TemplateInstructionGenerator(), pool=pool)
    assert [pair.to_dict() for pair in again] == [pair.to_dict() for pair in pairs]


def test_empty_subset_is_rejected():
    with pytest.raises(ValueError):
        generate_instructions([], HUB, [], TemplateInstructionGenerator(), Scenario.I1)


class _CannedLM(BaseLM):
    def __init__(self, text: str):
        super().__init__(model='canned', api_base='')
        self.text: str = text
        self.prompts: list[str] = []

    @classmethod
    def from_defaults(cls) -> BaseLM:
        return cls(text='[]')

    def get_response(self, prompt: str, history=None, json_format: bool = False, **kwargs) -> str:
        self.prompts.append(prompt)
        return self.text

    def call_functions(self, messages, functions, **kwargs) -> LMFunctionCall:
        raise NotImplementedError


def test_lm_generator():
    lm = _CannedLM(json.dumps([{'Query': 'Forecast for Lisbon and its time zone, please.',
                                'related_apis': [['weather_now', 'forecast'], ['geo_lookup', 'timezone']]},
                               {'Query': 'Exchange my money.', 'related_apis': [['fx_rates', 'latest_rates']]}]))

    pairs = filter_hallucinated(generate_instructions(MIXED, HUB, [], LMInstructionGenerator(lm=lm), Scenario.I3))

    assert len(lm.prompts) == 1
    assert [pair.query for pair in pairs] == ['Forecast for Lisbon and its time zone, please.']
