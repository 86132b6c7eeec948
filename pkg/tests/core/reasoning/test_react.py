import pytest

from toolforge.core.agent.action import Action
from toolforge.core.reasoning import Outcome, SearchConfig, Strategy, run_react, run_react_at_n, run_strategy
from toolforge.core.reasoning.base import Episode
from toolforge.core.reasoning.react import BUDGET_EXHAUSTED_THOUGHT
from toolforge.core.simenv.hub import default_sim_hub
from toolforge.core.simenv.script import SCRIPT_EXHAUSTED_THOUGHT, ScriptedPolicy, ScriptNode, ScriptTree
from toolforge.core.simenv.suite import answer_branch, give_up_free_chain, trap_branch


HUB, EXECUTOR = default_sim_hub()
APIS = list(HUB)


def _trap_tree(depth: int) -> ScriptTree:
    return ScriptTree(children=[trap_branch('random_word', depth=depth),
                                answer_branch('quote', {'symbol': 'AAPL'}, 'AAPL trades at 187.44')])


def test_react_follows_the_first_branch():
    episode: Episode = run_react('q', APIS, ScriptedPolicy(_trap_tree(2)), EXECUTOR)

    assert episode.outcome == Outcome.GAVE_UP
    assert episode.policy_calls == 2
    assert episode.tree is None
    assert episode.path.final.is_give_up


def test_react_answers_a_chain():
    tree: ScriptTree = give_up_free_chain(3)
    episode: Episode = run_react('q', APIS, ScriptedPolicy(tree), EXECUTOR)

    assert episode.outcome == Outcome.PASS_CANDIDATE
    assert episode.answer == 'chain answer 3'
    assert episode.path.steps[-1].action == episode.path.final


def test_react_budget_exhausted():
    episode: Episode = run_react('q', APIS, ScriptedPolicy(_trap_tree(9)), EXECUTOR, budget=4)

    assert episode.outcome == Outcome.BUDGET_EXHAUSTED
    assert episode.policy_calls == 4
    assert len(episode.path.steps) == 4
    assert episode.path.final == Action.give_up(thought=BUDGET_EXHAUSTED_THOUGHT)


def test_react_survives_malformed_output():
    tree = ScriptTree(children=[ScriptNode('no idea what to do')])
    episode: Episode = run_react('q', APIS, ScriptedPolicy(tree), EXECUTOR)

    assert episode.outcome == Outcome.GAVE_UP
    assert episode.policy_calls == 2
    assert episode.path.steps[0].error
    assert episode.path.final.thought == SCRIPT_EXHAUSTED_THOUGHT


def test_react_at_n_retries_with_fresh_trials():
    episode: Episode = run_react_at_n('q', APIS, lambda trial: ScriptedPolicy(_trap_tree(2), trial=trial), EXECUTOR,
                                      cost_target=8)

    assert episode.outcome == Outcome.PASS_CANDIDATE
    assert episode.trials == 2
    assert episode.policy_calls == 4


def test_react_at_n_stops_at_cost_target():
    episode: Episode = run_react_at_n('q', APIS, lambda trial: ScriptedPolicy(_trap_tree(9), trial=trial), EXECUTOR,
                                      cost_target=8)

    assert episode.outcome == Outcome.GAVE_UP
    assert episode.trials == 1
    assert episode.policy_calls == 9


def test_run_strategy_dispatch():
    def factory(trial: int) -> ScriptedPolicy:
        return ScriptedPolicy(_trap_tree(2), trial=trial)

    outcomes: dict[Strategy, Outcome] = {strategy: run_strategy(SearchConfig(strategy=strategy, cost_target=8),
                                                                'q', APIS, factory, EXECUTOR).outcome
                                         for strategy in Strategy}
    assert outcomes == {Strategy.REACT: Outcome.GAVE_UP,
                        Strategy.REACT_AT_N: Outcome.PASS_CANDIDATE,
                        Strategy.DFSDT: Outcome.PASS_CANDIDATE}


def test_bad_limits_are_rejected():
    with pytest.raises(ValueError):
        run_react('q', APIS, ScriptedPolicy(_trap_tree(2)), EXECUTOR, budget=0)
    with pytest.raises(ValueError):
        run_react_at_n('q', APIS, lambda trial: ScriptedPolicy(_trap_tree(2)), EXECUTOR, cost_target=0)
