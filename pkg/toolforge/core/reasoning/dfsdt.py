"""
======================================
DEPTH-FIRST SEARCH-BASED DECISION TREE
======================================

Pre-order depth-first search over a lazily expanded tree of agent states.

At each node, the next child is generated by querying the policy with a diversity prompt listing
the node's previously generated children, and the search descends into it immediately (children are not sorted).
A child that gives up, is malformed, or reaches the depth limit is a failed terminal:
the search moves on to the next child slot of the deepest node that still has one.
The first child that finishes with an answer ends the search; its root-to-leaf steps form the solution path.

With a policy that never gives up, the search visits a single chain and degrades to ReACT.
"""


from __future__ import annotations

from collections.abc import Sequence
from typing import TYPE_CHECKING

from loguru import logger

from toolforge.core.agent.action import Action
from toolforge.core.agent.episode import EpisodeState, malformed_step, step
from toolforge.core.agent.path import SolutionPath
from toolforge.core.util.config import ToolForgeConfig

from .base import Episode, Outcome, ask_policy
from .react import BUDGET_EXHAUSTED_THOUGHT
from .search import NodeTerminal, SearchNode, SearchTree, diversity_context

if TYPE_CHECKING:
    from toolforge.core.agent.episode import SchemaMap, Step
    from toolforge.core.hub.doc import ApiDoc
    from toolforge.core.hub.executor import BaseApiExecutor
    from .base import BasePolicy


SEARCH_EXHAUSTED_THOUGHT: str = 'search tree exhausted'


def run_dfsdt(instruction: str, apis: Sequence[ApiDoc], policy: BasePolicy, executor: BaseApiExecutor,
              budget: int = ToolForgeConfig.DEFAULT_BUDGET,
              max_children: int = ToolForgeConfig.DFSDT_MAX_CHILDREN,
              max_depth: int = ToolForgeConfig.DFSDT_MAX_DEPTH,
              schemas: SchemaMap = None) -> Episode:
    """Search for an answering solution path with DFSDT."""
    for name, value in (('budget', budget), ('max_children', max_children), ('max_depth', max_depth)):
        if value < 1:
            raise ValueError(f'*** {name} MUST BE AT LEAST 1, GOT {value} ***')

    tree: SearchTree = SearchTree()
    tree.visit(tree.root)
    budget_cut: bool = False

    def expand(node: SearchNode, state: EpisodeState) -> SearchNode | None:
        nonlocal budget_cut

        while len(node.children) < max_children:
            if tree.budget_spent >= budget:
                budget_cut = True
                return None

            action, raw, error = ask_policy(policy, state,
                                            previous_candidates=tree.candidates(node.id),
                                            diversity=diversity_context(node, tree))
            tree.budget_spent += 1

            if error is not None:
                logger.debug(f'node {node.id}: malformed child ({error})')
                child: SearchNode = tree.add_child(node.id, malformed_step(error, raw))
                child.terminal = NodeTerminal.FAILED
                tree.visit(child.id)
                continue

            child_state: EpisodeState = state.fork()
            _, s = step(child_state, action, executor, schema=schemas)
            child: SearchNode = tree.add_child(node.id, s)
            tree.visit(child.id)

            if action.is_finish:
                if action.is_answer:
                    child.terminal = NodeTerminal.ANSWERED
                    return child
                child.terminal = NodeTerminal.GAVE_UP
                continue

            if child.depth >= max_depth:
                child.terminal = NodeTerminal.FAILED
                continue

            if (answer := expand(child, child_state)) is not None:
                return answer

            if budget_cut:
                return None

        return None

    answer_node: SearchNode | None = expand(tree.nodes[tree.root], EpisodeState.start(instruction, apis))

    if answer_node is not None:
        outcome: Outcome = Outcome.PASS_CANDIDATE
        steps: list[Step] = tree.path_to(answer_node.id)
        final: Action = answer_node.incoming_step.action

    else:
        outcome: Outcome = Outcome.BUDGET_EXHAUSTED if budget_cut else Outcome.GAVE_UP
        steps: list[Step] = tree.path_to(tree.visit_order[-1])
        final: Action = (steps[-1].action if steps and steps[-1].action.is_finish
                         else Action.give_up(thought=BUDGET_EXHAUSTED_THOUGHT if budget_cut
                                             else SEARCH_EXHAUSTED_THOUGHT))

    logger.debug(f'DFSDT: {outcome} after {tree.budget_spent} policy calls, {len(tree.nodes)} nodes')
    return Episode(outcome=outcome,
                   path=SolutionPath(instruction=instruction, steps=steps, final=final),
                   tree=tree,
                   policy_calls=tree.budget_spent)
