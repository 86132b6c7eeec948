"""
=======================
SCRIPTS & SEARCH ORACLE
=======================

A `ScriptTree` fixes what a scripted policy emits at every point of an episode.
Nodes are addressed by the interaction history (one tree level per step) and by sibling index:
the i-th child of a node is what the policy emits when asked with i previous candidates there.

A node's output is either an `Action` or a raw text the action parser rejects (a malformed output).
Every leaf is a Finish action or a malformed output; `Finish` nodes have no children.

`oracle_search` enumerates a script tree on its own, with no search-strategy code, to tell whether and
at which cost a depth-first pre-order search reaches an answer within a budget.
"""


from __future__ import annotations

from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field
import json
from pathlib import Path
from typing import Any, TYPE_CHECKING

from loguru import logger

from toolforge.core.agent.action import Action, ReturnType
from toolforge.core.agent.episode import MALFORMED_ACTION_NAME
from toolforge.core.reasoning.base import BasePolicy
from toolforge.core.util.config import ToolForgeConfig
from toolforge.core.util.misc import dumps_canonical

from .errors import InvalidScript, ScriptExhausted

if TYPE_CHECKING:
    from toolforge.core.agent.episode import Step
    from toolforge.core.reasoning.base import Episode, PolicyOutput, PolicyRequest


# thought of the give-up a scripted policy emits when asked beyond its script
SCRIPT_EXHAUSTED_THOUGHT: str = 'script exhausted'


@dataclass
class ScriptNode:
    output: Action | str
    children: list[ScriptNode] = field(default_factory=list)

    @property
    def malformed(self) -> bool:
        return isinstance(self.output, str)

    def matches(self, s: Step) -> bool:
        """Whether a recorded step is this node's output."""
        if self.malformed:
            return s.action.api_name == MALFORMED_ACTION_NAME and s.action.thought == self.output
        return s.action == self.output


@dataclass
class ScriptTree:
    # children of the (implicit) root
    children: list[ScriptNode]
    max_children: int = ToolForgeConfig.DFSDT_MAX_CHILDREN

    def __post_init__(self):
        if not self.children:
            raise InvalidScript('*** SCRIPT HAS NO ROOT CHILD ***')
        self._check(self.children, where='root')

    def _check(self, children: list[ScriptNode], where: str):
        if len(children) > self.max_children:
            raise InvalidScript(f'*** {where}: {len(children)} CHILDREN EXCEED MAX {self.max_children} ***')

        outputs: list[str] = [node.output if node.malformed else repr(node.output) for node in children]
        if len(set(outputs)) != len(outputs):
            raise InvalidScript(f'*** {where}: SIBLING OUTPUTS MUST BE DISTINCT ***')

        for i, node in enumerate(children):
            here: str = f'{where}.{i}'
            if node.malformed or node.output.is_finish:
                if node.children:
                    raise InvalidScript(f'*** {here}: TERMINAL OUTPUT CANNOT HAVE CHILDREN ***')
            elif not node.children:
                raise InvalidScript(f'*** {here}: LEAF MUST BE A FINISH ACTION ***')
            self._check(node.children, where=here)

    def iter_nodes(self) -> Iterator[tuple[int, ScriptNode]]:
        """(depth, node) pairs in pre-order."""
        stack: list[tuple[int, ScriptNode]] = [(1, node) for node in reversed(self.children)]
        while stack:
            depth, node = stack.pop()
            yield depth, node
            stack.extend((depth + 1, child) for child in reversed(node.children))

    @property
    def depth(self) -> int:
        return max(depth for depth, _ in self.iter_nodes())

    def locate(self, history: Sequence[Step]) -> list[ScriptNode] | None:
        """Children of the node the history leads to (None when the history leaves the script)."""
        children: list[ScriptNode] = self.children
        for s in history:
            if (node := next((n for n in children if n.matches(s)), None)) is None:
                return None
            children = node.children
        return children


@dataclass(frozen=True)
class ScriptedPolicy(BasePolicy):
    """
    Policy replaying a script tree.

    With `k` previous candidates at a point, it emits the point's (k+1)-th scripted child.
    Trial `t` of repeated runs starts from root child `t` (modulo the number of root children).
    Asked beyond the script, it gives up with `SCRIPT_EXHAUSTED_THOUGHT`, or raises `ScriptExhausted` if strict.
    """

    tree: ScriptTree
    trial: int = 0
    strict: bool = False

    def act(self, request: PolicyRequest) -> PolicyOutput:
        children: list[ScriptNode] | None = self.tree.locate(request.history)
        k: int = len(request.previous_candidates)

        if children is None or k >= len(children):
            reason: str = 'history left the script' if children is None else f'no sibling #{k + 1} scripted'
            if self.strict:
                raise ScriptExhausted(reason)
            logger.debug(f'scripted policy gives up: {reason}')
            return Action.give_up(thought=SCRIPT_EXHAUSTED_THOUGHT)

        index: int = (k + self.trial) % len(children) if not request.history else k
        return children[index].output


def script_exhausted(episode: Episode) -> bool:
    """Whether a scripted policy was asked beyond its script during the episode."""
    steps: list[Step] = list(episode.path.steps)
    if episode.tree is not None:
        steps.extend(node.incoming_step for node in episode.tree.nodes.values() if node.incoming_step is not None)
    return any(s.action.is_give_up and s.action.thought == SCRIPT_EXHAUSTED_THOUGHT for s in steps) or (
        episode.path.final.is_give_up and episode.path.final.thought == SCRIPT_EXHAUSTED_THOUGHT)


@dataclass(frozen=True)
class OracleResult:
    answers: bool
    cost_to_answer: int | None = None
    cost_spent: int = 0


def oracle_search(tree: ScriptTree, budget: int = ToolForgeConfig.DEFAULT_BUDGET,
                  max_children: int = ToolForgeConfig.DFSDT_MAX_CHILDREN,
                  max_depth: int = ToolForgeConfig.DFSDT_MAX_DEPTH) -> OracleResult:
    """
    Enumerate the script in pre-order, paying 1 per generated output.

    Each point is asked for `max_children` outputs; a request beyond the scripted children yields a give-up.
    Give-ups, malformed outputs and API calls reaching `max_depth` end their branch; the first answer ends the search.
    """
    spent: int = 0

    # True: answered; False: subtree exhausted; None: budget ran out
    def enumerate_children(children: list[ScriptNode], depth: int) -> bool | None:
        nonlocal spent
        for i in range(max_children):
            if spent >= budget:
                return None
            spent += 1

            if i >= len(children):
                continue

            node: ScriptNode = children[i]
            if node.malformed:
                continue
            if node.output.is_finish:
                if node.output.is_answer:
                    return True
                continue
            if depth + 1 >= max_depth:
                continue

            if (result := enumerate_children(node.children, depth + 1)) is not False:
                return result

        return False

    answered: bool = enumerate_children(tree.children, 0) is True
    return OracleResult(answers=answered, cost_to_answer=spent if answered else None, cost_spent=spent)


def _output_to_dict(output: Action | str) -> dict[str, Any]:
    if isinstance(output, str):
        return {'raw': output}
    if output.is_finish:
        d: dict[str, Any] = {'thought': output.thought, 'return_type': str(output.return_type)}
        if output.final_answer is not None:
            d['final_answer'] = output.final_answer
        return d
    return {'thought': output.thought, 'api_name': output.api_name, 'parameters': dict(output.parameters)}


def _output_from_dict(d: Mapping[str, Any]) -> Action | str:
    if 'raw' in d:
        return d['raw']
    if 'return_type' in d:
        if ReturnType(d['return_type']) == ReturnType.GIVE_ANSWER:
            return Action.give_answer(final_answer=d.get('final_answer', ''), thought=d.get('thought', ''))
        return Action.give_up(thought=d.get('thought', ''))
    return Action.call(api_name=d['api_name'], parameters=dict(d.get('parameters', {})), thought=d.get('thought', ''))


def _node_to_dict(node: ScriptNode) -> dict[str, Any]:
    d: dict[str, Any] = {'output': _output_to_dict(node.output)}
    if node.children:
        d['children'] = [_node_to_dict(child) for child in node.children]
    return d


def _node_from_dict(d: Mapping[str, Any]) -> ScriptNode:
    return ScriptNode(output=_output_from_dict(d['output']),
                      children=[_node_from_dict(child) for child in d.get('children', [])])


def script_to_dict(tree: ScriptTree) -> dict[str, Any]:
    return {'max_children': tree.max_children, 'children': [_node_to_dict(node) for node in tree.children]}


def script_from_dict(d: Mapping[str, Any]) -> ScriptTree:
    try:
        return ScriptTree(children=[_node_from_dict(node) for node in d['children']],
                          max_children=d.get('max_children', ToolForgeConfig.DFSDT_MAX_CHILDREN))
    except InvalidScript:
        raise
    except (KeyError, TypeError, ValueError) as err:
        raise InvalidScript(f'*** MALFORMED SCRIPT DOCUMENT: {err!r} ***') from err


def dump_script(tree: ScriptTree, path: Path | str):
    Path(path).write_text(dumps_canonical(script_to_dict(tree)) + '\n', encoding='utf-8')


def load_script(path: Path | str) -> ScriptTree:
    return script_from_dict(json.loads(Path(path).read_text(encoding='utf-8')))
