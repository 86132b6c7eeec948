"""
====================
SEARCH DECISION TREE
====================

Tree explored by depth-first search: each node is an agent state reached by the step on its incoming edge.
Children are created lazily, one policy call each, and numbered in creation order.
"""


from __future__ import annotations

from dataclasses import dataclass, field
from enum import StrEnum, auto
from typing import Any, TYPE_CHECKING

from toolforge.core.agent.action import render_action

from ._prompts import DIVERSITY_PROMPT_TEMPLATE

if TYPE_CHECKING:
    from toolforge.core.agent.action import Action
    from toolforge.core.agent.episode import Step


class NodeTerminal(StrEnum):
    ANSWERED: str = auto()
    GAVE_UP: str = auto()

    # malformed policy output, or depth limit reached
    FAILED: str = auto()


@dataclass
class SearchNode:
    id: int
    parent: int | None
    depth: int
    incoming_step: Step | None = None
    children: list[int] = field(default_factory=list)
    terminal: NodeTerminal | None = None

    def to_dict(self) -> dict[str, Any]:
        return {'id': self.id, 'parent': self.parent, 'depth': self.depth,
                'action': None if self.incoming_step is None else render_action(self.incoming_step.action),
                'observation': None if self.incoming_step is None else self.incoming_step.observation,
                'children': list(self.children),
                'terminal': None if self.terminal is None else str(self.terminal)}


@dataclass
class SearchTree:
    nodes: dict[int, SearchNode] = field(default_factory=lambda: {0: SearchNode(id=0, parent=None, depth=0)})
    root: int = 0
    visit_order: list[int] = field(default_factory=list)
    budget_spent: int = 0

    def add_child(self, parent_id: int, incoming_step: Step) -> SearchNode:
        parent: SearchNode = self.nodes[parent_id]
        child: SearchNode = SearchNode(id=len(self.nodes), parent=parent_id, depth=parent.depth + 1,
                                       incoming_step=incoming_step)
        self.nodes[child.id] = child
        parent.children.append(child.id)
        return child

    def visit(self, node_id: int):
        self.visit_order.append(node_id)

    def candidates(self, node_id: int) -> list[Action]:
        return [self.nodes[c].incoming_step.action for c in self.nodes[node_id].children]

    def path_to(self, node_id: int) -> list[Step]:
        """Steps on the edges from root to node."""
        steps: list[Step] = []
        node: SearchNode = self.nodes[node_id]
        while node.parent is not None:
            steps.append(node.incoming_step)
            node: SearchNode = self.nodes[node.parent]
        return steps[::-1]

    def preorder(self) -> list[int]:
        order: list[int] = []
        stack: list[int] = [self.root]
        while stack:
            node_id: int = stack.pop()
            order.append(node_id)
            stack.extend(reversed(self.nodes[node_id].children))
        return order

    def to_dict(self) -> dict[str, Any]:
        """Node-list document with parent links and visit order."""
        return {'root': self.root,
                'budget_spent': self.budget_spent,
                'visit_order': list(self.visit_order),
                'nodes': [self.nodes[i].to_dict() for i in sorted(self.nodes)]}


def render_candidates(candidates: list[Action]) -> str:
    return '\n'.join(render_action(action) for action in candidates)


def diversity_context(node: SearchNode, tree: SearchTree, template: str = DIVERSITY_PROMPT_TEMPLATE) -> str:
    """Diversity prompt listing the node's previously generated children ('' when there is none)."""
    if not node.children:
        return ''
    return template.format(previous_candidate=render_candidates(tree.candidates(node.id)))
