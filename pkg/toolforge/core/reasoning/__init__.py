"""Search strategies over a pluggable step policy: ReACT, ReACT@N and DFSDT."""


from .base import BasePolicy, Episode, Outcome, PolicyOutput, PolicyRequest, ask_policy
from .dfsdt import run_dfsdt
from .lm_policy import LMPolicy, build_messages
from .react import run_react, run_react_at_n
from .search import NodeTerminal, SearchNode, SearchTree, diversity_context
from .strategy import SearchConfig, Strategy, run_strategy
