"""
================================================================
`ToolForge`: TOOL-USE INSTRUCTION DATA CONSTRUCTION & EVALUATION
================================================================

`ToolForge` builds tool-use instruction datasets over a hub of documented REST APIs:
it filters the hub, generates instructions, searches solution paths with ReACT or DFSDT,
labels them with a pass-rate judge, and evaluates API retrieval and reasoning strategies.
"""


from importlib.metadata import version, PackageNotFoundError
from pathlib import Path
import tomllib

from .core.agent.path import SolutionPath

from .core.datagen.instruction import InstructionPair, Scenario

from .core.evaluation.judge import LMJudge, RuleBasedJudge

from .core.hub.doc import ApiDoc, Hub, ToolDoc
from .core.hub.store import load_hub

from .core.reasoning.lm_policy import LMPolicy
from .core.reasoning.strategy import SearchConfig, Strategy, run_strategy

from .core.retrieval.index import build_index

from .core.util.config import ToolForgeConfig
from .core.util.lm.openai import OpenAILM


try:
    __version__: str = version(distribution_name='ToolForge')

except PackageNotFoundError:
    with open(file=Path(__file__).parent.parent / 'pyproject.toml', mode='rb') as f:
        __version__: str = tomllib.load(f)['tool']['poetry']['version']
