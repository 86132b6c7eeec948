"""ToolEval: pass labeling, majority voting, pairwise comparison, pass and win rates."""


from .errors import EmptyInput, InconsistentFacts, TooFewVotes, UnsureOperand
from .facts import GroundTruth, Milestone, MilestoneKind, PathFacts, TaskMeta
from .judge import BaseJudge, LMJudge, RuleBasedJudge, judge_votes, label_path
from .labels import Criterion, FinishType, Level, PassLabel, Preference, PreferenceValue, Resolution
from .rules import (DEFAULT_CRITERIA, MIN_VOTES, aggregate_preferences, aggregate_votes, check_facts, compare_paths,
                    judge_pass_rules, pass_rate, win_rate, win_rate_breakdown)
