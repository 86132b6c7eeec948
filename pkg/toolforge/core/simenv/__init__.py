"""Deterministic testbed: simulated APIs, scripted policies, the search oracle and scripted task suites."""


from .bench import TaskResult, benchmark, evaluate_suite, mean_policy_calls, pass_rates_by_scenario, run_sim_task
from .errors import DuplicateKey, InvalidScript, ScriptExhausted
from .hub import (HEALTHY_FIXTURE_KEYS, FailureMode, SimApiSpec, SimExecutor, build_sim_hub, default_sim_hub,
                  default_sim_specs, health_fixture_hub, health_fixture_specs)
from .script import (SCRIPT_EXHAUSTED_THOUGHT, OracleResult, ScriptedPolicy, ScriptNode, ScriptTree, dump_script,
                     load_script, oracle_search, script_exhausted, script_from_dict, script_to_dict)
from .suite import (SimTask, TaskKind, TaskSuite, answer_branch, build_trap_suite, dump_suite, give_up_free_chain,
                    load_suite, random_script_tree, trap_branch)
