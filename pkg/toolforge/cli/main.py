"""
=============
TOOLFORGE CLI
=============

`toolforge <command>` runs one stage of dataset construction or evaluation and writes its artifacts
(line-delimited records plus `manifest.json`) under `--output-dir`; summaries go to stdout as aligned tables.

Exit codes: 0 success, 1 other failure, 2 usage or configuration error (including a missing hub),
3 provider failure, 4 data decode error.
"""


from __future__ import annotations

import argparse
from collections import Counter, defaultdict
from collections.abc import Callable, Iterator, Sequence
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import replace
from pathlib import Path
import sys
from typing import Any, TYPE_CHECKING

import httpx
from loguru import logger
from openai import OpenAIError
from tqdm import tqdm

from toolforge.core.agent.path import SolutionPath, path_from_dict, path_to_dict
from toolforge.core.datagen.annotation import AnnotationRecord, AnnotationResult, PolicyFactory, annotate_dataset
from toolforge.core.datagen.generation import (BaseInstructionGenerator, LMInstructionGenerator,
                                               TemplateInstructionGenerator, build_instruction_set)
from toolforge.core.datagen.instruction import InstructionPair, Scenario
from toolforge.core.datagen.sampling import load_seed_pool
from toolforge.core.datagen.sim_policy import SimInstructionPolicy
from toolforge.core.evaluation.errors import UnsureOperand
from toolforge.core.evaluation.facts import GroundTruth, Milestone, TaskMeta
from toolforge.core.evaluation.judge import BaseJudge, LMJudge, RuleBasedJudge, label_path
from toolforge.core.evaluation.labels import PassLabel, Preference
from toolforge.core.evaluation.rules import (aggregate_preferences, compare_paths, judge_pass_rules, pass_rate,
                                             win_rate_breakdown)
from toolforge.core.hub.errors import BadEnum, HubInvariantError, MissingField, UnparseableExample
from toolforge.core.hub.executor import HttpApiExecutor
from toolforge.core.hub.health import filter_hub, validate_hub
from toolforge.core.hub.store import dump_hub, load_hub
from toolforge.core.reasoning.lm_policy import LMPolicy
from toolforge.core.reasoning.strategy import Strategy, run_strategy
from toolforge.core.retrieval.index import build_index, embed_index
from toolforge.core.retrieval.metrics import RetrievalScore, evaluate_retrieval
from toolforge.core.retrieval.scoring import Scorer
from toolforge.core.retrieval.training import make_training_pairs
from toolforge.core.simenv.bench import benchmark, mean_policy_calls, pass_rates_by_scenario
from toolforge.core.simenv.errors import InvalidScript
from toolforge.core.simenv.hub import SimExecutor, default_sim_hub, health_fixture_hub
from toolforge.core.simenv.suite import TaskSuite, build_trap_suite, load_suite
from toolforge.core.util.config import ToolForgeConfig
from toolforge.core.util.errors import ConfigError, DecodeError, ProviderError, ToolForgeError
from toolforge.core.util.misc import derive_seed, format_api_key, iter_jsonl

from .config import Provider, RunConfig, resolve_config
from .report import RunWriter, emit_table, format_rate, rate_record

if TYPE_CHECKING:
    from toolforge.core.hub.doc import ApiDoc, Hub
    from toolforge.core.hub.executor import BaseApiExecutor
    from toolforge.core.hub.health import HealthReport
    from toolforge.core.reasoning.base import Episode
    from toolforge.core.retrieval.index import Index
    from toolforge.core.util.lm.openai import OpenAILM


EXIT_OK: int = 0
EXIT_FAILURE: int = 1
EXIT_USAGE: int = 2
EXIT_PROVIDER: int = 3
EXIT_DECODE: int = 4

LOG_LEVELS: tuple[str, ...] = ('TRACE', 'DEBUG', 'INFO', 'SUCCESS', 'WARNING', 'ERROR', 'CRITICAL')

_DECODE_ERRORS: tuple[type[Exception], ...] = (DecodeError, MissingField, BadEnum, HubInvariantError,
                                               UnparseableExample, InvalidScript)
_PROVIDER_ERRORS: tuple[type[Exception], ...] = (ProviderError, OpenAIError, httpx.HTTPError)


def configure_logging(level: str = 'WARNING'):
    """Single stderr sink, so stdout carries only reports."""
    logger.remove()
    logger.add(sys.stderr, level=level, format='{level}: {message}')


# ----------------------------------------------------------------------------------------------------------------
# shared plumbing
# ----------------------------------------------------------------------------------------------------------------

def _config(args: argparse.Namespace) -> RunConfig:
    overrides: dict[str, Any] = {name: getattr(args, name, None)
                                 for name in RunConfig.model_fields if name not in ('profiles', 'credential')}
    return resolve_config(overrides, config_file=getattr(args, 'config', None))


def _progress(args: argparse.Namespace) -> bool:
    return not getattr(args, 'quiet', False)


def _load_hub(config: RunConfig) -> Hub:
    if config.hub_dir is None:
        raise FileNotFoundError('hub: not found (pass --hub-dir or set TOOLFORGE_HUB_DIR)')
    return load_hub(config.hub_dir)


def _executor(config: RunConfig, hub: Hub) -> BaseApiExecutor:
    if config.provider == Provider.SIM:
        return SimExecutor.from_hub_examples(hub)
    return HttpApiExecutor(bearer_token=config.credential)


def _judge(config: RunConfig) -> BaseJudge:
    return RuleBasedJudge() if config.provider == Provider.SIM else LMJudge(lm=config.lm())


def _generator(config: RunConfig) -> BaseInstructionGenerator:
    return TemplateInstructionGenerator() if config.provider == Provider.SIM else LMInstructionGenerator(lm=config.lm())


def _policy_factory(config: RunConfig) -> PolicyFactory:
    if config.provider == Provider.SIM:
        return lambda pair, seed, trial: SimInstructionPolicy()

    lm: OpenAILM = config.lm()
    return lambda pair, seed, trial: LMPolicy(lm=lm)


def _read_pairs(path: Path) -> list[InstructionPair]:
    pairs: list[InstructionPair] = []
    for line_no, record in iter_jsonl(path):
        try:
            pairs.append(InstructionPair.from_dict(record))
        except (DecodeError, TypeError, AttributeError) as err:
            raise DecodeError(f'bad instruction pair: {err}', position=f'{path}:{line_no}') from err
    return pairs


def _read_paths(path: Path) -> list[SolutionPath]:
    paths: list[SolutionPath] = []
    for line_no, record in iter_jsonl(path):
        try:
            paths.append(path_from_dict(record))
        except ValueError as err:
            raise DecodeError(f'bad solution path: {err}', position=f'{path}:{line_no}') from err
    return paths


def _scenario_of(path: SolutionPath) -> str:
    return str(path.extras.get('scenario', 'unknown'))


def _task_of(path: SolutionPath) -> tuple[TaskMeta, GroundTruth]:
    """Task metadata and ground truth recorded in a solution path's extras."""
    extras: dict[str, Any] = path.extras
    meta: TaskMeta = TaskMeta(solvable=extras.get('solvable', True),
                              milestones=tuple(Milestone.from_dict(m) for m in extras.get('milestones', [])))
    truth: GroundTruth = GroundTruth(relevant_apis=frozenset(tuple(k) for k in extras.get('related_apis', [])),
                                     available_apis=frozenset(tuple(k) for k in extras.get('available_apis', [])),
                                     expected_answer=extras.get('expected_answer'))
    return meta, truth


def _parse_list[T](text: str, parse: Callable[[str], T], what: str) -> list[T]:
    try:
        return [parse(item.strip()) for item in text.split(',') if item.strip()]
    except ValueError as err:
        raise ConfigError(f'bad {what} list "{text}": {err}') from err


def _dump_hub(writer: RunWriter, hub: Hub, name: str = 'hub'):
    (hub_dir := writer.path(name)).mkdir(parents=True, exist_ok=True)
    dump_hub(hub, hub_dir)
    writer.tree(name, sorted(hub_dir.rglob('*.json')))


def _health_records(reports: dict[tuple[str, str], HealthReport]) -> list[dict[str, Any]]:
    return [{'tool_name': key[0], 'api_name': key[1]} | report.to_dict() for key, report in reports.items()]


@contextmanager
def _stage(name: str) -> Iterator[None]:
    try:
        yield
    except Exception as err:
        err.add_note(f'stage {name}')
        raise
    logger.info(f'stage "{name}" done')


def _annotation_rows(run_log: Sequence[AnnotationRecord]) -> list[list[Any]]:
    by_scenario: dict[str, list[AnnotationRecord]] = defaultdict(list)
    for record in run_log:
        by_scenario[record.scenario].append(record)

    return [[scenario, len(records), sum(r.retained for r in records),
             format_rate(pass_rate([r.pass_label for r in records]))]
            for scenario, records in sorted(by_scenario.items())]


# ----------------------------------------------------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------------------------------------------------

def cmd_hub_filter(args: argparse.Namespace) -> int:
    """Validate every API of the hub and keep the healthy ones."""
    config: RunConfig = _config(args)
    hub: Hub = _load_hub(config)

    with _executor(config, hub) as executor:
        reports: dict = validate_hub(hub, executor, latency_threshold_ms=config.latency_threshold_ms,
                                     jobs=config.jobs, progress=_progress(args))
    filtered: Hub = filter_hub(hub, reports)

    writer: RunWriter = RunWriter(config.output_dir)
    _dump_hub(writer, filtered)
    writer.jsonl('health.jsonl', _health_records(reports))
    writer.manifest(args.command_name, config)

    emit_table('API health', ['api', 'verdict', 'reason', 'latency_ms'],
               [[format_api_key(key), str(report.verdict), report.reason, f'{report.latency_ms:.0f}']
                for key, report in reports.items()])
    print(f'retained {filtered.n_apis} of {hub.n_apis} APIs')
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    """Generate instruction pairs for one scenario."""
    config: RunConfig = _config(args)
    hub: Hub = _load_hub(config)

    pairs: list[InstructionPair] = build_instruction_set(hub, config.scenario, count=args.count, seed=config.seed,
                                                         generator=_generator(config), pool=load_seed_pool(),
                                                         n_queries=args.queries_per_call, progress=_progress(args))

    writer: RunWriter = RunWriter(config.output_dir)
    writer.jsonl('pairs.jsonl', (pair.to_dict() for pair in pairs))
    writer.manifest(args.command_name, config)

    emit_table('instruction generation', ['scenario', 'requested', 'generated'],
               [[str(config.scenario), args.count, len(pairs)]])
    return EXIT_OK


def cmd_annotate(args: argparse.Namespace) -> int:
    """Search a solution path for every instruction pair and keep the Pass-labeled ones."""
    config: RunConfig = _config(args)
    hub: Hub = _load_hub(config)
    pairs: list[InstructionPair] = _read_pairs(args.pairs)

    with _executor(config, hub) as executor:
        result: AnnotationResult = annotate_dataset(pairs, config.search_config(), _policy_factory(config),
                                                    executor, _judge(config), hub, seed=config.seed,
                                                    jobs=config.jobs, n_votes=config.votes, progress=_progress(args))

    writer: RunWriter = RunWriter(config.output_dir)
    writer.jsonl('dataset.jsonl', (path_to_dict(path) for path in result.dataset))
    writer.jsonl('run_log.jsonl', (record.to_dict() for record in result.run_log))
    writer.manifest(args.command_name, config)

    emit_table(f'annotation ({config.strategy}, budget {config.budget})',
               ['scenario', 'pairs', 'retained', 'pass_rate'], _annotation_rows(result.run_log))
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    """Run one strategy on every instruction pair, without labeling."""
    config: RunConfig = _config(args)
    hub: Hub = _load_hub(config)
    pairs: list[InstructionPair] = _read_pairs(args.pairs)
    executor: BaseApiExecutor = _executor(config, hub)
    policy_factory: PolicyFactory = _policy_factory(config)

    def run(i: int) -> Episode:
        pair: InstructionPair = pairs[i]
        pair_seed: int = derive_seed(config.seed, 'run', i)
        apis: list[ApiDoc] = [hub.api(key) for key in pair.subset if key in hub]
        return run_strategy(config.search_config(), pair.query, apis,
                            lambda trial: policy_factory(pair, pair_seed, trial), executor)

    with executor, ThreadPoolExecutor(max_workers=config.jobs) as pool:
        episodes: list[Episode] = list(tqdm(pool.map(run, range(len(pairs))), total=len(pairs),
                                            desc=f'running {config.strategy}', disable=not _progress(args)))

    writer: RunWriter = RunWriter(config.output_dir)
    writer.jsonl('paths.jsonl', (path_to_dict(replace(episode.path,
                                                      extras={'scenario': str(pair.scenario),
                                                              'related_apis': [list(k) for k in pair.related_apis],
                                                              'available_apis': [list(k) for k in pair.subset]}))
                                 for pair, episode in zip(pairs, episodes)))
    writer.jsonl('episodes.jsonl', ({'query': pair.query, 'outcome': str(episode.outcome),
                                     'policy_calls': episode.policy_calls, 'trials': episode.trials}
                                    for pair, episode in zip(pairs, episodes)))
    if any(episode.tree is not None for episode in episodes):
        writer.jsonl('trees.jsonl', ({'query': pair.query, 'tree': episode.tree.to_dict()}
                                     for pair, episode in zip(pairs, episodes) if episode.tree is not None))
    writer.manifest(args.command_name, config)

    outcomes: Counter[str] = Counter(str(episode.outcome) for episode in episodes)
    emit_table(f'{config.strategy} episodes (budget {config.budget})', ['outcome', 'episodes'],
               sorted(outcomes.items()))
    if episodes:
        print(f'mean policy calls: {sum(e.policy_calls for e in episodes) / len(episodes):.2f}')
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    """Compare strategies on a scripted task suite with equalized budgets."""
    config: RunConfig = _config(args)
    strategies: list[Strategy] = _parse_list(args.strategies, Strategy, 'strategy')
    if len(set(strategies)) < 2:
        raise ConfigError(f'bench: needs at least 2 distinct strategies, got {args.strategies!r}')

    if args.suite is not None:
        suite: TaskSuite = load_suite(args.suite)
    elif args.tasks < 1:
        raise ConfigError(f'bench: no tasks (--tasks {args.tasks})')
    else:
        suite: TaskSuite = build_trap_suite(n_tasks=args.tasks, seed=config.seed, budget=config.budget,
                                            max_children=config.max_children, max_depth=config.max_depth)
    if not suite.tasks:
        raise ConfigError('bench: no tasks in the suite')

    results, cost_target = benchmark(suite, strategies, config.search_config(), judge=_judge(config),
                                     n_votes=config.votes, jobs=config.jobs, progress=_progress(args))

    scenarios: list[str] = [str(s) for s in Scenario if any(t.scenario == s for t in suite.tasks)] + ['all']
    rates: dict[Strategy, dict[str, Any]] = {strategy: pass_rates_by_scenario(task_results)
                                             for strategy, task_results in results.items()}

    writer: RunWriter = RunWriter(config.output_dir)
    writer.jsonl('bench.jsonl', (result.to_dict() for task_results in results.values() for result in task_results))
    writer.jsonl('bench_summary.jsonl', ({'strategy': str(strategy),
                                          'pass_rates': {k: rate_record(v) for k, v in rates[strategy].items()},
                                          'mean_policy_calls': rate_record(mean_policy_calls(task_results)),
                                          'flagged': sum(r.flagged for r in task_results)}
                                         for strategy, task_results in results.items()))
    writer.manifest(args.command_name, config, extras={'cost_target': cost_target, 'n_tasks': len(suite.tasks)})

    emit_table(f'pass rate by scenario ({len(suite.tasks)} tasks, budget {config.budget})',
               ['strategy', *scenarios, 'mean_calls'],
               [[str(strategy), *(format_rate(rates[strategy][s]) if s in rates[strategy] else '-' for s in scenarios),
                 f'{float(mean_policy_calls(task_results)):.2f}']
                for strategy, task_results in results.items()])
    if Strategy.REACT_AT_N in results:
        print(f'{Strategy.REACT_AT_N} cost target: {cost_target} policy calls')
    return EXIT_OK


def cmd_retrieve_eval(args: argparse.Namespace) -> int:
    """NDCG@k of API retrieval per scenario split."""
    config: RunConfig = _config(args)
    hub: Hub = _load_hub(config)

    splits: list[Scenario] = _parse_list(args.split, Scenario, 'scenario')
    ks: list[int] = _parse_list(args.k, int, 'cutoff')
    scorers: list[Scorer] = _parse_list(args.scorer, Scorer, 'scorer')
    if not ks or min(ks) < 1:
        raise ConfigError(f'retrieve eval: cutoffs must be positive, got {args.k!r}')

    pairs: list[InstructionPair] = [pair for pair in _read_pairs(args.pairs) if pair.scenario in splits]
    if not pairs:
        raise ConfigError(f'retrieve eval: no instruction pair in splits {args.split!r}')

    index: Index = build_index(hub)
    if Scorer.EMBEDDING in scorers:
        index: Index = embed_index(index)
    scores: list[RetrievalScore] = evaluate_retrieval(pairs, index, ks=ks, scorers=scorers)

    writer: RunWriter = RunWriter(config.output_dir)
    writer.jsonl('retrieval.jsonl', (score.to_dict() for score in scores))
    if args.negatives:
        writer.jsonl('training_pairs.jsonl',
                     (p.to_dict() for p in make_training_pairs(pairs, hub, args.negatives, seed=config.seed)))
    writer.manifest(args.command_name, config)

    table: dict[tuple[str, str], dict[int, float]] = defaultdict(dict)
    for score in scores:
        table[(score.scenario, str(score.scorer))][score.k] = score.ndcg
    emit_table('retrieval NDCG', ['scenario', 'scorer', *(f'NDCG@{k}' for k in ks)],
               [[scenario, scorer, *(f'{ndcgs[k]:.3f}' for k in ks)] for (scenario, scorer), ndcgs in table.items()])
    return EXIT_OK


def cmd_eval_pass(args: argparse.Namespace) -> int:
    """Majority-voted pass labels and per-scenario pass rates of solution paths."""
    config: RunConfig = _config(args)
    paths: list[SolutionPath] = _read_paths(args.paths)
    judge: BaseJudge = _judge(config)

    def judge_path(path: SolutionPath) -> tuple[PassLabel, list[PassLabel]]:
        meta, truth = _task_of(path)
        return label_path(judge, path, meta, truth, n_votes=config.votes)

    with ThreadPoolExecutor(max_workers=config.jobs) as pool:
        judged: list[tuple[PassLabel, list[PassLabel]]] = list(
            tqdm(pool.map(judge_path, paths), total=len(paths), desc='judging paths', disable=not _progress(args)))

    groups: dict[str, list[int]] = defaultdict(list)
    for i, path in enumerate(paths):
        groups[_scenario_of(path)].append(i)
    groups = dict(sorted(groups.items())) | {'all': list(range(len(paths)))}

    rows: list[list[Any]] = []
    summary: list[dict[str, Any]] = []
    for scenario, indices in groups.items():
        if not indices:
            continue
        finals: Counter[PassLabel] = Counter(judged[i][0] for i in indices)
        votes: Counter[PassLabel] = Counter(vote for i in indices for vote in judged[i][1])
        rate = pass_rate([judged[i][0] for i in indices])
        rows.append([scenario, len(indices), *(finals[label] for label in PassLabel), format_rate(rate),
                     ' '.join(f'{label}:{votes[label]}' for label in PassLabel)])
        summary.append({'scenario': scenario, 'paths': len(indices), 'pass_rate': rate_record(rate),
                        'labels': {str(label): finals[label] for label in PassLabel},
                        'votes': {str(label): votes[label] for label in PassLabel}})

    writer: RunWriter = RunWriter(config.output_dir)
    writer.jsonl('judgments.jsonl', ({'path_id': path.extras.get('path_id', i),
                                      'votes': [str(vote) for vote in votes], 'final': str(label)}
                                     for i, (path, (label, votes)) in enumerate(zip(paths, judged))))
    writer.jsonl('pass_rates.jsonl', summary)
    writer.manifest(args.command_name, config)

    emit_table(f'pass rate ({config.votes} votes per path)',
               ['scenario', 'paths', *(str(label) for label in PassLabel), 'pass_rate', 'votes'], rows)
    return EXIT_OK


def _preference_votes(judge: BaseJudge, a: SolutionPath, b: SolutionPath, n_votes: int) -> list[Preference]:
    meta, truth = _task_of(a)
    votes: list[Preference] = []
    for vote in range(n_votes):
        facts_a, facts_b = judge.extract(a, meta, truth, vote=vote), judge.extract(b, meta, truth, vote=vote)
        try:
            votes.append(compare_paths((a, facts_a, judge_pass_rules(facts_a, meta)),
                                       (b, facts_b, judge_pass_rules(facts_b, meta)), meta=meta))
        except UnsureOperand:
            logger.warning(f'vote {vote} on "{a.instruction[:40]}" skipped: a path was labeled {PassLabel.UNSURE}')
    return votes


def cmd_eval_win(args: argparse.Namespace) -> int:
    """Pairwise win rate of the paths in `--a` against the paths at the same lines of `--b`."""
    config: RunConfig = _config(args)
    paths_a, paths_b = _read_paths(args.a), _read_paths(args.b)
    if len(paths_a) != len(paths_b):
        raise ConfigError(f'eval win: {args.a} holds {len(paths_a)} paths but {args.b} holds {len(paths_b)}')
    judge: BaseJudge = _judge(config)

    def compare(i: int) -> tuple[list[Preference], Preference]:
        votes: list[Preference] = _preference_votes(judge, paths_a[i], paths_b[i], config.votes)
        return votes, aggregate_preferences(votes) if votes else Preference.tie()

    with ThreadPoolExecutor(max_workers=config.jobs) as pool:
        compared: list[tuple[list[Preference], Preference]] = list(
            tqdm(pool.map(compare, range(len(paths_a))), total=len(paths_a), desc='comparing paths',
                 disable=not _progress(args)))

    groups: dict[str, list[int]] = defaultdict(list)
    for i, path in enumerate(paths_a):
        groups[_scenario_of(path)].append(i)
    groups = dict(sorted(groups.items())) | {'all': list(range(len(paths_a)))}

    rows: list[list[Any]] = []
    summary: list[dict[str, Any]] = []
    for scenario, indices in groups.items():
        if not indices:
            continue
        breakdown: dict[str, Any] = win_rate_breakdown([compared[i][1] for i in indices])
        rows.append([scenario, len(indices), *(format_rate(breakdown[k]) for k in ('win', 'tie', 'lose', 'win_rate'))])
        summary.append({'scenario': scenario, 'pairs': len(indices)}
                       | {k: rate_record(v) for k, v in breakdown.items()})

    writer: RunWriter = RunWriter(config.output_dir)
    writer.jsonl('comparisons.jsonl', ({'pair_id': i, 'votes': [vote.to_dict() for vote in votes],
                                        'final': final.to_dict()}
                                       for i, (votes, final) in enumerate(compared)))
    writer.jsonl('win_rates.jsonl', summary)
    writer.manifest(args.command_name, config)

    emit_table(f'win rate of {Path(args.a).name} over {Path(args.b).name} (ties split)',
               ['scenario', 'pairs', 'win', 'tie', 'lose', 'win_rate'], rows)
    return EXIT_OK


def cmd_simenv_generate(args: argparse.Namespace) -> int:
    """Write an oracle-verified trap suite with the default simulated hub and the health fixture hub."""
    config: RunConfig = _config(args)
    suite: TaskSuite = build_trap_suite(n_tasks=args.tasks, seed=config.seed, budget=config.budget,
                                        max_children=config.max_children, max_depth=config.max_depth)

    writer: RunWriter = RunWriter(config.output_dir)
    writer.json('suite.json', suite.to_dict())
    _dump_hub(writer, default_sim_hub()[0], 'hub')
    _dump_hub(writer, health_fixture_hub()[0], 'health_hub')
    writer.manifest(args.command_name, config)

    emit_table('trap suite', ['kind', 'tasks'], sorted(Counter(str(task.kind) for task in suite.tasks).items()))
    return EXIT_OK


def _run_pipeline(config: RunConfig, args: argparse.Namespace) -> list[tuple[str, int]]:
    counts: list[tuple[str, int]] = []

    with _stage('load'):
        hub: Hub = _load_hub(config)
        counts.append(('hub APIs', hub.n_apis))

    with _executor(config, hub) as executor:
        with _stage('filter'):
            reports: dict = validate_hub(hub, executor, latency_threshold_ms=config.latency_threshold_ms,
                                         jobs=config.jobs, progress=_progress(args))
            filtered: Hub = filter_hub(hub, reports)
            counts.append(('healthy APIs', filtered.n_apis))

        with _stage('generate'):
            pairs: list[InstructionPair] = build_instruction_set(filtered, config.scenario, count=args.count,
                                                                 seed=config.seed, generator=_generator(config),
                                                                 pool=load_seed_pool(),
                                                                 n_queries=args.queries_per_call,
                                                                 progress=_progress(args))
            counts.append(('instruction pairs', len(pairs)))

        with _stage('annotate'):
            result: AnnotationResult = annotate_dataset(pairs, config.search_config(), _policy_factory(config),
                                                        executor, _judge(config), filtered, seed=config.seed,
                                                        jobs=config.jobs, n_votes=config.votes,
                                                        progress=_progress(args))
            counts.append(('annotated paths', len(result.run_log)))
            counts.append(('retained paths', len(result.dataset)))

    with _stage('write'):
        writer: RunWriter = RunWriter(config.output_dir)
        _dump_hub(writer, filtered)
        writer.jsonl('health.jsonl', _health_records(reports))
        writer.jsonl('pairs.jsonl', (pair.to_dict() for pair in pairs))
        writer.jsonl('dataset.jsonl', (path_to_dict(path) for path in result.dataset))
        writer.jsonl('run_log.jsonl', (record.to_dict() for record in result.run_log))
        writer.manifest(args.command_name, config, extras={'stages': dict(counts)})

    return counts


def cmd_pipeline(args: argparse.Namespace) -> int:
    """Filter the hub, generate instructions, annotate solution paths and write the dataset, once per seed."""
    config: RunConfig = _config(args)

    for seed in config.seeds:
        output_dir: Path = config.output_dir if len(config.seeds) == 1 else config.output_dir / f'seed-{seed}'
        seed_config: RunConfig = config.model_copy(update={'seeds': [seed], 'output_dir': output_dir})

        counts: list[tuple[str, int]] = _run_pipeline(seed_config, args)
        emit_table(f'pipeline {seed_config.scenario} (seed {seed}) -> {seed_config.output_dir}',
                   ['stage', 'count'], counts)

    return EXIT_OK


# ----------------------------------------------------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------------------------------------------------

def _common_options() -> argparse.ArgumentParser:
    """Options accepted both before and after the command name."""
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument('--seed', dest='seeds', type=int, action='append', metavar='SEED',
                        help='base seed; repeat to run the pipeline once per seed')
    common.add_argument('--jobs', type=int, help='parallel episodes / API validations')
    common.add_argument('--config', type=Path, help='TOML file with [defaults] and [profiles.<name>] tables')
    common.add_argument('--profile', help='provider profile of the config file')
    common.add_argument('--provider', choices=[str(p) for p in Provider])
    common.add_argument('--hub-dir', type=Path, help='hub directory (default: $TOOLFORGE_HUB_DIR)')
    common.add_argument('--output-dir', type=Path)
    common.add_argument('--latency-threshold-ms', type=float)
    common.add_argument('--votes', type=int, help='judge votes per path')
    common.add_argument('--log-level', choices=LOG_LEVELS)
    common.add_argument('--quiet', action='store_true', help='no progress bars')
    return common


def _search_options() -> argparse.ArgumentParser:
    search = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    search.add_argument('--budget', type=int, help='policy calls per episode')
    search.add_argument('--max-children', type=int)
    search.add_argument('--max-depth', type=int)
    search.add_argument('--cost-target', type=int, help=f'{Strategy.REACT_AT_N} cumulative policy-call target')
    return search


def _generation_options() -> argparse.ArgumentParser:
    generation = argparse.ArgumentParser(add_help=False)
    generation.add_argument('--scenario', choices=[str(s) for s in Scenario], default=argparse.SUPPRESS)
    generation.add_argument('--count', type=int, default=20, help='instruction pairs to generate')
    generation.add_argument('--queries-per-call', type=int, default=ToolForgeConfig.QUERIES_PER_CALL)
    return generation


def build_parser() -> argparse.ArgumentParser:
    common, search, generation = _common_options(), _search_options(), _generation_options()
    strategies: list[str] = [str(s) for s in Strategy]

    parser = argparse.ArgumentParser(prog='toolforge', parents=[common],
                                     description='Tool-use instruction data construction and evaluation.')
    sub = parser.add_subparsers(dest='command', required=True)

    # hub filter
    hub = sub.add_parser('hub', help='API hub maintenance')
    hub_sub = hub.add_subparsers(dest='hub_command', required=True)
    hub_filter = hub_sub.add_parser('filter', parents=[common], help='drop unreachable, slow or low-quality APIs')
    hub_filter.set_defaults(func=cmd_hub_filter, command_name='hub filter')

    # gen
    gen = sub.add_parser('gen', parents=[common, generation], help='generate instruction pairs')
    gen.set_defaults(func=cmd_gen, command_name='gen')

    # annotate
    annotate = sub.add_parser('annotate', parents=[common, search], help='annotate instruction pairs with paths')
    annotate.add_argument('--pairs', type=Path, required=True, help='instruction-pair JSONL file')
    annotate.add_argument('--strategy', choices=[str(Strategy.REACT), str(Strategy.DFSDT)],
                          default=argparse.SUPPRESS)
    annotate.set_defaults(func=cmd_annotate, command_name='annotate')

    # run
    run = sub.add_parser('run', parents=[common, search], help='run one strategy on instruction pairs')
    run.add_argument('--pairs', type=Path, required=True, help='instruction-pair JSONL file')
    run.add_argument('--strategy', choices=strategies, default=argparse.SUPPRESS)
    run.set_defaults(func=cmd_run, command_name='run')

    # bench
    bench = sub.add_parser('bench', parents=[common, search], help='compare strategies on a scripted suite')
    bench.add_argument('--strategies', default=','.join(strategies), help='comma-separated, at least 2')
    bench.add_argument('--suite', type=Path, help='suite JSON file (default: a freshly built trap suite)')
    bench.add_argument('--tasks', type=int, default=50, help='trap-suite size when no --suite is given')
    bench.set_defaults(func=cmd_bench, command_name='bench')

    # retrieve eval
    retrieve = sub.add_parser('retrieve', help='API retrieval')
    retrieve_sub = retrieve.add_subparsers(dest='retrieve_command', required=True)
    retrieve_eval = retrieve_sub.add_parser('eval', parents=[common], help='NDCG@k per scenario split')
    retrieve_eval.add_argument('--pairs', type=Path, required=True, help='instruction-pair JSONL file')
    retrieve_eval.add_argument('--split', default=','.join(str(s) for s in Scenario))
    retrieve_eval.add_argument('--k', default='1,5', help='comma-separated cutoffs')
    retrieve_eval.add_argument('--scorer', default=','.join(str(s) for s in Scorer))
    retrieve_eval.add_argument('--negatives', type=int, default=0,
                               help='also export contrastive training pairs with this many negatives')
    retrieve_eval.set_defaults(func=cmd_retrieve_eval, command_name='retrieve eval')

    # eval pass | win
    evaluate = sub.add_parser('eval', help='pass rate and win rate')
    eval_sub = evaluate.add_subparsers(dest='eval_command', required=True)
    eval_pass = eval_sub.add_parser('pass', parents=[common], help='pass rate of solution paths')
    eval_pass.add_argument('--paths', type=Path, required=True, help='solution-path JSONL file')
    eval_pass.set_defaults(func=cmd_eval_pass, command_name='eval pass')
    eval_win = eval_sub.add_parser('win', parents=[common], help='win rate of paths A over paths B')
    eval_win.add_argument('--a', type=Path, required=True, help='solution-path JSONL file')
    eval_win.add_argument('--b', type=Path, required=True, help='solution-path JSONL file, same instruction order')
    eval_win.set_defaults(func=cmd_eval_win, command_name='eval win')

    # simenv generate
    simenv = sub.add_parser('simenv', help='simulated environment')
    simenv_sub = simenv.add_subparsers(dest='simenv_command', required=True)
    simenv_generate = simenv_sub.add_parser('generate', parents=[common, search],
                                            help='write a trap suite and the simulated hubs')
    simenv_generate.add_argument('--tasks', type=int, default=50)
    simenv_generate.set_defaults(func=cmd_simenv_generate, command_name='simenv generate')

    # pipeline
    pipeline = sub.add_parser('pipeline', parents=[common, search, generation],
                              help='filter, generate, annotate and write a dataset')
    pipeline.add_argument('--strategy', choices=[str(Strategy.REACT), str(Strategy.DFSDT)],
                          default=argparse.SUPPRESS)
    pipeline.set_defaults(func=cmd_pipeline, command_name='pipeline')

    return parser


def _fail(err: BaseException, exit_code: int) -> int:
    notes: list[str] = getattr(err, '__notes__', [])
    logger.error(f'[{", ".join(notes)}] {err}' if notes else str(err))
    return exit_code


def main(argv: Sequence[str] | None = None) -> int:
    args: argparse.Namespace = build_parser().parse_args(argv)
    configure_logging(getattr(args, 'log_level', 'WARNING'))

    try:
        return args.func(args)
    except _DECODE_ERRORS as err:
        return _fail(err, EXIT_DECODE)
    except (ConfigError, FileNotFoundError) as err:
        return _fail(err, EXIT_USAGE)
    except _PROVIDER_ERRORS as err:
        return _fail(err, EXIT_PROVIDER)
    except ToolForgeError as err:
        return _fail(err, EXIT_FAILURE)


if __name__ == '__main__':
    sys.exit(main())
