"""Dataset pipeline: API-subset sampling, instruction generation and pass-gated path annotation."""


from .annotation import (AnnotationRecord, AnnotationResult, PolicyFactory, TaskResolver, annotate_dataset,
                         annotate_pair, default_task)
from .errors import GeneratorOutputUnparseable, InsufficientTools, PoolTooSmall
from .generation import (BaseInstructionGenerator, GenerationRequest, LMInstructionGenerator,
                         TemplateInstructionGenerator, build_generation_prompt, build_instruction_set,
                         dedup_instructions, filter_hallucinated, generate_instructions, parse_generator_output,
                         subset_tools)
from .instruction import InstructionPair, Scenario, SeedClass, SeedExample
from .sampling import load_seed_pool, sample_api_subset, select_seeds
from .sim_policy import SimInstructionPolicy, placeholder_arguments
