"""
=======================
TOOLFORGE CONFIGURATION
=======================
"""


import os

from dotenv import load_dotenv


load_dotenv(dotenv_path='.env', override=False)


class ToolForgeConfig:
    """
    Configuration class for hub locations, provider credentials, and algorithm defaults.
    Can be overridden by user setting ToolForgeConfig.<attribute>.
    """

    # hub root directory
    HUB_DIR: str | None = os.environ.get('TOOLFORGE_HUB_DIR')

    # external providers (chat policy, judge, instruction generator, live API hosts)
    PROVIDER_KEY: str | None = os.environ.get('TOOLFORGE_PROVIDER_KEY')
    PROVIDER_URL: str = os.environ.get('TOOLFORGE_PROVIDER_URL', 'https://api.openai.com/v1')
    DEFAULT_MODEL: str = os.environ.get('TOOLFORGE_MODEL', 'gpt-4o-mini')

    # LM parameters
    DEFAULT_SEED: int = 7 * 17 * 14717
    DEFAULT_TEMPERATURE: float = 0.0

    # API filtering & response compression
    LATENCY_THRESHOLD_MS: float = 2000.0
    MAX_RESPONSE_TOKENS: int = 1024
    HTTP_TIMEOUT_S: float = 30.0

    # BM25 & embedding retrieval
    BM25_K1: float = 1.2
    BM25_B: float = 0.75
    EMBEDDING_DIM: int = 256

    # solution-path search
    DEFAULT_BUDGET: int = 30
    DFSDT_MAX_CHILDREN: int = 3
    DFSDT_MAX_DEPTH: int = 12

    # instruction generation
    SINGLE_TOOL_API_CAP: int = 16
    QUERIES_PER_CALL: int = 10
    SINGLE_TOOL_SEED_POOL_SIZE: int = 12
    MULTI_TOOL_SEED_POOL_SIZE: int = 36
