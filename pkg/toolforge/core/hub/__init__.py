"""API hub: tool/API documentation, health filtering and response compression."""


from .compression import (BaseSchemaProposer, CompressionSchema, LMSchemaProposer, RuleBasedSchemaProposer,
                          compress_response, derive_compression_schema)
from .doc import ApiDoc, HttpMethod, Hub, ParamSpec, ParamType, ToolDoc, parse_tool_doc, serialize_tool_doc
from .errors import BadEnum, ExecutorUnavailable, HubInvariantError, MissingField, MissingReport, UnparseableExample
from .executor import ApiResponse, BaseApiExecutor, HttpApiExecutor
from .health import HealthReport, Quality, Verdict, classify_response, filter_hub, validate_api, validate_hub
from .store import dump_hub, load_hub
