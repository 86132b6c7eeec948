"""Single-episode agent machinery: actions, function schemas, state transitions and solution paths."""


from .action import FINISH_FUNCTION_NAME, Action, ActionKind, ReturnType, parse_action, render_action
from .episode import (MALFORMED_ACTION_NAME, EpisodeState, EpisodeStatus, Step,
                      malformed_step, parameter_warnings, record_malformed, step)
from .errors import DuplicateFunctionName, EpisodeNotRunning, MalformedAction
from .functions import FINISH_FUNCTION, FunctionCatalog, render_function_schemas, sanitize_function_name
from .path import SolutionPath, decode_path, encode_path, path_from_dict, path_to_dict
