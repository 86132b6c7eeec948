COMPRESSION_SCHEMA_PROMPT_TEMPLATE: str = \
"""You compress API responses for a tool-using agent whose context window is limited.
Below is the documentation of one API and an example of its response.
Decide which keys of the response carry information a user would need, and which keys are noise
(debug traces, tracking ids, repeated metadata, long boilerplate).

Key paths are dot-separated (e.g. "data.items.thumbnail"); list elements are traversed transparently.

Here are three examples of original responses and the compression schemas experts wrote for them:

{in_context_examples}

TOOL NAME: {tool_name}
TOOL DESCRIPTION: {tool_description}
API NAME: {api_name}
API DESCRIPTION: {api_description}
PARAMETERS: {parameters}
EXAMPLE RESPONSE:
{example_response}

Return a JSON object {{"keep_keys": [...], "drop_keys": [...]}} and nothing else.
"""  # noqa: E122


COMPRESSION_IN_CONTEXT_EXAMPLES: str = \
"""ORIGINAL: {"status": "ok", "request_id": "a81f...", "data": {"city": "Ohio", "temp_c": 21, "icon_url": "https://..."}, "debug": {"trace": [...]}}
SCHEMA: {"keep_keys": ["status", "data.city", "data.temp_c"], "drop_keys": ["request_id", "data.icon_url", "debug"]}

ORIGINAL: {"results": [{"title": "...", "snippet": "...", "html": "<div>...</div>", "tracking": {...}}], "page": 1}
SCHEMA: {"keep_keys": ["results.title", "results.snippet", "page"], "drop_keys": ["results.html", "results.tracking"]}

ORIGINAL: {"quote": "...", "author": "...", "tags": [...], "_links": {"self": "...", "next": "..."}, "meta": {"served_by": "..."}}
SCHEMA: {"keep_keys": ["quote", "author", "tags"], "drop_keys": ["_links", "meta"]}"""  # noqa: E122
