SINGLE_TOOL_TASK_DESCRIPTION: str = \
"""You will be provided with a tool, its description, all of the tool's available API functions, the descriptions of these API functions, and the parameters required for each API function.
Your task is to create {n_queries} varied, innovative and detailed user queries that employ multiple API functions of this tool.
A query that only uses one API call will not be accepted.
Incorporate the input parameters each API call requires, inventing concrete values (exact road and district names, specific products, invented company names) rather than vague placeholders.
The first queries should be very specific; the final three should be complex and lengthy, describing a scenario where all the API calls help within a single query.
Do not ask which API to use and do not ask for the input parameters: state the needs and provide the parameters directly.
Related APIs are the APIs that can be used for a query; they must strictly come from the provided API names.
For each query there should be multiple related APIs, and the overlap of related APIs between queries should be as little as possible.
Deliver your response in this format: [{{"Query": "......", "related_apis": [api1, api2, api3...]}}, ...]"""  # noqa: E122,E501


MULTI_TOOL_TASK_DESCRIPTION: str = \
"""You will be provided with several tools, tool descriptions, all of each tool's available API functions, the descriptions of these API functions, and the parameters required for each API function.
Your task is to create {n_queries} varied, innovative and detailed user queries that employ API functions of multiple tools.
A query that uses API calls of only one tool will not be accepted.
Incorporate the input parameters each API call requires, inventing concrete values (exact road and district names, specific products, invented company names) rather than vague placeholders.
The first queries should be very specific; the final three should be complex and lengthy, describing a scenario where all the provided API calls help within a single query.
Do not ask which API to use and do not ask for the input parameters: state the needs and provide the parameters directly.
Related APIs are the APIs that can be used for a query; they must strictly come from the provided API names.
For each query there should be multiple related APIs, and the overlap of related APIs between queries should be as little as possible.
Deliver your response in this format: [{{"Query": "......", "related_apis": [[tool name, api name], [tool name, api name]...]}}, ...]"""  # noqa: E122,E501


OTHER_REQUIREMENTS: str = \
"""Please produce {n_queries} queries in line with the given requirements and inputs.
These queries should display a diverse range of sentence structures (imperative, declarative, interrogative) and tones (polite, straightforward).
They should vary in length and cover a wide range of subjects: myself, my friends, family, and company.
Invoking just one API won't suffice: each query should call upon two to five APIs, without explicitly naming which API to employ.
Each query should consist of a minimum of thirty words."""  # noqa: E122,E501


GENERATION_PROMPT_TEMPLATE: str = \
"""{task_description}

Some sample queries and related_apis would be:
{seed_examples}
These are only examples to show you how to write the query. Do not use APIs listed in the above examples, but rather, use the ones listed below in the INPUT.

INPUT:
{api_documents}

{other_requirements}"""  # noqa: E122
