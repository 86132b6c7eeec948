PATH_FACTS_PROMPT_TEMPLATE: str = \
"""You are evaluating whether a tool-using assistant completed a user instruction.

INSTRUCTION:
{instruction}

AVAILABLE APIS:
{available_apis}

SOLUTION PATH (each step: thought, called function, arguments, observation):
{steps}

FINAL ANSWER ({finish_type}):
{final_answer}

TASK IS SOLVABLE WITH THE AVAILABLE APIS: {solvable}

Answer with a JSON object with these keys:
- "tried_all_apis": true if the assistant tried every available API extensively
- "any_useful_info": true if some API returned information helpful for the instruction
- "answer_resolves": one of "fully", "partially", "refusal", "hallucinated", "indeterminate":
  "fully" if the final answer completely resolves the instruction,
  "partially" if it resolves part of it, "refusal" if it declines or apologizes,
  "hallucinated" if it asserts results not supported by the observations,
  "indeterminate" if you are unable to determine if the instruction is resolved
- "milestones_hit": integer count of these milestones reached: {milestones}
- "richness", "factuality", "reasoning": each one of "LOW", "MEDIUM", "HIGH",
  rating the information richness of the answer, its factuality against the observations,
  and the soundness of the reasoning steps
"""  # noqa: E122
