"""
==============
TOKEN COUNTING
==============

The default token counter splits on whitespace, which keeps every length computation deterministic
without a model dependency. A model tokenizer can be plugged in by implementing `TokenCounter`.
"""


from __future__ import annotations

from typing import Protocol


class TokenCounter(Protocol):
    """Counts tokens and truncates text to a token budget."""

    def count(self, text: str) -> int:
        """Return the number of tokens in text."""

    def truncate(self, text: str, max_tokens: int) -> str:
        """Return the first `max_tokens` tokens of text."""


class WhitespaceTokenCounter:
    """Whitespace-delimited words as tokens."""

    def count(self, text: str) -> int:
        return len(text.split())

    def truncate(self, text: str, max_tokens: int) -> str:
        words: list[str] = text.split()
        if len(words) <= max_tokens:
            return text
        return ' '.join(words[:max_tokens])


DEFAULT_TOKEN_COUNTER: TokenCounter = WhitespaceTokenCounter()
