"""
Tokenizer for social-media text.

Splits on Unicode whitespace, trims punctuation from token edges and then
applies the URL, mention, case-folding and length rules, in that order.
Hashtags keep their leading ``#`` unless ``keep_hashtags`` is off.
"""

import re
import unicodedata
from functools import lru_cache
from typing import List

from keyword_tracker.core.config import TokenRules

URL_PATTERN = re.compile(r"^(?:[a-z][a-z0-9+.-]*://|www\.)", re.IGNORECASE)

# Edge markers that survive punctuation stripping
_MARKERS = ("#", "@")


@lru_cache(maxsize=4096)
def _is_punct(char: str) -> bool:
    return unicodedata.category(char).startswith("P")


def strip_punctuation(token: str) -> str:
    """Strip leading and trailing punctuation, keeping a ``#``/``@`` prefix.

    Interior punctuation is kept (``don't`` stays ``don't``). A marker is
    kept only when it directly precedes the first non-punctuation
    character, so ``(#MeToo)`` becomes ``#MeToo``.
    """
    end = len(token)
    while end > 0 and _is_punct(token[end - 1]):
        end -= 1
    start = 0
    while start < end and _is_punct(token[start]):
        start += 1
    if start == end:
        return ""
    core = token[start:end]
    if start > 0 and token[start - 1] in _MARKERS:
        return token[start - 1] + core
    return core


def tokenize(text: str, rules: TokenRules = TokenRules()) -> List[str]:
    """Split raw post text into tokens.

    Args:
        text: Raw UTF-8 text.
        rules: Tokenizer switches.

    Returns:
        The tokens in text order. An empty list is valid output.
    """
    tokens: List[str] = []
    for raw in text.split():
        token = strip_punctuation(raw)
        if not token:
            continue
        if rules.drop_urls and URL_PATTERN.match(token):
            continue
        if token.startswith("@"):
            if rules.drop_mentions:
                continue
            token = token[1:]
        if token.startswith("#") and not rules.keep_hashtags:
            token = token[1:]
        if rules.lowercase:
            token = token.lower()
        if len(token) < rules.min_token_len:
            continue
        tokens.append(token)
    return tokens
