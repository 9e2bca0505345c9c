"""Shared token-count estimation used for prompt and chunk budgets."""

from __future__ import annotations


def estimate_tokens(text: str) -> int:
    """Estimate the token count of a text as ceil(len / 4).

    Deliberately tokenizer-free: the estimate only has to be stable and
    conservative enough to enforce budgets.
    """
    return (len(text) + 3) // 4
