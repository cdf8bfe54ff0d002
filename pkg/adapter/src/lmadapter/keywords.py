"""Keyword scoring for generated outputs.

Independent implementation of the scoring rule the dataset tooling uses:
a generation counts for a category only when it contains exactly one
distinct category surface form as a whole hyphen-aware token. Parity with
the dataset tool's `eval` subcommand is pinned by test.
"""

from __future__ import annotations

SURFACE_FORMS = ("at-risk", "prone-to-risk", "average", "outstanding")

NO_MATCH = "no_match"
AMBIGUOUS = "ambiguous"


def word_tokens(text: str) -> list[str]:
    """Whitespace chunks with leading/trailing punctuation split off;
    internal hyphens stay inside the token."""
    tokens: list[str] = []
    for chunk in text.split():
        head, tail = 0, len(chunk)
        lead: list[str] = []
        while head < tail and not chunk[head].isalnum():
            lead.append(chunk[head])
            head += 1
        trail: list[str] = []
        while tail > head and not chunk[tail - 1].isalnum():
            trail.append(chunk[tail - 1])
            tail -= 1
        tokens.extend(lead)
        if tail > head:
            tokens.append(chunk[head:tail])
        tokens.extend(reversed(trail))
    return tokens


def keyword_label(generated: str) -> str:
    """The matched surface form, or no_match / ambiguous."""
    found = {t.lower() for t in word_tokens(generated)} & set(SURFACE_FORMS)
    if len(found) == 1:
        return next(iter(found))
    return NO_MATCH if not found else AMBIGUOUS


def keyword_accuracy(generated: list[str], labels: list[str]) -> float:
    """Fraction of generations whose matched keyword equals the label."""
    if len(generated) != len(labels):
        raise ValueError("generated and labels must have equal length")
    if not generated:
        raise ValueError("nothing to score")
    hits = sum(1 for g, lab in zip(generated, labels) if keyword_label(g) == lab)
    return hits / len(generated)
