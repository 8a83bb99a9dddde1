"""Complaint-to-entry-point matching.

Free text like "I have pain in my neck" is normalized into tokens, looked up
in a postings index built from every entry point's keywords, and scored by the
number of distinct keywords hit. No stemming, no synonyms: ranking is meant to
be predictable enough to hand-check.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .model import KnowledgeBase

# Tokens dropped during normalization; keywords may not use these either.
STOPWORDS = frozenset(
    "i have a an the my in got do you too is it me and".split()
)

# word characters minus underscore: everything else separates tokens
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def normalize(text: str) -> list[str]:
    """Lowercase, split on non-alphanumerics, drop stopwords, keep duplicates."""
    return [t for t in _TOKEN_RE.findall(text.lower()) if t not in STOPWORDS]


@dataclass(frozen=True)
class MatchCandidate:
    """One scored entry point; ``score`` counts distinct matched keywords."""

    disease: str
    entry: int
    score: int
    matched: frozenset[str]


@dataclass(frozen=True)
class ComplaintIndex:
    """Immutable token -> {(disease id, entry ordinal)} postings."""

    postings: dict[str, frozenset[tuple[str, int]]]


def build_index(kb: KnowledgeBase) -> ComplaintIndex:
    postings: dict[str, set[tuple[str, int]]] = {}
    for disease in kb.diseases:
        for ordinal, entry in enumerate(disease.entries):
            for kw in entry.keywords:
                postings.setdefault(kw, set()).add((disease.id, ordinal))
    return ComplaintIndex({tok: frozenset(refs) for tok, refs in postings.items()})


def match_complaint(index: ComplaintIndex, text: str) -> list[MatchCandidate]:
    """Every entry with at least one matched keyword, best first.

    Ordering: score descending, then disease id ascending, then entry ordinal
    ascending. An empty list means no match and is a value, not an error.
    """
    hits: dict[tuple[str, int], set[str]] = {}
    for token in set(normalize(text)):
        for ref in index.postings.get(token, ()):
            hits.setdefault(ref, set()).add(token)
    candidates = [
        MatchCandidate(disease=d, entry=e, score=len(toks), matched=frozenset(toks))
        for (d, e), toks in hits.items()
    ]
    candidates.sort(key=lambda c: (-c.score, c.disease, c.entry))
    return candidates
