"""Seeded random knowledge-base generation for tests and benchmarks.

Each disease tree is grown around a spine that pins its max question depth
exactly; off-spine branches stay shallow and a leaf budget caps total size,
so exhaustively enumerating every answer path stays cheap. Every entry gets
globally unique keywords, which makes feeding an entry's own complaint back
into the matcher select that entry deterministically.
"""

from __future__ import annotations

import itertools
import random

from .model import (
    AnswerEdge,
    EntryPoint,
    KnowledgeBase,
    LeafRecommendation,
    MedicineDirective,
    QuestionNode,
    RawDisease,
    RawKb,
    load_kb,
)

# Sprinkled into display strings to stress quoting, comments-in-strings,
# newlines-in-strings and non-ASCII on the serializer round trip.
_SPICE = (
    'she said "twice"',
    "back\\slash",
    "hash # not a comment",
    "café ümläut",
    "two\nlines",
)


def _text(rng: random.Random, stem: str, n: int, naughty: bool) -> str:
    base = f"{stem} {n}"
    if naughty and rng.random() < 0.3:
        return f"{base} {rng.choice(_SPICE)}"
    return base


def _grow_disease(
    rng: random.Random,
    disease_id: str,
    target_depth: int,
    branching: tuple[int, int],
    leaf_budget: int,
    keyword_seq: "itertools.count[int]",
    naughty: bool,
) -> RawDisease:
    nodes: list[QuestionNode] = []
    leaves: list[LeafRecommendation] = []
    q_n = 0
    l_n = 0
    med_n = 0
    budget = leaf_budget

    def make_leaf() -> str:
        nonlocal l_n, med_n, budget
        l_n += 1
        budget -= 1
        meds = []
        for _ in range(rng.randint(0, 2)):
            med_n += 1
            meds.append(
                MedicineDirective(
                    name=_text(rng, "Med", med_n, naughty),
                    interval_hours=rng.randint(1, 12),
                    duration_hours=rng.randint(1, 72),
                )
            )
        leaves.append(
            LeafRecommendation(f"l{l_n}", _text(rng, "Advice", l_n, naughty), tuple(meds))
        )
        return f"l{l_n}"

    def grow(depth: int) -> str:
        # depth = exact max question depth of the subtree rooted here
        nonlocal q_n
        if depth <= 0:
            return make_leaf()
        q_n += 1
        nid = f"q{q_n}"
        fanout = rng.randint(*branching)
        child_depths = [depth - 1]
        for _ in range(fanout - 1):
            if budget > 0 and depth > 1:
                child_depths.append(rng.randint(0, min(depth - 1, 2)))
            else:
                child_depths.append(0)
        rng.shuffle(child_depths)
        if fanout == 2 and rng.random() < 0.7:
            labels = ["yes", "no"]
        else:
            labels = [f"opt{i}" for i in range(1, fanout + 1)]
        edges = tuple(AnswerEdge(lab, grow(d)) for lab, d in zip(labels, child_depths))
        nodes.append(QuestionNode(nid, _text(rng, "Question", q_n, naughty), edges))
        return nid

    root = grow(target_depth)
    entries = []
    for _ in range(rng.randint(1, 2)):
        keywords = tuple(f"kw{next(keyword_seq)}" for _ in range(rng.randint(1, 3)))
        complaint = "I have " + " and ".join(keywords)
        if naughty and rng.random() < 0.3:
            complaint += ", badly"
        entries.append(EntryPoint(complaint=complaint, keywords=keywords, root=root))
    return RawDisease(
        id=disease_id, entries=tuple(entries), nodes=tuple(nodes), leaves=tuple(leaves)
    )


def random_raw_kb(
    rng: random.Random,
    diseases: tuple[int, int] = (1, 3),
    branching: tuple[int, int] = (2, 4),
    depth: tuple[int, int] = (1, 7),
    leaf_budget: int = 30,
    naughty: bool = False,
) -> RawKb:
    """A random unvalidated KB; every disease's max depth falls in *depth*."""
    keyword_seq = itertools.count(1)
    grown = []
    for i in range(rng.randint(*diseases)):
        grown.append(
            _grow_disease(
                rng,
                disease_id=f"d{i:02d}",
                target_depth=rng.randint(*depth),
                branching=branching,
                leaf_budget=leaf_budget,
                keyword_seq=keyword_seq,
                naughty=naughty,
            )
        )
    title = _text(rng, "generated kb", rng.randint(1, 999), naughty)
    return RawKb(title=title, version=1, diseases=tuple(grown))


def random_kb(seed: int | random.Random, **kwargs) -> KnowledgeBase:
    """Validated random KB from a seed (or an already-seeded generator)."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    return load_kb(random_raw_kb(rng, **kwargs))
