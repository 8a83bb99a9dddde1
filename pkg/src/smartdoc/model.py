"""In-memory knowledge base model: disease decision trees plus validation.

A knowledge base is a list of diseases, each carrying entry points (complaint
phrases with keywords), internal question nodes with labeled answer edges, and
leaf recommendations. ``validate_kb`` lints a raw (unvalidated) structure and
``load_kb`` promotes it to a ``KnowledgeBase`` once it is free of errors.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from .matching import STOPWORDS

IDENT_RE = re.compile(r"[a-z_][a-z0-9_]*\Z")

DEFAULT_MAX_DEPTH = 7


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"
    INFO = "info"


@dataclass(frozen=True)
class Finding:
    """One validation result, pinned to a disease and optionally a node id."""

    severity: Severity
    code: str
    disease: str | None
    node: str | None
    message: str

    def render(self) -> str:
        loc = self.disease if self.disease is not None else "-"
        if self.node is not None:
            loc = f"{loc}/{self.node}"
        return f"{self.severity.name} {self.code} {loc} {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...]

    @property
    def errors(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.severity is Severity.ERROR)

    @property
    def warnings(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.severity is Severity.WARNING)

    def ok(self) -> bool:
        return not self.errors


class KbValidationError(Exception):
    """Raised when loading a raw knowledge base that has error findings."""

    def __init__(self, report: ValidationReport):
        self.report = report
        lines = [f.render() for f in report.errors]
        super().__init__("knowledge base failed validation:\n" + "\n".join(lines))


@dataclass(frozen=True)
class MedicineDirective:
    """A prescription line: take *name* every *interval_hours* for *duration_hours*.

    A duration shorter than the interval still yields the opening dose, so
    ``interval_hours <= duration_hours`` is not required.
    """

    name: str
    interval_hours: int
    duration_hours: int


@dataclass(frozen=True)
class AnswerEdge:
    label: str
    target: str


@dataclass(frozen=True)
class QuestionNode:
    id: str
    question: str
    answers: tuple[AnswerEdge, ...]

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(e.label for e in self.answers)


@dataclass(frozen=True)
class LeafRecommendation:
    id: str
    advice: str
    medicines: tuple[MedicineDirective, ...] = ()


@dataclass(frozen=True)
class EntryPoint:
    """Maps a canonical complaint phrase onto a tree root via keywords."""

    complaint: str
    keywords: tuple[str, ...]
    root: str


@dataclass(frozen=True)
class RawDisease:
    """Parser/builder output before validation; duplicates are representable."""

    id: str
    entries: tuple[EntryPoint, ...]
    nodes: tuple[QuestionNode, ...]
    leaves: tuple[LeafRecommendation, ...]


@dataclass(frozen=True)
class RawKb:
    title: str
    version: int
    diseases: tuple[RawDisease, ...]


@dataclass(frozen=True)
class Disease:
    """A validated per-disease decision tree. Node and leaf ids share one namespace."""

    id: str
    entries: tuple[EntryPoint, ...]
    nodes: dict[str, QuestionNode]
    leaves: dict[str, LeafRecommendation]

    def is_leaf(self, node_id: str) -> bool:
        return node_id in self.leaves


@dataclass(frozen=True)
class KnowledgeBase:
    """Validated, immutable knowledge base. Build via ``load_kb``; safe to share
    across threads and concurrent sessions."""

    title: str
    version: int
    diseases: tuple[Disease, ...]
    _by_id: dict[str, Disease] = field(repr=False, compare=False, default_factory=dict)

    def disease(self, disease_id: str) -> Disease:
        return self._by_id[disease_id]

    def disease_ids(self) -> tuple[str, ...]:
        return tuple(d.id for d in self.diseases)


@dataclass(frozen=True)
class TreeStats:
    nodes: int
    leaves: int
    entries: int
    max_depth: int
    min_depth: int


def _first_occurrence(items, key):
    seen = {}
    for item in items:
        seen.setdefault(key(item), item)
    return seen


def _max_question_depth(nodes: dict[str, QuestionNode], leaf_ids: set[str], root: str) -> int:
    """Longest root-to-leaf path measured in question nodes, via iterative DFS.

    Back edges and dangling targets are skipped so the walk terminates even on
    structures that also carry CYCLE or DANGLING_REF findings.
    """
    if root in leaf_ids:
        return 0
    if root not in nodes:
        return 0
    memo: dict[str, int] = {}
    on_path: set[str] = set()
    stack: list[tuple[str, bool]] = [(root, False)]
    while stack:
        nid, expanded = stack.pop()
        if expanded:
            on_path.discard(nid)
            best = 0
            for edge in nodes[nid].answers:
                t = edge.target
                if t in leaf_ids:
                    best = max(best, 0)
                elif t in memo:
                    best = max(best, memo[t])
            memo[nid] = 1 + best
            continue
        if nid in memo or nid in on_path:
            continue
        on_path.add(nid)
        stack.append((nid, True))
        for edge in nodes[nid].answers:
            t = edge.target
            if t in nodes and t not in memo and t not in on_path:
                stack.append((t, False))
    return memo.get(root, 0)


def _min_question_depth(nodes: dict[str, QuestionNode], leaf_ids: set[str], root: str) -> int:
    """Shortest root-to-leaf path in question nodes (BFS)."""
    if root in leaf_ids:
        return 0
    frontier = [root]
    depth = 0
    seen = {root}
    while frontier:
        depth += 1
        nxt = []
        for nid in frontier:
            for edge in nodes[nid].answers:
                t = edge.target
                if t in leaf_ids:
                    return depth
                if t in nodes and t not in seen:
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
    return depth


def validate_kb(raw: RawKb, max_depth: int = DEFAULT_MAX_DEPTH) -> ValidationReport:
    """Lint a raw knowledge base and return every finding.

    All problems are findings, never exceptions. A report with zero
    error-severity findings denotes a loadable knowledge base. The findings
    list is deterministic: ordered by disease declaration order, then node id.
    """
    found: list[tuple[int, str, Finding]] = []

    def add(dix: int, severity: Severity, code: str, disease: str | None,
            node: str | None, message: str) -> None:
        found.append((dix, node or "", Finding(severity, code, disease, node, message)))

    if raw.version < 1:
        add(-1, Severity.ERROR, "BAD_VERSION", None, None,
            f"version must be a positive integer, got {raw.version}")

    seen_disease_ids: set[str] = set()
    for dix, disease in enumerate(raw.diseases):
        did = disease.id
        if did in seen_disease_ids:
            add(dix, Severity.ERROR, "DUP_ID", did, None, f"duplicate disease id '{did}'")
        seen_disease_ids.add(did)
        if not IDENT_RE.match(did):
            add(dix, Severity.ERROR, "BAD_ID", did, None,
                f"disease id '{did}' is not lowercase snake case")

        nodes = _first_occurrence(disease.nodes, lambda n: n.id)
        leaves = _first_occurrence(disease.leaves, lambda l: l.id)
        all_ids = set(nodes) | set(leaves)

        # id namespace is shared between nodes and leaves
        seen_ids: set[str] = set()
        for nid in [n.id for n in disease.nodes] + [l.id for l in disease.leaves]:
            if nid in seen_ids:
                add(dix, Severity.ERROR, "DUP_ID", did, nid, f"duplicate id '{nid}'")
            seen_ids.add(nid)
            if not IDENT_RE.match(nid):
                add(dix, Severity.ERROR, "BAD_ID", did, nid,
                    f"id '{nid}' is not lowercase snake case")

        if not disease.entries:
            add(dix, Severity.ERROR, "NO_ENTRY", did, None, "disease has no entry points")
        for eix, entry in enumerate(disease.entries):
            if not entry.keywords:
                add(dix, Severity.ERROR, "BAD_KEYWORD", did, None,
                    f"entry {eix} has no keywords")
            for kw in entry.keywords:
                if not kw or kw != kw.lower() or any(c.isspace() for c in kw):
                    add(dix, Severity.ERROR, "BAD_KEYWORD", did, None,
                        f"entry {eix} keyword '{kw}' must be a lowercase token without whitespace")
                elif kw in STOPWORDS:
                    add(dix, Severity.ERROR, "BAD_KEYWORD", did, None,
                        f"entry {eix} keyword '{kw}' is a stopword and can never match")
            if entry.root not in all_ids:
                add(dix, Severity.ERROR, "DANGLING_REF", did, None,
                    f"entry {eix} root '{entry.root}' does not exist")

        for node in nodes.values():
            if not node.question.strip():
                add(dix, Severity.ERROR, "EMPTY_QUESTION", did, node.id,
                    f"question '{node.id}' has empty text")
            if len(node.answers) < 2:
                add(dix, Severity.ERROR, "FEW_ANSWERS", did, node.id,
                    f"question '{node.id}' has {len(node.answers)} answer(s), minimum is 2")
            seen_labels: set[str] = set()
            for edge in node.answers:
                if edge.label in seen_labels:
                    add(dix, Severity.ERROR, "DUP_LABEL", did, node.id,
                        f"question '{node.id}' repeats answer label '{edge.label}'")
                seen_labels.add(edge.label)
                if not IDENT_RE.match(edge.label):
                    add(dix, Severity.ERROR, "BAD_ID", did, node.id,
                        f"answer label '{edge.label}' is not lowercase snake case")
                if edge.target not in all_ids:
                    add(dix, Severity.ERROR, "DANGLING_REF", did, node.id,
                        f"answer '{edge.label}' targets '{edge.target}' which does not exist")

        for leaf in leaves.values():
            if not leaf.advice.strip():
                add(dix, Severity.ERROR, "EMPTY_ADVICE", did, leaf.id,
                    f"leaf '{leaf.id}' has empty advice")
            for med in leaf.medicines:
                if med.interval_hours < 1 or med.duration_hours < 1:
                    add(dix, Severity.ERROR, "BAD_DURATION", did, leaf.id,
                        f"medicine '{med.name}' needs interval and duration of at least 1 hour")

        # edge census: non-roots must have exactly one parent
        inbound: dict[str, int] = {}
        for node in nodes.values():
            for edge in node.answers:
                if edge.target in all_ids:
                    inbound[edge.target] = inbound.get(edge.target, 0) + 1
        for target in sorted(inbound):
            if inbound[target] > 1:
                add(dix, Severity.ERROR, "MULTI_PARENT", did, target,
                    f"'{target}' has {inbound[target]} inbound edges")

        # cycle detection: three-color DFS over every question node
        color: dict[str, int] = {}  # 0/absent=white, 1=gray, 2=black
        for start in sorted(nodes):
            if color.get(start):
                continue
            stack: list[tuple[str, bool]] = [(start, False)]
            while stack:
                nid, expanded = stack.pop()
                if expanded:
                    color[nid] = 2
                    continue
                if color.get(nid) == 2:
                    continue
                color[nid] = 1
                stack.append((nid, True))
                for edge in nodes[nid].answers:
                    t = edge.target
                    if t not in nodes:
                        continue
                    if color.get(t) == 1:
                        add(dix, Severity.ERROR, "CYCLE", did, t,
                            f"cycle through '{t}' via edge from '{nid}'")
                    elif not color.get(t):
                        stack.append((t, False))

        # reachability from entry roots
        roots = [e.root for e in disease.entries if e.root in all_ids]
        reached: set[str] = set()
        frontier = [r for r in roots if r not in reached]
        reached.update(frontier)
        while frontier:
            nxt = []
            for nid in frontier:
                if nid in nodes:
                    for edge in nodes[nid].answers:
                        if edge.target in all_ids and edge.target not in reached:
                            reached.add(edge.target)
                            nxt.append(edge.target)
            frontier = nxt
        for nid in sorted(all_ids - reached):
            add(dix, Severity.WARNING, "UNREACHABLE_NODE", did, nid,
                f"'{nid}' is not reachable from any entry point")

        depth = max((_max_question_depth(nodes, set(leaves), r) for r in roots), default=0)
        if depth > max_depth:
            add(dix, Severity.ERROR, "DEPTH_EXCEEDED", did, None,
                f"max question depth {depth} exceeds limit {max_depth}")
        add(dix, Severity.INFO, "DEPTH_REPORT", did, None, f"max question depth {depth}")

    found.sort(key=lambda item: (item[0], item[1]))
    return ValidationReport(tuple(f for _, _, f in found))


def load_kb(raw: RawKb, max_depth: int = DEFAULT_MAX_DEPTH) -> KnowledgeBase:
    """Validate *raw* and return the immutable knowledge base.

    Raises ``KbValidationError`` when the report carries any error finding;
    warnings do not block loading.
    """
    report = validate_kb(raw, max_depth)
    if not report.ok():
        raise KbValidationError(report)
    diseases = tuple(
        Disease(
            id=d.id,
            entries=d.entries,
            nodes={n.id: n for n in d.nodes},
            leaves={l.id: l for l in d.leaves},
        )
        for d in raw.diseases
    )
    return KnowledgeBase(
        title=raw.title,
        version=raw.version,
        diseases=diseases,
        _by_id={d.id: d for d in diseases},
    )


def tree_stats(kb: KnowledgeBase) -> dict[str, TreeStats]:
    """Per-disease census, keyed by disease id in declaration order."""
    stats: dict[str, TreeStats] = {}
    for d in kb.diseases:
        leaf_ids = set(d.leaves)
        roots = [e.root for e in d.entries]
        stats[d.id] = TreeStats(
            nodes=len(d.nodes),
            leaves=len(d.leaves),
            entries=len(d.entries),
            max_depth=max((_max_question_depth(d.nodes, leaf_ids, r) for r in roots), default=0),
            min_depth=min((_min_question_depth(d.nodes, leaf_ids, r) for r in roots), default=0),
        )
    return stats
