"""The knowledge-base authoring DSL: lexer, parser, serializer, DOT export.

The format is line-oriented and keyword-driven:

    KB "general-physician" VERSION 1
    DISEASE migraine
      ENTRY "I have pain in my neck" KEYWORDS pain neck ROOT q_vomit
      NODE q_vomit ASK "Do you have vomiting too"
        ANSWER yes -> l_migraine
        ANSWER no  -> l_tension
      LEAF l_migraine SAY "..."
        MEDICINE "Bruefen" EVERY 8h FOR 3d
      LEAF l_tension SAY "..."
    END

``#`` starts a comment to end of line, strings are double-quoted with ``\"``
and ``\\`` escapes, identifiers match ``[a-z_][a-z0-9_]*`` and durations are
an integer immediately followed by ``h`` or ``d`` (days normalize to hours).
Parsing is purely syntactic and fail-fast: the first violation raises
``ParseError`` with a position; semantic problems (dangling references,
depth, ...) are validation findings, not parse errors.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .model import (
    AnswerEdge,
    EntryPoint,
    KnowledgeBase,
    LeafRecommendation,
    MedicineDirective,
    QuestionNode,
    RawDisease,
    RawKb,
)

KEYWORDS = frozenset(
    "KB VERSION DISEASE ENTRY KEYWORDS ROOT NODE ASK ANSWER LEAF SAY MEDICINE EVERY FOR END".split()
)

_IDENT_RE = re.compile(r"[a-z_][a-z0-9_]*\Z")
_INT_RE = re.compile(r"[0-9]+\Z")
_DURATION_RE = re.compile(r"([0-9]+)([hd])\Z")


@dataclass(frozen=True)
class SourcePosition:
    line: int
    column: int


class ParseError(Exception):
    """First syntax violation, rendered as ``line:col: expected X, found Y``."""

    def __init__(self, position: SourcePosition, expected: str, found: str):
        self.position = position
        self.expected = expected
        self.found = found
        super().__init__(f"{position.line}:{position.column}: expected {expected}, found {found}")


class UnknownDisease(ValueError):
    def __init__(self, disease_id: str, known: tuple[str, ...]):
        self.disease_id = disease_id
        self.known = known
        super().__init__(f"unknown disease '{disease_id}' (known: {', '.join(known)})")


@dataclass(frozen=True)
class Token:
    kind: str  # KEYWORD | IDENT | INT | DURATION | STRING | ARROW | EOF
    text: str  # raw source text (quotes included for strings)
    value: object  # decoded string / int value / hours for durations
    line: int
    col: int
    end_col: int  # one past the last source column of the token

    def describe(self) -> str:
        return "end of input" if self.kind == "EOF" else self.text


def tokenize(text: str) -> list[Token]:
    """Scan *text* into tokens. Raises ``ParseError`` on malformed input."""
    tokens: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(text)

    def advance(ch: str) -> None:
        nonlocal line, col
        if ch == "\n":
            line += 1
            col = 1
        else:
            col += 1

    while i < n:
        ch = text[i]
        if ch.isspace():
            advance(ch)
            i += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
                col += 1
            continue
        start_line, start_col, start_i = line, col, i
        if ch == '"':
            i += 1
            col += 1
            chars: list[str] = []
            closed = False
            while i < n:
                c = text[i]
                if c == "\\":
                    if i + 1 >= n:
                        break
                    esc = text[i + 1]
                    if esc not in ('"', "\\"):
                        raise ParseError(
                            SourcePosition(line, col),
                            "string escape '\\\"' or '\\\\'",
                            text[i : i + 2],
                        )
                    chars.append(esc)
                    i += 2
                    col += 2
                    continue
                if c == '"':
                    i += 1
                    col += 1
                    closed = True
                    break
                chars.append(c)
                advance(c)
                i += 1
            if not closed:
                raise ParseError(
                    SourcePosition(start_line, start_col), "closing '\"'", "end of input"
                )
            tokens.append(
                Token("STRING", text[start_i:i], "".join(chars), start_line, start_col, col)
            )
            continue
        # bare word: runs to whitespace, comment, or quote
        j = i
        while j < n and not text[j].isspace() and text[j] not in ('#', '"'):
            j += 1
        word = text[i:j]
        col += len(word)
        i = j
        if word == "->":
            tokens.append(Token("ARROW", word, word, start_line, start_col, col))
        elif word in KEYWORDS:
            tokens.append(Token("KEYWORD", word, word, start_line, start_col, col))
        elif _IDENT_RE.match(word):
            tokens.append(Token("IDENT", word, word, start_line, start_col, col))
        elif _INT_RE.match(word):
            tokens.append(Token("INT", word, int(word), start_line, start_col, col))
        elif m := _DURATION_RE.match(word):
            hours = int(m.group(1)) * (24 if m.group(2) == "d" else 1)
            tokens.append(Token("DURATION", word, hours, start_line, start_col, col))
        else:
            raise ParseError(
                SourcePosition(start_line, start_col),
                "keyword, identifier, number, duration, '->', or string",
                word,
            )
    tokens.append(Token("EOF", "", None, line, col, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def peek_kw(self, word: str) -> bool:
        t = self.peek()
        return t.kind == "KEYWORD" and t.text == word

    def take(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def fail(self, expected: str, anchored: bool) -> None:
        """Raise at the offending token.

        With ``anchored`` (mid-construct expectations), a token that begins on
        a later line than the last consumed one is reported just past that
        token instead, so a truncated line blames the line it truncates.
        """
        tok = self.peek()
        prev = self.tokens[self.pos - 1] if self.pos > 0 else None
        if anchored and prev is not None and (tok.kind == "EOF" or tok.line > prev.line):
            pos = SourcePosition(prev.line, prev.end_col)
        else:
            pos = SourcePosition(tok.line, tok.col)
        raise ParseError(pos, expected, tok.describe())

    def expect_kw(self, word: str, anchored: bool = True) -> Token:
        if not self.peek_kw(word):
            self.fail(word, anchored)
        return self.take()

    def expect(self, kind: str, expected: str) -> Token:
        if self.peek().kind != kind:
            self.fail(expected, anchored=True)
        return self.take()

    # grammar productions -------------------------------------------------

    def parse_kb(self) -> RawKb:
        self.expect_kw("KB", anchored=False)
        title = self.expect("STRING", "string")
        self.expect_kw("VERSION")
        version = self.expect("INT", "integer")
        diseases = []
        if not self.peek_kw("DISEASE"):
            self.fail("DISEASE", anchored=False)
        while self.peek_kw("DISEASE"):
            diseases.append(self.parse_disease())
        if self.peek().kind != "EOF":
            self.fail("DISEASE or end of input", anchored=False)
        return RawKb(title=str(title.value), version=int(version.value), diseases=tuple(diseases))

    def parse_disease(self) -> RawDisease:
        self.expect_kw("DISEASE", anchored=False)
        did = self.expect("IDENT", "identifier")
        entries = []
        if not self.peek_kw("ENTRY"):
            self.fail("ENTRY", anchored=False)
        while self.peek_kw("ENTRY"):
            entries.append(self.parse_entry())
        nodes = []
        while self.peek_kw("NODE"):
            nodes.append(self.parse_node())
        leaves = []
        if not self.peek_kw("LEAF"):
            self.fail("NODE or LEAF", anchored=False)
        while self.peek_kw("LEAF"):
            leaves.append(self.parse_leaf())
        self.expect_kw("END", anchored=False)
        return RawDisease(
            id=str(did.value), entries=tuple(entries), nodes=tuple(nodes), leaves=tuple(leaves)
        )

    def parse_entry(self) -> EntryPoint:
        self.expect_kw("ENTRY", anchored=False)
        complaint = self.expect("STRING", "string")
        self.expect_kw("KEYWORDS")
        keywords = [self.expect("IDENT", "identifier").text]
        while self.peek().kind == "IDENT":
            keywords.append(self.take().text)
        self.expect_kw("ROOT")
        root = self.expect("IDENT", "identifier")
        return EntryPoint(
            complaint=str(complaint.value),
            keywords=tuple(dict.fromkeys(keywords)),
            root=root.text,
        )

    def parse_node(self) -> QuestionNode:
        self.expect_kw("NODE", anchored=False)
        nid = self.expect("IDENT", "identifier")
        self.expect_kw("ASK")
        question = self.expect("STRING", "string")
        answers = [self.parse_answer()]
        while self.peek_kw("ANSWER"):
            answers.append(self.parse_answer())
        if len(answers) < 2:
            self.fail("ANSWER", anchored=False)
        return QuestionNode(id=nid.text, question=str(question.value), answers=tuple(answers))

    def parse_answer(self) -> AnswerEdge:
        self.expect_kw("ANSWER", anchored=False)
        label = self.expect("IDENT", "identifier")
        if self.peek().kind != "ARROW":
            self.fail("'->'", anchored=True)
        self.take()
        target = self.expect("IDENT", "identifier")
        return AnswerEdge(label=label.text, target=target.text)

    def parse_leaf(self) -> LeafRecommendation:
        self.expect_kw("LEAF", anchored=False)
        lid = self.expect("IDENT", "identifier")
        self.expect_kw("SAY")
        advice = self.expect("STRING", "string")
        medicines = []
        while self.peek_kw("MEDICINE"):
            self.take()
            name = self.expect("STRING", "string")
            self.expect_kw("EVERY")
            interval = self.expect("DURATION", "duration")
            self.expect_kw("FOR")
            duration = self.expect("DURATION", "duration")
            medicines.append(
                MedicineDirective(
                    name=str(name.value),
                    interval_hours=int(interval.value),
                    duration_hours=int(duration.value),
                )
            )
        return LeafRecommendation(id=lid.text, advice=str(advice.value), medicines=tuple(medicines))


def parse_kb(text: str) -> RawKb:
    """Parse DSL *text* into an unvalidated structure, declaration order kept."""
    return _Parser(tokenize(text)).parse_kb()


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def serialize_kb(kb: KnowledgeBase) -> str:
    """Emit the canonical text form of a validated knowledge base.

    Two-space indentation, answer labels padded to the widest label of their
    node, durations always in hours. Parsing the output reproduces an equal
    model (durations were already normalized to hours on the way in).
    """
    lines = [f"KB {_quote(kb.title)} VERSION {kb.version}"]
    for d in kb.diseases:
        lines.append(f"DISEASE {d.id}")
        for e in d.entries:
            kws = " ".join(e.keywords)
            lines.append(f"  ENTRY {_quote(e.complaint)} KEYWORDS {kws} ROOT {e.root}")
        for node in d.nodes.values():
            lines.append(f"  NODE {node.id} ASK {_quote(node.question)}")
            width = max(len(e.label) for e in node.answers)
            for e in node.answers:
                lines.append(f"    ANSWER {e.label:<{width}} -> {e.target}")
        for leaf in d.leaves.values():
            lines.append(f"  LEAF {leaf.id} SAY {_quote(leaf.advice)}")
            for m in leaf.medicines:
                lines.append(
                    f"    MEDICINE {_quote(m.name)} EVERY {m.interval_hours}h FOR {m.duration_hours}h"
                )
        lines.append("END")
    return "\n".join(lines) + "\n"


def _dot_label(text: str, limit: int | None = None) -> str:
    if limit is not None and len(text) > limit:
        text = text[:limit] + "…"
    return text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")


def export_dot(kb: KnowledgeBase, disease: str | None = None) -> str:
    """Render decision trees as DOT digraphs, one per selected disease.

    Question nodes are boxes, leaves are ellipses with advice truncated to 40
    characters; edges carry their answer labels. Node names are namespaced as
    ``<disease>__<node-id>`` so multiple digraphs can be concatenated.
    """
    if disease is not None and disease not in {d.id for d in kb.diseases}:
        raise UnknownDisease(disease, kb.disease_ids())
    selected = [d for d in kb.diseases if disease is None or d.id == disease]
    graphs = []
    for d in selected:
        out = [f"digraph {d.id} {{"]
        for node in d.nodes.values():
            out.append(f'  "{d.id}__{node.id}" [shape=box, label="{_dot_label(node.question)}"];')
        for leaf in d.leaves.values():
            out.append(
                f'  "{d.id}__{leaf.id}" [shape=ellipse, label="{_dot_label(leaf.advice, 40)}"];'
            )
        for node in d.nodes.values():
            for e in node.answers:
                out.append(
                    f'  "{d.id}__{node.id}" -> "{d.id}__{e.target}" [label="{_dot_label(e.label)}"];'
                )
        out.append("}")
        graphs.append("\n".join(out))
    return "\n\n".join(graphs) + "\n"
