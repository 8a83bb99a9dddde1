"""Command-line front end: validate, chat, dot, simulate, serve.

Exit codes: 0 success, 1 validation errors (validate only), 2 operational
failure (unreadable file, parse failure, invalid KB, unknown disease,
unbindable port). Findings and reports go to stdout, failures to stderr.
"""

from __future__ import annotations

import argparse
import logging
import os
import random
import socket
import sys
from datetime import datetime, timezone
from typing import Callable, TextIO

from . import codec
from .dsl import ParseError, UnknownDisease, export_dot, parse_kb
from .engine import InvalidAnswer, NoMatch, Question, answer, start_session
from .matching import build_index
from .model import DEFAULT_MAX_DEPTH, KbValidationError, KnowledgeBase, load_kb, validate_kb
from .reminders import build_plan
from .store import SessionRecord, SessionStore

DEFAULT_DATA_DIR = "./smartdoc_data"


class _Fail(Exception):
    """Operational failure: message goes to stderr, code becomes the exit code."""

    def __init__(self, message: str, code: int = 2):
        self.message = message
        self.code = code
        super().__init__(message)


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise _Fail(f"cannot read {path}: {exc}") from exc


def _load_file(path: str, max_depth: int = DEFAULT_MAX_DEPTH) -> KnowledgeBase:
    text = _read_text(path)
    try:
        raw = parse_kb(text)
    except ParseError as exc:
        raise _Fail(f"{path}: {exc}") from exc
    try:
        return load_kb(raw, max_depth)
    except KbValidationError as exc:
        lines = "\n".join(f.render() for f in exc.report.errors)
        raise _Fail(f"{path} failed validation:\n{lines}") from exc


def cmd_validate(args: argparse.Namespace) -> int:
    text = _read_text(args.kb)
    try:
        raw = parse_kb(text)
    except ParseError as exc:
        raise _Fail(f"{args.kb}: {exc}") from exc
    report = validate_kb(raw, args.max_depth)
    for finding in report.findings:
        print(finding.render())
    return 0 if report.ok() else 1


def run_chat(
    kb: KnowledgeBase,
    in_stream: TextIO,
    out_stream: TextIO,
    store: SessionStore,
    clock: Callable[[], datetime] | None = None,
) -> int:
    """The interactive loop, stream-parameterized so tests can drive it."""
    tick = clock or (lambda: datetime.now(timezone.utc))
    index = build_index(kb)

    def say(line: str = "") -> None:
        out_stream.write(line + "\n")

    def ask(prompt: str) -> str | None:
        out_stream.write(prompt)
        out_stream.flush()
        line = in_stream.readline()
        return None if line == "" else line.strip()

    say(f"{kb.title} (KB version {kb.version}). Describe your complaint; ctrl-d quits.")
    while True:
        complaint = ask("complaint> ")
        if complaint is None:
            say()
            return 0
        if not complaint:
            continue
        try:
            session, prompt = start_session(kb, index, complaint, now=tick())
        except NoMatch:
            say("no match; try describing one main symptom in other words")
            continue
        while isinstance(prompt, Question):
            say(prompt.text)
            for i, label in enumerate(prompt.answers, start=1):
                say(f"  {i}. {label}")
            reply = ask("answer> ")
            if reply is None:
                say()
                return 0
            if not reply:
                continue
            label = reply
            if reply.isdigit() and 1 <= int(reply) <= len(prompt.answers):
                label = prompt.answers[int(reply) - 1]
            try:
                prompt = answer(kb, session, label, now=tick())
            except InvalidAnswer:
                say(f"please answer with a number 1-{len(prompt.answers)} or a listed label")
        say(prompt.advice)
        plan = build_plan(
            prompt.medicines, start=codec.utc_second(tick()), session_id=session.session_id
        )
        for dose in plan.doses[:3]:
            say(f"  take {dose.medicine} at {codec.ts_to_str(dose.due)}")
        store.save(SessionRecord(session=session, plan=plan))
        say(f"saved session {session.session_id}")


def cmd_chat(args: argparse.Namespace) -> int:
    kb = _load_file(args.kb)
    try:
        store = SessionStore(args.data_dir)
    except OSError as exc:
        raise _Fail(f"cannot use data dir {args.data_dir}: {exc}") from exc
    return run_chat(kb, sys.stdin, sys.stdout, store)


def cmd_dot(args: argparse.Namespace) -> int:
    kb = _load_file(args.kb)
    try:
        sys.stdout.write(export_dot(kb, args.disease))
    except UnknownDisease as exc:
        raise _Fail(str(exc)) from exc
    return 0


def simulate_report(kb: KnowledgeBase, sessions: int, seed: int) -> str:
    """Random-walk *sessions* dialogues and summarize; pure in (kb, N, S)."""
    rng = random.Random(seed)
    entries = [(d, e) for d in kb.diseases for e in d.entries]
    depth_hist: dict[int, int] = {}
    reached: dict[str, set[str]] = {d.id: set() for d in kb.diseases}
    for _ in range(sessions):
        disease, entry = entries[rng.randrange(len(entries))]
        cursor = entry.root
        depth = 0
        while not disease.is_leaf(cursor):
            node = disease.nodes[cursor]
            cursor = node.answers[rng.randrange(len(node.answers))].target
            depth += 1
        depth_hist[depth] = depth_hist.get(depth, 0) + 1
        reached[disease.id].add(cursor)
    lines = [f"sessions: {sessions}", "depth histogram:"]
    for d in sorted(depth_hist):
        lines.append(f"  depth {d}: {depth_hist[d]}")
    lines.append("leaf coverage:")
    for disease in kb.diseases:
        total = len(disease.leaves)
        hit = len(reached[disease.id])
        pct = 100.0 * hit / total if total else 100.0
        lines.append(f"  {disease.id}: {hit}/{total} ({pct:.1f}%)")
    return "\n".join(lines) + "\n"


def cmd_simulate(args: argparse.Namespace) -> int:
    kb = _load_file(args.kb)
    sys.stdout.write(simulate_report(kb, args.sessions, args.seed))
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    from .api import create_app  # defer: pulls in the web stack

    import uvicorn

    kb = _load_file(args.kb)
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((args.host, args.port))
    except OSError as exc:
        raise _Fail(f"cannot bind {args.host}:{args.port}: {exc}") from exc
    finally:
        probe.close()
    try:
        store = SessionStore(args.data_dir)
    except OSError as exc:
        raise _Fail(f"cannot use data dir {args.data_dir}: {exc}") from exc
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(name)s %(message)s")
    app = create_app(kb, store=store, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smartdoc",
        description="Decision-tree triage dialogues over a disease knowledge base.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    data_dir_default = os.environ.get("SMARTDOC_DATA_DIR", DEFAULT_DATA_DIR)

    p = sub.add_parser("validate", help="lint a KB file and print findings")
    p.add_argument("kb")
    p.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("chat", help="interactive triage dialogue in the terminal")
    p.add_argument("kb")
    p.add_argument("--data-dir", default=data_dir_default)
    p.set_defaults(func=cmd_chat)

    p = sub.add_parser("dot", help="export decision trees as DOT digraphs")
    p.add_argument("kb")
    p.add_argument("--disease")
    p.set_defaults(func=cmd_dot)

    p = sub.add_parser("simulate", help="run seeded random dialogues and report coverage")
    p.add_argument("kb")
    p.add_argument("--sessions", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("kb")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8844)
    p.add_argument("--data-dir", default=data_dir_default)
    p.add_argument("--ui-dir", help="serve a static chat client from this directory")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Fail as exc:
        print(exc.message, file=sys.stderr)
        return exc.code
    except KeyboardInterrupt:
        return 0


def entrypoint() -> None:
    sys.exit(main())
