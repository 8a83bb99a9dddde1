"""smartdoc: a triage-dialogue engine over disease decision trees.

Load a knowledge base written in the authoring DSL, match a free-text
complaint to an entry point, walk the question tree one answer at a time,
and turn the final recommendation into a medicine reminder timetable.
"""

from .dsl import ParseError, parse_kb, serialize_kb
from .engine import (
    InvalidAnswer,
    NoMatch,
    Question,
    Recommendation,
    SessionCompleted,
    replay,
    start_session,
)
from .matching import build_index, match_complaint, normalize
from .model import (
    KbValidationError,
    KnowledgeBase,
    load_kb,
    tree_stats,
    validate_kb,
)
from .reminders import acknowledge, build_plan, due_reminders

__version__ = "0.1.0"

__all__ = [
    "InvalidAnswer",
    "KbValidationError",
    "KnowledgeBase",
    "NoMatch",
    "ParseError",
    "Question",
    "Recommendation",
    "SessionCompleted",
    "acknowledge",
    "build_index",
    "build_plan",
    "due_reminders",
    "load_kb",
    "match_complaint",
    "normalize",
    "parse_kb",
    "replay",
    "serialize_kb",
    "start_session",
    "tree_stats",
    "validate_kb",
]
