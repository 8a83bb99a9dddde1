import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIXTURE_TEXT
from smartdoc.dsl import ParseError, UnknownDisease, export_dot, parse_kb, serialize_kb, tokenize
from smartdoc.generate import random_kb
from smartdoc.model import (
    AnswerEdge,
    EntryPoint,
    LeafRecommendation,
    QuestionNode,
    RawDisease,
    RawKb,
    load_kb,
)


class TestParse:
    def test_fixture_census(self):
        raw = parse_kb(FIXTURE_TEXT)
        assert raw.title == "general-physician" and raw.version == 1
        (d,) = raw.diseases
        assert d.id == "migraine"
        assert len(d.entries) == 1 and len(d.nodes) == 1 and len(d.leaves) == 2
        assert d.entries[0].keywords == ("pain", "neck")
        med = d.leaves[0].medicines[0]
        assert (med.name, med.interval_hours, med.duration_hours) == ("Bruefen", 8, 72)

    def test_empty_input(self):
        with pytest.raises(ParseError) as exc:
            parse_kb("")
        err = exc.value
        assert (err.position.line, err.position.column) == (1, 1)
        assert err.expected == "KB"
        assert str(err) == "1:1: expected KB, found end of input"

    def test_missing_answer_target_reports_on_that_line(self):
        lines = FIXTURE_TEXT.splitlines()
        assert lines[4].strip() == "ANSWER yes -> l_migraine"
        lines[4] = "    ANSWER yes -> "
        with pytest.raises(ParseError) as exc:
            parse_kb("\n".join(lines))
        assert exc.value.position.line == 5
        assert exc.value.expected == "identifier"

    def test_comments_and_string_escapes(self):
        text = (
            '# top comment\n'
            'KB "quoted \\"title\\" and back\\\\slash" VERSION 2  # trailing\n'
            'DISEASE d\n'
            '  ENTRY "hash # stays inside" KEYWORDS tok ROOT l1\n'
            '  LEAF l1 SAY "fine"\n'
            'END\n'
        )
        raw = parse_kb(text)
        assert raw.title == 'quoted "title" and back\\slash'
        assert raw.version == 2
        assert raw.diseases[0].entries[0].complaint == "hash # stays inside"

    def test_bad_escape_rejected(self):
        with pytest.raises(ParseError) as exc:
            parse_kb('KB "oops \\n" VERSION 1 DISEASE d ENTRY "c" KEYWORDS k ROOT l LEAF l SAY "x" END')
        assert "escape" in exc.value.expected

    def test_unterminated_string(self):
        with pytest.raises(ParseError) as exc:
            parse_kb('KB "never closed')
        assert exc.value.found == "end of input"

    def test_unknown_bare_word_rejected(self):
        for text in ("Hello", "9x", "Kb"):
            with pytest.raises(ParseError):
                parse_kb(f'KB "t" VERSION 1 DISEASE {text} ENTRY "c" KEYWORDS k ROOT l LEAF l SAY "x" END')

    def test_duration_units(self):
        text = (
            'KB "t" VERSION 1\n'
            'DISEASE d\n'
            '  ENTRY "c" KEYWORDS tok ROOT l1\n'
            '  LEAF l1 SAY "x"\n'
            '    MEDICINE "A" EVERY 12h FOR 2d\n'
            '    MEDICINE "B" EVERY 1d FOR 36h\n'
            'END\n'
        )
        (a, b) = parse_kb(text).diseases[0].leaves[0].medicines
        assert (a.interval_hours, a.duration_hours) == (12, 48)
        assert (b.interval_hours, b.duration_hours) == (24, 36)

    def test_dangling_reference_is_not_a_parse_error(self):
        text = FIXTURE_TEXT.replace("-> l_tension", "-> nowhere")
        raw = parse_kb(text)  # syntax fine; validation owns the complaint
        assert raw.diseases[0].nodes[0].answers[1].target == "nowhere"

    def test_duplicate_keywords_collapse_in_order(self):
        text = FIXTURE_TEXT.replace("KEYWORDS pain neck", "KEYWORDS pain neck pain")
        assert parse_kb(text).diseases[0].entries[0].keywords == ("pain", "neck")


class TestSerialize:
    def test_fixture_roundtrips_with_hours_normalized(self, fixture_kb):
        assert serialize_kb(fixture_kb) == FIXTURE_TEXT.replace("3d", "72h")

    def test_quote_in_advice_roundtrips(self):
        kb = load_kb(
            RawKb(
                "t",
                1,
                (
                    RawDisease(
                        "d",
                        (EntryPoint("odd feeling", ("odd",), "l1"),),
                        (),
                        (LeafRecommendation("l1", 'take "two" and\nrest \\ well'),),
                    ),
                ),
            )
        )
        text = serialize_kb(kb)
        assert '\\"two\\"' in text
        assert load_kb(parse_kb(text)) == kb

    @pytest.mark.parametrize("seed", range(40))
    def test_generated_kbs_roundtrip(self, seed):
        kb = random_kb(seed, naughty=True)
        assert load_kb(parse_kb(serialize_kb(kb))) == kb

    def test_serialized_form_is_canonical(self, clinic_kb):
        # serializing the reparse of a serialization changes nothing
        once = serialize_kb(clinic_kb)
        assert serialize_kb(load_kb(parse_kb(once))) == once


class TestPositionAccuracy:
    def test_each_required_token_deletion_blames_its_line(self):
        tokens = [t for t in tokenize(FIXTURE_TEXT) if t.kind != "EOF"]
        keyword_list = {"pain", "neck"}  # deleting one still parses: IDENT+ stays non-empty
        lines = FIXTURE_TEXT.split("\n")
        for i, tok in enumerate(tokens):
            if tok.text in keyword_list or i == len(tokens) - 1:
                continue
            mutated = lines.copy()
            row = mutated[tok.line - 1]
            mutated[tok.line - 1] = row[: tok.col - 1] + row[tok.end_col - 1 :]
            with pytest.raises(ParseError) as exc:
                parse_kb("\n".join(mutated))
            assert exc.value.position.line == tok.line, f"deleting {tok.text!r} at line {tok.line}"

    def test_optional_keyword_deletion_still_parses(self):
        for word in ("pain", "neck"):
            text = FIXTURE_TEXT.replace("KEYWORDS pain neck", f"KEYWORDS {word}")
            raw = parse_kb(text)
            assert raw.diseases[0].entries[0].keywords == (word,)


class TestFuzz:
    @settings(max_examples=300, deadline=None)
    @given(st.text(max_size=2000))
    def test_arbitrary_text_never_crashes(self, text):
        try:
            parse_kb(text)
        except ParseError:
            pass

    @settings(max_examples=300, deadline=None)
    @given(st.text(alphabet='KB VERSION DISEASE"\\#\n->kw 0123hd_', max_size=400))
    def test_grammar_shaped_soup_never_crashes(self, text):
        try:
            parse_kb(text)
        except ParseError:
            pass

    def test_megabyte_of_noise(self):
        rng = random.Random(7)
        noise = "".join(chr(rng.randrange(32, 0x2FF)) for _ in range(1 << 20))
        with pytest.raises(ParseError):
            parse_kb(noise)


class TestExportDot:
    def test_migraine_digraph_census(self, fixture_kb):
        dot = export_dot(fixture_kb, "migraine")
        assert dot.count("[shape=box") == 1
        assert dot.count("[shape=ellipse") == 2
        assert dot.count("->") == 2
        assert '[label="yes"]' in dot and '[label="no"]' in dot
        assert '"migraine__q_vomit"' in dot

    def test_advice_is_truncated_at_forty_chars(self, fixture_kb):
        dot = export_dot(fixture_kb, "migraine")
        advice = fixture_kb.disease("migraine").leaves["l_migraine"].advice
        assert advice[:40] + "\u2026" in dot
        assert advice not in dot

    def test_single_leaf_digraph(self):
        kb = load_kb(
            RawKb(
                "t",
                1,
                (
                    RawDisease(
                        "solo",
                        (EntryPoint("odd", ("odd",), "l1"),),
                        (),
                        (LeafRecommendation("l1", "just rest"),),
                    ),
                ),
            )
        )
        dot = export_dot(kb)
        assert dot.count("[shape=ellipse") == 1
        assert "->" not in dot

    def test_all_diseases_in_declaration_order(self, clinic_kb):
        dot = export_dot(clinic_kb)
        order = [dot.index(f"digraph {d}") for d in ("migraine", "stomach_infection", "throat_infection")]
        assert order == sorted(order)

    def test_unknown_disease_names_known_ids(self, clinic_kb):
        with pytest.raises(UnknownDisease) as exc:
            export_dot(clinic_kb, "nope")
        assert "migraine" in str(exc.value)
