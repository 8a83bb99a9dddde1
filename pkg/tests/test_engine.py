import random
from datetime import datetime, timedelta, timezone

import pytest

from oracles import iter_leaf_paths
from smartdoc.engine import (
    InvalidAnswer,
    NoMatch,
    Question,
    Recommendation,
    SessionCompleted,
    SessionState,
    TooManyAnswers,
    answer,
    current_prompt,
    replay,
    start_session,
)
from smartdoc.generate import random_kb
from smartdoc.matching import build_index

T0 = datetime(2026, 3, 14, 9, 26, 53, tzinfo=timezone.utc)


@pytest.fixture(scope="module")
def clinic_index(clinic_kb):
    return build_index(clinic_kb)


@pytest.fixture(scope="module")
def shipped_index(shipped_kb):
    return build_index(shipped_kb)


class TestStartSession:
    def test_first_prompt_is_the_root_question(self, clinic_kb, clinic_index):
        session, prompt = start_session(clinic_kb, clinic_index, "I have pain in my neck", now=T0)
        assert prompt == Question("q_vomit", "Do you have vomiting too", ("yes", "no"))
        assert session.disease == "migraine"
        assert session.cursor == "q_vomit"
        assert session.state is SessionState.ACTIVE
        assert session.transcript.complaint == "I have pain in my neck"
        assert session.transcript.steps == []
        assert session.started_at == T0

    def test_session_id_generated_or_honored(self, clinic_kb, clinic_index):
        s1, _ = start_session(clinic_kb, clinic_index, "sore throat", now=T0)
        s2, _ = start_session(clinic_kb, clinic_index, "sore throat", now=T0)
        assert len(s1.session_id) == 32 and s1.session_id != s2.session_id
        s3, _ = start_session(clinic_kb, clinic_index, "sore throat", now=T0, session_id="abc")
        assert s3.session_id == "abc"

    def test_leaf_root_completes_immediately(self, shipped_kb, shipped_index):
        session, prompt = start_session(shipped_kb, shipped_index, "I have got hiccups", now=T0)
        assert isinstance(prompt, Recommendation)
        assert session.state is SessionState.COMPLETED
        assert session.transcript.steps == []

    def test_no_match_carries_tokens(self, clinic_kb, clinic_index):
        with pytest.raises(NoMatch) as exc:
            start_session(clinic_kb, clinic_index, "I have a broken toe", now=T0)
        assert exc.value.tokens == ["broken", "toe"]

    def test_start_timestamp_is_truncated_utc(self, clinic_kb, clinic_index):
        ragged = datetime(2026, 3, 14, 10, 26, 53, 999999, tzinfo=timezone(timedelta(hours=1)))
        session, _ = start_session(clinic_kb, clinic_index, "pain", now=ragged)
        assert session.started_at == datetime(2026, 3, 14, 9, 26, 53, tzinfo=timezone.utc)


class TestAnswer:
    def test_yes_path_reaches_the_migraine_leaf(self, clinic_kb, clinic_index):
        session, _ = start_session(clinic_kb, clinic_index, "I have pain in my neck", now=T0)
        prompt = answer(clinic_kb, session, "yes", now=T0 + timedelta(seconds=30))
        assert isinstance(prompt, Recommendation)
        assert prompt.leaf_id == "l_migraine"
        assert prompt.advice.startswith("You have migraine pain")
        (med,) = prompt.medicines
        assert (med.name, med.interval_hours, med.duration_hours) == ("Bruefen", 8, 72)
        assert session.state is SessionState.COMPLETED
        (step,) = session.transcript.steps
        assert (step.node, step.question, step.answer) == ("q_vomit", "Do you have vomiting too", "yes")
        assert step.answered_at == T0 + timedelta(seconds=30)

    def test_invalid_answer_leaves_session_untouched(self, clinic_kb, clinic_index):
        session, _ = start_session(clinic_kb, clinic_index, "I have pain in my neck", now=T0)
        before = (session.cursor, session.state, len(session.transcript.steps))
        with pytest.raises(InvalidAnswer) as exc:
            answer(clinic_kb, session, "maybe", now=T0)
        assert exc.value.valid == ("yes", "no")
        assert exc.value.step == 0
        assert (session.cursor, session.state, len(session.transcript.steps)) == before
        # still answerable afterwards
        assert isinstance(answer(clinic_kb, session, "no", now=T0), Recommendation)

    def test_answer_after_completion_rejected(self, clinic_kb, clinic_index):
        session, _ = start_session(clinic_kb, clinic_index, "I have pain in my stomach", now=T0)
        answer(clinic_kb, session, "no", now=T0)
        with pytest.raises(SessionCompleted):
            answer(clinic_kb, session, "no", now=T0)

    def test_labels_are_case_sensitive(self, clinic_kb, clinic_index):
        session, _ = start_session(clinic_kb, clinic_index, "sore throat", now=T0)
        with pytest.raises(InvalidAnswer):
            answer(clinic_kb, session, "YES", now=T0)


class TestCurrentPrompt:
    def test_matches_start_prompt_and_is_stable(self, clinic_kb, clinic_index):
        session, first = start_session(clinic_kb, clinic_index, "sore throat", now=T0)
        assert current_prompt(clinic_kb, session) == first
        assert current_prompt(clinic_kb, session) == first

    def test_after_completion_returns_the_recommendation(self, clinic_kb, clinic_index):
        session, _ = start_session(clinic_kb, clinic_index, "sore throat", now=T0)
        final = answer(clinic_kb, session, "yes", now=T0)
        assert current_prompt(clinic_kb, session) == final
        assert current_prompt(clinic_kb, session).leaf_id == "l_severe"


class TestReplay:
    def test_full_path(self, clinic_kb):
        prompt = replay(clinic_kb, "I have got sore throat", ["yes"])
        assert prompt.advice == "I prescribe you to take Arimic , if taken then take Augmentin."
        assert [m.name for m in prompt.medicines] == ["Arimic", "Augmentin"]

    def test_short_path_returns_pending_question(self, clinic_kb):
        prompt = replay(clinic_kb, "I have pain in my neck", [])
        assert prompt == Question("q_vomit", "Do you have vomiting too", ("yes", "no"))

    def test_too_many_answers(self, clinic_kb):
        with pytest.raises(TooManyAnswers) as exc:
            replay(clinic_kb, "I have pain in my neck", ["yes", "no", "no"])
        assert exc.value.leaf_id == "l_migraine"
        assert exc.value.leftover == 2

    def test_bad_label_reports_step_index(self, clinic_kb):
        with pytest.raises(InvalidAnswer) as exc:
            replay(clinic_kb, "I have pain in my neck", ["nah"])
        assert exc.value.step == 0

    def test_no_match_propagates(self, clinic_kb):
        with pytest.raises(NoMatch):
            replay(clinic_kb, "completely unrelated words", [])


class TestEquivalence:
    def test_replay_agrees_with_interactive_walks(self, shipped_kb, shipped_index):
        rng = random.Random(426)
        for _ in range(120):
            disease = shipped_kb.diseases[rng.randrange(len(shipped_kb.diseases))]
            entry = disease.entries[rng.randrange(len(disease.entries))]
            session, prompt = start_session(shipped_kb, shipped_index, entry.complaint, now=T0)
            labels = []
            while session.state is SessionState.ACTIVE:
                label = prompt.answers[rng.randrange(len(prompt.answers))]
                labels.append(label)
                prompt = answer(shipped_kb, session, label, now=T0)
            assert replay(shipped_kb, entry.complaint, labels) == prompt
            assert len(labels) <= 7

    @pytest.mark.parametrize("seed", range(15))
    def test_every_enumerated_path_terminates_at_its_leaf(self, seed):
        kb = random_kb(seed)
        index = build_index(kb)
        for disease in kb.diseases:
            for labels, leaf_id in iter_leaf_paths(disease):
                prompt = replay(kb, disease.entries[0].complaint, list(labels), index=index)
                assert isinstance(prompt, Recommendation)
                assert prompt.leaf_id == leaf_id
