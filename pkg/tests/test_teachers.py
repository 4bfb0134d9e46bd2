from __future__ import annotations

import pytest

from superdoku.concepts import DICTIONARY, ConceptId, detect_concepts
from superdoku.scoring import Condition
from superdoku.session import FeedbackView, SessionStatus
from superdoku.cohort import run_session
from superdoku.teachers import (
    AdaptiveTeacher,
    OracleTeacher,
    PolicyKind,
    RandomTeacher,
    TeacherPolicy,
    detection_table,
    isolated_combo,
    make_teacher,
)
from superdoku.tokens import Color


def view(valence: str | None) -> FeedbackView:
    return FeedbackView(d=1, valence=valence, s_d=None, s_cum=None, message="", demonstration=None)


class TestDetectionTable:
    def test_covers_all_2925_combinations(self):
        table = detection_table()
        assert len(table) == 2925
        combo, detected = table[0]
        assert detected == detect_concepts(combo)

    def test_isolated_combos_activate_exactly_their_concept(self):
        for cid in DICTIONARY.ids():
            detected = detect_concepts(isolated_combo(cid))
            if cid is ConceptId.ALL_UNIQUE:
                assert detected == {
                    ConceptId.UNIQUE_COLORS,
                    ConceptId.UNIQUE_SHAPES,
                    ConceptId.UNIQUE_SIZES,
                    ConceptId.ALL_UNIQUE,
                }
            else:
                assert detected == {cid}


class TestOracle:
    def test_first_move_teaches_blue_with_three_blue_tokens(self):
        combo, intention = OracleTeacher(0).step([])
        assert all(t.color is Color.BLUE for t in combo)
        assert intention.text == "show the robot blue"

    def test_one_new_concept_per_step_for_13_steps(self):
        teacher = OracleTeacher(0)
        learned: set[ConceptId] = set()
        for _ in range(13):
            combo, _ = teacher.step([])
            newly = detect_concepts(combo) - learned
            assert len(newly) == 1
            learned |= newly
        assert learned == set(DICTIONARY.ids())

    @pytest.mark.parametrize("condition", list(Condition))
    def test_finishes_any_condition_in_exactly_13_iterations(self, condition):
        session = run_session(
            TeacherPolicy(PolicyKind.ORACLE, seed=0), condition, session_seed=1, teacher_seed=1
        )
        assert session.status is SessionStatus.COMPLETED_SUCCESS
        assert len(session.records) == 13
        assert session.score == 13

    def test_intentions_match_exactly_what_is_taught(self):
        session = run_session(
            TeacherPolicy(PolicyKind.ORACLE, seed=0), Condition.MMM, session_seed=2, teacher_seed=2
        )
        for record in session.records:
            assert record.matched == record.newly_learned
            assert record.s_d == 0


class TestRandom:
    def test_same_seed_same_sequence(self):
        a, b = RandomTeacher(42), RandomTeacher(42)
        for _ in range(5):
            assert a.step([]) == b.step([])

    def test_different_seeds_diverge(self):
        moves_a = [RandomTeacher(1).step([]) for _ in range(3)]
        moves_b = [RandomTeacher(2).step([]) for _ in range(3)]
        assert moves_a != moves_b

    def test_moves_are_always_valid(self):
        teacher = RandomTeacher(7)
        for _ in range(50):
            combo, intention = teacher.step([])
            assert len(set(combo.tokens)) == 3
            assert 1 <= intention.word_count <= 10


class TestAdaptive:
    def test_strategy_family_changes_after_negative_feedback(self):
        for seed in range(20):
            teacher = AdaptiveTeacher(seed)
            teacher.step([])
            before = teacher.current_family
            teacher.step([view("negative")])
            assert teacher.current_family != before

    def test_strategy_family_usually_sticks_after_positive_feedback(self):
        teacher = AdaptiveTeacher(3, exploration_rate=0.0)
        teacher.step([])
        before = teacher.current_family
        teacher.step([view("positive")])
        assert teacher.current_family == before

    def test_no_signal_behaves_like_exploration(self):
        teacher = AdaptiveTeacher(4)
        families = set()
        for _ in range(30):
            teacher.step([view(None)])
            families.add(teacher.current_family)
        assert len(families) > 1

    def test_deterministic_given_seed(self):
        history = [view("positive"), view("negative")]
        a, b = AdaptiveTeacher(9), AdaptiveTeacher(9)
        assert [a.step(history[:i]) for i in range(3)] == [b.step(history[:i]) for i in range(3)]


class TestPolicy:
    def test_make_teacher_dispatch(self):
        assert isinstance(make_teacher(TeacherPolicy(PolicyKind.ORACLE, 0)), OracleTeacher)
        assert isinstance(make_teacher(TeacherPolicy(PolicyKind.RANDOM, 0)), RandomTeacher)
        assert isinstance(make_teacher(TeacherPolicy(PolicyKind.ADAPTIVE, 0)), AdaptiveTeacher)

    def test_exploration_rate_validated(self):
        with pytest.raises(ValueError):
            TeacherPolicy(PolicyKind.ADAPTIVE, 0, exploration_rate=1.5)

    def test_seed_override_takes_effect(self):
        base = make_teacher(TeacherPolicy(PolicyKind.RANDOM, 1), seed=5)
        same = make_teacher(TeacherPolicy(PolicyKind.RANDOM, 2), seed=5)
        assert base.step([]) == same.step([])
