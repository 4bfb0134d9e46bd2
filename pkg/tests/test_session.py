from __future__ import annotations

import random
from statistics import fmean

import pytest

from helpers import (
    EX1_COMBO,
    EX1_INTENTION,
    EX3_COMBO,
    EX3_INTENTION,
    random_combination,
    random_session,
)
from superdoku.concepts import ConceptId
from superdoku.errors import CorruptLog, IntentionTooLong, InvalidConfig, SessionNotActive
from superdoku.eventlog import replay, serialize_session
from superdoku.matching import MatcherBackend
from superdoku.scoring import Condition, ScoreStrategy, Valence
from superdoku.session import (
    SessionConfig,
    SessionStatus,
    create_session,
    feedback_view,
    submit_iteration,
)
from superdoku.teachers import PolicyKind, TeacherPolicy, make_teacher


def mmm_config(**overrides) -> SessionConfig:
    defaults = dict(condition=Condition.MMM, seed=1)
    defaults.update(overrides)
    return SessionConfig(**defaults)


def drive_oracle(session) -> None:
    teacher = make_teacher(TeacherPolicy(PolicyKind.ORACLE, seed=0))
    while session.status is SessionStatus.ACTIVE:
        combo, intention = teacher.step([])
        submit_iteration(session, combo, intention)


class TestCreate:
    def test_fresh_session_is_active_and_empty(self):
        session = create_session(mmm_config())
        assert session.status is SessionStatus.ACTIVE
        assert session.records == []
        assert session.score == 0
        assert session.id

    def test_baseline_sessions_feed_back_nothing(self):
        session = create_session(SessionConfig(condition=Condition.BASELINE, seed=2))
        record = submit_iteration(session, EX1_COMBO, EX1_INTENTION)
        assert record.feedback.valence is Valence.NONE
        assert record.feedback.message == ""
        assert record.feedback.s_d is None

    def test_default_schedule_has_five_demonstrations(self):
        config = mmm_config()
        assert config.max_iterations // config.demo_interval == 5

    def test_config_validation(self):
        with pytest.raises(InvalidConfig):
            mmm_config(max_iterations=0)
        with pytest.raises(InvalidConfig):
            mmm_config(demo_interval=0)
        with pytest.raises(InvalidConfig):
            mmm_config(seed=-1)
        with pytest.raises(InvalidConfig):
            mmm_config(seed=1 << 64)


class TestSubmit:
    def test_example_one_gives_positive_mmm_feedback(self):
        session = create_session(mmm_config())
        record = submit_iteration(session, EX1_COMBO, EX1_INTENTION)
        assert record.s_d == 0
        assert record.feedback.valence is Valence.POSITIVE
        assert record.matched == {ConceptId.UNIQUE_COLORS}
        assert record.newly_learned == {ConceptId.UNIQUE_COLORS}

    def test_performance_condition_rewards_unintended_teaching(self):
        session = create_session(SessionConfig(condition=Condition.PERFORMANCE, seed=3))
        record = submit_iteration(session, EX3_COMBO, EX3_INTENTION)
        assert record.feedback.valence is Valence.POSITIVE
        assert record.s_d == 1  # logged score still shows the full mismatch

    def test_exhaustion_after_max_iterations(self):
        session = create_session(mmm_config(max_iterations=3))
        for _ in range(3):
            submit_iteration(session, EX1_COMBO, EX1_INTENTION)
        assert session.status is SessionStatus.COMPLETED_EXHAUSTED
        assert session.score == 1

    def test_success_when_everything_is_taught(self):
        session = create_session(mmm_config())
        drive_oracle(session)
        assert session.status is SessionStatus.COMPLETED_SUCCESS
        assert session.score == 13
        assert len(session.records) == 13

    def test_completed_session_rejects_submissions(self):
        session = create_session(mmm_config(max_iterations=1))
        submit_iteration(session, EX1_COMBO, EX1_INTENTION)
        with pytest.raises(SessionNotActive):
            submit_iteration(session, EX1_COMBO, EX1_INTENTION)

    def test_failed_submission_does_not_consume_an_iteration(self):
        session = create_session(mmm_config())
        eleven_words = "one two three four five six seven eight nine ten eleven"
        with pytest.raises(IntentionTooLong):
            submit_iteration(session, EX1_COMBO, eleven_words)
        assert session.records == []
        assert session.robot.learned == frozenset()
        record = submit_iteration(session, EX1_COMBO, EX1_INTENTION)
        assert record.d == 1

    def test_matched_is_recorded_in_every_condition(self):
        for condition in Condition:
            session = create_session(SessionConfig(condition=condition, seed=4))
            record = submit_iteration(session, EX1_COMBO, EX1_INTENTION)
            assert record.matched == {ConceptId.UNIQUE_COLORS}

    def test_scores_are_logged_in_every_condition(self):
        for condition in Condition:
            session = create_session(SessionConfig(condition=condition, seed=4))
            record = submit_iteration(session, EX3_COMBO, EX3_INTENTION)
            assert record.s_d == 1 and record.s_cum == 1


class TestDemonstrationSchedule:
    def test_demo_every_fifth_iteration_when_exhausting(self):
        session = create_session(mmm_config(seed=8))
        # repeating one combination teaches nothing after the first time,
        # so the session runs the full 25 iterations
        while session.status is SessionStatus.ACTIVE:
            submit_iteration(session, EX1_COMBO, EX1_INTENTION)
        demo_ds = [r.d for r in session.records if r.demonstration is not None]
        assert demo_ds == [5, 10, 15, 20, 25]

    def test_final_demo_attached_even_off_schedule(self):
        session = create_session(mmm_config(seed=9))
        drive_oracle(session)  # finishes at d=13
        demo_ds = [r.d for r in session.records if r.demonstration is not None]
        assert demo_ds == [5, 10, 13]

    def test_custom_interval(self):
        session = create_session(mmm_config(max_iterations=4, demo_interval=2))
        for _ in range(4):
            submit_iteration(session, EX1_COMBO, EX1_INTENTION)
        demo_ds = [r.d for r in session.records if r.demonstration is not None]
        assert demo_ds == [2, 4]


class TestInvariants:
    def test_every_session_terminates_within_max_iterations(self):
        rng = random.Random(1)
        for _ in range(10):
            session = create_session(mmm_config(max_iterations=rng.randint(1, 10), seed=rng.getrandbits(32)))
            while session.status is SessionStatus.ACTIVE:
                submit_iteration(session, random_combination(rng), "look at these")
            assert len(session.records) <= session.config.max_iterations

    def test_condition_never_influences_the_learning_trajectory(self):
        rng = random.Random(2)
        moves = [(random_combination(rng), "different colors maybe") for _ in range(10)]
        trajectories = []
        for condition in Condition:
            session = create_session(SessionConfig(condition=condition, seed=77))
            states = []
            for combo, intention in moves:
                if session.status is not SessionStatus.ACTIVE:
                    break
                submit_iteration(session, combo, intention)
                states.append(session.robot.learned)
            trajectories.append(states)
        assert trajectories[0] == trajectories[1] == trajectories[2]

    def test_running_s_cum_is_the_mean_of_all_s_d(self):
        rng = random.Random(3)
        session = create_session(mmm_config(seed=rng.getrandbits(32)))
        while session.status is SessionStatus.ACTIVE:
            submit_iteration(session, random_combination(rng), rng.choice(
                ["different colors", "blue tokens", "everything completely different", "squares"]
            ))
        for i, record in enumerate(session.records, start=1):
            mean = fmean(float(r.s_d) for r in session.records[:i])
            assert abs(float(record.s_cum) - mean) < 1e-12

    def test_feedback_view_filters_by_condition(self):
        session = create_session(mmm_config())
        record = submit_iteration(session, EX1_COMBO, EX1_INTENTION)
        mmm = feedback_view(record, Condition.MMM)
        assert (mmm.valence, mmm.s_d, mmm.s_cum) == ("positive", 0.0, 0.0)
        perf = feedback_view(record, Condition.PERFORMANCE)
        assert perf.valence == "positive" and perf.s_d is None and perf.s_cum is None
        base = feedback_view(record, Condition.BASELINE)
        assert base.valence is None and base.s_d is None and base.message == ""


class TestReplay:
    def test_oracle_run_replays_to_success(self):
        session = create_session(mmm_config(seed=10))
        drive_oracle(session)
        replayed = replay(serialize_session(session))
        assert replayed.status is SessionStatus.COMPLETED_SUCCESS
        assert replayed.score == 13
        assert replayed == session

    def test_empty_log_is_corrupt(self):
        with pytest.raises(CorruptLog) as exc_info:
            replay([])
        assert exc_info.value.line_no == 1

    def test_truncated_log_replays_to_active_session(self):
        session = create_session(mmm_config(seed=11))
        rng = random.Random(4)
        for _ in range(9):
            submit_iteration(session, random_combination(rng), "look at this")
        lines = serialize_session(session)
        # keep the creation event and the first 7 iterations (with any demos)
        kept, iterations = [], 0
        for line in lines:
            if '"type":"iteration"' in line:
                iterations += 1
            if iterations > 7:
                break
            kept.append(line)
        replayed = replay(kept)
        assert replayed.status is SessionStatus.ACTIVE
        assert len(replayed.records) == 7

    def test_corrupt_line_is_reported_with_its_number(self):
        session = create_session(mmm_config(seed=12))
        submit_iteration(session, EX1_COMBO, EX1_INTENTION)
        lines = serialize_session(session)
        lines[1] = lines[1][:-10]
        with pytest.raises(CorruptLog) as exc_info:
            replay(lines)
        assert exc_info.value.line_no == 2

    def test_log_without_creation_event_is_corrupt(self):
        session = create_session(mmm_config(seed=13))
        submit_iteration(session, EX1_COMBO, EX1_INTENTION)
        lines = serialize_session(session)[1:]
        with pytest.raises(CorruptLog):
            replay(lines)

    @pytest.mark.parametrize("trial", range(20))
    def test_serialize_replay_round_trip_is_byte_identical(self, trial):
        session = random_session(random.Random(1000 + trial))
        lines = serialize_session(session)
        replayed = replay(lines)
        assert serialize_session(replayed) == lines
        assert replayed == session

    def test_replay_accepts_whole_text_blobs(self):
        session = create_session(mmm_config(seed=14))
        submit_iteration(session, EX1_COMBO, EX1_INTENTION)
        text = "\n".join(serialize_session(session)) + "\n"
        assert replay(text) == session

    def test_strategy_survives_the_round_trip(self):
        config = mmm_config(score_strategy=ScoreStrategy.LITERAL, matcher_backend=MatcherBackend.LEXICON)
        session = create_session(config)
        submit_iteration(session, EX1_COMBO, EX1_INTENTION)
        assert replay(serialize_session(session)).config == config
