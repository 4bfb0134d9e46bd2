"""The study protocol: sessions, iterations, and condition-filtered views.

A session runs up to ``max_iterations`` teaching iterations. Every
iteration the participant presents three tokens plus a short intention;
the supervisor matches the intention, lets the robot learn, scores the
mismatch, and assembles feedback appropriate to the session's condition.
Every ``demo_interval``-th iteration (and the final one, whatever its
index) carries a demonstration grid.

Scores are computed and recorded in all conditions so transcripts stay
analyzable; they are only ever surfaced to the participant in the mmm
condition. Feedback never feeds back into the robot: for a fixed
submission sequence the learning trajectory is identical across
conditions.
"""

from __future__ import annotations

import random
import uuid
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from enum import Enum
from fractions import Fraction
from typing import Callable

from .concepts import DICTIONARY, ConceptDictionary, ConceptId
from .errors import InvalidConfig, SessionNotActive
from .grid import Grid
from .matching import Intention, LlmMatcher, MatcherBackend, match_intention
from .rng import MASK64, derive_seed
from .robot import RobotState, demonstrate, is_fully_taught, learn
from .scoring import (
    Condition,
    CumulativeScore,
    Feedback,
    ScoreStrategy,
    cumulative_score,
    iteration_score,
    make_feedback,
)
from .tokens import TokenCombination

Clock = Callable[[], datetime]


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


class SessionStatus(str, Enum):
    ACTIVE = "active"
    COMPLETED_SUCCESS = "completed_success"
    COMPLETED_EXHAUSTED = "completed_exhausted"


DEFAULT_MAX_ITERATIONS = 25
DEFAULT_DEMO_INTERVAL = 5


@dataclass(frozen=True)
class SessionConfig:
    condition: Condition
    matcher_backend: MatcherBackend = MatcherBackend.LEXICON
    score_strategy: ScoreStrategy = ScoreStrategy.EXAMPLE_CONSISTENT
    seed: int = 0
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    demo_interval: int = DEFAULT_DEMO_INTERVAL

    def __post_init__(self) -> None:
        for name in ("seed", "max_iterations", "demo_interval"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool):
                raise InvalidConfig(f"{name} must be an integer, got {value!r}")
        if self.max_iterations < 1:
            raise InvalidConfig(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.demo_interval < 1:
            raise InvalidConfig(f"demo_interval must be >= 1, got {self.demo_interval}")
        if not 0 <= self.seed <= MASK64:
            raise InvalidConfig(f"seed must be an unsigned 64-bit integer, got {self.seed}")


@dataclass(frozen=True)
class IterationRecord:
    """The event-log atom: everything one iteration produced."""

    d: int
    combo: TokenCombination
    intention: Intention
    matched: frozenset[ConceptId]
    newly_learned: frozenset[ConceptId]
    s_d: Fraction
    s_cum: Fraction
    feedback: Feedback
    demonstration: Grid | None
    timestamp: datetime


@dataclass
class Session:
    """Mutable session state. Mutation happens only in submit_iteration;
    concurrent access discipline lives in the engine layer."""

    id: str
    config: SessionConfig
    robot: RobotState
    created_at: datetime
    records: list[IterationRecord] = field(default_factory=list)
    status: SessionStatus = SessionStatus.ACTIVE
    completed_at: datetime | None = None

    @property
    def score(self) -> int:
        """Concepts taught so far; the session's final score at termination."""
        return len(self.robot.learned)

    @property
    def d(self) -> int:
        return len(self.records)

    @property
    def remaining_iterations(self) -> int:
        return self.config.max_iterations - len(self.records)


def create_session(
    config: SessionConfig,
    *,
    session_id: str | None = None,
    clock: Clock = utc_now,
) -> Session:
    """A fresh active session with an untaught robot."""
    return Session(
        id=session_id if session_id is not None else uuid.uuid4().hex,
        config=config,
        robot=RobotState.fresh(config.seed),
        created_at=clock(),
    )


def submit_iteration(
    session: Session,
    combo: TokenCombination,
    intention: Intention | str,
    *,
    dictionary: ConceptDictionary = DICTIONARY,
    llm: LlmMatcher | None = None,
    clock: Clock = utc_now,
) -> IterationRecord:
    """Run one teaching iteration through the full supervisor pipeline.

    Any validation or backend error raises before the session changes, so
    a failed submission never consumes an iteration.
    """
    if session.status is not SessionStatus.ACTIVE:
        raise SessionNotActive(f"session {session.id} is {session.status.value}")
    if isinstance(intention, str):
        intention = Intention(intention)

    match = match_intention(
        intention, dictionary, backend=session.config.matcher_backend, llm=llm
    )
    robot, newly_learned = learn(session.robot, combo, dictionary)

    d = len(session.records) + 1
    score = iteration_score(
        match.concepts, newly_learned, session.config.score_strategy, dictionary
    )
    prev = session.records[-1] if session.records else None
    cum = cumulative_score(
        CumulativeScore(prev.s_cum, prev.d) if prev else None, score.s_d
    )
    feedback = make_feedback(
        session.config.condition,
        score.s_d,
        cum.s_cum,
        newly_learned,
        random.Random(derive_seed(session.config.seed, "feedback", d)),
    )

    if is_fully_taught(robot, dictionary):
        status = SessionStatus.COMPLETED_SUCCESS
    elif d >= session.config.max_iterations:
        status = SessionStatus.COMPLETED_EXHAUSTED
    else:
        status = SessionStatus.ACTIVE

    demonstration: Grid | None = None
    if d % session.config.demo_interval == 0 or status is not SessionStatus.ACTIVE:
        demo_state = replace(robot, rng_seed=derive_seed(session.config.seed, "demo", d))
        demonstration = demonstrate(demo_state, dictionary)

    record = IterationRecord(
        d=d,
        combo=combo,
        intention=intention,
        matched=match.concepts,
        newly_learned=newly_learned,
        s_d=score.s_d,
        s_cum=cum.s_cum,
        feedback=feedback,
        demonstration=demonstration,
        timestamp=clock(),
    )
    session.robot = robot
    session.records.append(record)
    session.status = status
    if status is not SessionStatus.ACTIVE:
        session.completed_at = record.timestamp
    return record


@dataclass(frozen=True)
class FeedbackView:
    """What a participant in a given condition actually gets to see."""

    d: int
    valence: str | None
    s_d: float | None
    s_cum: float | None
    message: str
    demonstration: Grid | None


def feedback_view(record: IterationRecord, condition: Condition) -> FeedbackView:
    """Filter a record down to its condition-appropriate surface.

    This is the single filtering point; the HTTP layer and the simulated
    teachers both consume it, so nothing score-shaped can leak into the
    performance or baseline conditions by accident.
    """
    if condition is Condition.MMM:
        return FeedbackView(
            d=record.d,
            valence=record.feedback.valence.value,
            s_d=float(record.s_d),
            s_cum=float(record.s_cum),
            message=record.feedback.message,
            demonstration=record.demonstration,
        )
    if condition is Condition.PERFORMANCE:
        return FeedbackView(
            d=record.d,
            valence=record.feedback.valence.value,
            s_d=None,
            s_cum=None,
            message=record.feedback.message,
            demonstration=record.demonstration,
        )
    return FeedbackView(
        d=record.d,
        valence=None,
        s_d=None,
        s_cum=None,
        message="",
        demonstration=record.demonstration,
    )
