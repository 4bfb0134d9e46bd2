"""Append-only event log and replay.

One session serializes to newline-delimited JSON events, in order:

    {"type": "created", "session_id": ..., "payload": {...}, "timestamp": ...}
    {"type": "iteration", ...}        one per teaching iteration
    {"type": "demonstration", ...}    follows its iteration when a grid was shown
    {"type": "completed", ...}        only once the session terminated

Field names and JSON canonicalization (sorted keys, compact separators)
are frozen: replaying a log and serializing the result reproduces the
original bytes exactly. Scores are stored as a 4-digit decimal plus the
exact numerator/denominator pair, so nothing float-shaped ever round-trips
through the log.
"""

from __future__ import annotations

import json
import os
from dataclasses import replace as dc_replace
from datetime import datetime
from fractions import Fraction
from pathlib import Path
from typing import IO, Iterable

from .concepts import DICTIONARY, ConceptDictionary, ConceptId
from .errors import CorruptLog
from .grid import Grid
from .matching import Intention, MatcherBackend
from .robot import RobotState
from .scoring import Condition, Feedback, ScoreStrategy, Valence, render_score, score_pair
from .session import IterationRecord, Session, SessionConfig, SessionStatus
from .tokens import TokenCombination

EVENT_CREATED = "created"
EVENT_ITERATION = "iteration"
EVENT_DEMONSTRATION = "demonstration"
EVENT_COMPLETED = "completed"


def _dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _event(event_type: str, session_id: str, payload: dict, timestamp: datetime) -> str:
    return _dumps(
        {
            "type": event_type,
            "session_id": session_id,
            "payload": payload,
            "timestamp": timestamp.isoformat(),
        }
    )


def _concept_list(concepts: frozenset[ConceptId], dictionary: ConceptDictionary) -> list[str]:
    return [c.value for c in dictionary.sorted(concepts)]


def created_event(session: Session) -> str:
    cfg = session.config
    payload = {
        "condition": cfg.condition.value,
        "matcher_backend": cfg.matcher_backend.value,
        "score_strategy": cfg.score_strategy.value,
        "seed": cfg.seed,
        "max_iterations": cfg.max_iterations,
        "demo_interval": cfg.demo_interval,
    }
    return _event(EVENT_CREATED, session.id, payload, session.created_at)


def iteration_events(
    record: IterationRecord, session_id: str, dictionary: ConceptDictionary = DICTIONARY
) -> list[str]:
    """The iteration event plus, when a grid was shown, its demonstration event."""
    payload = {
        "d": record.d,
        "tokens": record.combo.to_json(),
        "intention": record.intention.text,
        "matched": _concept_list(record.matched, dictionary),
        "newly_learned": _concept_list(record.newly_learned, dictionary),
        "s_d": render_score(record.s_d),
        "s_d_pair": score_pair(record.s_d),
        "s_cum": render_score(record.s_cum),
        "s_cum_pair": score_pair(record.s_cum),
        "feedback": {
            "valence": record.feedback.valence.value,
            "message": record.feedback.message,
        },
    }
    events = [_event(EVENT_ITERATION, session_id, payload, record.timestamp)]
    if record.demonstration is not None:
        demo_payload = {"d": record.d, "grid": record.demonstration.to_json()}
        events.append(_event(EVENT_DEMONSTRATION, session_id, demo_payload, record.timestamp))
    return events


def completed_event(session: Session) -> str:
    payload = {"status": session.status.value, "score": session.score}
    assert session.completed_at is not None
    return _event(EVENT_COMPLETED, session.id, payload, session.completed_at)


def serialize_session(session: Session, dictionary: ConceptDictionary = DICTIONARY) -> list[str]:
    """All events for a session, in emission order. Pure in the state."""
    lines = [created_event(session)]
    for record in session.records:
        lines.extend(iteration_events(record, session.id, dictionary))
    if session.status is not SessionStatus.ACTIVE:
        lines.append(completed_event(session))
    return lines


class EventLogWriter:
    """Append-only sink for event lines, optionally fsyncing each append."""

    def __init__(self, path: str | Path, *, fsync: bool = False):
        self.path = Path(path)
        self.fsync = fsync
        self._fh: IO[str] = self.path.open("a", encoding="utf-8")

    def append(self, lines: str | Iterable[str]) -> None:
        if isinstance(lines, str):
            lines = [lines]
        for line in lines:
            self._fh.write(line + "\n")
        self._fh.flush()
        if self.fsync:
            os.fsync(self._fh.fileno())

    def close(self) -> None:
        self._fh.close()


def _require(condition: bool, line_no: int, reason: str) -> None:
    if not condition:
        raise CorruptLog(line_no, reason)


def _parse_envelope(line: str, line_no: int) -> dict:
    try:
        event = json.loads(line)
    except json.JSONDecodeError as exc:
        raise CorruptLog(line_no, f"invalid JSON: {exc}") from None
    _require(isinstance(event, dict), line_no, "event is not an object")
    for key in ("type", "session_id", "payload", "timestamp"):
        _require(key in event, line_no, f"missing field {key!r}")
    _require(isinstance(event["payload"], dict), line_no, "payload is not an object")
    return event


def _parse_timestamp(raw: object, line_no: int) -> datetime:
    try:
        return datetime.fromisoformat(str(raw))
    except ValueError:
        raise CorruptLog(line_no, f"bad timestamp: {raw!r}") from None


def _parse_fraction(payload: dict, key: str, line_no: int) -> Fraction:
    pair = payload.get(f"{key}_pair")
    _require(
        isinstance(pair, list) and len(pair) == 2 and all(isinstance(x, int) for x in pair),
        line_no,
        f"bad {key}_pair",
    )
    _require(pair[1] > 0, line_no, f"bad {key}_pair denominator")
    return Fraction(pair[0], pair[1])


def _parse_concepts(payload: dict, key: str, line_no: int) -> frozenset[ConceptId]:
    raw = payload.get(key)
    _require(isinstance(raw, list), line_no, f"missing concept list {key!r}")
    try:
        return frozenset(ConceptId(item) for item in raw)
    except ValueError as exc:
        raise CorruptLog(line_no, f"unknown concept in {key!r}: {exc}") from None


def _parse_config(payload: dict, line_no: int) -> SessionConfig:
    try:
        return SessionConfig(
            condition=Condition(payload["condition"]),
            matcher_backend=MatcherBackend(payload["matcher_backend"]),
            score_strategy=ScoreStrategy(payload["score_strategy"]),
            seed=payload["seed"],
            max_iterations=payload["max_iterations"],
            demo_interval=payload["demo_interval"],
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise CorruptLog(line_no, f"bad session config: {exc}") from None


def _parse_iteration(
    event: dict, line_no: int, condition: Condition, dictionary: ConceptDictionary
) -> IterationRecord:
    payload = event["payload"]
    try:
        combo = TokenCombination.from_json(payload["tokens"])
        intention = Intention(payload["intention"])
        feedback_raw = payload["feedback"]
        valence = Valence(feedback_raw["valence"])
        message = feedback_raw["message"]
        d = payload["d"]
    except Exception as exc:
        raise CorruptLog(line_no, f"bad iteration payload: {exc}") from None
    _require(isinstance(d, int) and d >= 1, line_no, "bad iteration index")
    s_d = _parse_fraction(payload, "s_d", line_no)
    s_cum = _parse_fraction(payload, "s_cum", line_no)
    feedback = Feedback(
        condition=condition,
        valence=valence,
        s_d=s_d if condition is Condition.MMM else None,
        s_cum=s_cum if condition is Condition.MMM else None,
        message=message,
    )
    return IterationRecord(
        d=d,
        combo=combo,
        intention=intention,
        matched=_parse_concepts(payload, "matched", line_no),
        newly_learned=_parse_concepts(payload, "newly_learned", line_no),
        s_d=s_d,
        s_cum=s_cum,
        feedback=feedback,
        demonstration=None,
        timestamp=_parse_timestamp(event["timestamp"], line_no),
    )


def replay(
    log: str | Iterable[str], dictionary: ConceptDictionary = DICTIONARY
) -> Session:
    """Rebuild a session from its event log.

    Accepts the log text or an iterable of lines. The log must be a
    prefix-valid event sequence: a created event, then iterations in
    order; a truncated log replays to an active session.
    """
    if isinstance(log, str):
        lines = log.splitlines()
    else:
        lines = [line.rstrip("\n") for line in log]
    lines = [line for line in lines if line.strip()]
    if not lines:
        raise CorruptLog(1, "empty log: missing created event")

    session: Session | None = None
    for line_no, line in enumerate(lines, start=1):
        event = _parse_envelope(line, line_no)
        etype = event["type"]
        if session is None:
            _require(etype == EVENT_CREATED, line_no, f"expected created event, got {etype!r}")
            config = _parse_config(event["payload"], line_no)
            session = Session(
                id=str(event["session_id"]),
                config=config,
                robot=RobotState.fresh(config.seed),
                created_at=_parse_timestamp(event["timestamp"], line_no),
            )
            continue
        _require(event["session_id"] == session.id, line_no, "session id mismatch")
        _require(
            session.status is SessionStatus.ACTIVE,
            line_no,
            "event after completed event",
        )
        if etype == EVENT_CREATED:
            raise CorruptLog(line_no, "duplicate created event")
        if etype == EVENT_ITERATION:
            record = _parse_iteration(event, line_no, session.config.condition, dictionary)
            _require(record.d == len(session.records) + 1, line_no, "iteration index out of order")
            session.records.append(record)
            session.robot = RobotState(
                learned=session.robot.learned | record.newly_learned,
                rng_seed=session.robot.rng_seed,
            )
        elif etype == EVENT_DEMONSTRATION:
            payload = event["payload"]
            _require(bool(session.records), line_no, "demonstration before any iteration")
            last = session.records[-1]
            _require(payload.get("d") == last.d, line_no, "demonstration index mismatch")
            _require(last.demonstration is None, line_no, "duplicate demonstration")
            try:
                grid = Grid.from_json(payload["grid"])
            except Exception as exc:
                raise CorruptLog(line_no, f"bad grid: {exc}") from None
            session.records[-1] = dc_replace(last, demonstration=grid)
        elif etype == EVENT_COMPLETED:
            payload = event["payload"]
            try:
                status = SessionStatus(payload["status"])
            except (KeyError, ValueError) as exc:
                raise CorruptLog(line_no, f"bad completion payload: {exc}") from None
            _require(status is not SessionStatus.ACTIVE, line_no, "completed with active status")
            _require(
                payload.get("score") == len(session.robot.learned),
                line_no,
                "completion score does not match replayed state",
            )
            _require(bool(session.records), line_no, "completed with no iterations")
            session.status = status
            session.completed_at = _parse_timestamp(event["timestamp"], line_no)
        else:
            raise CorruptLog(line_no, f"unknown event type {etype!r}")
    assert session is not None
    return session
