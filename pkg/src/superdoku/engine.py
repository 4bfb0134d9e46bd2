"""Concurrency and persistence wrapper around sessions.

One writer per session: submissions against the same session id are
serialized by a per-session lock, while distinct sessions proceed in
parallel. When a persistence directory is configured every event is
appended to ``<dir>/<session_id>.ndjson`` as it happens.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, replace
from pathlib import Path

from .concepts import DICTIONARY, ConceptDictionary
from .errors import SessionNotActive
from .eventlog import EventLogWriter, completed_event, created_event, iteration_events
from .grid import Grid
from .matching import Intention, LlmMatcher
from .rng import derive_seed
from .robot import demonstrate
from .session import (
    Clock,
    IterationRecord,
    Session,
    SessionConfig,
    SessionStatus,
    create_session,
    submit_iteration,
    utc_now,
)
from .tokens import TokenCombination


@dataclass
class _Slot:
    session: Session
    lock: threading.Lock
    writer: EventLogWriter | None
    demo_counter: int = 0


class SessionEngine:
    def __init__(
        self,
        *,
        persist_dir: str | Path | None = None,
        fsync: bool = False,
        llm: LlmMatcher | None = None,
        dictionary: ConceptDictionary = DICTIONARY,
        clock: Clock = utc_now,
    ):
        self._persist_dir = Path(persist_dir) if persist_dir is not None else None
        if self._persist_dir is not None:
            self._persist_dir.mkdir(parents=True, exist_ok=True)
        self._fsync = fsync
        self._llm = llm
        self._dictionary = dictionary
        self._clock = clock
        self._slots: dict[str, _Slot] = {}
        self._registry_lock = threading.Lock()

    def create(self, config: SessionConfig) -> Session:
        session = create_session(config, clock=self._clock)
        writer = None
        if self._persist_dir is not None:
            writer = EventLogWriter(
                self._persist_dir / f"{session.id}.ndjson", fsync=self._fsync
            )
        slot = _Slot(session=session, lock=threading.Lock(), writer=writer)
        if writer is not None:
            writer.append(created_event(session))
        with self._registry_lock:
            self._slots[session.id] = slot
        return session

    def _slot(self, session_id: str) -> _Slot:
        with self._registry_lock:
            if session_id not in self._slots:
                raise KeyError(session_id)
            return self._slots[session_id]

    def get(self, session_id: str) -> Session:
        return self._slot(session_id).session

    def submit(
        self, session_id: str, combo: TokenCombination, intention: Intention | str
    ) -> IterationRecord:
        slot = self._slot(session_id)
        with slot.lock:
            record = submit_iteration(
                slot.session,
                combo,
                intention,
                dictionary=self._dictionary,
                llm=self._llm,
                clock=self._clock,
            )
            if slot.writer is not None:
                slot.writer.append(iteration_events(record, session_id, self._dictionary))
                if slot.session.status is not SessionStatus.ACTIVE:
                    slot.writer.append(completed_event(slot.session))
            return record

    def adhoc_demonstration(self, session_id: str) -> Grid:
        """A fresh view of current knowledge; reseeded per call so the
        unconstrained cells vary between views."""
        slot = self._slot(session_id)
        with slot.lock:
            slot.demo_counter += 1
            seed = derive_seed(slot.session.config.seed, "adhoc-demo", slot.demo_counter)
            state = replace(slot.session.robot, rng_seed=seed)
            return demonstrate(state, self._dictionary)

    def require_active(self, session_id: str) -> Session:
        session = self.get(session_id)
        if session.status is not SessionStatus.ACTIVE:
            raise SessionNotActive(f"session {session_id} is {session.status.value}")
        return session

    def close(self) -> None:
        with self._registry_lock:
            for slot in self._slots.values():
                if slot.writer is not None:
                    slot.writer.close()
