"""Exception hierarchy shared across the package."""

from __future__ import annotations


class SuperdokuError(Exception):
    """Base class for all errors raised by this package."""


class InvalidCombination(SuperdokuError):
    """A token combination violates the three-distinct-tokens rule."""


class IntentionEmpty(SuperdokuError):
    """The teaching intention is empty after trimming."""


class IntentionTooLong(SuperdokuError):
    """The teaching intention exceeds the 10-word limit."""


class UnknownConcept(SuperdokuError):
    """A concept id is not part of the dictionary."""


class BackendUnavailable(SuperdokuError):
    """The remote matcher backend could not be reached after retries."""


class MalformedBackendResponse(SuperdokuError):
    """The remote matcher returned output with no parseable concept array."""


class InvalidConfig(SuperdokuError):
    """A session configuration field is out of range or unknown."""


class SessionNotActive(SuperdokuError):
    """An iteration was submitted to a completed session."""


class SolverExhausted(RuntimeError):
    """The demonstration solver ran out of restarts.

    Deliberately not a SuperdokuError: every learnable state is satisfiable,
    so this is a defect that must surface loudly, never a client error.
    """


class CorruptLog(SuperdokuError):
    """An event log line could not be replayed."""

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"corrupt event log at line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class CorruptTranscript(SuperdokuError):
    """A transcript line could not be scored."""

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"corrupt transcript at line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class DegenerateVariance(SuperdokuError):
    """Both samples are constant and equal; the t statistic is undefined."""
