"""Mismatch scoring and feedback for the supervisor.

The per-iteration score compares the concepts a teacher said they were
teaching against the concepts the robot actually picked up in that
iteration. Scores are ratios of small integers, so they are computed as
exact fractions and only rendered as decimals; valence thresholds are
exact comparisons, never epsilon bands.

Two strategies ship:

* ``literal``: 1 - |matched & learned| / |learned|, with 1 when nothing
  was learned. This is the plain proportional rule.
* ``example`` (default): 1 - |matched & learned| / |matched | learned|,
  the Jaccard distance, with 1 when both sets are empty. Unlike the
  literal rule it also penalizes stated intent that goes beyond what was
  learned, which is the behavior the worked scoring examples in the test
  suite pin down.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from importlib import resources
from numbers import Rational
from typing import Iterable, Union

from .concepts import DICTIONARY, ConceptDictionary, ConceptId

ScoreValue = Union[Fraction, float, int]


class ScoreStrategy(str, Enum):
    LITERAL = "literal"
    EXAMPLE_CONSISTENT = "example"


class Valence(str, Enum):
    POSITIVE = "positive"
    MIXED = "mixed"
    NEGATIVE = "negative"
    NONE = "none"


class Condition(str, Enum):
    MMM = "mmm"
    PERFORMANCE = "performance"
    BASELINE = "baseline"


@dataclass(frozen=True)
class IterationScore:
    """One iteration's mismatch score with its exact ingredients."""

    s_d: Fraction
    n_learned: int
    matched_learned: int
    strategy: ScoreStrategy


@dataclass(frozen=True)
class CumulativeScore:
    """Running mean of all per-iteration scores so far."""

    s_cum: Fraction
    d: int


def _as_fraction(value: ScoreValue) -> Fraction:
    s = Fraction(value)
    if not 0 <= s <= 1:
        raise ValueError(f"score out of range [0, 1]: {value}")
    return s


def matching_function(concept: ConceptId, matched: Iterable[ConceptId]) -> int:
    """1 when the concept is among the matched set, else 0."""
    return 1 if concept in set(matched) else 0


def iteration_score(
    matched: Iterable[ConceptId],
    learned_d: Iterable[ConceptId],
    strategy: ScoreStrategy = ScoreStrategy.EXAMPLE_CONSISTENT,
    dictionary: ConceptDictionary = DICTIONARY,
) -> IterationScore:
    """Mismatch between the intended concepts and the concepts newly
    learned in this iteration.

    ``learned_d`` is the set of concepts activated in iteration d, not the
    robot's whole knowledge: re-demonstrating something already known
    teaches nothing and scores as such.
    """
    matched_set = frozenset(matched)
    learned_set = frozenset(learned_d)
    dictionary.require_known(matched_set)
    dictionary.require_known(learned_set)
    hits = len(matched_set & learned_set)
    if strategy is ScoreStrategy.LITERAL:
        if not learned_set:
            s_d = Fraction(1)
        else:
            s_d = 1 - Fraction(hits, len(learned_set))
    else:
        union = matched_set | learned_set
        if not union:
            s_d = Fraction(1)
        else:
            s_d = 1 - Fraction(hits, len(union))
    return IterationScore(
        s_d=s_d,
        n_learned=len(learned_set),
        matched_learned=hits,
        strategy=strategy,
    )


def cumulative_score(prev: CumulativeScore | None, s_d: ScoreValue) -> CumulativeScore:
    """Fold one more per-iteration score into the running mean."""
    s = _as_fraction(s_d)
    if prev is None:
        return CumulativeScore(s_cum=s, d=1)
    d = prev.d + 1
    return CumulativeScore(s_cum=(s + prev.s_cum * (d - 1)) / d, d=d)


def feedback_valence(s_d: ScoreValue) -> Valence:
    """Exact thresholds: 0 is positive, 1 is negative, anything between is mixed."""
    s = _as_fraction(s_d)
    if s == 0:
        return Valence.POSITIVE
    if s == 1:
        return Valence.NEGATIVE
    return Valence.MIXED


def performance_feedback(newly_learned: Iterable[ConceptId]) -> Valence:
    """Binary signal: did any teaching happen in the last iteration."""
    return Valence.POSITIVE if frozenset(newly_learned) else Valence.NEGATIVE


def render_score(value: Rational) -> str:
    """Four fractional digits, the format used in logs and messages."""
    return f"{float(value):.4f}"


def score_pair(value: Rational) -> list[int]:
    """The exact integer pair behind a score, for lossless logging."""
    frac = Fraction(value)
    return [frac.numerator, frac.denominator]


def _load_templates() -> dict:
    with resources.files("superdoku.resources").joinpath("feedback_messages.json").open(
        "r", encoding="utf-8"
    ) as fh:
        return json.load(fh)


_TEMPLATES = _load_templates()


@dataclass(frozen=True)
class Feedback:
    """What the supervisor shows the participant for one iteration.

    Scores are carried only in the mmm condition; the performance
    condition carries a bare positive/negative valence; baseline carries
    nothing at all.
    """

    condition: Condition
    valence: Valence
    s_d: Fraction | None
    s_cum: Fraction | None
    message: str


def make_feedback(
    condition: Condition,
    s_d: Fraction,
    s_cum: Fraction,
    newly_learned: frozenset[ConceptId],
    rng: random.Random,
) -> Feedback:
    """Assemble condition-appropriate feedback, picking one of the fixed
    message templates with the supplied seeded generator."""
    if condition is Condition.BASELINE:
        return Feedback(condition, Valence.NONE, None, None, "")
    if condition is Condition.PERFORMANCE:
        valence = performance_feedback(newly_learned)
        template = rng.choice(_TEMPLATES["performance"][valence.value])
        return Feedback(condition, valence, None, None, template)
    valence = feedback_valence(s_d)
    template = rng.choice(_TEMPLATES["mmm"][valence.value])
    message = template.format(s_d=render_score(s_d), s_cum=render_score(s_cum))
    return Feedback(condition, valence, s_d, s_cum, message)
