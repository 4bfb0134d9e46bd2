"""Simulated teachers that stand in for human participants.

Three policies, all deterministic given their seed:

* oracle: teaches the lowest-indexed concept the robot does not know yet,
  using a combination that activates exactly that one new concept (found
  by brute force over all 2925 combinations against its model of the
  robot) and an intention whose lexicon match is exactly that concept.
  One new concept per iteration, so it always finishes in 13 iterations.
* random: uniform valid combination, intention drawn from a fixed phrase
  bank; ignores feedback entirely.
* adaptive: keeps teaching within its current strategy family after
  positive feedback, rotates to another family after negative or mixed
  feedback, and explores a different family with a configured rate. With
  no feedback signal (baseline) it picks families at random.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Protocol, Sequence

from .concepts import DICTIONARY, ConceptId, detect_concepts
from .matching import Intention
from .session import FeedbackView
from .tokens import TokenCombination, all_tokens


class PolicyKind(str, Enum):
    ORACLE = "oracle"
    RANDOM = "random"
    ADAPTIVE = "adaptive"


DEFAULT_EXPLORATION_RATE = 0.2


@dataclass(frozen=True)
class TeacherPolicy:
    kind: PolicyKind
    seed: int
    exploration_rate: float = DEFAULT_EXPLORATION_RATE

    def __post_init__(self) -> None:
        if not 0.0 <= self.exploration_rate <= 1.0:
            raise ValueError(f"exploration_rate must be in [0, 1]: {self.exploration_rate}")


class Teacher(Protocol):
    def step(self, history: Sequence[FeedbackView]) -> tuple[TokenCombination, Intention]:
        """Choose the next move given the condition-filtered feedback so far."""
        ...


@lru_cache(maxsize=1)
def detection_table() -> tuple[tuple[TokenCombination, frozenset[ConceptId]], ...]:
    """detect_concepts precomputed for all 2925 combinations, canonical order."""
    rows = []
    for a, b, c in itertools.combinations(all_tokens(), 3):
        combo = TokenCombination((a, b, c))
        rows.append((combo, detect_concepts(combo)))
    return tuple(rows)


# What a combination teaching one concept in isolation activates on a fresh
# robot. Full distinctness necessarily co-activates the three uniqueness
# concepts, everything else can be activated alone.
def _isolation_target(cid: ConceptId) -> frozenset[ConceptId]:
    if cid is ConceptId.ALL_UNIQUE:
        return frozenset(
            {
                ConceptId.UNIQUE_COLORS,
                ConceptId.UNIQUE_SHAPES,
                ConceptId.UNIQUE_SIZES,
                ConceptId.ALL_UNIQUE,
            }
        )
    return frozenset({cid})


@lru_cache(maxsize=None)
def isolated_combo(cid: ConceptId) -> TokenCombination:
    """First canonical combination whose fresh-state activation is exactly
    the concept (plus, for full distinctness, its implied uniqueness set)."""
    target = _isolation_target(cid)
    for combo, detected in detection_table():
        if detected == target:
            return combo
    raise AssertionError(f"no isolating combination for {cid}")


CANONICAL_PHRASES: dict[ConceptId, str] = {
    ConceptId.COLOR_BLUE: "show the robot blue",
    ConceptId.COLOR_RED: "show the robot red",
    ConceptId.COLOR_YELLOW: "show the robot yellow",
    ConceptId.SHAPE_CIRCLE: "show the robot circles",
    ConceptId.SHAPE_SQUARE: "show the robot squares",
    ConceptId.SHAPE_TRIANGLE: "show the robot triangles",
    ConceptId.SIZE_SMALL: "show the robot small tokens",
    ConceptId.SIZE_MEDIUM: "show the robot medium tokens",
    ConceptId.SIZE_LARGE: "show the robot large tokens",
    ConceptId.UNIQUE_COLORS: "show the robot unique colors",
    ConceptId.UNIQUE_SHAPES: "show the robot unique shapes",
    ConceptId.UNIQUE_SIZES: "show the robot unique sizes",
    ConceptId.ALL_UNIQUE: "make everything completely different",
}


PHRASE_BANK: tuple[str, ...] = (
    "different colors",
    "different shapes",
    "different sizes",
    "all blue tokens",
    "three red tokens",
    "yellow tokens",
    "three circles",
    "squares and triangles",
    "small tokens",
    "large tokens together",
    "everything completely different",
    "look at these tokens",
    "teach the robot something new",
    "tokens in a row",
)


class OracleTeacher:
    """Knows the activation rules and tracks its own teaching, so it can
    pick, for each step, a combination that adds exactly one new concept."""

    def __init__(self, seed: int):
        del seed  # deterministic regardless; kept for the common signature
        self._model: set[ConceptId] = set()

    def step(self, history: Sequence[FeedbackView]) -> tuple[TokenCombination, Intention]:
        del history
        target = next(
            (cid for cid in DICTIONARY.ids() if cid not in self._model), None
        )
        if target is None:
            raise RuntimeError("oracle teacher called on a fully taught robot")
        combo = self._combo_for(target)
        self._model.update(detect_concepts(combo))
        return combo, Intention(CANONICAL_PHRASES[target])

    def _combo_for(self, target: ConceptId) -> TokenCombination:
        best: TokenCombination | None = None
        best_extra = len(DICTIONARY)
        for combo, detected in detection_table():
            newly = detected - self._model
            if newly == {target}:
                return combo
            if target in newly and len(newly) - 1 < best_extra:
                best, best_extra = combo, len(newly) - 1
        if best is None:
            raise AssertionError(f"no combination teaches {target}")
        return best


class RandomTeacher:
    def __init__(self, seed: int):
        self._rng = random.Random(seed)

    def step(self, history: Sequence[FeedbackView]) -> tuple[TokenCombination, Intention]:
        del history
        tokens = self._rng.sample(all_tokens(), 3)
        intention = Intention(self._rng.choice(PHRASE_BANK))
        return TokenCombination((tokens[0], tokens[1], tokens[2])), intention


_FAMILIES: tuple[tuple[ConceptId, ...], ...] = (
    (ConceptId.COLOR_BLUE, ConceptId.COLOR_RED, ConceptId.COLOR_YELLOW),
    (ConceptId.SHAPE_CIRCLE, ConceptId.SHAPE_SQUARE, ConceptId.SHAPE_TRIANGLE),
    (ConceptId.SIZE_SMALL, ConceptId.SIZE_MEDIUM, ConceptId.SIZE_LARGE),
    (
        ConceptId.UNIQUE_COLORS,
        ConceptId.UNIQUE_SHAPES,
        ConceptId.UNIQUE_SIZES,
        ConceptId.ALL_UNIQUE,
    ),
)


class AdaptiveTeacher:
    def __init__(self, seed: int, exploration_rate: float = DEFAULT_EXPLORATION_RATE):
        self._rng = random.Random(seed)
        self._exploration_rate = exploration_rate
        self._family: int | None = None
        self._cursors = [0] * len(_FAMILIES)

    def _other_family(self) -> int:
        others = [i for i in range(len(_FAMILIES)) if i != self._family]
        return self._rng.choice(others)

    def _pick_family(self, history: Sequence[FeedbackView]) -> int:
        if self._family is None or not history:
            return self._rng.randrange(len(_FAMILIES))
        valence = history[-1].valence
        if valence is None:
            return self._rng.randrange(len(_FAMILIES))
        explore = self._rng.random() < self._exploration_rate
        if valence == "positive":
            return self._other_family() if explore else self._family
        # negative or mixed: always leave the family that just failed
        if explore:
            return self._other_family()
        return (self._family + 1) % len(_FAMILIES)

    def step(self, history: Sequence[FeedbackView]) -> tuple[TokenCombination, Intention]:
        self._family = self._pick_family(history)
        targets = _FAMILIES[self._family]
        target = targets[self._cursors[self._family] % len(targets)]
        self._cursors[self._family] += 1
        return isolated_combo(target), Intention(CANONICAL_PHRASES[target])

    @property
    def current_family(self) -> int | None:
        return self._family


def make_teacher(policy: TeacherPolicy, seed: int | None = None) -> Teacher:
    """Instantiate a policy; `seed` overrides the policy seed (used to give
    each cohort session its own derived stream)."""
    effective = policy.seed if seed is None else seed
    if policy.kind is PolicyKind.ORACLE:
        return OracleTeacher(effective)
    if policy.kind is PolicyKind.RANDOM:
        return RandomTeacher(effective)
    return AdaptiveTeacher(effective, policy.exploration_rate)
