"""The concept dictionary.

Thirteen learnable concepts: nine attribute-value concepts (all three
presented tokens share one value), three per-attribute uniqueness concepts
(one attribute is pairwise distinct across the presented tokens), and one
full-distinctness concept (every attribute is pairwise distinct).

Each entry bundles three independent views of the concept:

* a detection predicate over a three-token combination (what a teaching
  move activates),
* a grid predicate over a 3x3 demonstration grid (what the robot must
  honor when it shows its knowledge),
* lexicon trigger patterns (how the offline matcher recognizes the
  concept in an intention).

Everything else in the package iterates this dictionary instead of
hardcoding concept identities, so the composition can change in one place.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Iterator

from .errors import UnknownConcept
from .grid import Grid
from .tokens import ATTRIBUTE_VALUES, TokenCombination


class ConceptId(str, Enum):
    """Identifiers of the 13 concepts, in canonical dictionary order."""

    COLOR_BLUE = "color-blue"
    COLOR_RED = "color-red"
    COLOR_YELLOW = "color-yellow"
    SHAPE_CIRCLE = "shape-circle"
    SHAPE_SQUARE = "shape-square"
    SHAPE_TRIANGLE = "shape-triangle"
    SIZE_SMALL = "size-small"
    SIZE_MEDIUM = "size-medium"
    SIZE_LARGE = "size-large"
    UNIQUE_COLORS = "unique-colors"
    UNIQUE_SHAPES = "unique-shapes"
    UNIQUE_SIZES = "unique-sizes"
    ALL_UNIQUE = "all-unique"


# A trigger pattern is a conjunction of slots; each slot is satisfied when
# any of its phrases occurs as a whole word (or word sequence) in the
# normalized intention text.
TriggerPattern = tuple[frozenset[str], ...]

DISTINCTNESS_CUES = frozenset({"unique", "different", "distinct", "vary", "varying"})
TOTALITY_CUES = frozenset({"everything", "all attribute", "completely"})


@dataclass(frozen=True)
class ConceptEntry:
    id: ConceptId
    description: str
    detect: Callable[[TokenCombination], bool]
    grid_ok: Callable[[Grid], bool]
    lexicon: tuple[TriggerPattern, ...] = field(repr=False)


def _all_share(attribute: str, value: str) -> Callable[[TokenCombination], bool]:
    def predicate(combo: TokenCombination) -> bool:
        return all(v == value for v in combo.values(attribute))

    return predicate


def _all_distinct(attribute: str) -> Callable[[TokenCombination], bool]:
    def predicate(combo: TokenCombination) -> bool:
        return len(set(combo.values(attribute))) == 3

    return predicate


def _fully_distinct(combo: TokenCombination) -> bool:
    return all(len(set(combo.values(a))) == 3 for a in ATTRIBUTE_VALUES)


def _grid_has_value(attribute: str, value: str) -> Callable[[Grid], bool]:
    def predicate(grid: Grid) -> bool:
        return any(t.attribute(attribute) == value for t in grid.cells)

    return predicate


def _grid_latin(attribute: str) -> Callable[[Grid], bool]:
    def predicate(grid: Grid) -> bool:
        for i in range(3):
            row = [t.attribute(attribute) for t in grid.row(i)]
            col = [t.attribute(attribute) for t in grid.column(i)]
            if len(set(row)) != 3 or len(set(col)) != 3:
                return False
        return True

    return predicate


def _grid_fully_latin(grid: Grid) -> bool:
    return all(_grid_latin(a)(grid) for a in ATTRIBUTE_VALUES)


def _value_word(value: str) -> tuple[TriggerPattern, ...]:
    return ((frozenset({value}),),)


def _uniqueness_pattern(attribute: str) -> tuple[TriggerPattern, ...]:
    return ((DISTINCTNESS_CUES, frozenset({attribute})),)


_NOUNS = {"color": "color", "shape": "shape", "size": "size"}


def _build_entries() -> tuple[ConceptEntry, ...]:
    entries: list[ConceptEntry] = []
    for attribute in ("color", "shape", "size"):
        for value in ATTRIBUTE_VALUES[attribute]:
            cid = ConceptId(f"{attribute}-{value}")
            entries.append(
                ConceptEntry(
                    id=cid,
                    description=f"All three presented tokens have {attribute} {value}.",
                    detect=_all_share(attribute, value),
                    grid_ok=_grid_has_value(attribute, value),
                    lexicon=_value_word(value),
                )
            )
    for attribute in ("color", "shape", "size"):
        cid = ConceptId(f"unique-{attribute}s")
        entries.append(
            ConceptEntry(
                id=cid,
                description=f"The three presented tokens all differ in {attribute}.",
                detect=_all_distinct(attribute),
                grid_ok=_grid_latin(attribute),
                lexicon=_uniqueness_pattern(_NOUNS[attribute]),
            )
        )
    entries.append(
        ConceptEntry(
            id=ConceptId.ALL_UNIQUE,
            description="The three presented tokens differ in every attribute at once.",
            detect=_fully_distinct,
            grid_ok=_grid_fully_latin,
            lexicon=((DISTINCTNESS_CUES, TOTALITY_CUES),),
        )
    )
    return tuple(entries)


class ConceptDictionary:
    """The fixed set of learnable concepts with their predicate views."""

    def __init__(self, entries: Iterable[ConceptEntry]):
        self._entries = tuple(entries)
        self._by_id = {e.id: e for e in self._entries}
        if len(self._by_id) != len(self._entries):
            raise ValueError("duplicate concept ids")
        self._order = {e.id: i for i, e in enumerate(self._entries)}

    @classmethod
    def standard(cls) -> ConceptDictionary:
        return cls(_build_entries())

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[ConceptEntry]:
        return iter(self._entries)

    def __contains__(self, cid: object) -> bool:
        return cid in self._by_id

    def entry(self, cid: ConceptId) -> ConceptEntry:
        try:
            return self._by_id[cid]
        except KeyError:
            raise UnknownConcept(f"unknown concept: {cid}") from None

    def ids(self) -> tuple[ConceptId, ...]:
        return tuple(e.id for e in self._entries)

    def index(self, cid: ConceptId) -> int:
        """Position in canonical dictionary order."""
        try:
            return self._order[cid]
        except KeyError:
            raise UnknownConcept(f"unknown concept: {cid}") from None

    def sorted(self, concepts: Iterable[ConceptId]) -> list[ConceptId]:
        """Concepts in canonical dictionary order, for stable serialization."""
        return sorted(concepts, key=self.index)

    def require_known(self, concepts: Iterable[ConceptId]) -> None:
        for c in concepts:
            if c not in self._by_id:
                raise UnknownConcept(f"unknown concept: {c}")


DICTIONARY = ConceptDictionary.standard()


def detect_concepts(
    combo: TokenCombination, dictionary: ConceptDictionary = DICTIONARY
) -> frozenset[ConceptId]:
    """Every concept whose detection predicate holds for the combination.

    Order-invariant: the predicates only look at value multisets per
    attribute, never at token positions.
    """
    return frozenset(e.id for e in dictionary if e.detect(combo))
