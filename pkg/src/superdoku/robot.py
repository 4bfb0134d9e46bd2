"""The virtual robot: threshold concept activation plus grid demonstrations.

Learning is intentionally simple: presenting a combination activates every
concept whose detection predicate holds, and knowledge never shrinks.
Demonstrations render the robot's current knowledge into a 3x3 grid. Each
learned uniqueness concept imposes its Latin constraint (every value of
that attribute exactly once per row and per column), each learned value
concept requires at least one matching cell, and everything unconstrained
is drawn from a seeded generator so the same state and seed always produce
the same grid.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace

from .concepts import DICTIONARY, ConceptDictionary, ConceptId, detect_concepts
from .errors import SolverExhausted
from .grid import Grid
from .rng import derive_seed
from .tokens import ATTRIBUTE_VALUES, Token, TokenCombination, all_tokens

MAX_RESTARTS = 100


@dataclass(frozen=True)
class RobotState:
    """Immutable snapshot of the robot: what it knows plus its seed."""

    learned: frozenset[ConceptId]
    rng_seed: int

    @classmethod
    def fresh(cls, rng_seed: int) -> RobotState:
        return cls(learned=frozenset(), rng_seed=rng_seed)


def learn(
    state: RobotState,
    combo: TokenCombination,
    dictionary: ConceptDictionary = DICTIONARY,
) -> tuple[RobotState, frozenset[ConceptId]]:
    """Activate every concept the combination demonstrates.

    Returns the successor state and the concepts that are new in this
    iteration. Repeating a combination is a no-op the second time.
    """
    detected = detect_concepts(combo, dictionary)
    newly = detected - state.learned
    return replace(state, learned=state.learned | detected), newly


def is_fully_taught(state: RobotState, dictionary: ConceptDictionary = DICTIONARY) -> bool:
    return len(state.learned) == len(dictionary)


def _constraints(
    learned: frozenset[ConceptId], dictionary: ConceptDictionary
) -> tuple[set[str], dict[str, set[str]]]:
    """Split learned concepts into Latin-bound attributes and required values.

    A learned uniqueness concept for an attribute subsumes that attribute's
    value requirements: a Latin fill shows every value three times anyway.
    """
    latin: set[str] = set()
    required: dict[str, set[str]] = {a: set() for a in ATTRIBUTE_VALUES}
    for cid in learned:
        name = cid.value
        if name == "all-unique":
            latin.update(ATTRIBUTE_VALUES)
        elif name.startswith("unique-"):
            latin.add(name.removeprefix("unique-").removesuffix("s"))
        else:
            attribute, _, value = name.partition("-")
            required[attribute].add(value)
    for attribute in latin:
        required[attribute].clear()
    return latin, required


def _fill(cells: list[Token | None], pool: list[Token], latin: set[str], rng: random.Random) -> bool:
    """Backtracking fill in row-major order with incremental Latin checks."""
    index = cells.index(None) if None in cells else -1
    if index < 0:
        return True
    row, col = divmod(index, 3)
    candidates = pool[:]
    rng.shuffle(candidates)
    for token in candidates:
        feasible = True
        for attribute in latin:
            value = token.attribute(attribute)
            for other_col in range(col):
                if cells[row * 3 + other_col].attribute(attribute) == value:
                    feasible = False
                    break
            if feasible:
                for other_row in range(row):
                    if cells[other_row * 3 + col].attribute(attribute) == value:
                        feasible = False
                        break
            if not feasible:
                break
        if not feasible:
            continue
        cells[index] = token
        if _fill(cells, pool, latin, rng):
            return True
        cells[index] = None
    return False


def demonstrate(state: RobotState, dictionary: ConceptDictionary = DICTIONARY) -> Grid:
    """Render current knowledge as a grid. Pure in (learned set, seed).

    Value-concept requirements are checked after a complete fill; a fill
    that misses one is retried with a reseeded generator, up to
    MAX_RESTARTS times. The full dictionary is always satisfiable, so
    exhaustion means a solver defect, not a bad input.
    """
    latin, required = _constraints(state.learned, dictionary)
    pool = all_tokens()
    for attempt in range(MAX_RESTARTS):
        rng = random.Random(derive_seed(state.rng_seed, "demo-attempt", attempt))
        cells: list[Token | None] = [None] * 9
        if not _fill(cells, pool, latin, rng):
            continue
        grid = Grid(tuple(cells))
        if all(
            any(t.attribute(attribute) == value for t in grid.cells)
            for attribute, values in required.items()
            for value in values
        ):
            return grid
    raise SolverExhausted(
        f"no grid found for {sorted(c.value for c in state.learned)} after {MAX_RESTARTS} restarts"
    )


def validate_grid(
    grid: Grid,
    concepts: frozenset[ConceptId] | set[ConceptId],
    dictionary: ConceptDictionary = DICTIONARY,
) -> dict[ConceptId, bool]:
    """Check each concept's grid predicate straight from its definition.

    This is the solver's oracle: it shares no logic with the backtracking
    fill, only the dictionary's definitional predicates.
    """
    return {cid: dictionary.entry(cid).grid_ok(grid) for cid in concepts}
