"""Shared fixtures and independent oracles for the test suite.

The checkers in here are deliberately written from first principles with
occurrence counting over plain value tuples, sharing no code with the
library's predicate implementations, so they can serve as oracles.
"""

from __future__ import annotations

import random

from superdoku.matching import Intention
from superdoku.scoring import Condition, ScoreStrategy
from superdoku.session import Session, SessionConfig, SessionStatus, create_session, submit_iteration
from superdoku.teachers import PHRASE_BANK
from superdoku.tokens import Color, Shape, Size, Token, TokenCombination, all_tokens, combination

# The three worked teaching examples used across the suite.
EX1_COMBO = combination(
    Token(Color.BLUE, Shape.CIRCLE, Size.SMALL),
    Token(Color.RED, Shape.CIRCLE, Size.MEDIUM),
    Token(Color.YELLOW, Shape.TRIANGLE, Size.SMALL),
)
EX1_INTENTION = "I want to show the robot unique colors."

EX2_COMBO = combination(
    Token(Color.BLUE, Shape.CIRCLE, Size.LARGE),
    Token(Color.RED, Shape.CIRCLE, Size.MEDIUM),
    Token(Color.YELLOW, Shape.SQUARE, Size.MEDIUM),
)
EX2_INTENTION = "different shapes and colors"

EX3_COMBO = combination(
    Token(Color.RED, Shape.SQUARE, Size.SMALL),
    Token(Color.BLUE, Shape.TRIANGLE, Size.SMALL),
    Token(Color.YELLOW, Shape.CIRCLE, Size.SMALL),
)
EX3_INTENTION = "Teach the robot to recognize large tokens."

_ATTR_VALUES = {
    "color": ("blue", "red", "yellow"),
    "shape": ("circle", "square", "triangle"),
    "size": ("small", "medium", "large"),
}


def brute_force_detect(tokens) -> set[str]:
    """Concept detection by plain occurrence counting over value strings."""
    observed = {
        attr: [getattr(t, attr).value for t in tokens] for attr in _ATTR_VALUES
    }
    found: set[str] = set()
    for attr, values in _ATTR_VALUES.items():
        for value in values:
            if observed[attr].count(value) == 3:
                found.add(f"{attr}-{value}")
        if all(observed[attr].count(v) == 1 for v in values):
            found.add(f"unique-{attr}s")
    if {"unique-colors", "unique-shapes", "unique-sizes"} <= found:
        found.add("all-unique")
    return found


def latin_by_counting(cells, attr: str) -> bool:
    """Each value of the attribute exactly once per row and per column."""
    values = [getattr(t, attr).value for t in cells]
    for i in range(3):
        row = values[3 * i : 3 * i + 3]
        col = values[i::3]
        for v in _ATTR_VALUES[attr]:
            if row.count(v) != 1 or col.count(v) != 1:
                return False
    return True


def count_full_latin_grids() -> int:
    """Exhaustively count 3x3 grids of (c, s, z) triples in which every
    attribute layer is a Latin square. Backtracking over integer triples;
    no library code involved."""
    cells: list[tuple[int, int, int]] = []
    triples = [(c, s, z) for c in range(3) for s in range(3) for z in range(3)]

    def feasible(candidate: tuple[int, int, int]) -> bool:
        idx = len(cells)
        r, col = divmod(idx, 3)
        for axis in range(3):
            v = candidate[axis]
            for cc in range(col):
                if cells[r * 3 + cc][axis] == v:
                    return False
            for rr in range(r):
                if cells[rr * 3 + col][axis] == v:
                    return False
        return True

    def layers_are_latin() -> bool:
        for axis in range(3):
            values = [t[axis] for t in cells]
            for i in range(3):
                row = values[3 * i : 3 * i + 3]
                col = values[i::3]
                if any(row.count(v) != 1 or col.count(v) != 1 for v in range(3)):
                    return False
        return True

    count = 0

    def recurse() -> None:
        nonlocal count
        if len(cells) == 9:
            count += layers_are_latin()
            return
        for candidate in triples:
            if feasible(candidate):
                cells.append(candidate)
                recurse()
                cells.pop()

    recurse()
    return count


def count_latin_squares_one_attribute() -> int:
    """All 3^9 single-attribute fills, counted by the definitional check."""
    count = 0
    for n in range(3**9):
        values = []
        x = n
        for _ in range(9):
            values.append(x % 3)
            x //= 3
        ok = True
        for i in range(3):
            row = values[3 * i : 3 * i + 3]
            col = values[i::3]
            if any(row.count(v) != 1 or col.count(v) != 1 for v in range(3)):
                ok = False
                break
        count += ok
    return count


def random_combination(rng: random.Random) -> TokenCombination:
    tokens = rng.sample(all_tokens(), 3)
    return TokenCombination((tokens[0], tokens[1], tokens[2]))


def random_session(rng: random.Random) -> Session:
    """A session driven by random valid submissions; may stop while active."""
    config = SessionConfig(
        condition=rng.choice(list(Condition)),
        score_strategy=rng.choice(list(ScoreStrategy)),
        seed=rng.getrandbits(64),
        max_iterations=rng.randint(1, 25),
        demo_interval=rng.randint(1, 7),
    )
    session = create_session(config)
    budget = rng.randint(0, config.max_iterations)
    while session.status is SessionStatus.ACTIVE and session.d < budget:
        submit_iteration(
            session, random_combination(rng), Intention(rng.choice(PHRASE_BANK))
        )
    return session
