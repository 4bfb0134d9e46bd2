"""The Superdoku token universe.

A token is one of 27 objects defined by three attributes (color, shape,
size) with three values each. A teaching move presents exactly three
pairwise-distinct tokens; everything derived from a combination is
order-invariant.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator

from .errors import InvalidCombination


class Color(str, Enum):
    BLUE = "blue"
    RED = "red"
    YELLOW = "yellow"


class Shape(str, Enum):
    CIRCLE = "circle"
    SQUARE = "square"
    TRIANGLE = "triangle"


class Size(str, Enum):
    SMALL = "small"
    MEDIUM = "medium"
    LARGE = "large"


ATTRIBUTES = ("color", "shape", "size")
ATTRIBUTE_VALUES: dict[str, tuple[str, ...]] = {
    "color": tuple(c.value for c in Color),
    "shape": tuple(s.value for s in Shape),
    "size": tuple(s.value for s in Size),
}


@dataclass(frozen=True)
class Token:
    """One of the 27 tokens. The canonical enumeration order (color-major,
    then shape, then size, each in declaration order) is what all_tokens
    returns and what logs and tests rely on for byte stability."""

    color: Color
    shape: Shape
    size: Size

    def attribute(self, name: str) -> str:
        return getattr(self, name).value

    def to_json(self) -> dict[str, str]:
        return {"color": self.color.value, "shape": self.shape.value, "size": self.size.value}

    @classmethod
    def from_json(cls, data: dict[str, str]) -> Token:
        try:
            return cls(Color(data["color"]), Shape(data["shape"]), Size(data["size"]))
        except (KeyError, ValueError, TypeError) as exc:
            raise InvalidCombination(f"not a valid token: {data!r}") from exc


def all_tokens() -> list[Token]:
    """All 27 tokens in canonical (color, shape, size) order."""
    return [Token(c, s, z) for c, s, z in itertools.product(Color, Shape, Size)]


@dataclass(frozen=True)
class TokenCombination:
    """An ordered presentation of exactly three pairwise-distinct tokens."""

    tokens: tuple[Token, Token, Token]

    def __post_init__(self) -> None:
        if len(self.tokens) != 3:
            raise InvalidCombination(f"expected 3 tokens, got {len(self.tokens)}")
        if len(set(self.tokens)) != 3:
            raise InvalidCombination("duplicate tokens in combination")

    def __iter__(self) -> Iterator[Token]:
        return iter(self.tokens)

    def values(self, attribute: str) -> tuple[str, str, str]:
        """The three values of one attribute, in presentation order."""
        a, b, c = self.tokens
        return (a.attribute(attribute), b.attribute(attribute), c.attribute(attribute))

    def to_json(self) -> list[dict[str, str]]:
        return [t.to_json() for t in self.tokens]

    @classmethod
    def from_json(cls, data: Iterable[dict[str, str]]) -> TokenCombination:
        items = list(data)
        if len(items) != 3:
            raise InvalidCombination(f"expected 3 tokens, got {len(items)}")
        a, b, c = (Token.from_json(d) for d in items)
        return cls((a, b, c))


def combination(*tokens: Token) -> TokenCombination:
    """Convenience constructor: combination(t1, t2, t3)."""
    if len(tokens) != 3:
        raise InvalidCombination(f"expected 3 tokens, got {len(tokens)}")
    return TokenCombination((tokens[0], tokens[1], tokens[2]))
