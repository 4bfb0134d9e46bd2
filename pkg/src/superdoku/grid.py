"""The 3x3 demonstration grid.

Cells hold tokens and tokens may repeat across cells; the Superdoku rules
constrain attribute values per row and column, not token identities.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .tokens import Token


@dataclass(frozen=True)
class Grid:
    """A fully populated 3x3 arrangement of tokens, row-major."""

    cells: tuple[Token, ...]

    def __post_init__(self) -> None:
        if len(self.cells) != 9:
            raise ValueError(f"grid needs 9 cells, got {len(self.cells)}")

    def cell(self, row: int, col: int) -> Token:
        return self.cells[row * 3 + col]

    def row(self, r: int) -> tuple[Token, Token, Token]:
        return self.cells[r * 3], self.cells[r * 3 + 1], self.cells[r * 3 + 2]

    def column(self, c: int) -> tuple[Token, Token, Token]:
        return self.cells[c], self.cells[3 + c], self.cells[6 + c]

    def to_json(self) -> list[dict[str, str]]:
        return [t.to_json() for t in self.cells]

    @classmethod
    def from_json(cls, data: Iterable[dict[str, str]]) -> Grid:
        return cls(tuple(Token.from_json(d) for d in data))
