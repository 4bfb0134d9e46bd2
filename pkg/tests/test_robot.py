from __future__ import annotations

import random

import pytest

from helpers import EX1_COMBO, EX2_COMBO, EX3_COMBO, latin_by_counting, random_combination
from superdoku.concepts import DICTIONARY, ConceptId
from superdoku.grid import Grid
from superdoku.robot import RobotState, demonstrate, is_fully_taught, learn, validate_grid
from superdoku.tokens import Color, Shape, Size, Token


def ids(*names: str) -> frozenset[ConceptId]:
    return frozenset(ConceptId(n) for n in names)


ALL_CONCEPTS = frozenset(DICTIONARY.ids())


class TestLearning:
    def test_fresh_state_learns_unique_colors_from_example_one(self):
        state, newly = learn(RobotState.fresh(0), EX1_COMBO)
        assert newly == ids("unique-colors")
        assert state.learned == ids("unique-colors")

    def test_known_concept_is_not_newly_learned_again(self):
        state = RobotState(ids("unique-colors"), 0)
        state, newly = learn(state, EX2_COMBO)
        assert newly == frozenset()
        assert state.learned == ids("unique-colors")

    def test_example_three_teaches_three_concepts_at_once(self):
        _, newly = learn(RobotState.fresh(0), EX3_COMBO)
        assert newly == ids("size-small", "unique-colors", "unique-shapes")

    def test_repeat_of_same_combination_is_idempotent(self):
        state, first = learn(RobotState.fresh(0), EX3_COMBO)
        state2, second = learn(state, EX3_COMBO)
        assert first and not second
        assert state2.learned == state.learned

    def test_learning_is_monotone(self):
        rng = random.Random(5)
        state = RobotState.fresh(0)
        for _ in range(30):
            before = state.learned
            state, _ = learn(state, random_combination(rng))
            assert before <= state.learned


class TestFullyTaught:
    def test_fresh_state_is_not(self):
        assert not is_fully_taught(RobotState.fresh(0))

    def test_all_13_is(self):
        assert is_fully_taught(RobotState(ALL_CONCEPTS, 0))

    def test_12_of_13_is_not(self):
        subset = ALL_CONCEPTS - {ConceptId.ALL_UNIQUE}
        assert not is_fully_taught(RobotState(subset, 0))


def _cyclic_latin_grid() -> Grid:
    """Hand-built grid whose three attribute layers are all Latin squares."""
    colors, shapes, sizes = list(Color), list(Shape), list(Size)
    cells = []
    for r in range(3):
        for c in range(3):
            cells.append(
                Token(colors[(r + c) % 3], shapes[(r + 2 * c) % 3], sizes[(2 * r + c) % 3])
            )
    return Grid(tuple(cells))


class TestValidateGrid:
    def test_full_latin_grid_satisfies_all_13(self):
        verdicts = validate_grid(_cyclic_latin_grid(), ALL_CONCEPTS)
        assert len(verdicts) == 13
        assert all(verdicts.values())

    def test_duplicate_color_in_a_row_fails_unique_colors(self):
        grid = _cyclic_latin_grid()
        cells = list(grid.cells)
        cells[1] = Token(cells[0].color, cells[1].shape, cells[1].size)
        bad = Grid(tuple(cells))
        assert validate_grid(bad, ids("unique-colors")) == {ConceptId.UNIQUE_COLORS: False}

    def test_empty_concept_set_gives_empty_map(self):
        assert validate_grid(_cyclic_latin_grid(), frozenset()) == {}


class TestDemonstrate:
    def test_deterministic_in_state_and_seed(self):
        state = RobotState(ids("unique-colors", "size-small"), 99)
        assert demonstrate(state) == demonstrate(state)

    def test_different_seeds_give_different_grids(self):
        a = demonstrate(RobotState.fresh(1))
        b = demonstrate(RobotState.fresh(2))
        assert a != b

    def test_fresh_state_has_no_constraints_to_violate(self):
        grid = demonstrate(RobotState.fresh(7))
        assert len(grid.cells) == 9

    def test_single_uniqueness_concept_makes_that_attribute_latin(self):
        grid = demonstrate(RobotState(ids("unique-colors"), 3))
        assert latin_by_counting(grid.cells, "color")
        assert all(validate_grid(grid, ids("unique-colors")).values())

    def test_value_concept_puts_the_value_on_the_grid(self):
        grid = demonstrate(RobotState(ids("color-blue", "size-large"), 11))
        assert any(t.color is Color.BLUE for t in grid.cells)
        assert any(t.size is Size.LARGE for t in grid.cells)

    def test_full_knowledge_yields_triple_latin_grid(self):
        for seed in range(5):
            grid = demonstrate(RobotState(ALL_CONCEPTS, seed))
            for attr in ("color", "shape", "size"):
                assert latin_by_counting(grid.cells, attr)

    @pytest.mark.parametrize("trial", range(5))
    def test_random_states_best_effort_sample(self, trial):
        rng = random.Random(trial)
        learned = frozenset(
            rng.sample(sorted(ALL_CONCEPTS, key=DICTIONARY.index), rng.randint(0, 13))
        )
        grid = demonstrate(RobotState(learned, rng.getrandbits(64)))
        assert all(validate_grid(grid, learned).values())


class TestGridType:
    def test_grid_needs_nine_cells(self):
        with pytest.raises(ValueError):
            Grid(tuple(demonstrate(RobotState.fresh(0)).cells[:8]))

    def test_grid_json_round_trip(self):
        grid = demonstrate(RobotState.fresh(4))
        assert Grid.from_json(grid.to_json()) == grid

    def test_row_and_column_accessors(self):
        grid = _cyclic_latin_grid()
        assert grid.row(0) == (grid.cell(0, 0), grid.cell(0, 1), grid.cell(0, 2))
        assert grid.column(2) == (grid.cell(0, 2), grid.cell(1, 2), grid.cell(2, 2))
