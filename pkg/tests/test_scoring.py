from __future__ import annotations

import random
from fractions import Fraction
from statistics import fmean

import pytest
from hypothesis import given, settings, strategies as st

from superdoku.concepts import DICTIONARY, ConceptId
from superdoku.errors import UnknownConcept
from superdoku.scoring import (
    Condition,
    CumulativeScore,
    ScoreStrategy,
    Valence,
    cumulative_score,
    feedback_valence,
    iteration_score,
    make_feedback,
    matching_function,
    performance_feedback,
    render_score,
    score_pair,
)

LITERAL = ScoreStrategy.LITERAL
EXAMPLE = ScoreStrategy.EXAMPLE_CONSISTENT


def ids(*names: str) -> frozenset[ConceptId]:
    return frozenset(ConceptId(n) for n in names)


concept_sets = st.frozensets(st.sampled_from(sorted(ConceptId, key=DICTIONARY.index)))


class TestMatchingFunction:
    def test_member(self):
        assert matching_function(ConceptId.UNIQUE_COLORS, ids("unique-colors")) == 1

    def test_empty_set(self):
        assert matching_function(ConceptId.SIZE_LARGE, frozenset()) == 0

    def test_absent_member(self):
        assert matching_function(ConceptId.UNIQUE_SHAPES, ids("unique-colors")) == 0


class TestIterationScore:
    def test_full_alignment_scores_zero_under_both_strategies(self):
        for strategy in (LITERAL, EXAMPLE):
            score = iteration_score(ids("unique-colors"), ids("unique-colors"), strategy)
            assert score.s_d == 0
            assert (score.matched_learned, score.n_learned) == (1, 1)

    def test_partial_alignment_is_half_under_example_strategy(self):
        matched = ids("unique-shapes", "unique-colors")
        learned = ids("unique-colors")
        assert iteration_score(matched, learned, EXAMPLE).s_d == Fraction(1, 2)
        # the plain proportional rule calls this full alignment instead
        assert iteration_score(matched, learned, LITERAL).s_d == 0

    def test_full_misalignment_scores_one_under_both_strategies(self):
        matched = ids("size-large")
        learned = ids("size-small", "unique-colors", "unique-shapes")
        assert iteration_score(matched, learned, LITERAL).s_d == 1
        assert iteration_score(matched, learned, EXAMPLE).s_d == 1

    def test_nothing_learned_scores_one(self):
        for strategy in (LITERAL, EXAMPLE):
            assert iteration_score(ids("color-blue"), frozenset(), strategy).s_d == 1
            assert iteration_score(frozenset(), frozenset(), strategy).s_d == 1

    def test_derived_two_by_two_case(self):
        matched = ids("unique-colors", "size-small")
        learned = ids("size-small", "unique-shapes")
        assert iteration_score(matched, learned, LITERAL).s_d == Fraction(1, 2)
        assert iteration_score(matched, learned, EXAMPLE).s_d == Fraction(1, 3) * 2

    def test_unknown_concept_rejected(self):
        with pytest.raises(UnknownConcept):
            iteration_score({"bogus"}, frozenset())  # type: ignore[arg-type]
        with pytest.raises(UnknownConcept):
            iteration_score(frozenset(), {"bogus"})  # type: ignore[arg-type]

    @given(concept_sets, concept_sets, st.sampled_from([LITERAL, EXAMPLE]))
    def test_score_always_in_unit_interval(self, matched, learned, strategy):
        s = iteration_score(matched, learned, strategy).s_d
        assert 0 <= s <= 1

    @given(concept_sets, concept_sets)
    def test_literal_zero_iff_learned_nonempty_subset_of_matched(self, matched, learned):
        score = iteration_score(matched, learned, LITERAL)
        assert (score.s_d == 0) == (bool(learned) and learned <= matched)

    @given(concept_sets, concept_sets)
    def test_example_zero_iff_sets_equal_and_nonempty(self, matched, learned):
        score = iteration_score(matched, learned, EXAMPLE)
        assert (score.s_d == 0) == (bool(matched) and matched == learned)

    @given(concept_sets, concept_sets, st.sampled_from([LITERAL, EXAMPLE]))
    def test_disjoint_sets_always_score_one(self, matched, learned, strategy):
        if matched & learned:
            matched = matched - learned
        assert iteration_score(matched, learned, strategy).s_d == 1

    @given(concept_sets, concept_sets, st.sampled_from([LITERAL, EXAMPLE]))
    def test_partial_overlap_scores_strictly_between(self, matched, learned, strategy):
        overlap = len(matched & learned)
        if 0 < overlap < len(learned):
            s = iteration_score(matched, learned, strategy).s_d
            assert 0 < s < 1

    @given(concept_sets, concept_sets)
    def test_strategies_agree_on_equal_or_disjoint_sets(self, matched, learned):
        if matched == learned or not (matched & learned):
            lit = iteration_score(matched, learned, LITERAL).s_d
            exa = iteration_score(matched, learned, EXAMPLE).s_d
            assert lit == exa


class TestCumulativeScore:
    def test_first_iteration(self):
        assert cumulative_score(None, 1.0) == CumulativeScore(Fraction(1), 1)

    def test_second_iteration_mean(self):
        first = cumulative_score(None, 1.0)
        assert cumulative_score(first, 0.0) == CumulativeScore(Fraction(1, 2), 2)

    def test_three_step_sequence(self):
        cum = None
        for s in (1, 0, 0.5):
            cum = cumulative_score(cum, s)
        assert cum == CumulativeScore(Fraction(1, 2), 3)

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            cumulative_score(None, 1.5)

    @settings(max_examples=300)
    @given(st.lists(st.floats(0, 1, allow_nan=False), min_size=1, max_size=25))
    def test_fold_equals_arithmetic_mean(self, values):
        cum = None
        for v in values:
            cum = cumulative_score(cum, v)
        assert abs(float(cum.s_cum) - fmean(values)) < 1e-12
        assert cum.d == len(values)


class TestValence:
    def test_zero_is_positive(self):
        assert feedback_valence(0) is Valence.POSITIVE

    def test_half_is_mixed(self):
        assert feedback_valence(0.5) is Valence.MIXED

    def test_one_is_negative(self):
        assert feedback_valence(1) is Valence.NEGATIVE

    def test_thresholds_are_exact_not_banded(self):
        assert feedback_valence(Fraction(1, 10**9)) is Valence.MIXED
        assert feedback_valence(Fraction(10**9 - 1, 10**9)) is Valence.MIXED

    def test_performance_feedback_is_binary_on_novelty(self):
        assert performance_feedback(ids("unique-colors")) is Valence.POSITIVE
        assert performance_feedback(frozenset()) is Valence.NEGATIVE
        assert performance_feedback(ids("size-small", "unique-shapes")) is Valence.POSITIVE


class TestRendering:
    def test_four_fractional_digits(self):
        assert render_score(Fraction(1, 2)) == "0.5000"
        assert render_score(Fraction(2, 3)) == "0.6667"
        assert render_score(Fraction(0)) == "0.0000"

    def test_exact_pair(self):
        assert score_pair(Fraction(2, 4)) == [1, 2]


class TestMakeFeedback:
    def _make(self, condition, s_d, newly=frozenset()):
        return make_feedback(
            condition, Fraction(s_d), Fraction(s_d), newly, random.Random(0)
        )

    def test_baseline_exposes_nothing(self):
        fb = self._make(Condition.BASELINE, 0, ids("color-blue"))
        assert fb.valence is Valence.NONE
        assert fb.s_d is None and fb.s_cum is None
        assert fb.message == ""

    def test_performance_exposes_valence_only(self):
        fb = self._make(Condition.PERFORMANCE, 1, ids("color-blue"))
        assert fb.valence is Valence.POSITIVE
        assert fb.s_d is None and fb.s_cum is None
        assert fb.message

    def test_mmm_message_carries_both_scores(self):
        fb = make_feedback(
            Condition.MMM, Fraction(1, 2), Fraction(2, 3), frozenset(), random.Random(1)
        )
        assert fb.valence is Valence.MIXED
        assert fb.s_d == Fraction(1, 2) and fb.s_cum == Fraction(2, 3)
        assert "0.5000" in fb.message and "0.6667" in fb.message

    def test_template_choice_is_seeded(self):
        a = self._make(Condition.PERFORMANCE, 0, ids("color-blue"))
        b = self._make(Condition.PERFORMANCE, 0, ids("color-blue"))
        assert a == b
