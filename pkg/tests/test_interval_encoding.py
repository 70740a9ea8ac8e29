"""
세그먼트 트리 접두사 커버 테스트
"""

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from core.config import FieldConfig
from core.interval_encoding import (
    MARKED_COVER_MAX_WIDTH,
    BitVariable,
    Literal,
    Prefix,
    canonical_cover,
    encode_value,
    format_terms,
    interval_to_terms,
    marked_cover,
    naive_term_count,
    terms_hold,
)
from core.policy import Interval

W4 = FieldConfig((4,))


def all_intervals(width: int):
    top = (1 << width) - 1
    for lo in range(top + 1):
        for hi in range(lo, top + 1):
            yield Interval(lo, hi)


@st.composite
def interval_in_width(draw, max_width: int = 12):
    width = draw(st.integers(min_value=1, max_value=max_width))
    a = draw(st.integers(min_value=0, max_value=(1 << width) - 1))
    b = draw(st.integers(min_value=0, max_value=(1 << width) - 1))
    return width, Interval(min(a, b), max(a, b))


class TestEncodeValue:
    def test_five_in_eight_bits(self):
        config = FieldConfig((8,))
        term = encode_value(5, 0, config)
        assert [lit.positive for lit in term] == [False] * 5 + [True, False, True]
        assert [lit.variable.bit for lit in term] == list(range(8))

    def test_extremes(self):
        assert all(not lit.positive for lit in encode_value(0, 0, W4))
        assert all(lit.positive for lit in encode_value(15, 0, W4))

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            encode_value(16, 0, W4)

    def test_single_satisfying_assignment(self):
        config = FieldConfig((4, 4))
        term = encode_value(9, 1, config)
        hits = [v for v in range(16) if all(lit.holds((0, v), config) for lit in term)]
        assert hits == [9]


class TestCanonicalCover:
    def test_three_to_thirteen(self):
        cover = canonical_cover(Interval(3, 13), 0, W4)
        assert cover.bitstrings() == ['0011', '01', '10', '110']

    def test_three_to_thirteen_terms(self):
        terms = interval_to_terms(Interval(3, 13), 0, W4)
        assert format_terms(terms) == "¬x0¬x1x2x3 ∨ ¬x0x1 ∨ x0¬x1 ∨ x0x1¬x2"

    def test_full_domain_is_empty_prefix(self):
        cover = canonical_cover(Interval(0, 15), 0, W4)
        assert cover.bitstrings() == ['*']
        assert interval_to_terms(Interval(0, 15), 0, W4) == ((),)

    def test_singleton_is_full_length(self):
        assert canonical_cover(Interval(6, 6), 0, W4).bitstrings() == ['0110']

    def test_sample_policy_cover_sizes(self):
        assert len(canonical_cover(Interval(1, 10), 0, W4)) == 5
        assert len(canonical_cover(Interval(2, 5), 0, W4)) == 2

    def test_out_of_range_interval(self):
        with pytest.raises(ValueError):
            canonical_cover(Interval(0, 16), 0, W4)

    def test_all_intervals_at_width_four(self):
        intervals = list(all_intervals(4))
        assert len(intervals) == 136
        for interval in intervals:
            cover = canonical_cover(interval, 0, W4)
            assert cover.values() == set(range(interval.lo, interval.hi + 1))
            assert len(cover) <= 2 * 4

    @pytest.mark.parametrize("width", range(1, MARKED_COVER_MAX_WIDTH + 1))
    def test_matches_marking_rules_worst_cases(self, width):
        config = FieldConfig((width,))
        top = (1 << width) - 1
        cases = [(1, top - 1), (0, top), (top, top), (0, top // 2)]
        for lo, hi in cases:
            if lo > hi:
                continue
            interval = Interval(lo, hi)
            assert canonical_cover(interval, 0, config) == marked_cover(interval, 0, config)

    def test_matches_marking_rules_exhaustive_width_four(self):
        for interval in all_intervals(4):
            assert canonical_cover(interval, 0, W4) == marked_cover(interval, 0, W4)

    def test_marked_cover_width_limit(self):
        config = FieldConfig((MARKED_COVER_MAX_WIDTH + 1,))
        with pytest.raises(ValueError):
            marked_cover(Interval(0, 1), 0, config)

    def test_naive_term_count(self):
        assert naive_term_count(Interval(3, 13)) == 11


class TestCoverProperties:
    @given(interval_in_width())
    def test_size_bound_and_exact_union(self, case):
        width, interval = case
        config = FieldConfig((width,))
        cover = canonical_cover(interval, 0, config)
        assert len(cover) <= 2 * width
        spans = [p.span for p in cover]
        assert spans[0].lo == interval.lo
        assert spans[-1].hi == interval.hi
        for left, right in zip(spans, spans[1:]):
            assert left.is_adjacent(right)

    @given(interval_in_width())
    def test_no_sibling_prefixes(self, case):
        width, interval = case
        bits = {p.bits for p in canonical_cover(interval, 0, FieldConfig((width,)))}
        for prefix in bits:
            if prefix:
                assert prefix[:-1] + (1 - prefix[-1],) not in bits

    @given(interval_in_width(max_width=6), st.data())
    def test_terms_hold_iff_inside(self, case, data):
        width, interval = case
        config = FieldConfig((width,))
        value = data.draw(st.integers(min_value=0, max_value=(1 << width) - 1))
        terms = interval_to_terms(interval, 0, config)
        assert terms_hold(terms, (value,), config) == interval.contains(value)


class TestVariables:
    def test_dimacs_numbering(self):
        config = FieldConfig((4, 4, 4))
        assert BitVariable(0, 0).number(config) == 1
        assert BitVariable(1, 0).number(config) == 5
        assert BitVariable(2, 3).number(config) == 12
        assert Literal(BitVariable(1, 2), positive=False).dimacs(config) == -7

    def test_variable_check(self):
        with pytest.raises(ValueError):
            BitVariable(0, 4).check(W4)
        with pytest.raises(ValueError):
            BitVariable(1, 0).check(W4)

    def test_prefix_span(self):
        assert Prefix(0, 4, (1, 1, 0)).span == Interval(12, 13)
        assert Prefix(0, 4, ()).span == Interval(0, 15)

    def test_terms_over_every_value(self):
        terms = interval_to_terms(Interval(3, 13), 0, W4)
        hits = [v for (v,) in itertools.product(range(16)) if terms_hold(terms, (v,), W4)]
        assert hits == list(range(3, 14))
