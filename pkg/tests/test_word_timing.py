from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mover.model import Segment, TimedWord
from mover.word_timing import annotate_words, ensure_word_timing


def intervals(seg):
    return [(w.start, w.end) for w in annotate_words(seg).timed_words]


def test_proportional_split():
    assert intervals(Segment(("ab", "c"), 0.0, 6.0)) == [(0.0, 4.0), (4.0, 6.0)]


def test_single_word_takes_segment():
    assert intervals(Segment(("hello",), 1.25, 3.5)) == [(1.25, 3.5)]


def test_zero_duration():
    assert intervals(Segment(("a", "bb"), 3.0, 3.0)) == [(3.0, 3.0), (3.0, 3.0)]


def test_code_points_not_bytes():
    # "é" is one code point but two UTF-8 bytes
    assert intervals(Segment(("é", "a"), 0.0, 2.0)) == [(0.0, 1.0), (1.0, 2.0)]


def test_existing_timings_kept_unless_forced():
    custom = (TimedWord("a", 0.0, 0.1), TimedWord("b", 0.1, 1.0))
    seg = Segment(("a", "b"), 0.0, 1.0, custom)
    assert ensure_word_timing(seg).timed_words == custom
    assert ensure_word_timing(seg, force=True).timed_words != custom


def test_reannotation_is_idempotent():
    seg = annotate_words(Segment(("abc", "de", "f"), 2.0, 5.5))
    assert annotate_words(seg).timed_words == seg.timed_words


tokens = st.lists(st.text(alphabet="abcdéü漢", min_size=1, max_size=8), min_size=1, max_size=12)
times = st.floats(min_value=0, max_value=1e4, allow_nan=False)


@settings(max_examples=300, deadline=None)
@given(tokens, times, times)
def test_tiling_properties(words, a, b):
    start, end = min(a, b), max(a, b)
    tw = annotate_words(Segment(tuple(words), start, end)).timed_words
    assert [w.text for w in tw] == words
    assert tw[0].start == start and tw[-1].end == end
    for x, y in zip(tw, tw[1:]):
        assert x.end == y.start
    for w in tw:
        assert start <= w.start <= w.end <= end
    if end > start:
        total = sum(len(w) for w in words)
        for w in tw:
            expected = (end - start) * len(w.text) / total
            assert w.end - w.start == pytest.approx(expected, abs=1e-9 + 1e-12 * end)


def test_exact_rational_boundaries_small_case():
    seg = Segment(("abc", "d", "efgh"), 1.0, 9.0)
    got = [w.end for w in annotate_words(seg).timed_words]
    want = [1 + Fraction(8) * Fraction(c, 8) for c in (3, 4, 8)]
    assert got == [float(x) for x in want]
