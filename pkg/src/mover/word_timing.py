"""Pseudo word-level timing: split a segment in proportion to character counts."""

from __future__ import annotations

from dataclasses import replace
from itertools import accumulate

from mover.model import Segment, TimedWord


def word_boundaries(words, start: float, end: float) -> list[float]:
    """Return the N+1 boundaries tiling [start, end] for N words.

    Boundaries come from cumulative character sums, so word n's end is
    exactly word n+1's start, and the first/last boundary are exactly
    ``start`` and ``end``.
    """
    counts = [len(w) for w in words]
    total = sum(counts)
    duration = end - start
    if duration <= 0 or total == 0:
        return [start] * (len(counts) + 1)
    bounds = [min(start + (c / total) * duration, end) for c in accumulate(counts, initial=0)]
    bounds[0], bounds[-1] = start, end
    return bounds


def annotate_words(segment: Segment) -> Segment:
    bounds = word_boundaries(segment.words, segment.start, segment.end)
    timed = tuple(
        TimedWord(w, bounds[n], bounds[n + 1]) for n, w in enumerate(segment.words)
    )
    return replace(segment, timed_words=timed)


def ensure_word_timing(segment: Segment, force: bool = False) -> Segment:
    """Annotate unless the segment already carries word timings."""
    if segment.timed_words is not None and not force:
        return segment
    return annotate_words(segment)
