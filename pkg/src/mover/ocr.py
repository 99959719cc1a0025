"""Order consistency resolution.

After voting, words are in alignment order but their averaged timings can
contradict that order.  Adjacent elements whose order is inconsistent
(next start before current end) are merged into one multi-word element
spanning both, until no such pair remains.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from mover.model import TimedWord


@dataclass(frozen=True, slots=True)
class ResolvedSegment:
    words: tuple[str, ...]
    start: float
    end: float


def _as_segments(words: Iterable[TimedWord | ResolvedSegment]) -> list[ResolvedSegment]:
    return [
        w if isinstance(w, ResolvedSegment) else ResolvedSegment((w.text,), w.start, w.end)
        for w in words
    ]


def _merge(a: ResolvedSegment, b: ResolvedSegment) -> ResolvedSegment:
    return ResolvedSegment(a.words + b.words, min(a.start, b.start), max(a.end, b.end))


def resolve_order(words: Iterable[TimedWord | ResolvedSegment]) -> list[ResolvedSegment]:
    """Merge order-inconsistent neighbours, rescanning from the start after each merge."""
    segs = _as_segments(words)
    j = 0
    while j < len(segs) - 1:
        if segs[j + 1].start < segs[j].end:
            segs[j] = _merge(segs[j], segs[j + 1])
            del segs[j + 1]
            j = 0
        else:
            j += 1
    return segs


def resolve_order_backstep(words: Iterable[TimedWord | ResolvedSegment]) -> list[ResolvedSegment]:
    """Same fixed point as :func:`resolve_order`, stepping back one element after a merge.

    A merge can only lower the merged element's start, so the only pair that
    can newly become inconsistent is the one just before it.
    """
    segs = _as_segments(words)
    j = 0
    while j < len(segs) - 1:
        if segs[j + 1].start < segs[j].end:
            segs[j] = _merge(segs[j], segs[j + 1])
            del segs[j + 1]
            j = max(j - 1, 0)
        else:
            j += 1
    return segs


def unresolved(words: Iterable[TimedWord]) -> list[ResolvedSegment]:
    """One element per word, for runs with resolution disabled."""
    return _as_segments(words)
