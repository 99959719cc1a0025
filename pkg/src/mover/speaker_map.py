"""Global speaker label mapping across systems (DOVER-style).

Each system labels speakers in its own label space.  The first hypothesis
anchors the global labels; every later hypothesis is matched against the
running union of speech activity per global label by maximizing the total
overlap in seconds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from mover.model import HypothesisSet, SessionBundle, SpeakerTrack


@dataclass(frozen=True, slots=True)
class ActivityTimeline:
    """Sorted, disjoint [start, end) speech intervals of one speaker."""

    intervals: tuple[tuple[float, float], ...] = ()

    @property
    def total(self) -> float:
        return sum(e - s for s, e in self.intervals)

    @classmethod
    def from_intervals(cls, intervals) -> ActivityTimeline:
        merged: list[list[float]] = []
        for s, e in sorted(intervals):
            if e <= s:
                continue
            if merged and s <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], e)
            else:
                merged.append([s, e])
        return cls(tuple((s, e) for s, e in merged))

    def union(self, other: ActivityTimeline) -> ActivityTimeline:
        return ActivityTimeline.from_intervals(self.intervals + other.intervals)


@dataclass
class SpeakerMapping:
    entries: dict[tuple[str, str], str] = field(default_factory=dict)
    next_fresh: int = 1

    def fresh_label(self) -> str:
        label = f"g{self.next_fresh}"
        self.next_fresh += 1
        return label

    def as_dict(self) -> dict[str, dict[str, str]]:
        out: dict[str, dict[str, str]] = {}
        for (system_id, local), glob in self.entries.items():
            out.setdefault(system_id, {})[local] = glob
        return out


def activity_timeline(track: SpeakerTrack) -> ActivityTimeline:
    return ActivityTimeline.from_intervals((seg.start, seg.end) for seg in track.segments)


def overlap_duration(a: ActivityTimeline, b: ActivityTimeline) -> float:
    """Total length of the intersection of two timelines (two-pointer sweep)."""
    i = j = 0
    total = 0.0
    ai, bi = a.intervals, b.intervals
    while i < len(ai) and j < len(bi):
        lo = max(ai[i][0], bi[j][0])
        hi = min(ai[i][1], bi[j][1])
        if hi > lo:
            total += hi - lo
        if ai[i][1] <= bi[j][1]:
            i += 1
        else:
            j += 1
    return total


def assign(weights, threshold: float = 0.0) -> list[tuple[int, int]]:
    """Maximum-weight one-to-one matching between rows and columns.

    Entries not strictly above ``threshold`` are never matched, so a row whose
    every entry is at most ``threshold`` stays unmatched.

    Returns:
        Matched ``(row, col)`` pairs sorted by row.
    """
    w = np.asarray(weights, dtype=float)
    if w.size == 0:
        return []
    w = np.where(w > threshold, w, 0.0)
    rows, cols = linear_sum_assignment(w, maximize=True)
    return [(int(r), int(c)) for r, c in zip(rows, cols) if w[r, c] > 0.0]


def _first_appearance(track: SpeakerTrack) -> tuple:
    # independent of label strings except as a last-resort tie break
    if track.is_empty:
        return (1, 0.0, 0.0, track.speaker)
    first = track.segments[0]
    return (0, first.start, first.end, track.speaker)


def map_speakers(
    bundle: SessionBundle, threshold: float = 0.0
) -> tuple[SessionBundle, SpeakerMapping]:
    """Relabel every hypothesis onto a common global speaker label space.

    Hypotheses are processed in bundle order.  After mapping, every
    hypothesis has exactly one track (possibly empty) per global label.
    """
    mapping = SpeakerMapping()
    timelines: dict[str, ActivityTimeline] = {}
    relabeled: list[dict[str, SpeakerTrack]] = []

    for hyp in bundle.hypotheses:
        locals_ = sorted(hyp.tracks.values(), key=_first_appearance)
        local_tl = [activity_timeline(t) for t in locals_]
        globals_ = list(timelines)
        matched: dict[int, str] = {}
        if globals_ and locals_:
            weights = [[overlap_duration(tl, timelines[g]) for g in globals_] for tl in local_tl]
            for r, c in assign(weights, threshold):
                matched[r] = globals_[c]
        tracks: dict[str, SpeakerTrack] = {}
        for r, track in enumerate(locals_):
            glob = matched.get(r)
            if glob is None:
                glob = mapping.fresh_label()
                timelines[glob] = local_tl[r]
            else:
                timelines[glob] = timelines[glob].union(local_tl[r])
            mapping.entries[(hyp.system_id, track.speaker)] = glob
            tracks[glob] = SpeakerTrack(glob, track.segments)
        relabeled.append(tracks)

    labels = sorted(timelines, key=lambda g: int(g[1:]))
    hyps = tuple(
        HypothesisSet(
            hyp.system_id,
            hyp.session_id,
            {g: tracks.get(g, SpeakerTrack(g)) for g in labels},
        )
        for hyp, tracks in zip(bundle.hypotheses, relabeled)
    )
    return SessionBundle(bundle.session_id, hyps), mapping
