"""Concatenated minimum-permutation WER with an optional time constraint.

Each speaker's words are concatenated in segment start order.  Reference and
hypothesis speakers are paired one-to-one so that the summed edit distance
is minimal; the time-constrained variant allows a correct/substitution pair
only when the two words overlap within a collar.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from mover.model import HypothesisSet, Segment, TimedWord
from mover.speaker_map import assign
from mover.word_timing import ensure_word_timing


@dataclass(frozen=True)
class ErrorCounts:
    substitutions: int = 0
    insertions: int = 0
    deletions: int = 0
    reference_words: int = 0

    @property
    def errors(self) -> int:
        return self.substitutions + self.insertions + self.deletions

    @property
    def wer(self) -> float:
        if self.reference_words == 0:
            raise ZeroDivisionError("WER is undefined for an empty reference")
        return self.errors / self.reference_words

    def __add__(self, other: ErrorCounts) -> ErrorCounts:
        return ErrorCounts(
            self.substitutions + other.substitutions,
            self.insertions + other.insertions,
            self.deletions + other.deletions,
            self.reference_words + other.reference_words,
        )

    def as_dict(self) -> dict:
        out = {
            "substitutions": self.substitutions,
            "insertions": self.insertions,
            "deletions": self.deletions,
            "reference_words": self.reference_words,
        }
        out["wer"] = self.wer if self.reference_words else None
        return out


def tc_edit_distance(
    ref: Sequence[TimedWord], hyp: Sequence[TimedWord], collar: float = math.inf
) -> ErrorCounts:
    """Unit-cost edit distance; ties prefer match/substitution, then deletion."""
    n, m = len(ref), len(hyp)
    back = np.empty((n + 1, m + 1), dtype=np.int8)  # 0 diagonal, 1 deletion, 2 insertion
    back[0, :] = 2
    back[:, 0] = 1
    offsets = np.arange(m + 1, dtype=float)
    prev = offsets.copy()
    hyp_start = np.array([w.start for w in hyp], dtype=float)
    hyp_end = np.array([w.end for w in hyp], dtype=float)
    hyp_text = np.array([w.text for w in hyp], dtype=object)
    for i in range(1, n + 1):
        r = ref[i - 1]
        allowed = (r.start < hyp_end + collar) & (hyp_start < r.end + collar)
        diag = np.where(allowed, prev[:-1] + (hyp_text != r.text), math.inf)
        dele = prev[1:] + 1
        best = np.minimum(diag, dele)
        row = np.minimum.accumulate(np.concatenate(([prev[0] + 1], best)) - offsets) + offsets
        back[i, 1:] = np.where(best <= row[1:], np.where(diag <= dele, 0, 1), 2)
        prev = row
    s = ins_count = del_count = 0
    i, j = n, m
    while i > 0 or j > 0:
        op = back[i, j]
        if op == 0:
            if ref[i - 1].text != hyp[j - 1].text:
                s += 1
            i, j = i - 1, j - 1
        elif op == 1:
            del_count += 1
            i -= 1
        else:
            ins_count += 1
            j -= 1
    return ErrorCounts(s, ins_count, del_count, n)


def speaker_streams(hyp: HypothesisSet) -> dict[str, list[TimedWord]]:
    """Annotated word stream per non-empty speaker, segments in start order."""
    streams = {}
    for spk, track in hyp.tracks.items():
        if track.is_empty:
            continue
        words: list[TimedWord] = []
        for seg in sorted(track.segments, key=Segment.sort_key):
            words.extend(ensure_word_timing(seg).timed_words)
        streams[spk] = words
    return streams


def cp_wer(ref: HypothesisSet, hyp: HypothesisSet, collar: float = math.inf) -> ErrorCounts:
    """Errors under the best one-to-one speaker pairing.

    Raises:
        ValueError: the reference has no words.
    """
    ref_streams = list(speaker_streams(ref).values())
    hyp_streams = list(speaker_streams(hyp).values())
    total_ref = sum(len(s) for s in ref_streams)
    if total_ref == 0:
        raise ValueError(f"session {ref.session_id}: empty reference, WER undefined")
    size = max(len(ref_streams), len(hyp_streams))
    ref_streams += [[]] * (size - len(ref_streams))
    hyp_streams += [[]] * (size - len(hyp_streams))
    counts = [[tc_edit_distance(r, h, collar) for h in hyp_streams] for r in ref_streams]
    costs = np.array([[c.errors for c in row] for row in counts], dtype=float)
    # strictly positive weights so every pair stays eligible and the matching is perfect
    weights = costs.max() + 1.0 - costs
    total = ErrorCounts()
    for r, c in assign(weights):
        total = total + counts[r][c]
    return total


def score_sessions(
    refs: dict[str, HypothesisSet], hyps: dict[str, HypothesisSet], collar: float = math.inf
) -> dict:
    """Per-session counts plus micro (pooled) and macro (session mean) WER."""
    sessions = {}
    pooled = ErrorCounts()
    for sid in sorted(refs):
        hyp = hyps.get(sid, HypothesisSet("hyp", sid, {}))
        counts = cp_wer(refs[sid], hyp, collar)
        sessions[sid] = counts.as_dict()
        pooled = pooled + counts
    report = {"sessions": sessions}
    if sessions:
        report["micro"] = pooled.as_dict()
        report["macro"] = {"wer": sum(s["wer"] for s in sessions.values()) / len(sessions)}
    return report
