"""Progressive word alignment of several hypotheses into a confusion network.

Each system's timed words are aligned against the network built from the
systems before it.  The time-constrained variant only lets a word match or
substitute a slot whose timing overlaps it within a collar.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from mover.grouping import SegmentGroup
from mover.model import TimedWord

Slot = Optional[TimedWord]
Column = tuple  # tuple[Slot, ...], one slot per aligned system

MATCH_COST = 0.0
SUB_COST = 1.0
INS_COST = 1.0
DEL_COST = 1.0

DIAG, DEL, INS = 0, 1, 2


@dataclass(frozen=True, slots=True)
class ConfusionNetwork:
    systems: tuple[str, ...] = ()
    columns: tuple[Column, ...] = ()

    def __len__(self) -> int:
        return len(self.columns)

    def projection(self, h: int) -> list[TimedWord]:
        """Non-NULL slots of the h-th system in column order."""
        return [col[h] for col in self.columns if col[h] is not None]


def overlaps_with_collar(
    a: tuple[float, float], b: tuple[float, float], collar: float
) -> bool:
    """Strict interval overlap after widening by ``collar`` (may be inf)."""
    return a[0] < b[1] + collar and b[0] < a[1] + collar


class _WordIndex:
    """Vectorized view of a word sequence for per-column cost rows."""

    def __init__(self, words: Sequence[TimedWord]) -> None:
        self.ids: dict[str, int] = {}
        self.word_ids = np.array(
            [self.ids.setdefault(w.text, len(self.ids)) for w in words], dtype=np.int64
        )
        self.starts = np.array([w.start for w in words], dtype=float)
        self.ends = np.array([w.end for w in words], dtype=float)

    def cost_row(self, column: Column, tc: bool, collar: float) -> np.ndarray:
        """Match/substitution cost of the column against every word.

        0 when a candidate slot has the same text, 1 when there are candidates
        but none matches, inf when there is no candidate (forbidden).  Under
        the time constraint, candidates are the slots overlapping the word
        within the collar; otherwise every non-NULL slot is a candidate.
        """
        m = len(self.word_ids)
        match = np.zeros(m, dtype=bool)
        has_cand = np.zeros(m, dtype=bool)
        for slot in column:
            if slot is None:
                continue
            same = self.word_ids == self.ids.get(slot.text, -1)
            if tc:
                ok = (slot.start < self.ends + collar) & (self.starts < slot.end + collar)
                has_cand |= ok
                match |= ok & same
            else:
                has_cand[:] = True
                match |= same
        return np.where(match, MATCH_COST, np.where(has_cand, SUB_COST, math.inf))


def align_path(
    cn: ConfusionNetwork, words: Sequence[TimedWord], tc: bool = True, collar: float = 5.0
) -> tuple[float, list[tuple[int, int, int]]]:
    """Minimum-cost edit alignment of ``words`` against the network columns.

    Returns the total cost and the operations ``(op, column, word)`` in
    order, with ``-1`` for the side an operation does not consume.  Ties
    resolve as match/substitution, then deletion, then insertion, decided
    from the start of the sequences onward.
    """
    n, m = len(cn.columns), len(words)
    # DP over suffixes (reversed inputs) so the trace walks forward in time;
    # cost rows are built per column, only the 1-byte backpointers are n x m
    index = _WordIndex(words[::-1])
    back = np.empty((n + 1, m + 1), dtype=np.int8)
    back[0, :] = INS
    back[:, 0] = DEL
    offsets = np.arange(m + 1, dtype=float) * INS_COST
    prev = offsets.copy()
    for i in range(1, n + 1):
        diag = prev[:-1] + index.cost_row(cn.columns[n - i], tc, collar)
        dele = prev[1:] + DEL_COST
        best = np.minimum(diag, dele)
        # row[j] = min(best[j], row[j-1] + INS) as a running minimum
        row = np.minimum.accumulate(np.concatenate(([prev[0] + DEL_COST], best)) - offsets) + offsets
        back[i, 1:] = np.where(best <= row[1:], np.where(diag <= dele, DIAG, DEL), INS)
        prev = row
    ops = []
    i, j = n, m
    while i > 0 or j > 0:
        op = back[i, j]
        if op == DIAG:
            ops.append((DIAG, n - i, m - j))
            i, j = i - 1, j - 1
        elif op == DEL:
            ops.append((DEL, n - i, -1))
            i -= 1
        else:
            ops.append((INS, -1, m - j))
            j -= 1
    return float(prev[m]), ops


def align_hypothesis(
    cn: ConfusionNetwork,
    words: Sequence[TimedWord],
    system_id: str,
    tc: bool = True,
    collar: float = 5.0,
) -> ConfusionNetwork:
    """Add one system's word sequence to the network."""
    k = len(cn.systems)
    _, ops = align_path(cn, words, tc, collar)
    columns = []
    for op, i, j in ops:
        if op == DIAG:
            columns.append(cn.columns[i] + (words[j],))
        elif op == DEL:
            columns.append(cn.columns[i] + (None,))
        else:
            columns.append((None,) * k + (words[j],))
    return ConfusionNetwork(cn.systems + (system_id,), tuple(columns))


def group_words(group: SegmentGroup, h: int) -> list[TimedWord]:
    """Concatenated timed words of system h's segments in the group."""
    words: list[TimedWord] = []
    for seg in group.per_system[h]:
        if seg.timed_words is None:
            raise ValueError("segment is missing word timings; annotate it first")
        words.extend(seg.timed_words)
    return words


def build_cn(group: SegmentGroup, tc: bool = True, collar: float = 5.0) -> ConfusionNetwork:
    cn = ConfusionNetwork()
    for h, system_id in enumerate(group.system_ids):
        cn = align_hypothesis(cn, group_words(group, h), system_id, tc, collar)
    return cn


def cn_to_json(cn: ConfusionNetwork) -> list[dict]:
    return [
        {
            sys: None if slot is None else {"word": slot.text, "start": slot.start, "end": slot.end}
            for sys, slot in zip(cn.systems, col)
        }
        for col in cn.columns
    ]
