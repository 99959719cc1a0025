"""Frequency voting over confusion-network columns and timing merge."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from mover.cn_align import Column, ConfusionNetwork
from mover.model import TimedWord

NON_NULL_FIRST = "non-null-first"
NULL_ALLOWED = "null-allowed"
TIE_POLICIES = (NON_NULL_FIRST, NULL_ALLOWED)


@dataclass(frozen=True, slots=True)
class VoteResult:
    winner: Optional[str]
    supporters: tuple[int, ...]  # slot indices (system positions) voting for the winner
    score: float

    @property
    def count(self) -> int:
        return len(self.supporters)


def vote(
    column: Column,
    tie: str = NON_NULL_FIRST,
    weights: Optional[Sequence[float]] = None,
) -> VoteResult:
    """Pick the most frequent entry of a column; NULL slots vote for NULL.

    Ties go to a token over NULL under ``non-null-first``, then to the
    candidate first supported by the earliest system.
    """
    if tie not in TIE_POLICIES:
        raise ValueError(f"unknown tie policy {tie!r}")
    scores: dict[Optional[str], float] = {}
    first_seen: dict[Optional[str], int] = {}
    members: dict[Optional[str], list[int]] = {}
    for h, slot in enumerate(column):
        key = None if slot is None else slot.text
        w = 1.0 if weights is None else weights[h]
        scores[key] = scores.get(key, 0.0) + w
        first_seen.setdefault(key, h)
        members.setdefault(key, []).append(h)

    def rank(key: Optional[str]) -> tuple:
        null_penalty = 1 if (key is None and tie == NON_NULL_FIRST) else 0
        return (-scores[key], null_penalty, first_seen[key])

    winner = min(scores, key=rank)
    return VoteResult(winner, tuple(members[winner]), scores[winner])


def _bounded_mean(values: list[float]) -> float:
    lo, hi = min(values), max(values)
    # fsum/N can drift one ulp outside the hull, e.g. for identical values
    return min(max(math.fsum(values) / len(values), lo), hi)


def merge_word_timing(column: Column, result: VoteResult) -> tuple[float, float]:
    """Mean start and mean end of the slots that voted for the winner."""
    if result.winner is None:
        raise ValueError("cannot merge timing for a NULL winner")
    slots = [column[h] for h in result.supporters]
    return _bounded_mean([s.start for s in slots]), _bounded_mean([s.end for s in slots])


def combine_group(
    cn: ConfusionNetwork,
    tie: str = NON_NULL_FIRST,
    weights: Optional[Sequence[float]] = None,
) -> list[TimedWord]:
    """Voted words in column order; NULL winners are dropped."""
    out = []
    for column in cn.columns:
        result = vote(column, tie, weights)
        if result.winner is None:
            continue
        start, end = merge_word_timing(column, result)
        out.append(TimedWord(result.winner, start, end))
    return out
