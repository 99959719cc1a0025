"""Partition one speaker's segments across systems into alignment groups."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from mover.model import Segment


@dataclass(frozen=True, slots=True)
class SegmentGroup:
    """Segments of each system that are combined together.

    ``per_system[h]`` holds the segments of the h-th system (bundle order),
    in that system's original order; it may be empty.
    """

    system_ids: tuple[str, ...]
    per_system: tuple[tuple[Segment, ...], ...]

    @property
    def is_empty(self) -> bool:
        return not any(self.per_system)

    @property
    def span(self) -> tuple[float, float] | None:
        segs = [s for lst in self.per_system for s in lst]
        if not segs:
            return None
        return min(s.start for s in segs), max(s.end for s in segs)


@dataclass(frozen=True, slots=True)
class GroupedSpeaker:
    speaker: str
    groups: tuple[SegmentGroup, ...]


def group_subset(
    speaker: str, system_ids: Sequence[str], per_system: Sequence[Sequence[Segment]]
) -> GroupedSpeaker:
    """Sweep segments by start time, chaining those that overlap the group.

    A segment joins the open group when its start is strictly before the
    group's running maximum end time.  Otherwise the group is closed and the
    segment opens the next one, so touching segments land in separate groups.
    """
    order = sorted(
        (seg.start, seg.end, system_ids[h], j, h)
        for h, segs in enumerate(per_system)
        for j, seg in enumerate(segs)
    )
    groups: list[SegmentGroup] = []
    current: list[list[Segment]] = [[] for _ in per_system]
    has_members = False
    max_end = 0.0

    def flush() -> None:
        groups.append(SegmentGroup(tuple(system_ids), tuple(tuple(c) for c in current)))

    for start, end, _, j, h in order:
        if has_members and not start < max_end:
            flush()
            current = [[] for _ in per_system]
            has_members = False
        current[h].append(per_system[h][j])
        max_end = end if not has_members else max(max_end, end)
        has_members = True
    if has_members:
        flush()
    return GroupedSpeaker(speaker, tuple(groups))


def group_fullset(
    speaker: str, system_ids: Sequence[str], per_system: Sequence[Sequence[Segment]]
) -> GroupedSpeaker:
    group = SegmentGroup(
        tuple(system_ids),
        tuple(tuple(sorted(segs, key=Segment.sort_key)) for segs in per_system),
    )
    return GroupedSpeaker(speaker, (group,))
