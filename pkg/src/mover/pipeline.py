"""Five-stage combination of meeting recognition hypotheses for one session."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from mover.cn_align import ConfusionNetwork, build_cn, cn_to_json
from mover.grouping import group_fullset, group_subset
from mover.model import HypothesisSet, Segment, SessionBundle, SpeakerTrack, validate_bundle
from mover.ocr import ResolvedSegment, resolve_order, unresolved
from mover.speaker_map import SpeakerMapping, map_speakers
from mover.vote import NON_NULL_FIRST, TIE_POLICIES, combine_group
from mover.word_timing import ensure_word_timing

FULLSET = "fullset"
SUBSET = "subset"
COMBINED_SYSTEM_ID = "mover"


@dataclass(frozen=True)
class CombineConfig:
    """Defaults are the best configuration reported for the method:
    full-set grouping with time-constrained alignment (5 s collar) and
    order consistency resolution."""

    grouping: str = FULLSET
    collar: float = 5.0
    tc_enabled: bool = True
    ocr_enabled: bool = True
    tie_policy: str = NON_NULL_FIRST
    weights: Optional[tuple[float, ...]] = None
    merge_gap: float = 0.0
    overlap_threshold: float = 0.0

    def __post_init__(self) -> None:
        if self.grouping not in (FULLSET, SUBSET):
            raise ValueError(f"grouping must be {FULLSET!r} or {SUBSET!r}")
        if math.isnan(self.collar) or self.collar < 0:
            raise ValueError("collar must be >= 0")
        if self.tie_policy not in TIE_POLICIES:
            raise ValueError(f"tie policy must be one of {TIE_POLICIES}")
        if self.merge_gap < 0:
            raise ValueError("merge gap must be >= 0")
        if self.weights is not None and any(not w > 0 for w in self.weights):
            raise ValueError("vote weights must be > 0")


@dataclass
class SessionResult:
    hypothesis: HypothesisSet
    mapping: SpeakerMapping
    networks: dict[str, list[ConfusionNetwork]] = field(default_factory=dict)


def merge_close_segments(segs: Sequence[ResolvedSegment], max_gap: float) -> list[ResolvedSegment]:
    out: list[ResolvedSegment] = []
    for seg in segs:
        if out and seg.start - out[-1].end <= max_gap:
            prev = out[-1]
            out[-1] = ResolvedSegment(
                prev.words + seg.words, min(prev.start, seg.start), max(prev.end, seg.end)
            )
        else:
            out.append(seg)
    return out


def combine_speaker(
    speaker: str,
    system_ids: Sequence[str],
    per_system: Sequence[Sequence[Segment]],
    config: CombineConfig,
) -> tuple[list[ResolvedSegment], list[ConfusionNetwork]]:
    group_fn = group_subset if config.grouping == SUBSET else group_fullset
    grouped = group_fn(speaker, system_ids, per_system)
    words = []
    networks = []
    for group in grouped.groups:
        if group.is_empty:
            continue
        cn = build_cn(group, config.tc_enabled, config.collar)
        networks.append(cn)
        words.extend(combine_group(cn, config.tie_policy, config.weights))
    segs = resolve_order(words) if config.ocr_enabled else unresolved(words)
    if config.merge_gap > 0:
        segs = merge_close_segments(segs, config.merge_gap)
    return segs, networks


def combine_session(bundle: SessionBundle, config: CombineConfig) -> SessionResult:
    """Run all stages on one session and return the combined hypothesis."""
    report = validate_bundle(bundle)
    if report:
        raise ValueError("invalid bundle:\n" + "\n".join(report))
    if config.weights is not None and len(config.weights) != len(bundle.hypotheses):
        raise ValueError(
            f"{len(config.weights)} vote weights for {len(bundle.hypotheses)} systems"
        )
    mapped, mapping = map_speakers(bundle, config.overlap_threshold)
    system_ids = mapped.system_ids
    speakers = list(mapped.hypotheses[0].tracks) if mapped.hypotheses else []
    tracks = {}
    networks = {}
    for speaker in speakers:
        per_system = [
            [ensure_word_timing(seg) for seg in hyp.tracks[speaker].segments]
            for hyp in mapped.hypotheses
        ]
        segs, cns = combine_speaker(speaker, system_ids, per_system, config)
        networks[speaker] = cns
        if segs:
            tracks[speaker] = SpeakerTrack.from_segments(
                speaker, (Segment(s.words, s.start, s.end) for s in segs)
            )
    hyp = HypothesisSet(COMBINED_SYSTEM_ID, bundle.session_id, tracks)
    return SessionResult(hyp, mapping, networks)


def _combine_star(args):
    return combine_session(*args)


def combine_sessions(
    bundles: Sequence[SessionBundle], config: CombineConfig, workers: int = 1
) -> list[SessionResult]:
    """Combine sessions independently; results follow the input order."""
    if workers <= 1 or len(bundles) <= 1:
        return [combine_session(b, config) for b in bundles]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_combine_star, [(b, config) for b in bundles]))


def mapping_dump(results: Sequence[SessionResult]) -> dict:
    return {r.hypothesis.session_id: r.mapping.as_dict() for r in results}


def network_dump(results: Sequence[SessionResult]) -> dict:
    return {
        r.hypothesis.session_id: {
            spk: [cn_to_json(cn) for cn in cns] for spk, cns in r.networks.items()
        }
        for r in results
    }
