"""Seeded synthetic meetings and corrupted per-system hypotheses."""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from mover.model import HypothesisSet, Segment, SpeakerTrack

_SYLLABLES = [c + v for c in "bdfgklmnprstvz" for v in "aeiou"]


@dataclass(frozen=True)
class CorruptionSpec:
    sub_rate: float = 0.0
    del_rate: float = 0.0
    ins_rate: float = 0.0
    boundary_jitter: float = 0.0
    split_prob: float = 0.0
    merge_prob: float = 0.0
    permute_speakers: bool = False
    confusion_rate: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        for name in ("sub_rate", "del_rate", "ins_rate", "split_prob", "merge_prob", "confusion_rate"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")
        if self.sub_rate + self.del_rate > 1.0:
            raise ValueError("sub_rate + del_rate must not exceed 1")
        if self.boundary_jitter < 0:
            raise ValueError("boundary_jitter must be >= 0")


def derive_seed(base: int, index: int) -> int:
    """Independent child seed for system ``index`` of a run seeded with ``base``."""
    return int(np.random.SeedSequence([base, index]).generate_state(1)[0])


def make_vocabulary(size: int, seed: int = 0) -> list[str]:
    """``size`` distinct pseudo-words of 1-4 syllables."""
    rng = random.Random(seed)
    vocab: dict[str, None] = {}
    while len(vocab) < size:
        n = rng.choice((1, 2, 2, 3, 3, 4))
        vocab["".join(rng.choice(_SYLLABLES) for _ in range(n))] = None
    return list(vocab)


def gen_reference(
    num_speakers: int,
    num_segments: int,
    words_per_segment: tuple[int, int] = (5, 12),
    vocab_size: int = 500,
    seed: int = 0,
    session_id: str = "S0",
) -> HypothesisSet:
    """Reference meeting with ``num_segments`` segments spread over the speakers.

    Segments of one speaker never overlap; segments of different speakers
    may.  Every speaker gets a segment before any gets a second one when
    there are enough segments.
    """
    if num_speakers < 1 or num_segments < 0 or vocab_size < 1:
        raise ValueError("sizes must be positive")
    lo, hi = words_per_segment
    if not 1 <= lo <= hi:
        raise ValueError("words_per_segment must satisfy 1 <= lo <= hi")
    rng = random.Random(seed)
    vocab = make_vocabulary(vocab_size, seed)
    labels = [f"spk{k}" for k in range(num_speakers)]
    owners = list(range(num_speakers))[:num_segments]
    owners += [rng.randrange(num_speakers) for _ in range(num_segments - len(owners))]
    rng.shuffle(owners)

    segments: dict[str, list[Segment]] = {lab: [] for lab in labels}
    last_end = [0.0] * num_speakers
    cursor = 0.0
    for k in owners:
        words = tuple(rng.choice(vocab) for _ in range(rng.randint(lo, hi)))
        start = max(cursor + rng.uniform(-0.8, 1.5), last_end[k] + rng.uniform(0.3, 1.0), 0.0)
        end = start + sum(rng.uniform(0.25, 0.45) for _ in words)
        start, end = round(start, 3), round(end, 3)
        segments[labels[k]].append(Segment(words, start, end))
        last_end[k] = end
        cursor = end
    tracks = {lab: SpeakerTrack.from_segments(lab, segs) for lab, segs in segments.items()}
    return HypothesisSet("reference", session_id, tracks)


def _relabel(
    items: list[tuple[str, Segment]], labels: list[str], spec: CorruptionSpec, rng: random.Random
) -> list[tuple[str, Segment]]:
    if spec.permute_speakers:
        shuffled = labels[:]
        rng.shuffle(shuffled)
        new = {old: f"S{n:02d}" for n, old in enumerate(shuffled)}
    else:
        new = {lab: lab for lab in labels}
    out = []
    for lab, seg in items:
        target = new[lab]
        if len(labels) > 1 and rng.random() < spec.confusion_rate:
            target = new[rng.choice([x for x in labels if x != lab])]
        out.append((target, seg))
    return out


def _split_merge(
    items: list[tuple[str, Segment]], spec: CorruptionSpec, rng: random.Random
) -> list[tuple[str, Segment]]:
    split: list[tuple[str, Segment]] = []
    for lab, seg in items:
        if len(seg.words) >= 2 and rng.random() < spec.split_prob:
            cut = rng.randrange(1, len(seg.words))
            t = seg.start + (seg.end - seg.start) * cut / len(seg.words)
            split.append((lab, Segment(seg.words[:cut], seg.start, t)))
            split.append((lab, Segment(seg.words[cut:], t, seg.end)))
        else:
            split.append((lab, seg))
    # merge a segment into the next segment of the same speaker
    by_speaker: dict[str, list[Segment]] = {}
    for lab, seg in split:
        by_speaker.setdefault(lab, []).append(seg)
    out = []
    for lab in sorted(by_speaker):
        segs = sorted(by_speaker[lab], key=Segment.sort_key)
        merged: list[Segment] = []
        pending = False
        for seg in segs:
            if pending:
                prev = merged[-1]
                merged[-1] = Segment(prev.words + seg.words, min(prev.start, seg.start), max(prev.end, seg.end))
            else:
                merged.append(seg)
            pending = rng.random() < spec.merge_prob
        out.extend((lab, seg) for seg in merged)
    return out


def _jitter(seg: Segment, amount: float, rng: random.Random) -> Segment:
    if amount == 0:
        return seg
    start = max(0.0, seg.start + rng.uniform(-amount, amount))
    end = max(start, seg.end + rng.uniform(-amount, amount))
    return replace(seg, start=start, end=end)


def _corrupt_words(
    words: Sequence[str], spec: CorruptionSpec, vocab: Sequence[str], rng: random.Random
) -> list[str]:
    def other(word: str) -> str:
        pick = rng.choice(vocab)
        while pick == word and len(vocab) > 1:
            pick = rng.choice(vocab)
        return pick if pick != word else word + "x"

    out: list[str] = []
    for word in words:
        if spec.ins_rate and rng.random() < spec.ins_rate:
            out.append(rng.choice(vocab))
        u = rng.random()
        if u < spec.sub_rate:
            out.append(other(word))
        elif u < spec.sub_rate + spec.del_rate:
            continue
        else:
            out.append(word)
    if spec.ins_rate and rng.random() < spec.ins_rate:
        out.append(rng.choice(vocab))
    return out


def corrupt(
    reference: HypothesisSet,
    spec: CorruptionSpec,
    system_id: str = "sys",
    vocab: Sequence[str] | None = None,
) -> HypothesisSet:
    """Apply speaker, segmentation, timing and word errors, in that order.

    Substitutes and insertions are drawn from ``vocab`` (default: the
    reference's own tokens).
    """
    rng = random.Random(spec.seed)
    if vocab is None:
        vocab = sorted({w for t in reference.tracks.values() for s in t.segments for w in s.words})
    if not vocab:
        vocab = make_vocabulary(1, spec.seed)
    labels = sorted(reference.tracks)
    items = [(lab, seg) for lab in labels for seg in reference.tracks[lab].segments]
    items = _relabel(items, labels, spec, rng)
    items = _split_merge(items, spec, rng)
    out: dict[str, list[Segment]] = {}
    for lab, seg in items:
        seg = _jitter(seg, spec.boundary_jitter, rng)
        words = _corrupt_words(seg.words, spec, vocab, rng)
        if words:
            out.setdefault(lab, []).append(Segment(tuple(words), seg.start, seg.end))
    tracks = {lab: SpeakerTrack.from_segments(lab, out[lab]) for lab in sorted(out)}
    return HypothesisSet(system_id, reference.session_id, tracks)


def gen_systems(
    reference: HypothesisSet, spec: CorruptionSpec, num_systems: int
) -> list[HypothesisSet]:
    """Independently corrupted copies, seeded per system from ``spec.seed``."""
    return [
        corrupt(reference, replace(spec, seed=derive_seed(spec.seed, h)), f"sys{h + 1:02d}")
        for h in range(num_systems)
    ]
