import json
import random

import pytest

from mover.model import HypothesisSet, Segment, SessionBundle, SpeakerTrack, validate_bundle
from mover.ocr import ResolvedSegment
from mover.pipeline import (
    SUBSET,
    CombineConfig,
    combine_session,
    combine_sessions,
    mapping_dump,
    merge_close_segments,
    network_dump,
)
from mover.synth import CorruptionSpec, gen_reference, gen_systems
from mover.word_timing import annotate_words


def tokens_by_speaker(hyp):
    return sorted(
        tuple(w for seg in t.segments for w in seg.words) for t in hyp.tracks.values() if not t.is_empty
    )


def copies(ref, n):
    return SessionBundle(
        ref.session_id, tuple(HypothesisSet(f"s{i}", ref.session_id, ref.tracks) for i in range(n))
    )


def test_default_config_is_best_reported_setting():
    c = CombineConfig()
    assert (c.grouping, c.collar, c.tc_enabled, c.ocr_enabled) == ("fullset", 5.0, True, True)


@pytest.mark.parametrize(
    "kwargs",
    [{"grouping": "both"}, {"collar": -1.0}, {"tie_policy": "x"}, {"merge_gap": -1}, {"weights": (1.0, 0.0)}],
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        CombineConfig(**kwargs)


def test_single_system_passes_through():
    ref = gen_reference(3, 15, seed=2)
    out = combine_session(copies(ref, 1), CombineConfig()).hypothesis
    assert tokens_by_speaker(out) == tokens_by_speaker(ref)


def test_identical_copies_reproduce_timings():
    ref = gen_reference(2, 10, seed=5)
    out = combine_session(copies(ref, 3), CombineConfig(ocr_enabled=False)).hypothesis
    words = sorted((seg.start, seg.end) for t in out.tracks.values() for seg in t.segments)
    expected = sorted(
        (w.start, w.end)
        for t in ref.tracks.values()
        for seg in t.segments
        for w in annotate_words(seg).timed_words
    )
    assert words == expected


def test_disjoint_substitutions_recovered_subset():
    ref = gen_reference(2, 6, (4, 6), seed=1)
    hyps = []
    for h in range(3):
        tracks = {}
        for spk, t in ref.tracks.items():
            segs = []
            for j, seg in enumerate(t.segments):
                words = list(seg.words)
                pos = (j + h) % len(words)
                if h == j % 3:
                    words[pos] = "ERR"
                segs.append(Segment(tuple(words), seg.start, seg.end))
            tracks[f"{spk}_{h}"] = SpeakerTrack(f"{spk}_{h}", tuple(segs))
        hyps.append(HypothesisSet(f"h{h}", ref.session_id, tracks))
    out = combine_session(SessionBundle(ref.session_id, tuple(hyps)), CombineConfig(grouping=SUBSET))
    assert tokens_by_speaker(out.hypothesis) == tokens_by_speaker(ref)


def test_output_valid_and_non_overlapping_with_ocr():
    ref = gen_reference(4, 30, seed=3)
    spec = CorruptionSpec(0.15, 0.05, 0.05, 0.3, 0.1, 0.1, True, seed=3)
    bundle = SessionBundle(ref.session_id, tuple(gen_systems(ref, spec, 3)))
    for grouping in ("fullset", "subset"):
        out = combine_session(bundle, CombineConfig(grouping=grouping)).hypothesis
        assert validate_bundle(SessionBundle(out.session_id, (out,))) == []
        for t in out.tracks.values():
            for a, b in zip(t.segments, t.segments[1:]):
                assert a.end <= b.start


def test_merge_gap():
    segs = [ResolvedSegment(("a",), 0, 1), ResolvedSegment(("b",), 1.2, 2), ResolvedSegment(("c",), 5, 6)]
    assert merge_close_segments(segs, 0.5) == [
        ResolvedSegment(("a", "b"), 0, 2),
        ResolvedSegment(("c",), 5, 6),
    ]


def test_merge_gap_in_pipeline():
    ref = gen_reference(2, 8, seed=9)
    out = combine_session(copies(ref, 3), CombineConfig(merge_gap=0.01)).hypothesis
    assert tokens_by_speaker(out) == tokens_by_speaker(ref)
    n_out = sum(len(t.segments) for t in out.tracks.values())
    assert n_out == sum(len(t.segments) for t in ref.tracks.values())


def test_weights_length_checked():
    ref = gen_reference(2, 4, seed=1)
    with pytest.raises(ValueError):
        combine_session(copies(ref, 3), CombineConfig(weights=(1.0, 2.0)))


def test_speaker_relabeling_invariance():
    ref = gen_reference(3, 20, seed=12)
    spec = CorruptionSpec(0.1, 0.05, 0.05, 0.2, 0.1, 0.1, True, seed=12)
    systems = gen_systems(ref, spec, 3)
    base = combine_session(SessionBundle(ref.session_id, tuple(systems)), CombineConfig()).hypothesis
    rng = random.Random(0)
    relabeled = []
    for hyp in systems:
        labels = list(hyp.tracks)
        names = [f"z{i}" for i in range(len(labels))]
        rng.shuffle(names)
        relabeled.append(
            HypothesisSet(
                hyp.system_id,
                hyp.session_id,
                {n: SpeakerTrack(n, hyp.tracks[old].segments) for old, n in zip(labels, names)},
            )
        )
    again = combine_session(SessionBundle(ref.session_id, tuple(relabeled)), CombineConfig()).hypothesis
    assert again == base


def test_parallel_matches_serial():
    bundles = []
    for n in range(3):
        ref = gen_reference(3, 12, seed=n, session_id=f"S{n}")
        bundles.append(SessionBundle(ref.session_id, tuple(gen_systems(ref, CorruptionSpec(0.2, seed=n), 3))))
    serial = combine_sessions(bundles, CombineConfig())
    parallel = combine_sessions(bundles, CombineConfig(), workers=2)
    assert [r.hypothesis for r in serial] == [r.hypothesis for r in parallel]


def test_dumps_are_json_friendly():
    ref = gen_reference(2, 4, seed=1)
    results = combine_sessions([copies(ref, 2)], CombineConfig())
    mapping = mapping_dump(results)
    assert set(mapping[ref.session_id]) == {"s0", "s1"}
    cns = network_dump(results)
    json.dumps(cns)
    first = next(iter(cns[ref.session_id].values()))[0][0]
    assert set(first) == {"s0", "s1"}
