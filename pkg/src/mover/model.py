"""Session / hypothesis types and the segment-list JSON transcript format.

A segment-list file is a UTF-8 JSON array of records::

    {"session_id": "S1", "speaker": "A", "start_time": 0.0,
     "end_time": 2.0, "words": "hello world"}

One file holds the output of one system, possibly for several sessions.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

REQUIRED_FIELDS = ("session_id", "speaker", "start_time", "end_time", "words")


class SeglstError(ValueError):
    """Base class for unusable segment-list input."""


class SeglstParseError(SeglstError):
    """The input is not a JSON array."""

    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class SeglstValidationError(SeglstError):
    """A record is missing a field or violates a type invariant."""

    def __init__(self, message: str, index: int) -> None:
        super().__init__(f"record {index}: {message}")
        self.index = index


@dataclass(frozen=True, slots=True)
class TimedWord:
    text: str
    start: float
    end: float


@dataclass(frozen=True, slots=True)
class Segment:
    """One transcribed segment: its tokens plus the segment interval.

    ``timed_words`` is filled in by word-level annotation and is not part of
    the file format, so it is ignored by equality.
    """

    words: tuple[str, ...]
    start: float
    end: float
    timed_words: tuple[TimedWord, ...] | None = field(default=None, compare=False)

    @property
    def text(self) -> str:
        return " ".join(self.words)

    def sort_key(self) -> tuple[float, float, str]:
        return (self.start, self.end, self.text)


@dataclass(frozen=True, slots=True)
class SpeakerTrack:
    speaker: str
    segments: tuple[Segment, ...] = ()

    @property
    def is_empty(self) -> bool:
        return not self.segments

    @classmethod
    def from_segments(cls, speaker: str, segments: Iterable[Segment]) -> SpeakerTrack:
        return cls(speaker, tuple(sorted(segments, key=Segment.sort_key)))


@dataclass(frozen=True, slots=True)
class HypothesisSet:
    """All segments of all speakers output by one system for one session."""

    system_id: str
    session_id: str
    tracks: Mapping[str, SpeakerTrack]

    @property
    def speakers(self) -> list[str]:
        return list(self.tracks)

    def num_words(self) -> int:
        return sum(len(seg.words) for t in self.tracks.values() for seg in t.segments)

    def nonempty(self) -> HypothesisSet:
        tracks = {k: t for k, t in self.tracks.items() if not t.is_empty}
        return HypothesisSet(self.system_id, self.session_id, tracks)


@dataclass(frozen=True, slots=True)
class SessionBundle:
    """The hypotheses of all systems for one session, in input order."""

    session_id: str
    hypotheses: tuple[HypothesisSet, ...]

    @property
    def system_ids(self) -> list[str]:
        return [h.system_id for h in self.hypotheses]


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


def _as_time(value: object, name: str, index: int) -> float:
    # bool is an int subclass; reject it explicitly
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SeglstValidationError(f"{name} must be a number, got {value!r}", index)
    t = float(value)
    if not math.isfinite(t):
        raise SeglstValidationError(f"{name} must be finite, got {value!r}", index)
    if t < 0:
        raise SeglstValidationError(f"negative {name} {value!r}", index)
    return t


def _read_records(data: bytes | str) -> list:
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SeglstParseError(f"invalid UTF-8: {exc.reason}", exc.start) from exc
    else:
        text = data
    try:
        records = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SeglstParseError(f"malformed JSON: {exc.msg}", _byte_offset(text, exc.pos)) from exc
    if not isinstance(records, list):
        raise SeglstParseError("top-level value must be a JSON array", 0)
    return records


def parse_hypotheses(data: bytes | str, system_id: str = "sys") -> dict[str, HypothesisSet]:
    """Parse one system's file into a HypothesisSet per session.

    Raises:
        SeglstParseError: the bytes are not a UTF-8 JSON array.
        SeglstValidationError: a record is missing a field, has a negative or
            reversed interval, or an empty ``words`` string.
    """
    records = _read_records(data)
    sessions: dict[str, dict[str, list[Segment]]] = {}
    for index, rec in enumerate(records):
        if not isinstance(rec, dict):
            raise SeglstValidationError("record must be a JSON object", index)
        for name in REQUIRED_FIELDS:
            if name not in rec:
                raise SeglstValidationError(f"missing field {name!r}", index)
        session_id, speaker, words = rec["session_id"], rec["speaker"], rec["words"]
        for name, value in (("session_id", session_id), ("speaker", speaker), ("words", words)):
            if not isinstance(value, str):
                raise SeglstValidationError(f"{name} must be a string", index)
        start = _as_time(rec["start_time"], "start_time", index)
        end = _as_time(rec["end_time"], "end_time", index)
        if end < start:
            raise SeglstValidationError(f"end_time {end!r} < start_time {start!r}", index)
        tokens = tuple(words.split())
        if not tokens:
            raise SeglstValidationError("empty words string", index)
        sessions.setdefault(session_id, {}).setdefault(speaker, []).append(
            Segment(tokens, start, end)
        )

    result = {}
    for session_id in sorted(sessions):
        by_speaker = sessions[session_id]
        tracks = {
            spk: SpeakerTrack.from_segments(spk, by_speaker[spk]) for spk in sorted(by_speaker)
        }
        result[session_id] = HypothesisSet(system_id, session_id, tracks)
    return result


def parse_seglst(data: bytes | str, system_id: str = "sys") -> list[SessionBundle]:
    """Parse one file into single-hypothesis bundles, one per session."""
    hyps = parse_hypotheses(data, system_id)
    return [SessionBundle(sid, (hyp,)) for sid, hyp in hyps.items()]


def bundle_sessions(per_file: Sequence[Mapping[str, HypothesisSet]]) -> list[SessionBundle]:
    """Zip per-file hypotheses into one bundle per session.

    Every file must cover the same set of sessions.
    """
    if not per_file:
        return []
    expected = set(per_file[0])
    for i, hyps in enumerate(per_file[1:], start=1):
        if set(hyps) != expected:
            missing = sorted(expected - set(hyps))
            extra = sorted(set(hyps) - expected)
            raise SeglstError(
                f"session mismatch in input {i}: missing {missing}, unexpected {extra}"
            )
    return [
        SessionBundle(sid, tuple(hyps[sid] for hyps in per_file)) for sid in sorted(expected)
    ]


def to_records(hyp: HypothesisSet) -> list[dict]:
    records = []
    for speaker in sorted(hyp.tracks):
        for seg in sorted(hyp.tracks[speaker].segments, key=Segment.sort_key):
            records.append(
                {
                    "session_id": hyp.session_id,
                    "speaker": speaker,
                    "start_time": float(seg.start),
                    "end_time": float(seg.end),
                    "words": seg.text,
                }
            )
    return records


def _dump(records: list[dict]) -> bytes:
    # float repr is shortest-round-trip, so times survive parse(emit(x)) exactly
    return json.dumps(records, ensure_ascii=False, indent=1).encode("utf-8") + b"\n"


def emit_seglst(hyp: HypothesisSet) -> bytes:
    return _dump(to_records(hyp))


def emit_sessions(hyps: Iterable[HypothesisSet]) -> bytes:
    """Serialize several sessions into one file, session-major."""
    records: list[dict] = []
    for hyp in sorted(hyps, key=lambda h: h.session_id):
        records.extend(to_records(hyp))
    return _dump(records)


def validate_bundle(bundle: SessionBundle) -> list[str]:
    """Check every type invariant; an empty list means the bundle is valid."""
    report: list[str] = []
    if not bundle.hypotheses:
        report.append(f"session {bundle.session_id}: no hypotheses")
    seen: set[str] = set()
    for h, hyp in enumerate(bundle.hypotheses):
        where = f"hypothesis {h} ({hyp.system_id})"
        if hyp.system_id in seen:
            report.append(f"{where}: duplicate system_id {hyp.system_id!r}")
        seen.add(hyp.system_id)
        if hyp.session_id != bundle.session_id:
            report.append(f"{where}: session_id {hyp.session_id!r} != {bundle.session_id!r}")
        for label, track in hyp.tracks.items():
            if track.speaker != label:
                report.append(f"{where} speaker {label}: track labelled {track.speaker!r}")
            keys = [seg.sort_key() for seg in track.segments]
            if keys != sorted(keys):
                report.append(f"{where} speaker {label}: segments not sorted by start time")
            for j, seg in enumerate(track.segments):
                report.extend(
                    f"{where} speaker {label} segment {j}: {msg}" for msg in _segment_violations(seg)
                )
    return report


def _segment_violations(seg: Segment) -> list[str]:
    out = []
    if not seg.start <= seg.end:
        out.append(f"start {seg.start} > end {seg.end}")
    if seg.start < 0:
        out.append(f"negative start {seg.start}")
    if not seg.words:
        out.append("empty words")
    if any(not w or any(c.isspace() for c in w) for w in seg.words):
        out.append("word is empty or contains whitespace")
    tw = seg.timed_words
    if tw is not None:
        if tuple(w.text for w in tw) != seg.words:
            out.append("timed_words do not match words")
        prev_end = seg.start
        for w in tw:
            if not (seg.start <= w.start <= w.end <= seg.end):
                out.append(f"timed word {w.text!r} [{w.start}, {w.end}] outside segment")
            if w.start < prev_end:
                out.append(f"timed word {w.text!r} overlaps its predecessor")
            prev_end = w.end
    return out
