"""Combine the outputs of several meeting recognition systems.

Pipeline: speaker label mapping, segment grouping, pseudo word timing,
confusion-network alignment with voting, and order consistency resolution.
"""

from mover.model import (
    HypothesisSet,
    Segment,
    SessionBundle,
    SpeakerTrack,
    TimedWord,
    emit_seglst,
    parse_seglst,
    validate_bundle,
)
from mover.pipeline import CombineConfig, combine_session, combine_sessions
from mover.scoring import ErrorCounts, cp_wer, tc_edit_distance

__all__ = [
    "CombineConfig",
    "ErrorCounts",
    "HypothesisSet",
    "Segment",
    "SessionBundle",
    "SpeakerTrack",
    "TimedWord",
    "combine_session",
    "combine_sessions",
    "cp_wer",
    "emit_seglst",
    "parse_seglst",
    "tc_edit_distance",
    "validate_bundle",
]
