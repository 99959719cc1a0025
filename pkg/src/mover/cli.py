"""Command-line entry point: ``mover combine | score | synth``."""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import replace
from pathlib import Path

from mover.model import (
    SeglstError,
    bundle_sessions,
    emit_sessions,
    parse_hypotheses,
    validate_bundle,
)
from mover.pipeline import (
    FULLSET,
    SUBSET,
    CombineConfig,
    combine_sessions,
    mapping_dump,
    network_dump,
)
from mover.scoring import score_sessions
from mover.synth import CorruptionSpec, derive_seed, gen_reference, gen_systems
from mover.vote import TIE_POLICIES

EXIT_OK = 0
EXIT_INPUT_ERROR = 2

log = logging.getLogger("mover")


def seconds(text: str) -> float:
    value = math.inf if text.lower() in ("inf", "infinity") else float(text)
    if math.isnan(value) or value < 0:
        raise argparse.ArgumentTypeError(f"expected seconds >= 0 or 'inf', got {text!r}")
    return value


def probability(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"expected a probability in [0, 1], got {text!r}")
    return value


def weight_list(text: str) -> tuple[float, ...]:
    values = tuple(float(v) for v in text.split(","))
    if any(not v > 0 for v in values):
        raise argparse.ArgumentTypeError(f"weights must be > 0, got {text!r}")
    return values


def _system_ids(paths: list[Path]) -> list[str]:
    stems = [p.stem for p in paths]
    return [s if stems.count(s) == 1 else f"{s}#{i}" for i, s in enumerate(stems)]


def _read(path: Path, system_id: str):
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise SeglstError(f"{path}: cannot read: {exc.strerror}") from exc
    try:
        return parse_hypotheses(data, system_id)
    except SeglstError as exc:
        raise SeglstError(f"{path}: {exc}") from exc


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=1, ensure_ascii=False) + "\n", encoding="utf-8")


def cmd_combine(args: argparse.Namespace) -> int:
    paths = [Path(p) for p in args.inputs]
    try:
        per_file = [_read(p, sid) for p, sid in zip(paths, _system_ids(paths))]
        bundles = bundle_sessions(per_file)
    except SeglstError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    report = [line for b in bundles for line in validate_bundle(b)]
    if report:
        print("error: invalid input:\n  " + "\n  ".join(report), file=sys.stderr)
        return EXIT_INPUT_ERROR
    weights = args.weights
    if weights is not None and len(weights) != len(paths):
        print(f"error: {len(weights)} weights for {len(paths)} inputs", file=sys.stderr)
        return EXIT_INPUT_ERROR
    try:
        config = CombineConfig(
            grouping=args.grouping,
            collar=args.collar,
            tc_enabled=not args.no_tc,
            ocr_enabled=not args.no_ocr,
            tie_policy=args.tie,
            weights=weights,
            merge_gap=args.merge_gap,
            overlap_threshold=args.map_threshold,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    log.info("combining %d session(s) from %d system(s)", len(bundles), len(paths))
    results = combine_sessions(bundles, config, workers=args.workers)
    Path(args.output).write_bytes(emit_sessions(r.hypothesis for r in results))
    if args.dump_mapping:
        _write_json(Path(args.dump_mapping), mapping_dump(results))
    if args.dump_cn:
        _write_json(Path(args.dump_cn), network_dump(results))
    return EXIT_OK


def cmd_score(args: argparse.Namespace) -> int:
    try:
        refs = _read(Path(args.ref), "reference")
        hyps = _read(Path(args.hyp), "hypothesis")
    except SeglstError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    extra = sorted(set(hyps) - set(refs))
    if extra:
        print(f"error: hypothesis sessions missing from reference: {extra}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    try:
        report = score_sessions(refs, hyps, args.collar)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    report["collar"] = None if math.isinf(args.collar) else args.collar
    text = json.dumps(report, indent=1)
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return EXIT_OK


def cmd_synth(args: argparse.Namespace) -> int:
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    spec = CorruptionSpec(
        sub_rate=args.sub_rate,
        del_rate=args.del_rate,
        ins_rate=args.ins_rate,
        boundary_jitter=args.jitter,
        split_prob=args.split_prob,
        merge_prob=args.merge_prob,
        permute_speakers=not args.no_permute,
        confusion_rate=args.confusion_rate,
        seed=args.seed,
    )
    refs = []
    systems: list[list] = [[] for _ in range(args.systems)]
    for n in range(args.sessions):
        ref = gen_reference(
            args.speakers,
            args.segments,
            (args.min_words, args.max_words),
            args.vocab_size,
            seed=args.seed * 100_003 + n,
            session_id=f"session{n:03d}",
        )
        refs.append(ref)
        for h, hyp in enumerate(gen_systems(ref, _session_spec(spec, n), args.systems)):
            systems[h].append(hyp)
    (out / "reference.json").write_bytes(emit_sessions(refs))
    for h, hyps in enumerate(systems):
        (out / f"sys{h + 1:02d}.json").write_bytes(emit_sessions(hyps))
    log.info("wrote %d session(s), %d system(s) to %s", args.sessions, args.systems, out)
    return EXIT_OK


def _session_spec(spec: CorruptionSpec, n: int) -> CorruptionSpec:
    return replace(spec, seed=derive_seed(spec.seed, 1_000_000 + n))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mover", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("combine", help="combine system outputs into one transcript")
    p.add_argument("inputs", nargs="+", help="segment-list JSON files, one per system")
    p.add_argument("-o", "--output", required=True, help="combined segment-list JSON")
    p.add_argument("--grouping", choices=(FULLSET, SUBSET), default=FULLSET)
    p.add_argument("--collar", type=seconds, default=5.0, help="seconds or 'inf' (default 5)")
    p.add_argument("--no-tc", action="store_true", help="disable time-constrained alignment")
    p.add_argument("--no-ocr", action="store_true", help="disable order consistency resolution")
    p.add_argument("--tie", choices=TIE_POLICIES, default=TIE_POLICIES[0])
    p.add_argument("--weights", type=weight_list, help="comma-separated vote weights, input order")
    p.add_argument("--merge-gap", type=seconds, default=0.0,
                   help="merge output segments separated by at most this many seconds")
    p.add_argument("--map-threshold", type=seconds, default=0.0,
                   help="minimum overlap (s) for a speaker match")
    p.add_argument("--dump-mapping", metavar="PATH", help="write speaker mapping JSON")
    p.add_argument("--dump-cn", metavar="PATH", help="write confusion networks JSON")
    p.add_argument("--workers", type=int, default=1, help="parallel session workers")
    p.set_defaults(func=cmd_combine)

    p = sub.add_parser("score", help="time-constrained cpWER of a hypothesis file")
    p.add_argument("--ref", required=True)
    p.add_argument("--hyp", required=True)
    p.add_argument("--collar", type=seconds, default=5.0, help="seconds or 'inf' (default 5)")
    p.add_argument("-o", "--output", help="write the report here instead of stdout")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("synth", help="generate a synthetic reference and corrupted systems")
    p.add_argument("--speakers", type=int, default=4)
    p.add_argument("--segments", type=int, default=30, help="segments per session")
    p.add_argument("--sessions", type=int, default=1)
    p.add_argument("--systems", type=int, default=3)
    p.add_argument("--min-words", type=int, default=5)
    p.add_argument("--max-words", type=int, default=12)
    p.add_argument("--vocab-size", type=int, default=500)
    p.add_argument("--sub-rate", type=probability, default=0.15)
    p.add_argument("--del-rate", type=probability, default=0.05)
    p.add_argument("--ins-rate", type=probability, default=0.05)
    p.add_argument("--jitter", type=seconds, default=0.3, help="uniform boundary jitter (s)")
    p.add_argument("--split-prob", type=probability, default=0.1)
    p.add_argument("--merge-prob", type=probability, default=0.1)
    p.add_argument("--confusion-rate", type=probability, default=0.0)
    p.add_argument("--no-permute", action="store_true", help="keep reference speaker labels")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(name)s: %(message)s",
    )
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
