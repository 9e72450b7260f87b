"""Command-line pipeline: simulate, track, evaluate, locomotion.

Exit codes: 0 on success, 1 on input errors (bad flags, missing files,
invariant violations), 2 on internal errors.  Diagnostics go to stderr as
a single line.
"""

import argparse
import json
import os
import sys

from . import io as motio
from . import locomotion, synth, tracker
from .metrics import compute_map, compute_tracking_metrics


class CliInputError(Exception):
    pass


def _check_distinct_paths(inputs, outputs):
    resolved_in = {os.path.abspath(p) for p in inputs if p}
    seen = set()
    for path in outputs:
        if not path:
            continue
        resolved = os.path.abspath(path)
        if resolved in resolved_in:
            raise CliInputError(f"output path {path} is also an input path")
        if resolved in seen:
            raise CliInputError(f"output path {path} given twice")
        seen.add(resolved)


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; route through our own
    # input-error handling instead
    def error(self, message):
        raise CliInputError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="shoaltrack", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_track = sub.add_parser("track", help="associate detections into tracks")
    p_track.add_argument("--detections", required=True, help="MOT detections file")
    p_track.add_argument("--tracker", choices=tracker.VARIANTS, default="bytetrack")
    p_track.add_argument("--out", required=True, help="output MOT tracks file")
    p_track.add_argument("--high-thresh", type=float, default=0.25)
    p_track.add_argument("--low-thresh", type=float, default=0.1)
    p_track.add_argument("--new-track-thresh", type=float, default=0.25)
    p_track.add_argument("--match-thresh", type=float, default=0.8)
    p_track.add_argument("--track-buffer", type=int, default=30)
    p_track.add_argument("--fuse-score", choices=("auto", "on", "off"), default="auto")
    p_track.set_defaults(func=cmd_track)

    p_eval = sub.add_parser("evaluate", help="tracking and detection metrics")
    p_eval.add_argument("--gt", required=True, help="MOT ground-truth file")
    p_eval.add_argument("--tracks", required=True, help="MOT tracks file")
    p_eval.add_argument("--detections", help="optional MOT detections file for mAP")
    p_eval.add_argument("--iou-gate", type=float, default=0.5)
    p_eval.add_argument("--per-alpha", action="store_true", help="include per-alpha HOTA rows")
    p_eval.add_argument("--json-report", help="write the report as JSON to this path")
    p_eval.add_argument("--report-csv", help="write the report as CSV to this path")
    p_eval.set_defaults(func=cmd_evaluate)

    p_loco = sub.add_parser("locomotion", help="direction/speed histograms")
    p_loco.add_argument("--tracks", required=True, help="MOT tracks file")
    p_loco.add_argument("--min-track-len", type=int, default=5)
    p_loco.add_argument("--window", type=int, default=5)
    p_loco.add_argument("--window-stride", type=int, default=None)
    p_loco.add_argument("--bins", type=int, default=18, help="direction histogram bins")
    p_loco.add_argument("--mag-bins", type=int, default=20)
    p_loco.add_argument(
        "--max-magnitude",
        type=float,
        default=None,
        help="magnitude range cap; defaults to the largest observed magnitude",
    )
    p_loco.add_argument("--out", required=True, help="output prefix for histogram files")
    p_loco.add_argument("--svg", action="store_true", help="also write SVG bar charts")
    p_loco.set_defaults(func=cmd_locomotion)

    p_sim = sub.add_parser("simulate", help="synthetic shoal scenario")
    p_sim.add_argument("--config", help="key = value scenario file")
    p_sim.add_argument("--out-gt", required=True, help="output MOT ground-truth file")
    p_sim.add_argument("--out-dets", required=True, help="output MOT detections file")
    for name, typ in _SCENARIO_FLAGS.items():
        p_sim.add_argument(f"--{name.replace('_', '-')}", type=typ, default=None, dest=name)
    p_sim.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (CliInputError, motio.MotParseError, ValueError, OSError) as exc:
        print(f"shoaltrack: error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        print(f"shoaltrack: internal error: {exc!r}", file=sys.stderr)
        return 2


def cmd_track(args) -> int:
    _check_distinct_paths([args.detections], [args.out])
    dets = motio.load_mot(args.detections, "detections")
    fuse = None if args.fuse_score == "auto" else args.fuse_score == "on"
    config = tracker.TrackerConfig(
        high_thresh=args.high_thresh,
        low_thresh=args.low_thresh,
        new_track_thresh=args.new_track_thresh,
        match_thresh=args.match_thresh,
        track_buffer=args.track_buffer,
        variant=args.tracker,
        fuse_score=fuse,
    )
    result = tracker.run_sequence(dets, config)
    motio.save_mot(args.out, result, "tracks")
    return 0


def cmd_evaluate(args) -> int:
    _check_distinct_paths(
        [args.gt, args.tracks, args.detections], [args.json_report, args.report_csv]
    )
    gt = motio.load_mot(args.gt, "ground_truth")
    tracks = motio.load_mot(args.tracks, "tracks")
    if gt.num_boxes() == 0:
        raise CliInputError(f"ground truth {args.gt} contains no boxes")
    gt_last = max(gt.frames)
    if tracks.frames and max(tracks.frames) > gt_last:
        raise CliInputError(
            f"sequence length mismatch: {args.tracks} has frames beyond {args.gt} "
            f"({max(tracks.frames)} > {gt_last})"
        )

    result = compute_tracking_metrics(gt, tracks, iou_gate=args.iou_gate)
    report: dict = {
        "idf1": result.idf1,
        "mota": result.mota,
        "hota": result.hota,
        "deta": result.deta,
        "assa": result.assa,
        "idsw": result.idsw,
        "fp": result.fp,
        "fn": result.fn,
        "gt_count": result.gt_count,
    }
    if args.per_alpha:
        for alpha, (hota_a, deta_a, assa_a) in sorted(result.per_alpha.items()):
            report[f"hota_{alpha:.2f}"] = hota_a
            report[f"deta_{alpha:.2f}"] = deta_a
            report[f"assa_{alpha:.2f}"] = assa_a

    if args.detections is not None:
        dets = motio.load_mot(args.detections, "detections")
        if dets.frames and max(dets.frames) > gt_last:
            raise CliInputError(
                f"sequence length mismatch: {args.detections} has frames beyond {args.gt} "
                f"({max(dets.frames)} > {gt_last})"
            )
        det_result = compute_map(gt, dets)
        report.update(
            {
                "det_precision": det_result.precision,
                "det_recall": det_result.recall,
                "det_map50": det_result.map50,
                "det_map50_95": det_result.map50_95,
                "det_tp": det_result.tp,
                "det_fp": det_result.fp,
                "det_fn": det_result.fn,
            }
        )

    sys.stdout.write(motio.render_report_table(report))
    if args.json_report:
        with open(args.json_report, "w", encoding="ascii") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if args.report_csv:
        with open(args.report_csv, "w", encoding="ascii") as fh:
            fh.write(motio.render_report_csv(report))
    return 0


def cmd_locomotion(args) -> int:
    _check_distinct_paths(
        [args.tracks],
        [f"{args.out}.direction.csv", f"{args.out}.magnitude.csv"],
    )
    tracks = motio.load_mot(args.tracks, "tracks")
    samples = locomotion.collect_direction_samples(
        tracks,
        min_len=args.min_track_len,
        window=args.window,
        stride=args.window_stride,
    )
    if not samples:
        print(
            "shoaltrack: warning: no direction samples "
            f"(all tracks shorter than {args.min_track_len} frames?)",
            file=sys.stderr,
        )
    direction = locomotion.direction_histogram(samples, bins=args.bins)
    max_mag = args.max_magnitude
    if max_mag is None:
        max_mag = max((s.magnitude for s in samples), default=0.0) or 1.0
    magnitude = locomotion.magnitude_histogram(samples, bins=args.mag_bins, max_magnitude=max_mag)

    with open(f"{args.out}.direction.csv", "w", encoding="ascii") as fh:
        fh.write(motio.write_histogram_csv(direction))
    with open(f"{args.out}.magnitude.csv", "w", encoding="ascii") as fh:
        fh.write(motio.write_histogram_csv(magnitude))
    if args.svg:
        with open(f"{args.out}.direction.svg", "w", encoding="ascii") as fh:
            fh.write(motio.render_histogram_svg(direction, title="Swimming direction (degrees)"))
        with open(f"{args.out}.magnitude.svg", "w", encoding="ascii") as fh:
            fh.write(motio.render_histogram_svg(magnitude, title="Swimming magnitude (px/frame)"))
    return 0


_SCENARIO_FLAGS = {
    "seed": int,
    "fish_count": int,
    "frames": int,
    "tank_width": float,
    "tank_height": float,
    "speed_min": float,
    "speed_max": float,
    "heading_noise_sigma": float,
    "turn_probability": float,
    "box_min": float,
    "box_max": float,
    "initial_heading_deg": float,
    "miss_rate": float,
    "fp_rate_per_frame": float,
    "jitter_sigma": float,
    "tp_score_mean": float,
    "fp_score_mean": float,
    "score_sigma": float,
}

_SCENARIO_DEFAULTS = {
    "seed": 1,
    "fish_count": 20,
    "frames": 200,
    "tank_width": 1600.0,
    "tank_height": 1200.0,
    "speed_min": 2.0,
    "speed_max": 6.0,
    "heading_noise_sigma": 3.0,
    "turn_probability": 0.02,
    "box_min": 18.0,
    "box_max": 30.0,
    "initial_heading_deg": None,
    "miss_rate": 0.0,
    "fp_rate_per_frame": 0.0,
    "jitter_sigma": 0.0,
    "tp_score_mean": 1.0,
    "fp_score_mean": 0.5,
    "score_sigma": 0.0,
}


def parse_config_text(text: str) -> dict:
    """Parse a plain `key = value` scenario file (# starts a comment)."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliInputError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = (part.strip() for part in line.partition("="))
        if key not in _SCENARIO_FLAGS:
            raise CliInputError(f"config line {lineno}: unknown key {key!r}")
        try:
            values[key] = _SCENARIO_FLAGS[key](value)
        except ValueError:
            raise CliInputError(f"config line {lineno}: bad value for {key}: {value!r}") from None
    return values


def cmd_simulate(args) -> int:
    _check_distinct_paths([args.config], [args.out_gt, args.out_dets])
    settings = dict(_SCENARIO_DEFAULTS)
    if args.config:
        with open(args.config, "r", encoding="ascii") as fh:
            settings.update(parse_config_text(fh.read()))
    for name in _SCENARIO_FLAGS:
        flag_value = getattr(args, name)
        if flag_value is not None:
            settings[name] = flag_value

    scenario = synth.ShoalScenario(
        seed=settings["seed"],
        fish_count=settings["fish_count"],
        frames=settings["frames"],
        tank=(settings["tank_width"], settings["tank_height"]),
        speed_range=(settings["speed_min"], settings["speed_max"]),
        heading_noise_sigma=settings["heading_noise_sigma"],
        turn_probability=settings["turn_probability"],
        box_size_range=(settings["box_min"], settings["box_max"]),
        initial_heading_deg=settings["initial_heading_deg"],
    )
    model = synth.CorruptionModel(
        miss_rate=settings["miss_rate"],
        fp_rate_per_frame=settings["fp_rate_per_frame"],
        jitter_sigma=settings["jitter_sigma"],
        score_model=(
            settings["tp_score_mean"],
            settings["fp_score_mean"],
            settings["score_sigma"],
        ),
    )
    gt = synth.generate(scenario)
    dets = synth.corrupt(gt, model, seed=settings["seed"])
    motio.save_mot(args.out_gt, gt, "ground_truth")
    motio.save_mot(args.out_dets, dets, "detections")
    return 0


if __name__ == "__main__":
    sys.exit(main())
