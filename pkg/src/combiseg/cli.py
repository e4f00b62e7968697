"""Command line interface: segment, eval, bench and sweep."""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
from PIL import UnidentifiedImageError

from .evaluation import (DEFAULT_THETA, ManifestError, evaluate_pairs,
                         load_manifest, prepare_pairs, sweep)
from .histogram import NOISE_FLOOR
from .imgio import load_gray, otsu_binarize, render_overlay
from .morphstage import DEFAULT_PARAMS, Params
from .pipeline import combiseg

# Readable aliases accepted (and written) next to the bare parameter names.
PARAM_ALIASES = {
    "preprocess_size": "p1",
    "text_dilation_width": "p2",
    "protect_height": "p3",
    "separator_width": "p4",
    "background_dilation_width": "p5",
    "min_line_height": "p6",
    "peak_threshold": "p7",
    "height_adjustment": "p8",
}
_PARAM_NAMES = tuple(PARAM_ALIASES.values())


@dataclass(frozen=True)
class Config:
    """Everything a run needs beyond the input paths."""

    params: Params = DEFAULT_PARAMS
    text_is_dark: bool = True
    merge_rules: bool = True
    noise_floor: float = NOISE_FLOOR
    theta: float = DEFAULT_THETA


def load_config(path) -> Config:
    """Read a flat key/value JSON config; aliases map onto p1..p8."""
    doc = json.loads(Path(path).read_text())
    if not isinstance(doc, dict):
        raise ValueError(f"config {path} must be a JSON object")
    values = dict(vars(DEFAULT_PARAMS).items())
    extra = {}
    for key, value in doc.items():
        name = PARAM_ALIASES.get(key, key)
        if name in _PARAM_NAMES:
            values[name] = value
        elif name in ("text_is_dark", "merge_rules", "noise_floor", "theta"):
            extra[name] = value
        else:
            raise ValueError(f"unknown config key {key!r} in {path}")
    return Config(params=Params(**values), **extra)


def save_config(config: Config, path) -> None:
    doc = {name: getattr(config.params, name) for name in _PARAM_NAMES}
    doc.update({alias: getattr(config.params, name)
                for alias, name in PARAM_ALIASES.items()})
    doc.update(text_is_dark=config.text_is_dark, merge_rules=config.merge_rules,
               noise_floor=config.noise_floor, theta=config.theta)
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _config_from(args) -> Config:
    cfg = load_config(args.params) if args.params else Config()
    if args.theta is not None:
        cfg = replace(cfg, theta=args.theta)
    if args.no_merge_rules:
        cfg = replace(cfg, merge_rules=False)
    if args.text_is_dark is not None:
        cfg = replace(cfg, text_is_dark=args.text_is_dark)
    return cfg


def _segment_one(path, cfg: Config):
    gray = load_gray(path)
    ib = otsu_binarize(gray, cfg.text_is_dark)
    result = combiseg(ib, cfg.params, merge_overlaps=cfg.merge_rules,
                      noise_floor=cfg.noise_floor)
    return gray, result


def _boxes_json(result) -> str:
    doc = {"boxes": [list(b) for b in result.boxes]}
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def cmd_segment(args) -> int:
    cfg = _config_from(args)
    gray, result = _segment_one(args.image, cfg)
    doc = _boxes_json(result)
    if args.out:
        Path(args.out).write_text(doc)
    else:
        sys.stdout.write(doc)
    if args.overlay:
        render_overlay(gray, result.boxes, args.overlay)
    return 0


def cmd_eval(args) -> int:
    cfg = _config_from(args)
    pairs = prepare_pairs(load_manifest(args.manifest), cfg.text_is_dark)
    report = evaluate_pairs(pairs, cfg.params, theta=cfg.theta,
                            merge_overlaps=cfg.merge_rules,
                            noise_floor=cfg.noise_floor, workers=args.workers)
    if args.json:
        doc = {
            "samples": [vars(s) for s in report.samples],
            "accuracy": report.accuracy,
            "pt_ms": report.pt_ms,
            "total_loss": report.total_loss,
            "line_count": report.line_count,
        }
        print(json.dumps(doc, sort_keys=True))
    else:
        print(f"{'image':<40} {'gt':>4} {'pred':>4} {'loss':>4} {'ms':>9}")
        for s in report.samples:
            print(f"{s.image:<40} {s.gt_lines:>4} {s.pred_lines:>4} "
                  f"{s.loss:>4} {s.millis:>9.3f}")
        print(f"accuracy {report.accuracy:.3f} over {report.line_count} lines "
              f"in {report.sample_count} samples, pt {report.pt_ms:.3f} ms/image")
    if args.out_dir:
        from . import report as rpt
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        rpt.write_eval_csv(report, out / "eval.csv")
        rpt.save_eval_figure(report, out / "eval_losses.png")
    return 0


def cmd_bench(args) -> int:
    cfg = _config_from(args)
    if args.reps < 1:
        raise ValueError(f"need at least one repetition, got {args.reps}")
    blocks = [otsu_binarize(load_gray(p), cfg.text_is_dark) for p in args.images]
    run = lambda ib: combiseg(ib, cfg.params, merge_overlaps=cfg.merge_rules,
                              noise_floor=cfg.noise_floor)
    for ib in blocks:
        run(ib)  # warm-up pass, not timed
    times = []
    for _ in range(args.reps):
        for ib in blocks:
            t0 = time.perf_counter()
            run(ib)
            times.append((time.perf_counter() - t0) * 1000.0)
    arr = np.asarray(times)
    stats = {"mean_ms": float(arr.mean()), "median_ms": float(np.median(arr)),
             "p95_ms": float(np.percentile(arr, 95)),
             "runs": len(times), "images": len(blocks), "reps": args.reps}
    if args.json:
        print(json.dumps(stats, sort_keys=True))
    else:
        print(f"{stats['images']} images x {stats['reps']} reps: "
              f"mean {stats['mean_ms']:.3f} ms, median {stats['median_ms']:.3f} ms, "
              f"p95 {stats['p95_ms']:.3f} ms")
    if args.out_dir:
        from . import report as rpt
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        rpt.write_bench_csv(times, out / "bench.csv")
        rpt.save_bench_figure(times, out / "bench_times.png")
    return 0


def _csv_ints(text):
    values = [int(v) for v in text.split(",") if v.strip() != ""]
    if not values:
        raise argparse.ArgumentTypeError("empty value list")
    return values


def _csv_floats(text):
    values = [float(v) for v in text.split(",") if v.strip() != ""]
    if not values:
        raise argparse.ArgumentTypeError("empty value list")
    return values


def cmd_sweep(args) -> int:
    cfg = _config_from(args)
    pairs = prepare_pairs(load_manifest(args.manifest), cfg.text_is_dark)
    deltas = {"p2": args.delta_p2, "p3": args.delta_p3,
              "p4": args.delta_p4, "p5": args.delta_p5}
    result = sweep(cfg.params, deltas, pairs, p7_grid=args.p7_grid,
                   theta=cfg.theta, merge_overlaps=cfg.merge_rules,
                   noise_floor=cfg.noise_floor, workers=args.workers)
    if args.json:
        doc = {"winner": vars(result.winner),
               "stage1": [{"params": vars(e.params), "accuracy": e.accuracy,
                           "pt_ms": e.pt_ms} for e in result.stage1],
               "stage2": [{"params": vars(e.params), "accuracy": e.accuracy,
                           "pt_ms": e.pt_ms} for e in result.stage2]}
        print(json.dumps(doc, sort_keys=True))
    else:
        for stage, entries in (("stage 1 (morphology grid, splits off)", result.stage1),
                               ("stage 2 (peak threshold scan)", result.stage2)):
            if not entries:
                continue
            print(stage)
            print(f"{'p2':>5} {'p3':>5} {'p4':>5} {'p5':>5} {'p7':>6} "
                  f"{'accuracy':>9} {'pt_ms':>9}")
            for e in entries:
                p = e.params
                print(f"{p.p2:>5} {p.p3:>5} {p.p4:>5} {p.p5:>5} {p.p7:>6.2f} "
                      f"{e.accuracy:>9.3f} {e.pt_ms:>9.3f}")
        w = result.winner
        print(f"winner: p2={w.p2} p3={w.p3} p4={w.p4} p5={w.p5} p7={w.p7}")
    if args.out_dir:
        from . import report as rpt
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        rpt.write_sweep_csv(result, out / "sweep.csv")
        rpt.save_sweep_figure(result, out / "sweep_accuracy.png")
        save_config(replace(cfg, params=result.winner), out / "winner_params.json")
    return 0


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--params", metavar="FILE", help="JSON parameter/config file")
    p.add_argument("--theta", type=float, default=None,
                   help=f"line matching tolerance in pixels (default {DEFAULT_THETA})")
    p.add_argument("--no-merge-rules", action="store_true",
                   help="disable the vertical overlap merge rules")
    polarity = p.add_mutually_exclusive_group()
    polarity.add_argument("--dark-text", dest="text_is_dark", action="store_true",
                          default=None, help="text is darker than the background (default)")
    polarity.add_argument("--light-text", dest="text_is_dark", action="store_false",
                          help="text is lighter than the background")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="combiseg",
        description="Text line segmentation for binarized single-column blocks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("segment", help="segment one image into line boxes")
    p.add_argument("image", help="input image (PNG at minimum)")
    p.add_argument("--out", metavar="FILE", help="write the JSON result here")
    p.add_argument("--overlay", metavar="FILE", help="write a box overlay PNG")
    _add_common(p)
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("eval", help="score the segmenter against ground truth")
    p.add_argument("manifest", help="ground-truth manifest JSON")
    p.add_argument("--workers", type=int, default=os.cpu_count())
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--out-dir", metavar="DIR", help="write CSV and figures here")
    _add_common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bench", help="time the segmenter on a set of images")
    p.add_argument("images", nargs="+", help="input images")
    p.add_argument("--reps", type=int, default=3, help="timed repetitions per image")
    p.add_argument("--workers", type=int, default=1,
                   help="worker threads (timing is cleanest at 1)")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out-dir", metavar="DIR")
    _add_common(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("sweep", help="brute-force parameters against ground truth")
    p.add_argument("manifest", help="ground-truth manifest JSON")
    for name in ("p2", "p3", "p4", "p5"):
        p.add_argument(f"--delta-{name}", type=_csv_ints, default=[0],
                       metavar="CSV", help=f"offsets to try for {name}")
    p.add_argument("--p7-grid", type=_csv_floats, default=None, metavar="CSV",
                   help="absolute peak threshold values to scan")
    p.add_argument("--workers", type=int, default=os.cpu_count())
    p.add_argument("--json", action="store_true")
    p.add_argument("--out-dir", metavar="DIR")
    _add_common(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:  # argparse already printed the message
        return exit_.code or 0
    try:
        return args.func(args)
    except (ManifestError, UnidentifiedImageError, OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


def app() -> None:
    sys.exit(main())
