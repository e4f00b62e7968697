"""Ground-truth metrics, batch evaluation and the staged parameter sweep."""
from __future__ import annotations

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from itertools import product
from pathlib import Path

import numpy as np

from .components import BBox
from .histogram import NOISE_FLOOR
from .imgio import load_gray, otsu_binarize
from .morphstage import DEFAULT_PARAMS, Params
from .pipeline import combiseg

# Mean annotated line height the default parameters were tuned against, and
# the matching tolerance of one third of it.
REFERENCE_LINE_HEIGHT = 42.9
DEFAULT_THETA = 14.3


def scaled_params(line_height: float, base: Params = DEFAULT_PARAMS) -> Params:
    """Rescale ``base`` from the reference line height to ``line_height``."""
    return base.scale(line_height / REFERENCE_LINE_HEIGHT)


def matched(pred, gt, theta: float = DEFAULT_THETA) -> set[int]:
    """Indices of ground-truth boxes matched by some prediction.

    A ground-truth box counts as matched when any predicted box has its
    vertical center within ``theta`` pixels of the ground-truth center; one
    prediction may therefore satisfy several ground-truth lines.
    """
    if theta <= 0:
        raise ValueError(f"theta must be positive, got {theta}")
    centers = [(b[1] + b[3]) / 2 for b in pred]
    return {i for i, g in enumerate(gt)
            if any(abs((g[1] + g[3]) / 2 - c) <= theta for c in centers)}


def _loss_value(n_matched: int, n_gt: int, n_pred: int) -> int:
    return min(n_gt, n_gt - n_matched + max(0, n_pred - n_gt))


def loss(pred, gt, theta: float = DEFAULT_THETA) -> int:
    """Unmatched ground-truth lines plus surplus detections, capped at |gt|."""
    if not gt:
        raise ValueError("ground truth must contain at least one box")
    return _loss_value(len(matched(pred, gt, theta)), len(gt), len(pred))


def accuracy(losses, gt_sizes) -> float:
    """Aggregate accuracy: 1 minus total loss over total ground-truth lines."""
    losses, gt_sizes = list(losses), list(gt_sizes)
    if not gt_sizes or len(losses) != len(gt_sizes):
        raise ValueError("need one loss per sample and at least one sample")
    return 1.0 - sum(losses) / sum(gt_sizes)


@dataclass(frozen=True)
class SampleResult:
    image: str
    gt_lines: int
    pred_lines: int
    matched_lines: int
    loss: int
    millis: float


@dataclass(frozen=True)
class EvalReport:
    """Per-sample results of one evaluation run."""

    samples: tuple[SampleResult, ...]

    @property
    def sample_count(self) -> int:
        return len(self.samples)

    @property
    def line_count(self) -> int:
        return sum(s.gt_lines for s in self.samples)

    @property
    def total_loss(self) -> int:
        return sum(s.loss for s in self.samples)

    @property
    def total_ms(self) -> float:
        return sum(s.millis for s in self.samples)

    @property
    def accuracy(self) -> float:
        return accuracy((s.loss for s in self.samples),
                        (s.gt_lines for s in self.samples))

    @property
    def pt_ms(self) -> float:
        return measure_pt(self)


def measure_pt(report: EvalReport) -> float:
    """Mean processing time per image in milliseconds.

    Timing covers the segmentation call only; loading and binarization are
    excluded unless the evaluation was explicitly asked to time them.
    """
    if not report.samples:
        raise ValueError("no samples were processed")
    return report.total_ms / len(report.samples)


def evaluate_pairs(pairs, params: Params = DEFAULT_PARAMS, *,
                   theta: float = DEFAULT_THETA, merge_overlaps: bool = True,
                   use_histogram: bool = True, noise_floor: float = NOISE_FLOOR,
                   workers: int | None = None) -> EvalReport:
    """Run the segmenter over (name, image, gt boxes) triples and score it.

    Work fans out over a thread pool (one image per task, ``workers`` of
    them, all cores by default); results are accumulated in input order, so
    totals do not depend on the worker count.
    """
    pairs = list(pairs)
    if not pairs:
        raise ValueError("no samples to evaluate")

    def run(item):
        name, ib, gt = item
        t0 = time.perf_counter()
        result = combiseg(ib, params, merge_overlaps=merge_overlaps,
                          use_histogram=use_histogram, noise_floor=noise_floor)
        ms = (time.perf_counter() - t0) * 1000.0
        m = len(matched(result.boxes, gt, theta))
        return SampleResult(name, len(gt), len(result.boxes), m,
                            _loss_value(m, len(gt), len(result.boxes)), ms)

    if workers == 1:
        results = [run(p) for p in pairs]
    else:
        with ThreadPoolExecutor(max_workers=workers or os.cpu_count()) as pool:
            results = list(pool.map(run, pairs))
    return EvalReport(tuple(results))


@dataclass(frozen=True)
class GroundTruthSample:
    image: Path
    boxes: tuple[BBox, ...]


class ManifestError(ValueError):
    """Raised for an unreadable or malformed ground-truth manifest."""


def _parse_sample(path: Path) -> GroundTruthSample:
    doc = json.loads(path.read_text())
    image = path.parent / doc["image"]
    boxes = doc["boxes"]
    if not isinstance(boxes, list) or not boxes:
        raise ValueError("needs a non-empty 'boxes' list")
    parsed = []
    for b in boxes:
        x0, y0, x1, y1 = (int(v) for v in b)
        if x0 > x1 or y0 > y1:
            raise ValueError(f"degenerate box {b}")
        parsed.append(BBox(x0, y0, x1, y1))
    if not image.is_file():
        raise ValueError(f"image {image} does not exist")
    return GroundTruthSample(image, tuple(parsed))


def load_manifest(path) -> list[GroundTruthSample]:
    """Read a manifest and every sample document it lists.

    The manifest is a JSON object {"samples": [<paths>...]}; each sample is
    its own JSON document {"image": <path>, "boxes": [[x0,y0,x1,y1], ...]},
    with paths relative to the file that names them. All offending entries
    are collected and reported together in a ManifestError.
    """
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
        entries = doc["samples"]
    except (OSError, ValueError, KeyError, TypeError) as err:
        raise ManifestError(f"unreadable manifest {path}: {err}") from err
    if not isinstance(entries, list) or not entries:
        raise ManifestError(f"manifest {path} lists no samples")
    samples, errors = [], []
    for entry in entries:
        sample_path = path.parent / entry
        try:
            samples.append(_parse_sample(sample_path))
        except (OSError, ValueError, KeyError, TypeError) as err:
            errors.append(f"  {entry}: {err}")
    if errors:
        raise ManifestError("malformed manifest entries:\n" + "\n".join(errors))
    return samples


def prepare_pairs(samples, text_is_dark: bool = True):
    """Load and binarize manifest samples into evaluation triples."""
    return [(str(s.image), otsu_binarize(load_gray(s.image), text_is_dark), s.boxes)
            for s in samples]


@dataclass(frozen=True)
class SweepEntry:
    params: Params
    accuracy: float
    pt_ms: float


@dataclass(frozen=True)
class SweepResult:
    """Ranked outcomes of the two sweep stages and the overall winner."""

    stage1: tuple[SweepEntry, ...]
    stage2: tuple[SweepEntry, ...]
    winner: Params


def _ranked(entries):
    return tuple(sorted(entries, key=lambda e: (-e.accuracy, e.pt_ms)))


def sweep(base: Params, deltas, pairs, *, p7_grid=None,
          theta: float = DEFAULT_THETA, merge_overlaps: bool = True,
          noise_floor: float = NOISE_FLOOR, workers: int | None = None) -> SweepResult:
    """Brute-force the morphology parameters, then the peak threshold.

    Stage one applies every combination of the ``deltas`` offsets for p2..p5
    with the projection splitting disabled, so only the morphology and
    component stages are judged. Stage two rescans p7 over ``p7_grid`` (if
    given) with the stage-one winner fixed and the full pipeline running.
    Both tables are ranked by accuracy, ties broken by lower mean time.
    """
    pairs = list(pairs)
    if not pairs:
        raise ValueError("parameter sweep needs a non-empty ground-truth set")
    names = ("p2", "p3", "p4", "p5")
    for name in names:
        if not deltas.get(name):
            raise ValueError(f"no delta values for {name}")

    stage1 = []
    for offs in product(*(deltas[n] for n in names)):
        params = replace(base, **{n: getattr(base, n) + d for n, d in zip(names, offs)})
        report = evaluate_pairs(pairs, params, theta=theta, use_histogram=False,
                                merge_overlaps=merge_overlaps,
                                noise_floor=noise_floor, workers=workers)
        stage1.append(SweepEntry(params, report.accuracy, report.pt_ms))
    stage1 = _ranked(stage1)
    winner = stage1[0].params

    stage2 = []
    for p7 in p7_grid or ():
        params = replace(winner, p7=p7)
        report = evaluate_pairs(pairs, params, theta=theta,
                                merge_overlaps=merge_overlaps,
                                noise_floor=noise_floor, workers=workers)
        stage2.append(SweepEntry(params, report.accuracy, report.pt_ms))
    stage2 = _ranked(stage2)
    if stage2:
        winner = stage2[0].params
    return SweepResult(stage1, stage2, winner)
