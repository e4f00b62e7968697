"""End-to-end segmentation: morphology, components, projection splits, postprocessing."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .components import BBox, comp
from .histogram import NOISE_FLOOR, hist
from .imgcore import binary_image
from .morphstage import DEFAULT_PARAMS, Params, morph


@dataclass(frozen=True)
class SegmentationResult:
    """Final line boxes, sorted top to bottom, plus the source dimensions."""

    boxes: tuple[BBox, ...]
    width: int
    height: int


def _sort(boxes):
    return sorted(boxes, key=lambda b: (b.y0, b.x0))


def _drop_contained(boxes):
    # Largest first, so a kept box can never be swallowed by a later one;
    # exact duplicates keep a single copy.
    ranked = sorted(boxes, key=lambda b: (b.x1 - b.x0) * (b.y1 - b.y0), reverse=True)
    kept: list[BBox] = []
    for b in ranked:
        if not any(k.contains(b) for k in kept):
            kept.append(b)
    return _sort(kept)


def overlap_merge(boxes) -> list[BBox]:
    """Fuse vertically overlapping neighbours until no pair qualifies.

    For consecutive boxes (sorted by top edge) with overlap
    o = max(0, upper.y1 - lower.y0), a merge fires when o exceeds 75% of
    either box's own height or 50% of their combined height, heights taken
    as y1 - y0 and every comparison strict. A degenerate zero height counts
    as exceeded exactly when o > 0. Merging replaces the pair with its
    coordinate-wise union and restarts, so the result is a fixpoint.
    """
    def exceeds(o, span, ratio):
        return o > 0 if span == 0 else o > ratio * span

    out = _sort(boxes)
    merged = True
    while merged:
        merged = False
        for i in range(len(out) - 1):
            a, b = out[i], out[i + 1]
            o = max(0, a.y1 - b.y0)
            if (exceeds(o, a.y1 - a.y0, 0.75) or exceeds(o, b.y1 - b.y0, 0.75)
                    or exceeds(o, b.y1 - a.y0, 0.5)):
                out[i] = a.union(b)
                del out[i + 1]
                out = _sort(out)
                merged = True
                break
    return out


def adjust(boxes, p8: int, width: int, height: int,
           merge_overlaps: bool = True) -> SegmentationResult:
    """Postprocess raw line boxes into the final result.

    Every box grows by ``p8`` rows on both sides (clamped to the image) to
    compensate the slight height loss the background dilation can cause.
    Boxes completely contained in another are then dropped, and the vertical
    overlap merge runs on top of that; both prune/merge steps repeat until
    neither applies to any pair. The result is sorted by top edge.
    """
    grown = [BBox(max(0, b.x0), max(0, b.y0 - p8),
                  min(width - 1, b.x1), min(height - 1, b.y1 + p8))
             for b in _sort(boxes)]
    kept = _drop_contained(grown)
    if merge_overlaps:
        while True:
            pruned = _drop_contained(overlap_merge(kept))
            if pruned == kept:
                break
            kept = pruned
    return SegmentationResult(tuple(kept), width, height)


def combiseg(ib: np.ndarray, params: Params = DEFAULT_PARAMS, *,
             merge_overlaps: bool = True, use_histogram: bool = True,
             noise_floor: float = NOISE_FLOOR) -> SegmentationResult:
    """Segment a binarized single-column text block into line bounding boxes.

    Runs the morphological stage, collects candidate components of
    sufficient height, splits components that span several lines on their
    row projections, and postprocesses with ``adjust``. The result is never
    empty and is deterministic for identical input and parameters.

    ``use_histogram=False`` skips the projection splitting, which is how the
    morphology parameters are tuned in isolation. ``noise_floor`` is the
    advanced knob of the peak scan; see ``histogram.analysis``.
    """
    ib = binary_image(ib)
    height, width = ib.shape
    ip = morph(ib, params)
    boxes = comp(ip, params.p6)
    if use_histogram:
        boxes = hist(ib, boxes, params, noise_floor)
    return adjust(boxes, params.p8, width, height, merge_overlaps)
