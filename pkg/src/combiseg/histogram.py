"""Row-projection peak/valley analysis used to split merged line candidates.

A sub-projection is a plain dict mapping each row of a candidate box to the
white pixel count of that row, with iteration order fixed to decreasing
count and ties broken by ascending row. Peaks in a sub-projection are text
lines; the valleys between two peaks are where a component that swallowed
several lines gets cut.
"""
from __future__ import annotations

import numpy as np

from .components import BBox
from .morphstage import Params

# Counts below this fraction of the sub-projection maximum end the peak scan.
NOISE_FLOOR = 0.1


def global_projection(ib: np.ndarray) -> np.ndarray:
    """White pixels per row over the whole image."""
    return np.asarray(ib).sum(axis=1, dtype=np.int64)


def subproj(h_star: np.ndarray, box: BBox) -> dict[int, int]:
    """Restrict ``h_star`` to the rows of ``box``, ordered by falling count."""
    ys = np.arange(box.y0, box.y1 + 1)
    counts = np.asarray(h_star)[ys]
    order = np.lexsort((ys, -counts))
    return {int(ys[i]): int(counts[i]) for i in order}


def bounds(hi: dict[int, int], coord: int, alpha_t: float) -> tuple[int, int]:
    """Delimiters of the peak around ``coord``.

    Walks outward row by row and returns the maximal contiguous run whose
    counts stay at or above ``alpha_t``; running off either end of the
    sub-projection's row range clips the run there. ``coord`` itself must
    satisfy the threshold.
    """
    if hi[coord] < alpha_t:
        raise ValueError(f"row {coord} lies below the peak threshold {alpha_t}")
    start = coord
    while start - 1 in hi and hi[start - 1] >= alpha_t:
        start -= 1
    end = coord
    while end + 1 in hi and hi[end + 1] >= alpha_t:
        end += 1
    return start, end


def analysis(hi: dict[int, int], t: float, noise_floor: float = NOISE_FLOOR) -> list[int]:
    """Suggest row coordinates at which to split a multi-line component.

    Rows are visited from the highest count down. Each yet-unvisited row
    seeds a peak whose extent comes from ``bounds`` with the relative
    threshold ``t`` times the seed count; the peak is registered only when
    its whole extent is disjoint from every row visited so far. The scan
    stops once counts fall below ``noise_floor`` times the maximum count.
    The returned splits are the valley rows between registered peaks, so a
    single peak (one text line) yields no split.
    """
    if not hi:
        raise ValueError("empty sub-projection")
    top = max(hi.values())
    visited: set[int] = set()
    delimiters: list[int] = []
    for coord, height in hi.items():
        if height < noise_floor * top:
            break
        if coord not in visited:
            start, end = bounds(hi, coord, t * height)
            peak = range(start, end + 1)
            if visited.isdisjoint(peak):
                delimiters += (start, end)
            visited.update(peak)
    return valleys(hi, delimiters)


def valleys(hi: dict[int, int], delimiters: list[int]) -> list[int]:
    """Lowest-count row inside every gap between consecutive peaks.

    ``delimiters`` holds the start/end pairs of registered peaks. The lowest
    and highest value are the outer edges and are discarded; the remaining
    values, paired in ascending order, bound the inter-peak gaps (inclusive).
    Fewer than two peaks leave no gap and no split. Ties inside a gap
    resolve to the smallest row; the result is sorted ascending.
    """
    if len(delimiters) % 2:
        raise ValueError("peak delimiters must come in start/end pairs")
    if len(delimiters) < 4:
        return []
    inner = sorted(delimiters)[1:-1]
    splits = [min(range(a, b + 1), key=hi.__getitem__)
              for a, b in zip(inner[0::2], inner[1::2])]
    return sorted(splits)


def split(splits: list[int], box: BBox, p6: int) -> list[BBox]:
    """Cut ``box`` horizontally at the given rows.

    The box's own last row is merged into the split list (duplicates
    collapse), so the list is never empty and an empty ``splits`` returns
    the box unchanged. Walking the sorted rows, a segment is emitted only
    when it spans at least ``p6`` (as row difference), but the walk position
    always advances, so a dropped short head shifts the next segment's start.
    Emitted boxes inherit the parent's x extent and never leave it.
    """
    out = []
    last = box.y0
    for s in sorted(set(splits) | {box.y1}):
        if s - last >= p6:
            out.append(BBox(box.x0, last, box.x1, s))
        last = s
    return out


def hist(ib: np.ndarray, boxes, params: Params,
         noise_floor: float = NOISE_FLOOR) -> list[BBox]:
    """Apply projection splitting to every candidate box.

    The projection is taken over the original binarized image, not the
    morphologically processed one, so dilation artifacts do not skew the
    row counts.
    """
    h_star = global_projection(ib)
    out: list[BBox] = []
    for box in boxes:
        rows = subproj(h_star, box)
        out += split(analysis(rows, params.p7, noise_floor), box, params.p6)
    return out
