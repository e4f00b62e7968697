"""Connected components and candidate line bounding boxes."""
from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy import ndimage

_FOUR_CONNECTED = np.array([[0, 1, 0],
                            [1, 1, 1],
                            [0, 1, 0]], dtype=bool)


class BBox(NamedTuple):
    """Inclusive pixel rectangle [x0, y0, x1, y1]."""

    x0: int
    y0: int
    x1: int
    y1: int

    def contains(self, other: "BBox") -> bool:
        return (self.x0 <= other.x0 and self.y0 <= other.y0
                and self.x1 >= other.x1 and self.y1 >= other.y1)

    def union(self, other: "BBox") -> "BBox":
        return BBox(min(self.x0, other.x0), min(self.y0, other.y0),
                    max(self.x1, other.x1), max(self.y1, other.y1))


def _label_in_raster_order(ip):
    # scipy does the labeling; labels are then reordered by each component's
    # first pixel in row-major order so output is deterministic everywhere.
    labels, n = ndimage.label(ip, structure=_FOUR_CONNECTED)
    if n == 0:
        return labels, 0, np.empty(0, np.intp)
    flat = labels.ravel()
    pixels = np.flatnonzero(flat)
    values = flat[pixels]
    first = np.zeros(n + 1, dtype=np.intp)
    first[values[::-1]] = pixels[::-1]  # reversed write keeps the first hit
    order = np.argsort(first[1:], kind="stable")
    return labels, n, order


def label_components(ip: np.ndarray) -> list[np.ndarray]:
    """Split the 1-pixels of ``ip`` into maximal 4-connected components.

    Diagonal contact does not connect. Components are listed by their first
    pixel in row-major order; each entry is a (k, 2) array of (y, x)
    coordinates, themselves in row-major order.
    """
    labels, n, order = _label_in_raster_order(ip)
    if n == 0:
        return []
    flat = labels.ravel()
    pixels = np.flatnonzero(flat)
    values = flat[pixels]
    width = ip.shape[1]
    coords = np.stack([pixels // width, pixels % width], axis=1)
    grouped = coords[np.argsort(values, kind="stable")]
    counts = np.bincount(values, minlength=n + 1)[1:]
    groups = np.split(grouped, np.cumsum(counts)[:-1])
    return [groups[i] for i in order]


def comp(ip: np.ndarray, p6: int) -> list[BBox]:
    """Bounding boxes of all components at least ``p6`` rows tall.

    Height is measured as y1 - y0. When nothing qualifies, the whole image
    is returned as a single box, so the result is never empty. Boxes are
    listed by each component's first pixel in row-major order.
    """
    if p6 < 1:
        raise ValueError(f"p6 must be at least 1, got {p6}")
    h, w = ip.shape
    labels, n, order = _label_in_raster_order(ip)
    if n:
        slices = ndimage.find_objects(labels)
        boxes = []
        for i in order:
            sy, sx = slices[i]
            box = BBox(sx.start, sy.start, sx.stop - 1, sy.stop - 1)
            if box.y1 - box.y0 >= p6:
                boxes.append(box)
        if boxes:
            return boxes
    return [BBox(0, 0, w - 1, h - 1)]
