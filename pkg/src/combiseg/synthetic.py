"""Synthetic text-block generator for tests and benchmarks.

Blocks imitate the defect classes of historic newspaper crops: dashed
text-like lines, cropping borders at the block edges, salt noise and round
stamp blobs bleeding into or across neighbouring lines. Ground truth is the
exact ink bounding box of each line; noise, stamps and borders are not text
and never appear in it.
"""
from __future__ import annotations

import numpy as np

from .components import BBox


def _draw_dashes(img, y0, y1, xa, xb, line_height, rng):
    # Dash runs stay around one to two line heights (well below the rule
    # removal length) and dash gaps stay far below the text dilation width.
    min_run = max(3, line_height // 2)
    x = xa
    while x <= xb:
        run = int(rng.integers(min_run, 2 * line_height))
        img[y0:y1 + 1, x:min(x + run, xb + 1)] = 1
        x += run + int(rng.integers(2, max(3, line_height // 6) + 1))
    img[y0:y1 + 1, xb - min_run + 1:xb + 1] = 1  # anchor ink at the right end


def _draw_stamp(img, cx, cy, rx, ry):
    yy, xx = np.ogrid[:img.shape[0], :img.shape[1]]
    mask = ((yy - cy) / ry) ** 2 + ((xx - cx) / rx) ** 2 <= 1.0
    img[mask] = 1


def generate_block(lines: int, line_height: int, gap: int, *, width: int = 900,
                   margin_x: int = 48, margin_y: int | None = None,
                   dashed: bool = True, ragged: float = 0.0, salt: float = 0.0,
                   border: str | None = None, stamps_between=(), stamps_on=(),
                   rng=None) -> tuple[np.ndarray, list[BBox]]:
    """Render a block of horizontal text-like bars and its ground truth.

    Returns the 0/1 image and one box per line, tightly bounding its ink.
    ``stamps_between`` lists gap indices bridged by a blob reaching from one
    line center to the next, ``stamps_on`` lists lines carrying a blob of
    their own, ``border`` is None, 'left', 'right' or 'both', ``ragged``
    shortens the last line by up to that fraction of its width, and ``salt``
    is the density of random noise pixels. Raises ValueError when the
    requested geometry does not fit.
    """
    rng = np.random.default_rng() if rng is None else rng
    if lines < 1:
        raise ValueError(f"need at least one line, got {lines}")
    if line_height < 3 or gap < 0:
        raise ValueError(f"bad line geometry: height {line_height}, gap {gap}")
    if margin_y is None:
        margin_y = max(12, gap, line_height // 3)
    height = 2 * margin_y + lines * line_height + (lines - 1) * gap
    xa, xb = margin_x, width - 1 - margin_x
    if xb - xa < 4 * line_height:
        raise ValueError(f"width {width} too small for {line_height}px lines")

    img = np.zeros((height, width), np.uint8)
    centers = []
    gt = []
    for i in range(lines):
        y0 = margin_y + i * (line_height + gap)
        y1 = y0 + line_height - 1
        end = xb
        if ragged and i == lines - 1:
            end = xb - int((xb - xa) * rng.uniform(0.0, ragged))
            end = max(end, xa + 4 * line_height)
        if dashed:
            _draw_dashes(img, y0, y1, xa, end, line_height, rng)
        else:
            img[y0:y1 + 1, xa:end + 1] = 1
        centers.append((y0 + y1) / 2)
        gt.append(BBox(xa, y0, end, y1))

    for gi in stamps_between:
        if not 0 <= gi < lines - 1:
            raise ValueError(f"no gap {gi} in a {lines}-line block")
        rx = max(3, int(0.7 * line_height * rng.uniform(0.9, 1.2)))
        ry = (centers[gi + 1] - centers[gi]) / 2
        cx = _stamp_x(xa, xb, rx, line_height, rng)
        _draw_stamp(img, cx, (centers[gi] + centers[gi + 1]) / 2, rx, ry)
    for li in stamps_on:
        if not 0 <= li < lines:
            raise ValueError(f"no line {li} in a {lines}-line block")
        rx = max(3, int(0.7 * line_height * rng.uniform(0.9, 1.2)))
        ry = line_height // 2 + max(1, line_height // 6)
        cx = _stamp_x(xa, xb, rx, line_height, rng)
        _draw_stamp(img, cx, centers[li], rx, ry)

    if border in ("left", "both"):
        img[:, 1:4] = 1
    if border in ("right", "both"):
        img[:, width - 4:width - 1] = 1
    elif border not in (None, "left", "both"):
        raise ValueError(f"unknown border spec {border!r}")

    if salt:
        k = int(round(salt * img.size))
        img[rng.integers(0, height, k), rng.integers(0, width, k)] = 1
    return img, gt


def _stamp_x(xa, xb, rx, line_height, rng):
    # Keep clearance on both sides so the background separators next to the
    # stamp stay wide enough to be found.
    lo, hi = xa + rx + 2 * line_height, xb - rx - 2 * line_height
    if lo >= hi:
        raise ValueError("block too narrow to place a stamp")
    return int(rng.integers(lo, hi))
