"""Binary image primitives: rectangular morphology and pixelwise arithmetic.

Images are 2-D uint8 numpy arrays holding only 0 (background/black) and
1 (text/white), indexed [row, column]. Every operation returns a new array
and never mutates its inputs, so values can be shared freely across threads.

The sliding extrema are computed from prefix sums, one pass per axis, so the
cost is proportional to the pixel count and independent of the element size.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class StructuringElement:
    """All-ones rectangle of ``w`` x ``h`` pixels.

    The anchor sits at (floor((w-1)/2), floor((h-1)/2)): the exact center for
    odd sides, the upper-left of the two central candidates for even ones.
    """

    w: int
    h: int

    def __post_init__(self):
        if self.w < 1 or self.h < 1:
            raise ValueError(f"element sides must be >= 1, got {self.w}x{self.h}")

    @property
    def ax(self) -> int:
        return (self.w - 1) // 2

    @property
    def ay(self) -> int:
        return (self.h - 1) // 2


def binary_image(pixels) -> np.ndarray:
    """Validate ``pixels`` and return a fresh canonical uint8 0/1 array."""
    arr = np.asarray(pixels)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"expected a non-empty 2-D pixel grid, got shape {arr.shape}")
    if not np.isin(arr, (0, 1)).all():
        raise ValueError("pixel values must be 0 or 1")
    return arr.astype(np.uint8)


def _check_same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ValueError(f"image dimensions differ: {a.shape} vs {b.shape}")


def _windowed_sum(img, lo, hi, axis):
    # Per-pixel sums over the inclusive window [i+lo, i+hi] along axis,
    # clipped at the borders; also returns the in-image window lengths.
    n = img.shape[axis]
    idx = np.arange(n)
    a = np.clip(idx + lo, 0, n)
    b = np.clip(idx + hi + 1, 0, n)
    csum = np.cumsum(img, axis=axis, dtype=np.int32)
    pad_shape = (1, csum.shape[1]) if axis == 0 else (csum.shape[0], 1)
    csum = np.concatenate([np.zeros(pad_shape, np.int32), csum], axis=axis)
    sums = np.take(csum, b, axis=axis) - np.take(csum, a, axis=axis)
    length = b - a
    if axis == 0:
        length = length[:, None]
    return sums, length


def _slide_max(img, size, anchor, axis):
    # Window for the maximum is the element mirrored about its anchor, so
    # erode-then-dilate stays a true (anti-extensive) opening even for even
    # sizes; odd sizes are unaffected.
    if size == 1:
        return img
    sums, _ = _windowed_sum(img, -(size - 1 - anchor), anchor, axis)
    return (sums > 0).astype(np.uint8)


def _slide_min(img, size, anchor, axis):
    if size == 1:
        return img
    sums, length = _windowed_sum(img, -anchor, size - 1 - anchor, axis)
    return (sums == length).astype(np.uint8)


def dilate(img: np.ndarray, e: StructuringElement) -> np.ndarray:
    """Window maximum under ``e``; pixels beyond the border read as 0."""
    out = _slide_max(img, e.w, e.ax, axis=1)
    out = _slide_max(out, e.h, e.ay, axis=0)
    return out.copy() if out is img else out


def erode(img: np.ndarray, e: StructuringElement) -> np.ndarray:
    """Window minimum under ``e``; pixels beyond the border read as 1.

    The foreground padding keeps structures that touch an image edge from
    being clipped, so full-height border lines still count as long runs.
    """
    out = _slide_min(img, e.w, e.ax, axis=1)
    out = _slide_min(out, e.h, e.ay, axis=0)
    return out.copy() if out is img else out


def opening(img: np.ndarray, e: StructuringElement) -> np.ndarray:
    """Erosion followed by dilation; removes features smaller than ``e``."""
    return dilate(erode(img, e), e)


def add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pixelwise saturating sum (an OR on 0/1 images)."""
    _check_same_shape(a, b)
    return np.minimum(a + b, 1).astype(np.uint8)


def subtract(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pixelwise saturating difference (1 stays 1 only where b is 0)."""
    _check_same_shape(a, b)
    return (a * (1 - b)).astype(np.uint8)


def invert(img: np.ndarray) -> np.ndarray:
    """Swap text and background."""
    return (1 - img).astype(np.uint8)
