"""Image loading, Otsu binarization and overlay rendering."""
from __future__ import annotations

import numpy as np
from PIL import Image, ImageDraw


def load_gray(path) -> np.ndarray:
    """Read an image file as an 8-bit grayscale array (RGB reduced to luma).

    Raises FileNotFoundError for a missing file and
    PIL.UnidentifiedImageError for unreadable or unsupported data.
    """
    with Image.open(path) as im:
        return np.asarray(im.convert("L"))


def save_binary(img, path) -> None:
    """Write a 0/1 image as an 8-bit PNG with text rendered white (255)."""
    Image.fromarray(np.asarray(img, dtype=np.uint8) * 255).save(path)


def otsu_threshold(gray) -> int | None:
    """Threshold maximizing the between-class variance of the 0..255 histogram.

    Returns the lowest maximizing value; ties are resolved in exact integer
    arithmetic so results are identical on every platform. A constant image
    has no two-class split and yields None.
    """
    hist = np.bincount(np.asarray(gray).ravel(), minlength=256)
    if np.count_nonzero(hist) < 2:
        return None
    total = int(hist.sum())
    grand = int(np.dot(hist, np.arange(256)))
    best_t = None
    best_num, best_den = 0, 1  # best variance kept as an exact fraction
    n0 = 0
    s0 = 0
    for t in range(256):
        n0 += int(hist[t])
        s0 += t * int(hist[t])
        n1 = total - n0
        if n0 == 0 or n1 == 0:
            continue
        num = (s0 * total - n0 * grand) ** 2
        den = n0 * n1
        if num * best_den > best_num * den:
            best_num, best_den, best_t = num, den, t
    return best_t


def otsu_binarize(gray, text_is_dark: bool = True) -> np.ndarray:
    """Threshold ``gray`` into a 0/1 text mask.

    The text class is the dark side of the threshold by default (printed
    text); pass ``text_is_dark=False`` for light-on-dark sources. A constant
    image maps to all background. Images that are already binary (only 0 and
    255) pass through unchanged in effect.
    """
    gray = np.asarray(gray)
    t = otsu_threshold(gray)
    if t is None:
        return np.zeros(gray.shape, np.uint8)
    if text_is_dark:
        return (gray <= t).astype(np.uint8)
    return (gray > t).astype(np.uint8)


def render_overlay(gray, boxes, path, color=(255, 0, 0)) -> None:
    """Write a color copy of ``gray`` with a one-pixel outline per box."""
    im = Image.fromarray(np.asarray(gray, dtype=np.uint8)).convert("RGB")
    draw = ImageDraw.Draw(im)
    for b in boxes:
        draw.rectangle((b[0], b[1], b[2], b[3]), outline=color, width=1)
    im.save(path)
