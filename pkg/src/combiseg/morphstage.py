"""Morphological stage turning a binarized block into line-candidate components."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .imgcore import StructuringElement, add, dilate, invert, opening, subtract


@dataclass(frozen=True)
class Params:
    """The ordered tuning knobs of the segmenter, lengths in pixels.

    p1  preprocessing element height/width (rule and border removal)
    p2  first (text) dilation width, gluing characters into lines
    p3  background protection element height
    p4  background separator width
    p5  second (background) dilation width, reinforcing separators
    p6  minimum text line height
    p7  relative peak height threshold, strictly between 0 and 1
    p8  postprocessing height adjustment
    """

    p1: int
    p2: int
    p3: int
    p4: int
    p5: int
    p6: int
    p7: float
    p8: int

    def __post_init__(self):
        for name in ("p1", "p2", "p3", "p4", "p5", "p6", "p8"):
            v = getattr(self, name)
            if v != int(v) or int(v) < (0 if name == "p8" else 1):
                bound = "a non-negative" if name == "p8" else "a positive"
                raise ValueError(f"{name} must be {bound} integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        if not 0 < self.p7 < 1:
            raise ValueError(f"p7 must lie strictly between 0 and 1, got {self.p7!r}")
        object.__setattr__(self, "p7", float(self.p7))

    def scale(self, factor: float) -> "Params":
        """Rescale all pixel lengths by ``factor``; the ratio p7 is kept."""
        if factor <= 0:
            raise ValueError(f"scale factor must be positive, got {factor!r}")

        def px(v: int, lowest: int = 1) -> int:
            return max(lowest, round(v * factor))

        return Params(px(self.p1), px(self.p2), px(self.p3), px(self.p4),
                      px(self.p5), px(self.p6), self.p7, px(self.p8, lowest=0))


DEFAULT_PARAMS = Params(100, 90, 25, 35, 330, 14, 0.3, 5)


def preprocess(ib: np.ndarray, p1: int) -> np.ndarray:
    """Remove straight rules and border lines at least ``p1`` pixels long.

    Tall and wide openings isolate everything with a vertical or horizontal
    run of ``p1`` or more; subtracting them keeps only features that are
    shorter than ``p1`` in both directions, which is what typed text looks
    like while cropping borders and article separators do not.
    """
    tall = opening(ib, StructuringElement(1, p1))
    wide = opening(ib, StructuringElement(p1, 1))
    return subtract(ib, add(tall, wide))


def morph(ib: np.ndarray, params: Params) -> np.ndarray:
    """Produce the processed image whose components are candidate text lines.

    After rule removal the text is dilated horizontally (p2) so characters of
    one line fuse, and the image is inverted. Thin horizontal background gaps
    are then isolated by subtracting a protective vertical opening (p3),
    confirmed as separators by a horizontal opening (p4) and widened by a
    horizontal dilation (p5). Adding the separators before inverting back
    cuts bridges between neighbouring lines that the text dilation or noise
    may have created. Output dimensions equal input dimensions.
    """
    ip = invert(dilate(preprocess(ib, params.p1), StructuringElement(params.p2, 1)))
    shielded = subtract(ip, opening(ip, StructuringElement(1, params.p3)))
    separators = dilate(opening(shielded, StructuringElement(params.p4, 1)),
                        StructuringElement(params.p5, 1))
    return invert(add(ip, separators))
