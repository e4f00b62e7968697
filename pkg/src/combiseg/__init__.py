"""Fast text line segmentation for binarized single-column text blocks."""

from .components import BBox, comp, label_components
from .evaluation import (DEFAULT_THETA, EvalReport, GroundTruthSample,
                         ManifestError, SweepResult, accuracy, evaluate_pairs,
                         load_manifest, loss, matched, measure_pt,
                         scaled_params, sweep)
from .histogram import (NOISE_FLOOR, analysis, bounds, global_projection,
                        hist, split, subproj, valleys)
from .imgcore import (StructuringElement, add, binary_image, dilate, erode,
                      invert, opening, subtract)
from .imgio import (load_gray, otsu_binarize, otsu_threshold, render_overlay,
                    save_binary)
from .morphstage import DEFAULT_PARAMS, Params, morph, preprocess
from .pipeline import SegmentationResult, adjust, combiseg, overlap_merge
from .synthetic import generate_block

__version__ = "0.1.0"

__all__ = [
    "BBox", "DEFAULT_PARAMS", "DEFAULT_THETA", "EvalReport",
    "GroundTruthSample", "ManifestError", "NOISE_FLOOR", "Params",
    "SegmentationResult", "StructuringElement", "SweepResult", "accuracy",
    "add", "adjust", "analysis", "binary_image", "bounds", "comp", "combiseg",
    "dilate", "erode", "evaluate_pairs", "generate_block",
    "global_projection", "hist", "invert", "label_components", "load_gray",
    "load_manifest", "loss", "matched", "measure_pt", "morph", "opening",
    "otsu_binarize", "otsu_threshold", "overlap_merge", "preprocess",
    "render_overlay", "save_binary", "scaled_params", "split", "subproj",
    "subtract", "sweep", "valleys",
]
