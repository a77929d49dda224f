"""Brain-preserving MRI de-identification: Python front end to the C++ core."""

import json

from ._core import (
    DeidError,
    binarize,
    build_pyramid,
    convex_hull,
    deidentify,
    dice,
    generate_phantom,
    intersection_map,
    iou,
    otsu_threshold,
    privacy_transform,
    pyramid_level_count,
    read_gamma,
    read_volume,
    render_face,
    surface_representation,
    write_gamma,
    write_volume,
)
from . import _core

METHODS = ("original", "black", "skullstrip", "quickshear", "remodel")


def run_identification(subjects=100, trials=500, options=5, side=64, seed=0, methods=(), rotations=64):
    """Identification harness; returns the parsed JSON report."""
    return json.loads(
        _core.run_identification_json(subjects, trials, options, side, seed, list(methods), rotations)
    )


def run_segmentation(subjects=10, side=64, seed=0, methods=(), rotations=64):
    """Segmentation-impact harness; returns the parsed JSON report."""
    return json.loads(_core.run_segmentation_json(subjects, side, seed, list(methods), rotations))


__all__ = [
    "DeidError",
    "METHODS",
    "binarize",
    "build_pyramid",
    "convex_hull",
    "deidentify",
    "dice",
    "generate_phantom",
    "intersection_map",
    "iou",
    "otsu_threshold",
    "privacy_transform",
    "pyramid_level_count",
    "read_gamma",
    "read_volume",
    "render_face",
    "run_identification",
    "run_segmentation",
    "surface_representation",
    "write_gamma",
    "write_volume",
]
