"""Sketch animation engine: trackers, effects and overlays over video frames."""

from ._scribble import (
    Engine,
    FrameOverlay,
    Scene,
    ScribbleError,
    bench,
    extract_outer_contour,
    largest_component_centroid,
    render,
    sample_color_window,
    segment_by_window,
    simplify_polyline,
    synthetic_body_mask,
    synthetic_frame,
    synthetic_pose,
    teaser_scene,
    write_clip,
)

__all__ = [
    "Engine",
    "FrameOverlay",
    "Scene",
    "ScribbleError",
    "bench",
    "extract_outer_contour",
    "largest_component_centroid",
    "render",
    "sample_color_window",
    "segment_by_window",
    "simplify_polyline",
    "synthetic_body_mask",
    "synthetic_frame",
    "synthetic_pose",
    "teaser_scene",
    "write_clip",
]
