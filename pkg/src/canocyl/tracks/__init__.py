"""Tracks in the Van Kampen complex of a triangular presentation and the induced graph of groups."""

from .assembly import classify_image, prune, select_generators
from .complex import build_complex, build_tracks, mark_edges
from .presentation import (
    GroupAction,
    TriangularPresentation,
    h1_mod2,
    parse_action,
    parse_presentation,
    trivial_action,
)
from .report import blue_triviality_check, displacement_report, run_tracks, tracks_lines

__all__ = [
    "GroupAction",
    "TriangularPresentation",
    "blue_triviality_check",
    "build_complex",
    "build_tracks",
    "classify_image",
    "displacement_report",
    "h1_mod2",
    "mark_edges",
    "parse_action",
    "parse_presentation",
    "prune",
    "run_tracks",
    "select_generators",
    "tracks_lines",
    "trivial_action",
]
