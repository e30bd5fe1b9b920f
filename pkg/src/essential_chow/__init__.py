"""Chow form of the essential variety via Pfaffians of 20x20 skew matrices,
and a detector for six-point calibrated two-view consistency."""

from .chow import ChowMatrix, chow_matrix_symmetric, load_chow_matrix, pullback_to_essential
from .detector import DetectionReport, build_Z, detect, dual_pluecker, fivepoint_vanishing_check
from .pieri import FreeResolution, build_pieri_map, build_resolution, verify_support, verify_ulrich

__all__ = [
    "ChowMatrix",
    "DetectionReport",
    "FreeResolution",
    "build_Z",
    "build_pieri_map",
    "build_resolution",
    "chow_matrix_symmetric",
    "detect",
    "dual_pluecker",
    "fivepoint_vanishing_check",
    "load_chow_matrix",
    "pullback_to_essential",
    "verify_support",
    "verify_ulrich",
]
