"""Illumination-robust FAST front-end for visual SLAM.

Image enhancement, adaptive per-region FAST thresholds, density/lighting
based keypoint culling, oriented binary descriptors, and the drivers that
tie them into a per-frame pipeline.
"""

from .config import PipelineConfig
from .image import GrayImage, read_image, write_image
from .pipeline import FrameResult, match_frames, run_frame, sweep

__version__ = "0.1.0"

__all__ = [
    "GrayImage",
    "PipelineConfig",
    "FrameResult",
    "read_image",
    "write_image",
    "run_frame",
    "sweep",
    "match_frames",
]
