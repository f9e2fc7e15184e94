"""Shared fixture builders for the unit and acceptance tests."""

import numpy as np

from lumen_front import synthetic
from lumen_front.detector import Keypoints
from lumen_front.image import GrayImage


def kps_from(points):
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    return Keypoints(pts[:, 0], pts[:, 1], np.zeros(len(pts), int), np.ones(len(pts)))


def oracle_leaves(points, rect, cap, max_depth, depth=0):
    """Recursive center split; returns [(rect, depth, point indices)]."""
    x, y, w, h = rect
    idx = [i for i, (px, py) in enumerate(points) if x <= px < x + w and y <= py < y + h]
    if len(idx) <= cap or depth == max_depth or w < 2 or h < 2:
        return [(rect, depth, idx)]
    hw, hh = w // 2, h // 2
    out = []
    for r in ((x, y, hw, hh), (x + hw, y, w - hw, hh), (x, y + hh, hw, h - hh), (x + hw, y + hh, w - hw, h - hh)):
        sub = oracle_leaves([points[i] for i in idx], r, cap, max_depth, depth + 1)
        out += [(rr, d, [idx[j] for j in ii]) for rr, d, ii in sub]
    return out


def mixed_fixture():
    """Textured left half, flat right half; a dense cluster plus isolated points."""
    rng = np.random.default_rng(11)
    img = np.full((160, 240), 120, np.uint8)
    img[:, :120] = rng.integers(40, 220, (160, 120))
    pts = [(10 + rng.uniform(0, 25), 10 + rng.uniform(0, 25)) for _ in range(60)]  # dense, textured
    pts += [(15 + 30 * i, 120 + (i % 2) * 20) for i in range(4)]  # sparse, textured
    pts += [(140 + 25 * i, 30 + 30 * (i % 4)) for i in range(4)]  # sparse, flat
    return GrayImage(img), kps_from(pts)


def composite_fixture(exposure=0.25, seed=6, cell=40, rows=6, cols=4):
    """One textured patch tiled over a bright half and a reduced-exposure dark half.

    Every cell holds the same pattern; the right half is the left half scaled
    by ``exposure``. Returns the image and the number of cell columns per half.
    """
    patch = synthetic.textured_frame(cell, cell, seed=seed).data.astype(np.float64)
    bright = np.tile(patch, (rows, cols))
    dark = np.floor(bright * exposure + 0.5)
    return GrayImage(np.hstack([bright, dark]).astype(np.uint8)), cols
