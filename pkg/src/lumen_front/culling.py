"""Keypoint culling from quad-tree density and local lighting.

Each keypoint is scored from the quad-tree leaf that holds it:

    S = w1 * sigmoid(k * (D - D_opt)) + w2 * (1 - C_light)
    C_light = sigmoid(rho * (H_c - H_th))

with D the leaf's keypoints per pixel and H_c the intensity standard
deviation inside the leaf. Keypoints with ``S < s_min`` are dropped.
``invert_lighting_term`` swaps ``1 - C_light`` for ``C_light``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .detector import Keypoints
from .errors import ConfigError, KeypointOutOfBounds
from .image import GrayImage


@dataclass(frozen=True)
class CullConfig:
    max_per_leaf: int = 8
    max_depth: int = 6
    d_opt: float = 1e-3
    k: float = 2000.0
    rho: float = 0.15
    h_th: float = 20.0
    w1: float = 0.6
    w2: float = 0.4
    s_min: float = 0.3
    invert_lighting_term: bool = False

    def __post_init__(self):
        if self.w1 < 0 or self.w2 < 0 or abs(self.w1 + self.w2 - 1.0) > 1e-12:
            raise ConfigError(f"w1, w2 must be >= 0 and sum to 1, got {self.w1} + {self.w2}")
        if not 0.0 <= self.s_min <= 1.0:
            raise ConfigError(f"s_min must lie in [0, 1], got {self.s_min}")
        if self.max_depth < 1:
            raise ConfigError(f"max_depth must be >= 1, got {self.max_depth}")
        if self.max_per_leaf < 1:
            raise ConfigError(f"max_per_leaf must be >= 1, got {self.max_per_leaf}")
        if not self.d_opt > 0:
            raise ConfigError(f"d_opt must be > 0, got {self.d_opt}")


@dataclass(eq=False)
class QuadNode:
    x: int
    y: int
    w: int
    h: int
    depth: int
    children: list[QuadNode] = field(default_factory=list)
    indices: np.ndarray | None = None  # keypoint indices, leaves only

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def area(self) -> int:
        return self.w * self.h

    @property
    def rect(self) -> tuple[int, int, int, int]:
        return self.x, self.y, self.w, self.h


class QuadTree:
    """Quad-tree stored as flat node arrays (node 0 is the root).

    ``rects[i]`` is ``(x, y, w, h)``; ``first_child[i]`` is -1 for leaves,
    otherwise the id of the top-left child, followed by top-right,
    bottom-left and bottom-right. ``node_of[k]`` is the leaf holding point k.
    """

    def __init__(self, rects, depth, first_child, node_of):
        self.rects = rects
        self.depth = depth
        self.first_child = first_child
        self.node_of = node_of
        self._root = None

    @property
    def leaf_ids(self) -> np.ndarray:
        return np.nonzero(self.first_child < 0)[0]

    @property
    def counts(self) -> np.ndarray:
        """Points per node id (zero for internal nodes)."""
        return np.bincount(self.node_of, minlength=self.rects.shape[0])

    @property
    def root(self) -> QuadNode:
        if self._root is None:
            self._root = self._materialize(0)
        return self._root

    def _materialize(self, i: int) -> QuadNode:
        x, y, w, h = (int(v) for v in self.rects[i])
        node = QuadNode(x, y, w, h, int(self.depth[i]))
        c = self.first_child[i]
        if c < 0:
            node.indices = np.nonzero(self.node_of == i)[0]
        else:
            node.children = [self._materialize(int(c) + q) for q in range(4)]
        return node

    @property
    def leaves(self) -> list[QuadNode]:
        out = []
        stack = [self.root]
        while stack:
            n = stack.pop()
            if n.is_leaf:
                out.append(n)
            else:
                stack.extend(reversed(n.children))
        return out


def build_quadtree(points, bounds: tuple[int, int, int, int], cfg: CullConfig | None = None) -> QuadTree:
    """Split rectangles at their center until a leaf holds <= max_per_leaf points
    or sits at max_depth. Points on a split line go to the right/bottom child.
    Rectangles narrower or shorter than 2 px are not split.

    ``points`` is a Keypoints or an ``(n, 2)`` array of (x, y).
    """
    cfg = cfg or CullConfig()
    if isinstance(points, Keypoints):
        px, py = points.x, points.y
    else:
        pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
        px, py = pts[:, 0], pts[:, 1]
    bx, by, bw, bh = (int(v) for v in bounds)
    outside = (px < bx) | (px >= bx + bw) | (py < by) | (py >= by + bh)
    if np.any(outside):
        i = int(np.argmax(outside))
        raise KeypointOutOfBounds(f"keypoint {i} at ({px[i]}, {py[i]}) lies outside {bounds}")

    rects = [np.array([[bx, by, bw, bh]], dtype=np.int64)]
    depths = [np.zeros(1, dtype=np.int64)]
    first_child = [np.full(1, -1, dtype=np.int64)]
    node_of = np.zeros(px.shape[0], dtype=np.int64)
    frontier = np.zeros(1, dtype=np.int64)  # node ids created at the current depth
    n_nodes = 1
    for depth in range(cfg.max_depth):
        all_rects = np.concatenate(rects)
        counts = np.bincount(node_of, minlength=n_nodes)[frontier]
        fr = all_rects[frontier]
        split = frontier[(counts > cfg.max_per_leaf) & (fr[:, 2] >= 2) & (fr[:, 3] >= 2)]
        if split.size == 0:
            break
        r = all_rects[split]
        hw, hh = r[:, 2] // 2, r[:, 3] // 2
        kids = np.empty((split.size, 4, 4), dtype=np.int64)
        kids[:, 0] = np.stack([r[:, 0], r[:, 1], hw, hh], axis=1)
        kids[:, 1] = np.stack([r[:, 0] + hw, r[:, 1], r[:, 2] - hw, hh], axis=1)
        kids[:, 2] = np.stack([r[:, 0], r[:, 1] + hh, hw, r[:, 3] - hh], axis=1)
        kids[:, 3] = np.stack([r[:, 0] + hw, r[:, 1] + hh, r[:, 2] - hw, r[:, 3] - hh], axis=1)
        base = n_nodes + 4 * np.arange(split.size, dtype=np.int64)
        fc = np.concatenate(first_child)
        fc[split] = base
        first_child = [fc, np.full(4 * split.size, -1, dtype=np.int64)]
        rects.append(kids.reshape(-1, 4))
        depths.append(np.full(4 * split.size, depth + 1, dtype=np.int64))
        # Re-home points that sit in a node that just split.
        slot = np.full(n_nodes, -1, dtype=np.int64)
        slot[split] = np.arange(split.size)
        s = slot[node_of]
        moving = np.nonzero(s >= 0)[0]
        if moving.size:
            sm = s[moving]
            right = px[moving] >= r[sm, 0] + hw[sm]
            bottom = py[moving] >= r[sm, 1] + hh[sm]
            node_of[moving] = base[sm] + right.astype(np.int64) + 2 * bottom.astype(np.int64)
        frontier = np.arange(n_nodes, n_nodes + 4 * split.size, dtype=np.int64)
        n_nodes += 4 * split.size
    return QuadTree(np.concatenate(rects), np.concatenate(depths), np.concatenate(first_child), node_of)


def density(leaf: QuadNode) -> float:
    n = 0 if leaf.indices is None else int(leaf.indices.size)
    return n / leaf.area


def local_contrast(img: GrayImage, rect: tuple[int, int, int, int]) -> float:
    """Population standard deviation of the intensities inside ``rect`` (clipped to the image)."""
    x, y, w, h = rect
    patch = img.data[max(y, 0): y + h, max(x, 0): x + w]
    if patch.size == 0:
        raise ValueError(f"rectangle {rect} does not intersect the image")
    return float(patch.astype(np.float64).std())


@njit(cache=True, nogil=True)
def _rect_std(src, rects):
    h, w = src.shape
    out = np.empty(rects.shape[0], dtype=np.float64)
    for r in range(rects.shape[0]):
        x0 = max(rects[r, 0], 0)
        y0 = max(rects[r, 1], 0)
        x1 = min(rects[r, 0] + rects[r, 2], w)
        y1 = min(rects[r, 1] + rects[r, 3], h)
        s = 0
        sq = 0
        for y in range(y0, y1):
            for x in range(x0, x1):
                v = np.int64(src[y, x])
                s += v
                sq += v * v
        n = (x1 - x0) * (y1 - y0)
        # Exact integer numerator; n * sq - s^2 >= 0.
        out[r] = math.sqrt(float(n * sq - s * s)) / n
    return out


def sigmoid(z):
    z = np.asarray(z, dtype=np.float64)
    e = np.exp(-np.abs(z))
    out = np.where(z >= 0, 1.0 / (1.0 + e), e / (1.0 + e))
    return out if out.ndim else float(out)


def lighting_influence(h_c, cfg: CullConfig):
    return sigmoid(cfg.rho * (np.asarray(h_c, dtype=np.float64) - cfg.h_th))


def stability_score(d, c_light, cfg: CullConfig):
    c_light = np.asarray(c_light, dtype=np.float64)
    light = c_light if cfg.invert_lighting_term else 1.0 - c_light
    s = cfg.w1 * sigmoid(cfg.k * (np.asarray(d, dtype=np.float64) - cfg.d_opt)) + cfg.w2 * light
    return s if np.ndim(s) else float(s)


@dataclass(frozen=True)
class StabilityRecord:
    index: int
    leaf_area: int
    density: float
    h_c: float
    c_light: float
    score: float
    culled: bool


@dataclass(eq=False)
class CullReport:
    """Per-keypoint scoring columns, in input order."""

    leaf_area: np.ndarray
    density: np.ndarray
    h_c: np.ndarray
    c_light: np.ndarray
    score: np.ndarray
    culled: np.ndarray
    tree: QuadTree | None = None

    def __len__(self) -> int:
        return self.score.shape[0]

    def __getitem__(self, i: int) -> StabilityRecord:
        return StabilityRecord(
            int(i), int(self.leaf_area[i]), float(self.density[i]), float(self.h_c[i]),
            float(self.c_light[i]), float(self.score[i]), bool(self.culled[i]),
        )

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    @property
    def kept_indices(self) -> np.ndarray:
        return np.nonzero(~self.culled)[0]


def score_keypoints(kps: Keypoints, img: GrayImage, cfg: CullConfig | None = None) -> CullReport:
    cfg = cfg or CullConfig()
    tree = build_quadtree(kps, (0, 0, img.width, img.height), cfg)
    counts = tree.counts
    areas = tree.rects[:, 2] * tree.rects[:, 3]
    occupied = np.nonzero(counts > 0)[0]
    node_std = np.zeros(tree.rects.shape[0])
    if occupied.size:
        node_std[occupied] = _rect_std(img.data, np.ascontiguousarray(tree.rects[occupied]))
    node_density = counts / areas
    node_light = np.asarray(lighting_influence(node_std, cfg))
    node_score = np.asarray(stability_score(node_density, node_light, cfg))
    lo = tree.node_of
    score = node_score[lo]
    return CullReport(
        leaf_area=areas[lo],
        density=node_density[lo],
        h_c=node_std[lo],
        c_light=node_light[lo],
        score=score,
        culled=score < cfg.s_min,
        tree=tree,
    )


def cull(kps: Keypoints, img: GrayImage, cfg: CullConfig | None = None) -> tuple[Keypoints, CullReport]:
    """Drop keypoints whose stability score falls below ``s_min``; order is preserved."""
    report = score_keypoints(kps, img, cfg)
    return kps[report.kept_indices], report
