"""Oriented binary descriptors and brute-force Hamming matching."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from ._pattern import PATTERN
from .detector import Keypoint, Keypoints
from .errors import EmptySet, PatchOutOfBounds
from .image import GrayImage

PATCH_RADIUS = 15
N_ANGLE_BINS = 30
ANGLE_STEP = 2.0 * math.pi / N_ANGLE_BINS
N_BITS = 256
N_BYTES = N_BITS // 8

_PATTERN = np.array(PATTERN, dtype=np.float64)


def _rotated_patterns() -> np.ndarray:
    table = np.empty((N_ANGLE_BINS, N_BITS, 4), dtype=np.int64)
    for b in range(N_ANGLE_BINS):
        c, s = math.cos(b * ANGLE_STEP), math.sin(b * ANGLE_STEP)
        for j in (0, 2):
            x, y = _PATTERN[:, j], _PATTERN[:, j + 1]
            table[b, :, j] = np.rint(c * x - s * y)
            table[b, :, j + 1] = np.rint(s * x + c * y)
    return table


ROTATED = _rotated_patterns()
# Per-bin reach of the rotated pattern, for bounds checks.
REACH = np.abs(ROTATED).max(axis=(1, 2))

_circle = [(dx, dy) for dy in range(-PATCH_RADIUS, PATCH_RADIUS + 1)
           for dx in range(-PATCH_RADIUS, PATCH_RADIUS + 1)
           if dx * dx + dy * dy <= PATCH_RADIUS * PATCH_RADIUS]
PATCH_DX = np.array([c[0] for c in _circle], dtype=np.int64)
PATCH_DY = np.array([c[1] for c in _circle], dtype=np.int64)


@dataclass(frozen=True, eq=False)
class Descriptor256:
    bits: np.ndarray  # uint8[32], bit b at byte b // 8, position b % 8
    index: int = -1

    def __eq__(self, other):
        if not isinstance(other, Descriptor256):
            return NotImplemented
        return bool(np.array_equal(self.bits, other.bits))

    def __hash__(self):
        return hash(self.bits.tobytes())


@dataclass(frozen=True)
class Match:
    index_a: int
    index_b: int
    hamming_distance: int
    ratio: float


def angle_bin(angle: float) -> int:
    return int(math.floor(angle / ANGLE_STEP + 0.5)) % N_ANGLE_BINS


def _level_coords(kp: Keypoint, scale: float) -> tuple[int, int]:
    return int(math.floor(kp.x / scale + 0.5)), int(math.floor(kp.y / scale + 0.5))


# Half-width of the disc on each row dy = -15..15.
UMAX = np.array([math.isqrt(PATCH_RADIUS * PATCH_RADIUS - dy * dy) for dy in range(-PATCH_RADIUS, PATCH_RADIUS + 1)],
                dtype=np.int64)


@njit(cache=True, nogil=True)
def _orientation(src, x, y, umax, radius):
    # Integer moments m10 = sum dx * I, m01 = sum dy * I over the disc, row by row.
    h, w = src.shape
    if x < radius or y < radius or x >= w - radius or y >= h - radius:
        return 0.0
    m10 = 0
    m01 = 0
    for dy in range(-radius, radius + 1):
        u = umax[dy + radius]
        row_sum = 0
        row_m = 0
        for dx in range(-u, u + 1):
            v = np.int64(src[y + dy, x + dx])
            row_sum += v
            row_m += dx * v
        m10 += row_m
        m01 += dy * row_sum
    if m10 == 0 and m01 == 0:
        return 0.0
    return math.atan2(float(m01), float(m10))


def orientation(img: GrayImage, kp: Keypoint, scale: float = 1.0) -> float:
    """Intensity-centroid angle over the radius-15 disc; 0 when the disc does not fit.

    ``img`` is the keypoint's octave image and ``scale`` maps level-0
    coordinates onto it.
    """
    x, y = _level_coords(kp, scale)
    return float(_orientation(img.data, x, y, UMAX, PATCH_RADIUS))


@njit(cache=True, nogil=True)
def _describe_into(src, x, y, pattern, out):
    for b in range(pattern.shape[0]):
        p1 = src[y + pattern[b, 1], x + pattern[b, 0]]
        p2 = src[y + pattern[b, 3], x + pattern[b, 2]]
        if p1 < p2:
            out[b >> 3] |= np.uint8(1 << (b & 7))


def _patch_fits(shape, x: int, y: int, reach: int) -> bool:
    h, w = shape
    return reach <= x < w - reach and reach <= y < h - reach


def describe(img: GrayImage, kp: Keypoint, scale: float = 1.0, index: int = -1) -> Descriptor256:
    """Steered binary test string for one keypoint.

    Uses ``kp.angle`` when set, otherwise computes the orientation first.
    Raises PatchOutOfBounds when the rotated pattern leaves the image.
    """
    angle = kp.angle if not math.isnan(kp.angle) else orientation(img, kp, scale)
    x, y = _level_coords(kp, scale)
    b = angle_bin(angle)
    if not _patch_fits(img.shape, x, y, int(REACH[b])):
        raise PatchOutOfBounds(f"keypoint at ({kp.x:.1f}, {kp.y:.1f}) octave {kp.octave}: pattern leaves the image")
    out = np.zeros(N_BYTES, dtype=np.uint8)
    _describe_into(img.data, x, y, ROTATED[b], out)
    return Descriptor256(out, index)


@njit(cache=True, nogil=True)
def _describe_level(src, xs, ys, idx, umax, rotated, reach, angles, desc, valid):
    h, w = src.shape
    flat = src.ravel()
    nb = rotated.shape[0]
    nbits = rotated.shape[1]
    # Pattern offsets in the flattened image, per angle bin.
    off1 = np.empty((nb, nbits), dtype=np.int64)
    off2 = np.empty((nb, nbits), dtype=np.int64)
    for b in range(nb):
        for j in range(nbits):
            off1[b, j] = rotated[b, j, 1] * w + rotated[b, j, 0]
            off2[b, j] = rotated[b, j, 3] * w + rotated[b, j, 2]
    for k in range(idx.shape[0]):
        i = idx[k]
        x = xs[k]
        y = ys[k]
        a = _orientation(src, x, y, umax, 15)
        angles[i] = a
        b = int(math.floor(a / (2.0 * math.pi / 30.0) + 0.5)) % 30
        r = reach[b]
        if x < r or y < r or x >= w - r or y >= h - r:
            continue
        valid[i] = True
        base = y * w + x
        for byte in range(nbits >> 3):
            acc = 0
            for bit in range(8):
                j = (byte << 3) + bit
                if flat[base + off1[b, j]] < flat[base + off2[b, j]]:
                    acc |= 1 << bit
            desc[i, byte] = acc


def compute_descriptors(pyramid: list[GrayImage], kps: Keypoints, scale_factor: float):
    """Orientation and descriptor for every keypoint.

    Returns ``(keypoints_with_angles, descriptors uint8[n, 32], valid bool[n])``.
    Keypoints whose pattern leaves the image keep an all-zero descriptor and
    ``valid = False``.
    """
    n = len(kps)
    angles = np.zeros(n, dtype=np.float64)
    desc = np.zeros((n, N_BYTES), dtype=np.uint8)
    valid = np.zeros(n, dtype=bool)
    for lvl, level in enumerate(pyramid):
        idx = np.nonzero(kps.octave == lvl)[0]
        if idx.size == 0:
            continue
        scale = scale_factor**lvl
        xs = np.floor(kps.x[idx] / scale + 0.5).astype(np.int64)
        ys = np.floor(kps.y[idx] / scale + 0.5).astype(np.int64)
        _describe_level(level.data, xs, ys, idx, UMAX, ROTATED, REACH, angles, desc, valid)
    return kps.with_angles(angles), desc, valid


def _as_matrix(descs) -> np.ndarray:
    if isinstance(descs, np.ndarray):
        arr = descs
    else:
        descs = list(descs)
        arr = np.stack([d.bits for d in descs]) if descs else np.zeros((0, N_BYTES), np.uint8)
    arr = np.ascontiguousarray(arr, dtype=np.uint8)
    if arr.ndim != 2 or arr.shape[1] != N_BYTES:
        raise ValueError(f"descriptors must have shape (n, {N_BYTES}), got {arr.shape}")
    return arr


@njit(cache=True, nogil=True)
def _popcount64(v):
    v = v - ((v >> np.uint64(1)) & np.uint64(0x5555555555555555))
    v = (v & np.uint64(0x3333333333333333)) + ((v >> np.uint64(2)) & np.uint64(0x3333333333333333))
    v = (v + (v >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return int((v * np.uint64(0x0101010101010101)) >> np.uint64(56))


@njit(cache=True, nogil=True)
def _distance_matrix(a, b):
    na = a.shape[0]
    nb = b.shape[0]
    out = np.empty((na, nb), dtype=np.int32)
    for i in range(na):
        for j in range(nb):
            d = 0
            for k in range(a.shape[1]):
                d += _popcount64(a[i, k] ^ b[j, k])
            out[i, j] = d
    return out


def hamming(a, b) -> int:
    a = a.bits if isinstance(a, Descriptor256) else np.asarray(a, dtype=np.uint8)
    b = b.bits if isinstance(b, Descriptor256) else np.asarray(b, dtype=np.uint8)
    return int(np.unpackbits(np.bitwise_xor(a, b)).sum())


def distance_matrix(set_a, set_b) -> np.ndarray:
    a = _as_matrix(set_a).view(np.uint64)
    b = _as_matrix(set_b).view(np.uint64)
    return _distance_matrix(a, b)


def match(set_a, set_b, ratio_threshold: float = 0.8) -> list[Match]:
    """Mutual nearest neighbours that also pass the best/second-best ratio test.

    Distance ties resolve to the lower index. The ratio is 0 when ``set_b``
    has a single entry and 1 when the two best distances are both 0.
    """
    a = _as_matrix(set_a)
    b = _as_matrix(set_b)
    if a.shape[0] == 0 or b.shape[0] == 0:
        raise EmptySet("both descriptor sets must be non-empty")
    dist = distance_matrix(a, b)
    best_b = np.argmin(dist, axis=1)  # argmin returns the first (lowest) index on ties
    best_a = np.argmin(dist, axis=0)
    rows = np.arange(a.shape[0])
    d1 = dist[rows, best_b]
    if b.shape[0] > 1:
        d2 = np.partition(dist, 1, axis=1)[:, 1]
    else:
        d2 = np.full(a.shape[0], -1)
    out = []
    for i in range(a.shape[0]):
        j = int(best_b[i])
        if best_a[j] != i:
            continue
        if d2[i] < 0:
            ratio = 0.0
        elif d2[i] == 0:
            ratio = 1.0
        else:
            ratio = float(d1[i]) / float(d2[i])
        if ratio < ratio_threshold:
            out.append(Match(i, j, int(d1[i]), ratio))
    return out
