"""Grayscale raster type and the pixel primitives shared by every stage.

Rasters are numpy arrays indexed ``[y, x]``. ``GrayImage`` wraps an 8-bit
array and freezes it; signed/real intermediates (gradients, unsharp masks)
are plain ``float64`` arrays.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numba import njit
from PIL import Image, UnidentifiedImageError

from .errors import EmptyHistogram, EvenKernel, ImageError, UnreadableImage

MIN_SIDE = 8

SOBEL_X = np.array([[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]])
SOBEL_Y = SOBEL_X.T.copy()


class BorderPolicy(enum.Enum):
    # Only replicate is supported; the enum leaves room for more.
    REPLICATE = "replicate"


@dataclass(frozen=True, eq=False)
class GrayImage:
    """Immutable 8-bit single-channel image."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data)
        if arr.ndim != 2:
            raise ImageError(f"expected a 2-D raster, got shape {arr.shape}")
        h, w = arr.shape
        if w < MIN_SIDE or h < MIN_SIDE:
            raise ImageError(f"image must be at least {MIN_SIDE}x{MIN_SIDE}, got {w}x{h}")
        if arr.dtype != np.uint8:
            if arr.size and (arr.min() < 0 or arr.max() > 255):
                raise ImageError("intensities must lie in [0, 255]")
            if np.issubdtype(arr.dtype, np.floating) and not np.all(arr == np.floor(arr)):
                raise ImageError("float input must hold integral intensities; use quantize()")
        if arr.dtype != np.uint8 or arr.flags.writeable or not arr.flags.c_contiguous:
            arr = np.array(arr, dtype=np.uint8, order="C")
        arr.flags.writeable = False
        object.__setattr__(self, "data", arr)

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.data.shape == other.data.shape and bool(np.array_equal(self.data, other.data))

    def __hash__(self):
        return hash((self.data.shape, self.data.tobytes()))

    def invert(self) -> GrayImage:
        return GrayImage(255 - self.data)


def round_half_up(values) -> np.ndarray:
    return np.floor(np.asarray(values, dtype=np.float64) + 0.5)


def quantize(values) -> GrayImage:
    """Clamp real values to [0, 255] and round half-up into a GrayImage."""
    v = np.clip(np.asarray(values, dtype=np.float64), 0.0, 255.0)
    return GrayImage(round_half_up(v).astype(np.uint8))


def _as_array(img) -> np.ndarray:
    return img.data if isinstance(img, GrayImage) else np.asarray(img)


@njit(cache=True, nogil=True)
def _histogram(src):
    hist = np.zeros(256, dtype=np.int64)
    for v in src.ravel():
        hist[v] += 1
    return hist


def histogram(img: GrayImage) -> np.ndarray:
    """256-bin intensity histogram (counts, int64)."""
    return _histogram(np.ascontiguousarray(_as_array(img), dtype=np.uint8))


def normalize_histogram(hist) -> np.ndarray:
    hist = np.asarray(hist, dtype=np.float64)
    total = hist.sum()
    if total <= 0:
        raise EmptyHistogram("histogram has no mass")
    return hist / total


@njit(cache=True, nogil=True)
def _correlate_replicate(src, kernel):
    h, w = src.shape
    kh, kw = kernel.shape
    ry = kh // 2
    rx = kw // 2
    out = np.empty((h, w), dtype=np.float64)
    for y in range(h):
        for x in range(w):
            acc = 0.0
            for j in range(kh):
                yy = min(max(y + j - ry, 0), h - 1)
                for i in range(kw):
                    xx = min(max(x + i - rx, 0), w - 1)
                    acc += kernel[j, i] * src[yy, xx]
            out[y, x] = acc
    return out


def convolve(img, kernel, border: BorderPolicy = BorderPolicy.REPLICATE) -> np.ndarray:
    """2-D correlation (no kernel flip) with replicated borders.

    Accepts a GrayImage or any real 2-D array and returns float64; the caller
    decides how to quantize.
    """
    if border is not BorderPolicy.REPLICATE:
        raise ValueError(f"unsupported border policy {border!r}")
    kernel = np.asarray(kernel, dtype=np.float64)
    if kernel.ndim != 2 or kernel.shape[0] % 2 == 0 or kernel.shape[1] % 2 == 0:
        raise EvenKernel(f"kernel dimensions must be odd, got {kernel.shape}")
    src = np.ascontiguousarray(_as_array(img), dtype=np.float64)
    return _correlate_replicate(src, np.ascontiguousarray(kernel))


@njit(cache=True, nogil=True)
def _sobel(src):
    h, w = src.shape
    gx = np.empty((h, w), dtype=np.float64)
    gy = np.empty((h, w), dtype=np.float64)
    for y in range(h):
        y0 = max(y - 1, 0)
        y1 = min(y + 1, h - 1)
        for x in range(w):
            x0 = max(x - 1, 0)
            x1 = min(x + 1, w - 1)
            a = float(src[y0, x0])
            b = float(src[y0, x])
            c = float(src[y0, x1])
            d = float(src[y, x0])
            f = float(src[y, x1])
            g = float(src[y1, x0])
            k = float(src[y1, x])
            m = float(src[y1, x1])
            gx[y, x] = (c + 2.0 * f + m) - (a + 2.0 * d + g)
            gy[y, x] = (g + 2.0 * k + m) - (a + 2.0 * b + c)
    return gx, gy


def sobel_gradients(img: GrayImage) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(I_x, I_y)`` from the 3x3 Sobel pair with replicated borders."""
    return _sobel(np.ascontiguousarray(_as_array(img)))


def luma(rgb: np.ndarray) -> np.ndarray:
    rgb = rgb.astype(np.float64)
    y = 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]
    return np.clip(round_half_up(y), 0, 255).astype(np.uint8)


def read_image(path) -> GrayImage:
    """Load a PNG or binary PGM as grayscale; color input is reduced to luma."""
    path = Path(path)
    try:
        with Image.open(path) as im:
            im.load()
            mode = im.mode
            if mode == "L":
                arr = np.array(im)
            elif mode in ("I;16", "I;16B", "I"):
                raise UnreadableImage(f"{path}: {mode} images are not 8-bit")
            else:
                if mode not in ("RGB", "RGBA"):
                    im = im.convert("RGBA" if "A" in mode else "RGB")
                arr = luma(np.array(im)[..., :3])
    except (OSError, UnidentifiedImageError) as exc:
        if isinstance(exc, UnreadableImage):
            raise
        raise UnreadableImage(f"{path}: {exc}") from exc
    try:
        return GrayImage(arr)
    except ImageError as exc:
        raise UnreadableImage(f"{path}: {exc}") from exc


def write_image(path, img) -> None:
    """Write a GrayImage as PNG or PGM (P5), chosen by file suffix."""
    path = Path(path)
    arr = _as_array(img)
    if path.suffix.lower() == ".pgm":
        h, w = arr.shape
        with open(path, "wb") as fh:
            fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
            fh.write(np.ascontiguousarray(arr, dtype=np.uint8).tobytes())
    else:
        Image.fromarray(np.ascontiguousarray(arr, dtype=np.uint8)).save(path)
