"""Illumination-adaptive enhancement: Gaussian smoothing, weighted-distribution
adaptive gamma correction (AGCWD), unsharp masking, and their blend.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import BadSigma, ConfigError, DimensionMismatch, EvenKernel
from .image import GrayImage, histogram, normalize_histogram


@dataclass(frozen=True)
class EnhancementConfig:
    sigma: float = 1.0
    kernel_size: int = 5
    lambda_: float = 0.5  # smoothness exponent of the weighted distribution
    tau: float = 0.2  # lower bound on the per-level gamma
    mu_expected: float = 110.0
    t_bright: float = 0.35
    t_dim: float = -0.35
    epsilon: float = 0.8  # weight of the gamma-corrected detail
    eta: float = 0.6  # weight of the unsharp mask

    def __post_init__(self):
        if not self.sigma > 0:
            raise ConfigError(f"sigma must be > 0, got {self.sigma}")
        if self.kernel_size < 3 or self.kernel_size % 2 == 0:
            raise ConfigError(f"kernel_size must be odd and >= 3, got {self.kernel_size}")
        if not self.lambda_ > 0:
            raise ConfigError(f"lambda must be > 0, got {self.lambda_}")
        if not 0 < self.tau <= 1:
            raise ConfigError(f"tau must lie in (0, 1], got {self.tau}")
        if not 0 < self.mu_expected < 255:
            raise ConfigError(f"mu_expected must lie in (0, 255), got {self.mu_expected}")
        if self.epsilon < 0 or self.eta < 0:
            raise ConfigError("epsilon and eta must be >= 0")
        if not self.t_dim < 0 < self.t_bright:
            raise ConfigError("need t_dim < 0 < t_bright")


class Brightness(enum.Enum):
    DIM = "dim"
    NORMAL = "normal"
    BRIGHT = "bright"


@dataclass(frozen=True)
class BrightnessClass:
    label: Brightness
    deviation: float
    mean: float


@dataclass(frozen=True, eq=False)
class GammaLUT:
    gamma: np.ndarray  # per-level exponent, float64[256]
    map: np.ndarray  # per-level output intensity, uint8[256]


@dataclass(frozen=True, eq=False)
class EnhancedFrame:
    output: GrayImage
    blurred: GrayImage
    gamma_corrected: GrayImage
    brightness: BrightnessClass
    source: GrayImage

    @property
    def mask(self) -> np.ndarray:
        """Signed unsharp mask ``I - I_blurred`` (computed on access)."""
        return unsharp_mask(self.source, self.blurred)


def gaussian_kernel(sigma: float, size: int) -> np.ndarray:
    """Sampled isotropic Gaussian on a ``size x size`` grid, weights summing to 1."""
    if not sigma > 0:
        raise BadSigma(f"sigma must be > 0, got {sigma}")
    if size < 1 or size % 2 == 0:
        raise EvenKernel(f"kernel size must be odd, got {size}")
    r = size // 2
    off = np.arange(-r, r + 1, dtype=np.float64)
    xx, yy = np.meshgrid(off, off)
    k = np.exp(-(xx**2 + yy**2) / (2.0 * sigma**2)) / (2.0 * math.pi * sigma**2)
    return k / k.sum()


def _gaussian_taps(sigma: float, size: int) -> np.ndarray:
    # 1-D factor of gaussian_kernel: outer(taps, taps) equals it up to rounding.
    if not sigma > 0:
        raise BadSigma(f"sigma must be > 0, got {sigma}")
    if size < 1 or size % 2 == 0:
        raise EvenKernel(f"kernel size must be odd, got {size}")
    r = size // 2
    off = np.arange(-r, r + 1, dtype=np.float64)
    g = np.exp(-(off**2) / (2.0 * sigma**2))
    return g / g.sum()


@njit(cache=True, nogil=True)
def _separable_blur(src, taps):
    h, w = src.shape
    n = taps.shape[0]
    r = n // 2
    tmp = np.empty((h, w), dtype=np.float64)
    row = np.empty(w + 2 * r, dtype=np.float64)
    for y in range(h):
        for x in range(w):
            row[x + r] = src[y, x]
        for i in range(r):
            row[i] = src[y, 0]
            row[w + r + i] = src[y, w - 1]
        for x in range(w):
            acc = 0.0
            for i in range(n):
                acc += taps[i] * row[x + i]
            tmp[y, x] = acc
    out = np.empty((h, w), dtype=np.uint8)
    acc_row = np.empty(w, dtype=np.float64)
    for y in range(h):
        for x in range(w):
            acc_row[x] = 0.0
        for i in range(n):
            yy = min(max(y + i - r, 0), h - 1)
            t = taps[i]
            for x in range(w):
                acc_row[x] += t * tmp[yy, x]
        for x in range(w):
            v = math.floor(acc_row[x] + 0.5)
            if v < 0.0:
                v = 0.0
            elif v > 255.0:
                v = 255.0
            out[y, x] = np.uint8(v)
    return out


def gaussian_blur(img: GrayImage, cfg: EnhancementConfig) -> GrayImage:
    """Smooth with the configured Gaussian (replicated borders), rounded half-up to 8 bits."""
    taps = _gaussian_taps(cfg.sigma, cfg.kernel_size)
    return GrayImage(_separable_blur(img.data, taps))


def classify_brightness(img: GrayImage, cfg: EnhancementConfig) -> BrightnessClass:
    mu = float(histogram(img) @ np.arange(256)) / (img.width * img.height)
    t = (mu - cfg.mu_expected) / cfg.mu_expected
    if t > cfg.t_bright:
        label = Brightness.BRIGHT
    elif t < cfg.t_dim:
        label = Brightness.DIM
    else:
        label = Brightness.NORMAL
    return BrightnessClass(label, t, mu)


def agcwd_lut(p, cfg: EnhancementConfig) -> GammaLUT:
    """Build the per-level gamma table from an intensity distribution.

    The distribution is reshaped by ``P_max * ((P - P_min) / (P_max - P_min)) ** lambda``
    (min and max over all 256 levels), accumulated into a CDF ``C_w``, and each
    level gets exponent ``max(tau, 1 - C_w)``. A flat distribution (``P_max == P_min``)
    skips the reshaping.
    """
    p = np.asarray(p, dtype=np.float64)
    p_max = p.max()
    p_min = p.min()
    if p_max == p_min:
        pw = p.copy()
    else:
        pw = p_max * ((p - p_min) / (p_max - p_min)) ** cfg.lambda_
    cw = np.cumsum(pw) / pw.sum()
    gamma = np.maximum(cfg.tau, 1.0 - cw)
    levels = np.arange(256, dtype=np.float64) / 255.0
    mapped = np.floor(255.0 * levels**gamma + 0.5)
    return GammaLUT(gamma=gamma, map=np.clip(mapped, 0, 255).astype(np.uint8))


def apply_gamma(img: GrayImage, lut: GammaLUT) -> GrayImage:
    return GrayImage(lut.map[img.data])


def unsharp_mask(img: GrayImage, blurred: GrayImage) -> np.ndarray:
    if img.shape != blurred.shape:
        raise DimensionMismatch(f"{img.shape} vs {blurred.shape}")
    return img.data.astype(np.float64) - blurred.data.astype(np.float64)


def gamma_correct(img: GrayImage, cfg: EnhancementConfig) -> GrayImage:
    lut = agcwd_lut(normalize_histogram(histogram(img)), cfg)
    return apply_gamma(img, lut)


def dim_and_correct(img: GrayImage, cfg: EnhancementConfig) -> GrayImage:
    """Bright-image path: correct the inverted image, then invert back."""
    return gamma_correct(img.invert(), cfg).invert()


@njit(cache=True, nogil=True)
def _compose(raw, blurred, lut, inverted, eps, eta):
    # I_gamma = lut[b] (or 255 - lut[255 - b] on the dimming path), then
    # I' = b + eps * (I_gamma - b) + eta * (I - b), clamped and rounded half-up.
    h, w = raw.shape
    gamma = np.empty((h, w), dtype=np.uint8)
    out = np.empty((h, w), dtype=np.uint8)
    for y in range(h):
        for x in range(w):
            bv = blurred[y, x]
            if inverted:
                g = 255 - lut[255 - bv]
            else:
                g = lut[bv]
            gamma[y, x] = g
            b = float(bv)
            v = b + eps * (float(g) - b) + eta * (float(raw[y, x]) - b)
            if v < 0.0:
                v = 0.0
            elif v > 255.0:
                v = 255.0
            out[y, x] = np.uint8(math.floor(v + 0.5))
    return gamma, out


def enhance(img: GrayImage, cfg: EnhancementConfig | None = None) -> EnhancedFrame:
    """Blur, classify, gamma-correct (through inversion for bright frames), sharpen and blend."""
    cfg = cfg or EnhancementConfig()
    blurred = gaussian_blur(img, cfg)
    brightness = classify_brightness(blurred, cfg)
    inverted = brightness.label is Brightness.BRIGHT
    hist = histogram(blurred)
    if inverted:
        hist = hist[::-1].copy()
    lut = agcwd_lut(normalize_histogram(hist), cfg)
    gamma, out = _compose(img.data, blurred.data, lut.map, inverted, float(cfg.epsilon), float(cfg.eta))
    return EnhancedFrame(
        output=GrayImage(out),
        blurred=blurred,
        gamma_corrected=GrayImage(gamma),
        brightness=brightness,
        source=img,
    )
