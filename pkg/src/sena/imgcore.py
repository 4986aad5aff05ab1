"""Image containers, color-space conversions, gamma transfer, and normalization.

Images are numpy arrays of float64 on the unit interval:

* ``ImagePlane`` -- a single channel, shape ``(h, w)``
* ``RgbImage`` / ``YcbcrImage`` -- three channels, shape ``(h, w, 3)``

8-bit quantization happens only at file I/O boundaries (``read_image`` /
``write_image``); everything in between stays in real arithmetic so that
quantization error does not compound across pipeline stages.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import numpy.typing as npt
from PIL import Image

from .errors import ParameterError

ImagePlane = npt.NDArray[np.float64]
RgbImage = npt.NDArray[np.float64]
YcbcrImage = npt.NDArray[np.float64]

# BT.601 full-range luma weights.
_LUMA_R = 0.299
_LUMA_G = 0.587
_LUMA_B = 0.114

# Full-range BT.601: [Y, Cb, Cr] = RGB @ _RGB_TO_YCBCR.T + [0, 0.5, 0.5]
_RGB_TO_YCBCR = np.array(
    [
        [0.299, 0.587, 0.114],
        [-0.168736, -0.331264, 0.5],
        [0.5, -0.418688, -0.081312],
    ]
)
_YCBCR_TO_RGB = np.array(
    [
        [1.0, 0.0, 1.402],
        [1.0, -0.344136, -0.714136],
        [1.0, 1.772, 0.0],
    ]
)

# Linear sRGB -> XYZ (D65, 2 degree observer), X and Y rows only; a* needs no Z.
_SRGB_TO_XY = np.array(
    [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
    ]
)
_D65_XN = 0.95047
_D65_YN = 1.0

# a* is rescaled to [0, 1] with this fixed window so the derived chroma
# channel is comparable across frames instead of flickering with per-image
# min/max.
_LAB_A_MIN = -128.0
_LAB_A_SPAN = 255.0


def require_plane(plane: np.ndarray, name: str = "plane") -> None:
    """Raise ParameterError unless ``plane`` is a non-empty 2-D array."""
    if not isinstance(plane, np.ndarray) or plane.ndim != 2:
        raise ParameterError(f"{name} must be a 2-D array, got shape "
                             f"{getattr(plane, 'shape', None)}")
    if plane.size == 0:
        raise ParameterError(f"{name} must contain at least one pixel")


def require_image(img: np.ndarray, name: str = "img") -> None:
    """Raise ParameterError unless ``img`` is a non-empty (h, w, 3) array."""
    if not isinstance(img, np.ndarray) or img.ndim != 3 or img.shape[2] != 3:
        raise ParameterError(f"{name} must have shape (h, w, 3), got "
                             f"{getattr(img, 'shape', None)}")
    if img.shape[0] == 0 or img.shape[1] == 0:
        raise ParameterError(f"{name} must contain at least one pixel")


def gamma_decompress(img: RgbImage, gamma: float = 2.2) -> RgbImage:
    """Undo power-law encoding: each value v becomes v**gamma.

    Camera output is gamma-compressed; decompression makes pixel values
    roughly proportional to scene radiance before any shadow arithmetic.
    """
    if not gamma > 0:
        raise ParameterError(f"gamma must be positive, got {gamma}")
    return np.power(np.asarray(img, dtype=np.float64), gamma)


def gamma_compress(img: RgbImage, gamma: float = 2.2) -> RgbImage:
    """Inverse of :func:`gamma_decompress`: each value v becomes v**(1/gamma)."""
    if not gamma > 0:
        raise ParameterError(f"gamma must be positive, got {gamma}")
    return np.power(np.asarray(img, dtype=np.float64), 1.0 / gamma)


def normalize_minmax(plane: np.ndarray, lo: float = 0.0, hi: float = 1.0) -> np.ndarray:
    """Affinely map the array's min to ``lo`` and max to ``hi``.

    A constant input maps every pixel to ``lo`` (any constant would be
    equally valid; lo is the deterministic choice). Idempotent and
    order-preserving.
    """
    if not lo < hi:
        raise ParameterError(f"normalize_minmax requires lo < hi, got {lo} >= {hi}")
    plane = np.asarray(plane, dtype=np.float64)
    vmin = plane.min()
    vmax = plane.max()
    if vmax == vmin:
        return np.full_like(plane, lo)
    return (plane - vmin) * ((hi - lo) / (vmax - vmin)) + lo


def rgb_to_ycbcr(img: RgbImage) -> YcbcrImage:
    """Full-range BT.601 RGB -> YCbCr on the unit scale (neutral chroma at 0.5)."""
    require_image(img)
    flat = np.asarray(img, dtype=np.float64).reshape(-1, 3)
    out = flat @ _RGB_TO_YCBCR.T
    out[:, 1] += 0.5
    out[:, 2] += 0.5
    np.clip(out, 0.0, 1.0, out=out)
    return out.reshape(img.shape)


def ycbcr_to_rgb(img: YcbcrImage) -> RgbImage:
    """Inverse full-range BT.601 conversion, clamped to [0, 1]."""
    require_image(img)
    flat = np.asarray(img, dtype=np.float64).reshape(-1, 3).copy()
    flat[:, 1] -= 0.5
    flat[:, 2] -= 0.5
    out = flat @ _YCBCR_TO_RGB.T
    np.clip(out, 0.0, 1.0, out=out)
    return out.reshape(img.shape)


def luma(img: RgbImage) -> ImagePlane:
    """BT.601 luminance plane without the chroma work of rgb_to_ycbcr."""
    require_image(img)
    return (
        img[..., 0] * _LUMA_R + img[..., 1] * _LUMA_G + img[..., 2] * _LUMA_B
    )


def rgb_value_channel(img: RgbImage) -> ImagePlane:
    """HSV value channel: per-pixel max over R, G, B."""
    require_image(img)
    return np.asarray(img, dtype=np.float64).max(axis=2)


def rgb_to_lab_a(img: RgbImage) -> ImagePlane:
    """CIELAB a* (green-magenta axis), rescaled to [0, 1].

    The input is treated as sRGB (piecewise IEC 61966-2-1 linearization,
    D65 white point). a* is mapped through the fixed window [-128, +127]
    rather than per-image min/max, then clamped.
    """
    require_image(img)
    img = np.asarray(img, dtype=np.float64)
    lin = np.where(
        img <= 0.04045,
        img / 12.92,
        np.power((img + 0.055) / 1.055, 2.4),
    )
    xy = lin.reshape(-1, 3) @ _SRGB_TO_XY.T
    fx = _lab_f(xy[:, 0] / _D65_XN)
    fy = _lab_f(xy[:, 1] / _D65_YN)
    a_star = 500.0 * (fx - fy)
    scaled = (a_star - _LAB_A_MIN) / _LAB_A_SPAN
    np.clip(scaled, 0.0, 1.0, out=scaled)
    return scaled.reshape(img.shape[:2])


def _lab_f(t: np.ndarray) -> np.ndarray:
    # CIE 1976 cube-root compression with the linear toe below (6/29)^3.
    delta = 6.0 / 29.0
    return np.where(t > delta**3, np.cbrt(t), t / (3.0 * delta * delta) + 4.0 / 29.0)


def read_image(path: str | Path) -> RgbImage:
    """Read an 8-bit PNG or JPEG into a unit-interval (h, w, 3) array."""
    with Image.open(path) as im:
        rgb = im.convert("RGB")
        arr = np.asarray(rgb, dtype=np.float64)
    return arr / 255.0


def write_image(path: str | Path, img: RgbImage) -> None:
    """Write a unit-interval (h, w, 3) array as an 8-bit image file.

    Values are rounded to the nearest 8-bit level and clamped; the format
    follows the file extension (PNG or JPEG).
    """
    require_image(img)
    quantized = np.clip(np.rint(np.asarray(img) * 255.0), 0, 255).astype(np.uint8)
    Image.fromarray(quantized, mode="RGB").save(path)


def write_plane(path: str | Path, plane: ImagePlane) -> None:
    """Write a unit-interval plane as an 8-bit grayscale image file."""
    require_plane(plane)
    quantized = np.clip(np.rint(np.asarray(plane) * 255.0), 0, 255).astype(np.uint8)
    Image.fromarray(quantized, mode="L").save(path)
