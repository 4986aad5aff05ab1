"""Illumination-invariant channels: mean chroma, normalized Laplacian, and
the percentile contrast stretch that restores edge detail to the Laplacian.
"""

from __future__ import annotations

import math

import numpy as np

from . import imgcore
from .errors import ParameterError
from .imgcore import ImagePlane

# 3x3 second-derivative kernels. "sobel_sum" is the sum of the Sobel
# second-x-derivative [[1,-2,1],[2,-4,2],[1,-2,1]] and its transpose;
# "four_neighbor" is the classic discrete Laplacian, kept for ablation.
KERNELS: dict[str, np.ndarray] = {
    "sobel_sum": np.array(
        [
            [2.0, 0.0, 2.0],
            [0.0, -8.0, 0.0],
            [2.0, 0.0, 2.0],
        ]
    ),
    "four_neighbor": np.array(
        [
            [0.0, 1.0, 0.0],
            [1.0, -4.0, 1.0],
            [0.0, 1.0, 0.0],
        ]
    ),
}


def laplacian_raw(y: ImagePlane, kernel_choice: str = "sobel_sum") -> np.ndarray:
    """Correlate the plane with the chosen 3x3 kernel, replicate-padded.

    The raw (signed, unnormalized) response; mostly useful for testing and
    debugging. Replicate padding avoids the dark halo that zero padding
    would inject at the image border.
    """
    imgcore.require_plane(y, "y")
    if y.shape[0] < 3 or y.shape[1] < 3:
        raise ParameterError(f"image {y.shape} is smaller than the 3x3 kernel")
    try:
        kernel = KERNELS[kernel_choice]
    except KeyError:
        raise ParameterError(
            f"unknown kernel_choice {kernel_choice!r}; expected one of {sorted(KERNELS)}"
        ) from None
    h, w = y.shape
    padded = np.pad(y, 1, mode="edge")
    out = np.zeros_like(y)
    for di in range(3):
        for dj in range(3):
            k = kernel[di, dj]
            if k != 0.0:
                out += k * padded[di : di + h, dj : dj + w]
    return out


def laplacian_invariant(y: ImagePlane, kernel_choice: str = "sobel_sum") -> ImagePlane:
    """Normalized Laplacian channel: raw second-derivative response mapped
    onto [0, 1] by min/max.

    A constant input has zero response everywhere and therefore maps to
    the all-zero plane.
    """
    return imgcore.normalize_minmax(laplacian_raw(y, kernel_choice))


def mean_chroma(a: ImagePlane, cb: ImagePlane, cr: ImagePlane) -> ImagePlane:
    """Weighted chroma mean (2a + cb + cr) / 4 over unit-interval planes."""
    imgcore.require_plane(a, "a")
    if a.shape != cb.shape or a.shape != cr.shape:
        raise ParameterError(
            f"plane dimensions differ: a={a.shape} cb={cb.shape} cr={cr.shape}"
        )
    return (2.0 * a + cb + cr) / 4.0


def percentile_nearest_rank(sorted_values: np.ndarray, p: float) -> float:
    """Nearest-rank percentile over an ascending-sorted flat array."""
    n = sorted_values.size
    rank = max(1, math.ceil(p / 100.0 * n))
    return float(sorted_values[rank - 1])


def contrast_stretch(
    plane: ImagePlane, p_lo: float = 1.25, p_hi: float = 98.75
) -> ImagePlane:
    """Clamp below/above the given percentiles and map linearly to [0, 1].

    Percentiles are nearest-rank on the sorted pixel multiset
    (deterministic, no interpolation ambiguity). If both cut values
    coincide (near-constant plane) the output is all zeros, mirroring
    the degenerate-range rule of normalize_minmax.
    """
    imgcore.require_plane(plane, "plane")
    if not (0.0 <= p_lo < p_hi <= 100.0):
        raise ParameterError(
            f"percentiles must satisfy 0 <= p_lo < p_hi <= 100, got ({p_lo}, {p_hi})"
        )
    ordered = np.sort(plane, axis=None)
    q_lo = percentile_nearest_rank(ordered, p_lo)
    q_hi = percentile_nearest_rank(ordered, p_hi)
    if q_hi == q_lo:
        return np.zeros_like(plane)
    out = (plane - q_lo) / (q_hi - q_lo)
    np.clip(out, 0.0, 1.0, out=out)
    return out
