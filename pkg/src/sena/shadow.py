"""Shadow-pixel detection from the HSV value channel and the BT.601 luminance.

A pixel counts as shadow when it is both dimmer than the image's mean
brightness (V channel) and below a fixed luminance cutoff (Y channel); the
final mask is the intersection of the two regions.
"""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

from . import imgcore
from .imgcore import ImagePlane, RgbImage

ShadowMask = npt.NDArray[np.bool_]

# Default luminance cutoff on the 8-bit scale; overridable for
# sensor-specific tuning.
DEFAULT_Y_THRESHOLD = 165.0 / 255.0


def shadow_mask_v(v: ImagePlane) -> ShadowMask:
    """Pixels whose V value lies in the closed interval [0, mean(V)].

    A constant plane yields a full mask (every pixel sits at the mean);
    downstream luminance correction is a no-op there, so the degenerate
    case is harmless.
    """
    imgcore.require_plane(v, "v")
    return v <= v.mean()


def shadow_mask_y(y: ImagePlane, threshold: float = DEFAULT_Y_THRESHOLD) -> ShadowMask:
    """Pixels whose luminance is at most ``threshold`` (boundary inclusive)."""
    imgcore.require_plane(y, "y")
    return y <= threshold


def shadow_mask(img: RgbImage, threshold: float = DEFAULT_Y_THRESHOLD) -> ShadowMask:
    """Intersection of the V-channel and Y-channel shadow regions."""
    imgcore.require_image(img)
    v = imgcore.rgb_value_channel(img)
    y = imgcore.luma(img)
    return shadow_mask_v(v) & shadow_mask_y(y, threshold)
