"""Luminance and chroma correction, and the end-to-end enhancement pipeline.

The pipeline brightens shadow regions in daytime images and lifts detail in
nighttime images in a single pass:

1. gamma-decompress and per-channel min/max normalize the input,
2. detect shadow pixels from the V and Y channels,
3. build the two illumination-invariant channels (mean chroma m_c and a
   contrast-stretched normalized Laplacian of Y),
4. add an illumination map to Y at shadow pixels only,
5. rebuild both chroma channels from their inverse maps, restoring each
   channel's original value range,
6. convert back to RGB and clamp.

Every function here is pure: identical inputs produce bit-identical outputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields

import numpy as np

from . import imgcore, invariant, shadow
from .errors import ParameterError
from .imgcore import ImagePlane, RgbImage
from .shadow import ShadowMask

_KIND_RED = "red"
_KIND_BLUE = "blue"


@dataclass(frozen=True)
class SenaConfig:
    """Tunables for the enhancement pipeline.

    gamma: power-law exponent used for decompression of camera input.
    y_shadow_threshold: luminance cutoff of the Y shadow region (unit scale).
    stretch_lo / stretch_hi: percentile cuts of the Laplacian contrast stretch.
    chroma_constant_c: weight of the inverse-max chroma term in the red
        channel recombination.
    epsilon: guard for the two divisions in the chroma correction.
    kernel_choice: "sobel_sum" (default) or "four_neighbor" Laplacian kernel.
    y_inv_scaling: how the non-shadow mean scales the inverted Y channel;
        "multiply" (default, keeps the map in [0, 1]) or "divide" (ablation
        alternative).
    """

    gamma: float = 2.2
    y_shadow_threshold: float = shadow.DEFAULT_Y_THRESHOLD
    stretch_lo: float = 1.25
    stretch_hi: float = 98.75
    chroma_constant_c: float = 1.0
    epsilon: float = 1e-6
    kernel_choice: str = "sobel_sum"
    y_inv_scaling: str = "multiply"

    def __post_init__(self) -> None:
        if not self.gamma > 0:
            raise ParameterError(f"gamma must be positive, got {self.gamma}")
        if not (0.0 <= self.stretch_lo < self.stretch_hi <= 100.0):
            raise ParameterError(
                f"invalid stretch percentiles ({self.stretch_lo}, {self.stretch_hi})"
            )
        if not self.epsilon > 0:
            raise ParameterError(f"epsilon must be positive, got {self.epsilon}")
        if not (0.0 <= self.y_shadow_threshold <= 1.0):
            raise ParameterError(
                f"y_shadow_threshold must lie in [0, 1], got {self.y_shadow_threshold}"
            )
        if self.kernel_choice not in invariant.KERNELS:
            raise ParameterError(
                f"kernel_choice must be one of {sorted(invariant.KERNELS)}, "
                f"got {self.kernel_choice!r}"
            )
        if self.y_inv_scaling not in ("multiply", "divide"):
            raise ParameterError(
                f"y_inv_scaling must be 'multiply' or 'divide', got {self.y_inv_scaling!r}"
            )


@dataclass
class ChromaIntermediates:
    """Per-channel intermediates of the inverse-chromaticity correction."""

    ch: ImagePlane
    ch_inv: ImagePlane
    ch_map: ImagePlane
    ch_inv_map: ImagePlane
    ch_max_inv: ImagePlane
    candidate: ImagePlane
    corrected: ImagePlane


@dataclass
class CorrectionIntermediates:
    """Every named intermediate of one enhancement run, for debugging and
    for directional quality checks that need pre-normalization values."""

    y: ImagePlane
    v: ImagePlane
    a: ImagePlane
    mask: ShadowMask
    m_c: ImagePlane
    laplacian: ImagePlane
    l_stretched: ImagePlane
    y_norm_inv: ImagePlane
    i_y_map: ImagePlane
    y_out_prenorm: ImagePlane
    y_out: ImagePlane
    chroma: dict[str, ChromaIntermediates] = field(default_factory=dict)


@dataclass
class EnhanceResult:
    rgb: RgbImage
    intermediates: CorrectionIntermediates


def _require_same_shape(a: np.ndarray, b: np.ndarray, what: str) -> None:
    if a.shape != b.shape:
        raise ParameterError(f"{what}: dimensions differ, {a.shape} vs {b.shape}")


def correct_luminance(
    y: ImagePlane,
    l: ImagePlane,
    mask: ShadowMask,
    cfg: SenaConfig | None = None,
) -> ImagePlane:
    """Brighten shadow pixels of the luminance plane using the stretched
    Laplacian channel ``l`` as a spatial weight, then renormalize globally.

    The illumination map is (max(Y) - Y) scaled by the mean of the
    non-shadow pixels and modulated by ``l``; it is added at shadow pixels
    only, so non-shadow luminance is untouched before the final min/max
    normalization. A mask covering the whole image falls back to the
    global mean.
    """
    out, _, _ = _correct_luminance_full(y, l, mask, cfg or SenaConfig())
    return out


def _correct_luminance_full(
    y: ImagePlane,
    l: ImagePlane,
    mask: ShadowMask,
    cfg: SenaConfig,
) -> tuple[ImagePlane, ImagePlane, tuple[ImagePlane, ImagePlane]]:
    imgcore.require_plane(y, "y")
    _require_same_shape(y, l, "correct_luminance")
    _require_same_shape(y, mask, "correct_luminance mask")

    non_shadow = ~mask
    if non_shadow.any():
        mean_bright = float(y[non_shadow].mean())
    else:
        mean_bright = float(y.mean())

    y_inv = y.max() - y
    if cfg.y_inv_scaling == "multiply":
        y_norm_inv = y_inv * mean_bright
    else:
        y_norm_inv = y_inv / max(mean_bright, cfg.epsilon)
    i_y_map = y_norm_inv * l

    y_out_prenorm = y.copy()
    y_out_prenorm[mask] += i_y_map[mask]
    y_out = imgcore.normalize_minmax(y_out_prenorm)
    return y_out, y_out_prenorm, (y_norm_inv, i_y_map)


def correct_chroma(
    ch: ImagePlane,
    m_c: ImagePlane,
    mask: ShadowMask,
    kind: str,
    cfg: SenaConfig | None = None,
) -> ImagePlane:
    """Rebuild one chroma channel from its inverse maps.

    Shadows appear dark in Cb and bright in Cr, so the two channels
    recombine differently (``kind`` is "red" for Cr, "blue" for Cb). At
    shadow pixels the candidate is pulled back toward the original channel
    by the original/modified ratio; finally the result is affinely mapped
    back onto the original channel's [min, max] range, which keeps colors
    from drifting (reds turning orange or purple).
    """
    result, _ = _correct_chroma_full(ch, m_c, mask, kind, cfg or SenaConfig())
    return result


def _correct_chroma_full(
    ch: ImagePlane,
    m_c: ImagePlane,
    mask: ShadowMask,
    kind: str,
    cfg: SenaConfig,
) -> tuple[ImagePlane, ChromaIntermediates]:
    imgcore.require_plane(ch, "ch")
    _require_same_shape(ch, m_c, "correct_chroma")
    _require_same_shape(ch, mask, "correct_chroma mask")
    if kind not in (_KIND_RED, _KIND_BLUE):
        raise ParameterError(f"kind must be 'red' or 'blue', got {kind!r}")

    eps = cfg.epsilon
    ch_min = float(ch.min())
    ch_max = float(ch.max())

    ch_inv = ch_max - ch
    ch_map = m_c * ch_inv
    ch_inv_map = ch_map / np.maximum(ch, eps)
    ch_max_inv = ch - ch_inv_map

    if kind == _KIND_RED:
        candidate = (ch_map + ch_max_inv * cfg.chroma_constant_c + m_c) / 3.0
    else:
        candidate = (m_c + ch_inv_map) / 2.0

    if mask.any():
        candidate = candidate.copy()
        shadow_vals = candidate[mask]
        candidate[mask] = shadow_vals * (ch[mask] / np.maximum(shadow_vals, eps))

    # Restore the original channel's range; a degenerate range (constant
    # input channel) maps everything to that constant.
    if ch_max > ch_min:
        corrected = imgcore.normalize_minmax(candidate, ch_min, ch_max)
    else:
        corrected = np.full_like(ch, ch_min)

    inter = ChromaIntermediates(
        ch=ch,
        ch_inv=ch_inv,
        ch_map=ch_map,
        ch_inv_map=ch_inv_map,
        ch_max_inv=ch_max_inv,
        candidate=candidate,
        corrected=corrected,
    )
    return corrected, inter


def sena_enhance(img: RgbImage, cfg: SenaConfig | None = None) -> RgbImage:
    """Run the full enhancement pipeline on an RGB image in [0, 1]."""
    return sena_enhance_full(img, cfg).rgb


def sena_enhance_full(img: RgbImage, cfg: SenaConfig | None = None) -> EnhanceResult:
    """As :func:`sena_enhance`, but also returns every intermediate plane."""
    cfg = cfg or SenaConfig()
    imgcore.require_image(img)
    if img.shape[0] < 3 or img.shape[1] < 3:
        raise ParameterError(f"image {img.shape[:2]} is smaller than the 3x3 kernel")

    work = gamma_preprocess(img, cfg.gamma)

    ycbcr = imgcore.rgb_to_ycbcr(work)
    y = np.ascontiguousarray(ycbcr[..., 0])
    cb = np.ascontiguousarray(ycbcr[..., 1])
    cr = np.ascontiguousarray(ycbcr[..., 2])
    v = imgcore.rgb_value_channel(work)
    a = imgcore.rgb_to_lab_a(work)

    mask = shadow.shadow_mask_v(v) & shadow.shadow_mask_y(y, cfg.y_shadow_threshold)

    m_c = invariant.mean_chroma(a, cb, cr)
    lap = invariant.laplacian_invariant(y, cfg.kernel_choice)
    l_stretched = invariant.contrast_stretch(lap, cfg.stretch_lo, cfg.stretch_hi)

    y_out, y_out_prenorm, (y_norm_inv, i_y_map) = _correct_luminance_full(
        y, l_stretched, mask, cfg
    )
    cr_out, cr_inter = _correct_chroma_full(cr, m_c, mask, _KIND_RED, cfg)
    cb_out, cb_inter = _correct_chroma_full(cb, m_c, mask, _KIND_BLUE, cfg)

    out = imgcore.ycbcr_to_rgb(np.stack([y_out, cb_out, cr_out], axis=-1))

    intermediates = CorrectionIntermediates(
        y=y,
        v=v,
        a=a,
        mask=mask,
        m_c=m_c,
        laplacian=lap,
        l_stretched=l_stretched,
        y_norm_inv=y_norm_inv,
        i_y_map=i_y_map,
        y_out_prenorm=y_out_prenorm,
        y_out=y_out,
        chroma={_KIND_RED: cr_inter, _KIND_BLUE: cb_inter},
    )
    return EnhanceResult(rgb=out, intermediates=intermediates)


def gamma_preprocess(img: RgbImage, gamma: float) -> RgbImage:
    """Gamma-decompress and min/max-normalize each channel independently."""
    work = imgcore.gamma_decompress(img, gamma)
    for c in range(3):
        work[..., c] = imgcore.normalize_minmax(work[..., c])
    return work


def config_as_dict(cfg: SenaConfig) -> dict[str, object]:
    """Field name -> value mapping, in declaration order."""
    return {f.name: getattr(cfg, f.name) for f in fields(cfg)}
