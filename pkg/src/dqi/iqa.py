"""Full-reference image-quality features for the overall-QoE extension.

PSNR and 5-scale MS-SSIM evaluated on local grayscale viewports of the
reference and distorted views, pooled per eye, then concatenated with the
24 depth features into the 26-value overall feature vector.
"""

from __future__ import annotations

import enum

import numpy as np
from scipy.ndimage import convolve1d

from .features import DEPTH_FEATURE_NAMES, ExtractionConfig, ExtractionMode, depth_features
from .geometry import auto_out_size, center_crop, extract_viewport
from .image import Geometry, StereoImage

DEFAULT_PSNR_CAP_DB = 100.0

OVERALL_FEATURE_NAMES = ("iq_left", "iq_right") + DEPTH_FEATURE_NAMES

# Standard MS-SSIM constants: 11x11 Gaussian window, sigma 1.5, K1/K2,
# and the five published scale weights.
_MSSSIM_WEIGHTS = np.array([0.0448, 0.2856, 0.3001, 0.2363, 0.1333])
_MSSSIM_LEVELS = 5
_WINDOW_SIZE = 11
_WINDOW_SIGMA = 1.5
_K1 = 0.01
_K2 = 0.03
_MIN_MSSSIM_SIZE = _WINDOW_SIZE * 2 ** (_MSSSIM_LEVELS - 1)  # 176


class ImageMetric(enum.Enum):
    PSNR = "psnr"
    MSSSIM = "msssim"


def psnr(reference: np.ndarray, distorted: np.ndarray,
         cap_db: float = DEFAULT_PSNR_CAP_DB) -> float:
    """Peak signal-to-noise ratio in dB for 0-255 planes, capped at cap_db."""
    reference = np.asarray(reference, dtype=np.float64)
    distorted = np.asarray(distorted, dtype=np.float64)
    if reference.shape != distorted.shape:
        raise ValueError(f"dimension mismatch: {reference.shape} vs {distorted.shape}")
    mse = float(np.mean((reference - distorted) ** 2))
    if mse == 0.0:
        return cap_db
    return min(cap_db, 10.0 * np.log10(255.0**2 / mse))


def _gaussian_window(size: int = _WINDOW_SIZE, sigma: float = _WINDOW_SIGMA) -> np.ndarray:
    offsets = np.arange(size) - (size - 1) / 2.0
    g = np.exp(-(offsets**2) / (2.0 * sigma**2))
    return g / g.sum()


def _filter_valid(plane: np.ndarray, window: np.ndarray) -> np.ndarray:
    # Separable filtering; interior crop reproduces valid-mode convolution.
    margin = (len(window) - 1) // 2
    out = convolve1d(plane, window, axis=0, mode="constant")
    out = convolve1d(out, window, axis=1, mode="constant")
    return out[margin:-margin, margin:-margin]


def _downsample2(plane: np.ndarray) -> np.ndarray:
    h, w = plane.shape
    plane = plane[: h - h % 2, : w - w % 2]
    return (plane[0::2, 0::2] + plane[0::2, 1::2]
            + plane[1::2, 0::2] + plane[1::2, 1::2]) / 4.0


def ms_ssim(reference: np.ndarray, distorted: np.ndarray,
            data_range: float = 255.0) -> float:
    """Five-scale MS-SSIM of two 0-255 grayscale planes.

    Contrast-structure means are pooled at each scale with valid-mode
    Gaussian windowing; the luminance term enters at the coarsest scale
    only. Negative pooled terms (pathologically anticorrelated inputs)
    clamp to zero so the result stays in [0, 1].
    """
    reference = np.asarray(reference, dtype=np.float64)
    distorted = np.asarray(distorted, dtype=np.float64)
    if reference.ndim != 2:
        raise ValueError(f"expected single-channel planes, got shape {reference.shape}")
    if reference.shape != distorted.shape:
        raise ValueError(f"dimension mismatch: {reference.shape} vs {distorted.shape}")
    if min(reference.shape) < _MIN_MSSSIM_SIZE:
        raise ValueError(
            f"plane too small for {_MSSSIM_LEVELS}-scale MS-SSIM: "
            f"{reference.shape}, need >= {_MIN_MSSSIM_SIZE} per side"
        )

    c1 = (_K1 * data_range) ** 2
    c2 = (_K2 * data_range) ** 2
    window = _gaussian_window()

    im1, im2 = reference, distorted
    scale_means = []
    for level in range(_MSSSIM_LEVELS):
        mu1 = _filter_valid(im1, window)
        mu2 = _filter_valid(im2, window)
        sigma11 = _filter_valid(im1 * im1, window) - mu1 * mu1
        sigma22 = _filter_valid(im2 * im2, window) - mu2 * mu2
        sigma12 = _filter_valid(im1 * im2, window) - mu1 * mu2

        cs_map = (2.0 * sigma12 + c2) / (sigma11 + sigma22 + c2)
        if level == _MSSSIM_LEVELS - 1:
            l_map = (2.0 * mu1 * mu2 + c1) / (mu1 * mu1 + mu2 * mu2 + c1)
            scale_means.append(float(np.mean(l_map * cs_map)))
        else:
            scale_means.append(float(np.mean(cs_map)))
            im1 = _downsample2(im1)
            im2 = _downsample2(im2)

    means = np.maximum(scale_means, 0.0)
    return float(np.prod(means**_MSSSIM_WEIGHTS))


def bt601_luma(rgb: np.ndarray) -> np.ndarray:
    """ITU-R BT.601 luma of an (H, W, 3) RGB raster."""
    rgb = np.asarray(rgb, dtype=np.float64)
    if rgb.ndim != 3 or rgb.shape[2] != 3:
        raise ValueError(f"expected (H, W, 3) raster, got shape {rgb.shape}")
    return rgb[..., 0] * 0.299 + rgb[..., 1] * 0.587 + rgb[..., 2] * 0.114


def _metric_fn(metric: ImageMetric):
    if metric is ImageMetric.PSNR:
        return psnr
    if metric is ImageMetric.MSSSIM:
        return ms_ssim
    raise ValueError(f"unknown metric {metric!r}")


def local_image_features(ref: StereoImage, dist: StereoImage, metric: ImageMetric,
                         config: ExtractionConfig | None = None) -> np.ndarray:
    """Per-eye local image quality: metric averaged over matched viewports.

    Viewports (or the planar center crop) are taken at identical positions
    from the reference and distorted luma planes of each eye.
    """
    if config is None:
        config = ExtractionConfig.for_geometry(dist.geometry)
    if ref.left.shape != dist.left.shape or ref.geometry is not dist.geometry:
        raise ValueError("reference and distorted pairs must share dimensions and geometry")

    fn = _metric_fn(metric)
    scores = []
    for ref_view, dist_view in ((ref.left, dist.left), (ref.right, dist.right)):
        ref_gray = bt601_luma(ref_view)
        dist_gray = bt601_luma(dist_view)
        if config.mode is ExtractionMode.PLANAR_CENTER_CROP:
            pairs = [(center_crop(ref_gray), center_crop(dist_gray))]
        else:
            out_size = config.out_size or auto_out_size(ref_gray.shape[0])
            specs = config.sampling.centers(fov=config.fov, out_size=out_size)
            pairs = [
                (extract_viewport(ref_gray, s), extract_viewport(dist_gray, s))
                for s in specs
            ]
        scores.append(float(np.mean([fn(r, d) for r, d in pairs])))
    return np.array(scores)


def overall_features(ref: StereoImage, dist: StereoImage, metric: ImageMetric,
                     config: ExtractionConfig | None = None) -> np.ndarray:
    """The 26-value overall-QoE feature vector: [q_left, q_right, depth features]."""
    if config is None:
        config = ExtractionConfig.for_geometry(dist.geometry)
    local = local_image_features(ref, dist, metric, config)
    return np.concatenate([local, depth_features(dist, config)])
