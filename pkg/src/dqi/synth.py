"""Deterministic synthetic stereopair generation for desk-scale testing.

Textures come from seeded multi-octave value noise; binocular parallax is
introduced by shifting a foreground band of rows, and compression/blur/
noise degradations are emulated with simple deterministic operators. A
built dataset mirrors the evaluation manifest format, with MOS-like labels
in [1, 5] derived monotonically from disparity (depth) and from a blend of
disparity and distortion quality (overall).
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass

import numpy as np
from PIL import Image
from scipy.fft import dctn, idctn
from scipy.ndimage import gaussian_filter

from .evaluation import MANIFEST_COLUMNS, Dataset, load_manifest
from .image import Geometry, StereoImage

_TEXTURE_RANGE = (16.0, 240.0)  # keeps additive-noise clipping negligible


class DistortionKind(enum.Enum):
    NONE = "none"
    JPEG_LIKE = "jpeg_like"
    GAUSSIAN_BLUR = "gaussian_blur"
    WHITE_NOISE = "white_noise"


@dataclass(frozen=True)
class SynthConfig:
    """Parameters of one synthetic dataset build; everything derives from seed."""

    seed: int = 0
    geometry: Geometry = Geometry.ERP
    width: int = 512
    height: int = 256
    disparity_levels: tuple = (0, 4, 8, 16, 32)
    distortion_kind: DistortionKind = DistortionKind.JPEG_LIKE
    distortion_levels: tuple = (60.0, 30.0)
    symmetric: bool = True

    def __post_init__(self):
        if self.geometry is Geometry.ERP and self.width != 2 * self.height:
            raise ValueError(f"ERP size must be 2:1, got {self.width}x{self.height}")
        if self.width < 64 or self.height < 64:
            raise ValueError("synthetic images must be at least 64x64")
        if any(d < 0 for d in self.disparity_levels):
            raise ValueError("disparity levels must be non-negative")
        if any(d >= self.width / 4 for d in self.disparity_levels):
            raise ValueError("disparity levels must be below width/4")
        if self.distortion_kind is not DistortionKind.NONE and not self.distortion_levels:
            raise ValueError("at least one distortion level required")


def _value_noise(rng: np.random.Generator, width: int, height: int,
                 cells_x: int, cells_y: int) -> np.ndarray:
    """One octave of bilinear value noise, periodic in x (seamless ERP wrap)."""
    grid = rng.random((cells_y + 1, cells_x))
    x = np.arange(width) * cells_x / width
    y = np.arange(height) * cells_y / height
    xi = np.floor(x).astype(int)
    yi = np.floor(y).astype(int)
    fx = (x - xi)[None, :]
    fy = (y - yi)[:, None]
    x0 = xi % cells_x
    x1 = (xi + 1) % cells_x
    y0 = np.minimum(yi, cells_y - 1)
    y1 = y0 + 1
    v00 = grid[np.ix_(y0, x0)]
    v01 = grid[np.ix_(y0, x1)]
    v10 = grid[np.ix_(y1, x0)]
    v11 = grid[np.ix_(y1, x1)]
    top = v00 + fx * (v01 - v00)
    bot = v10 + fx * (v11 - v10)
    return top + fy * (bot - top)


def generate_texture(seed: int, width: int, height: int) -> np.ndarray:
    """Deterministic (H, W, 3) multi-octave noise texture with values in [0, 255].

    Octave cell sizes span roughly 8..64 px so the Haar subbands of a
    shifted copy carry energy at every scale.
    """
    if width < 64 or height < 64:
        raise ValueError("texture must be at least 64x64")
    rng = np.random.default_rng([0x7E4711, int(seed)])
    channels = []
    for _ in range(3):
        acc = np.zeros((height, width))
        amplitude = 1.0
        for octave in range(4):
            cells_x = max(2, width // (64 >> octave if octave < 3 else 8))
            cells_y = max(2, height // (64 >> octave if octave < 3 else 8))
            acc += amplitude * _value_noise(rng, width, height, cells_x, cells_y)
            amplitude *= 0.55
        lo, hi = acc.min(), acc.max()
        span = _TEXTURE_RANGE[1] - _TEXTURE_RANGE[0]
        channels.append(_TEXTURE_RANGE[0] + span * (acc - lo) / (hi - lo))
    return np.stack(channels, axis=-1)


def render_stereopair(texture: np.ndarray, disparity_px: int,
                      geometry: Geometry) -> StereoImage:
    """Left = texture; right = texture with the middle third of rows shifted
    horizontally by disparity_px (wraparound for ERP, edge clamp for planar)."""
    texture = np.asarray(texture, dtype=np.float64)
    h, w = texture.shape[:2]
    if not 0 <= disparity_px < w / 4:
        raise ValueError(f"disparity {disparity_px} out of [0, width/4)")
    right = texture.copy()
    band = slice(h // 3, (2 * h) // 3)
    if disparity_px > 0:
        cols = np.arange(w) - disparity_px
        if geometry is Geometry.ERP:
            cols = cols % w
        else:
            cols = np.clip(cols, 0, w - 1)
        right[band] = texture[band][:, cols]
    return StereoImage(left=texture.copy(), right=right, geometry=geometry)


# Standard JPEG luminance quantization table (used for every channel here;
# this is a compression emulation, not a codec).
_QUANT_TABLE = np.array([
    [16, 11, 10, 16, 24, 40, 51, 61],
    [12, 12, 14, 19, 26, 58, 60, 55],
    [14, 13, 16, 24, 40, 57, 69, 56],
    [14, 17, 22, 29, 51, 87, 80, 62],
    [18, 22, 37, 56, 68, 109, 103, 77],
    [24, 35, 55, 64, 81, 104, 113, 92],
    [49, 64, 78, 87, 103, 121, 120, 101],
    [72, 92, 95, 98, 112, 100, 103, 99],
], dtype=np.float64)


def _scaled_quant_table(quality: float) -> np.ndarray:
    q = float(quality)
    scale = 5000.0 / q if q < 50 else 200.0 - 2.0 * q
    return np.clip(np.floor((_QUANT_TABLE * scale + 50.0) / 100.0), 1.0, 255.0)


def _jpeg_like_plane(plane: np.ndarray, table: np.ndarray) -> np.ndarray:
    h, w = plane.shape
    ph, pw = (-h) % 8, (-w) % 8
    padded = np.pad(plane, ((0, ph), (0, pw)), mode="edge") - 128.0
    bh, bw = padded.shape[0] // 8, padded.shape[1] // 8
    blocks = padded.reshape(bh, 8, bw, 8).transpose(0, 2, 1, 3)
    coeffs = dctn(blocks, type=2, norm="ortho", axes=(-2, -1))
    coeffs = np.round(coeffs / table) * table
    blocks = idctn(coeffs, type=2, norm="ortho", axes=(-2, -1))
    out = blocks.transpose(0, 2, 1, 3).reshape(bh * 8, bw * 8) + 128.0
    return out[:h, :w]


def distort(image: np.ndarray, kind: DistortionKind, level: float,
            seed: int = 0) -> np.ndarray:
    """Apply one deterministic degradation; output clipped to [0, 255].

    Levels: JPEG_LIKE quality in [1, 100] (100 is near-identity),
    GAUSSIAN_BLUR sigma >= 0, WHITE_NOISE sigma >= 0 with noise derived
    from the seed argument.
    """
    image = np.asarray(image, dtype=np.float64)
    if kind is DistortionKind.NONE:
        return image.copy()
    if kind is DistortionKind.JPEG_LIKE:
        if not 1 <= level <= 100:
            raise ValueError(f"jpeg-like quality out of [1, 100]: {level}")
        table = _scaled_quant_table(level)
        if image.ndim == 2:
            out = _jpeg_like_plane(image, table)
        else:
            out = np.stack(
                [_jpeg_like_plane(image[..., c], table) for c in range(image.shape[2])],
                axis=-1,
            )
        return np.clip(out, 0.0, 255.0)
    if kind is DistortionKind.GAUSSIAN_BLUR:
        if level < 0:
            raise ValueError(f"blur sigma must be >= 0: {level}")
        if level == 0:
            return image.copy()
        axes = (0, 1)
        sigma = (level, level) + (0,) * (image.ndim - 2)
        return np.clip(gaussian_filter(image, sigma=sigma, mode="nearest"), 0.0, 255.0)
    if kind is DistortionKind.WHITE_NOISE:
        if level < 0:
            raise ValueError(f"noise sigma must be >= 0: {level}")
        rng = np.random.default_rng([0x0A15E, int(seed)])
        noise = rng.normal(0.0, level, size=image.shape)
        return np.clip(image + noise, 0.0, 255.0)
    raise ValueError(f"unknown distortion kind {kind!r}")


def _quality_score(kind: DistortionKind, level: float, levels: tuple) -> float:
    """Map a distortion level to [0, 1], higher = better quality."""
    if kind is DistortionKind.NONE or len(levels) < 2:
        return 1.0
    lo, hi = min(levels), max(levels)
    t = (level - lo) / (hi - lo)
    return t if kind is DistortionKind.JPEG_LIKE else 1.0 - t


def _save_png(path, raster: np.ndarray) -> None:
    arr = np.rint(np.clip(raster, 0.0, 255.0)).astype(np.uint8)
    Image.fromarray(arr, mode="RGB").save(path, format="PNG")


def build_dataset(config: SynthConfig, count_per_level: int, out_dir) -> Dataset:
    """Write a labeled synthetic dataset (PNG pairs + manifest.csv) to out_dir.

    Each disparity level gets count_per_level stereopairs, cycling the
    configured distortion levels across texture contents; undistorted
    renders of the same pairs are written once as references. Rebuilding
    with the same config reproduces every file byte for byte.
    """
    if count_per_level < 1:
        raise ValueError("count_per_level must be >= 1")
    n_dist = max(1, len(config.distortion_levels))
    image_dir = os.path.join(out_dir, "images")
    os.makedirs(image_dir, exist_ok=True)

    disparities = sorted(config.disparity_levels)
    d_lo, d_hi = min(disparities), max(disparities)

    rows = []
    textures = {}
    for k in range(count_per_level):
        content = k // n_dist
        level = (config.distortion_levels[k % n_dist]
                 if config.distortion_kind is not DistortionKind.NONE else 0.0)
        if content not in textures:
            textures[content] = generate_texture(
                config.seed * 1000 + content, config.width, config.height
            )
        for d_idx, d in enumerate(disparities):
            pair = render_stereopair(textures[content], d, config.geometry)

            ref_stem = f"ref_c{content:02d}_d{d_idx}"
            ref_left = os.path.join("images", f"{ref_stem}_l.png")
            ref_right = os.path.join("images", f"{ref_stem}_r.png")
            if k % n_dist == 0:
                _save_png(os.path.join(out_dir, ref_left), pair.left)
                _save_png(os.path.join(out_dir, ref_right), pair.right)

            noise_seed = ((config.seed * 97 + content) * 31 + d_idx) * 7 + k % n_dist
            left = distort(pair.left, config.distortion_kind, level, seed=noise_seed)
            right_level = level
            if not config.symmetric:
                right_level = config.distortion_levels[(k + 1) % n_dist]
            right = distort(pair.right, config.distortion_kind, right_level,
                            seed=noise_seed + 1)

            entry_id = f"c{content:02d}_d{d_idx}_q{k % n_dist}"
            left_rel = os.path.join("images", f"{entry_id}_l.png")
            right_rel = os.path.join("images", f"{entry_id}_r.png")
            _save_png(os.path.join(out_dir, left_rel), left)
            _save_png(os.path.join(out_dir, right_rel), right)

            depth_label = 1.0 if d_hi == d_lo else 1.0 + 4.0 * (d - d_lo) / (d_hi - d_lo)
            q_score = _quality_score(config.distortion_kind, level,
                                     config.distortion_levels)
            if not config.symmetric:
                q_right = _quality_score(config.distortion_kind, right_level,
                                         config.distortion_levels)
                q_score = (q_score + q_right) / 2.0
            overall_label = 1.0 + 4.0 * (0.5 * (depth_label - 1.0) / 4.0 + 0.5 * q_score)

            rows.append({
                "id": entry_id,
                "left": left_rel,
                "right": right_rel,
                "ref_left": ref_left,
                "ref_right": ref_right,
                "content_id": f"content{content:02d}",
                "mos_depth": repr(depth_label),
                "mos_overall": repr(overall_label),
            })

    manifest_path = os.path.join(out_dir, "manifest.csv")
    with open(manifest_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(MANIFEST_COLUMNS) + "\n")
        for row in rows:
            fh.write(",".join(row[c] for c in MANIFEST_COLUMNS) + "\n")
    return load_manifest(manifest_path)
