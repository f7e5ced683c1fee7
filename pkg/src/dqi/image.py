"""Raster I/O, stereo pair validation, CIELAB conversion, and interocular difference.

Rasters are plain numpy float64 arrays: (H, W) for single-channel planes and
(H, W, 3) for RGB, with 8-bit inputs carried as 0-255 values.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from PIL import Image


class Geometry(enum.Enum):
    """Storage geometry of a stereo pair."""

    ERP = "erp"
    PLANAR = "planar"


def _check_raster(arr: np.ndarray, name: str = "raster") -> None:
    if arr.ndim not in (2, 3):
        raise ValueError(f"{name} must be 2-D or (H, W, 3), got shape {arr.shape}")
    if arr.ndim == 3 and arr.shape[2] not in (1, 3):
        raise ValueError(f"{name} must have 1 or 3 channels, got {arr.shape[2]}")
    if arr.shape[0] < 2 or arr.shape[1] < 2:
        raise ValueError(f"{name} must be at least 2x2, got {arr.shape[:2]}")


@dataclass(frozen=True)
class StereoImage:
    """A left/right RGB raster pair tagged with its storage geometry.

    Invariants: both views share dimensions, and ERP pairs satisfy the
    standard equirectangular 2:1 aspect (width = 2 * height).
    """

    left: np.ndarray
    right: np.ndarray
    geometry: Geometry

    def __post_init__(self):
        _check_raster(self.left, "left view")
        _check_raster(self.right, "right view")
        if self.left.shape != self.right.shape:
            raise ValueError(
                f"left/right dimension mismatch: {self.left.shape} vs {self.right.shape}"
            )
        if self.left.ndim != 3 or self.left.shape[2] != 3:
            raise ValueError("stereo views must be 3-channel RGB")
        if self.geometry is Geometry.ERP:
            h, w = self.left.shape[:2]
            if w != 2 * h:
                raise ValueError(f"ERP image must satisfy width = 2*height, got {w}x{h}")

    @property
    def width(self) -> int:
        return self.left.shape[1]

    @property
    def height(self) -> int:
        return self.left.shape[0]


def _decode_rgb(path) -> np.ndarray:
    try:
        with Image.open(path) as img:
            rgb = img.convert("RGB")
            return np.asarray(rgb, dtype=np.float64)
    except (OSError, ValueError) as exc:
        raise ValueError(f"cannot decode image {path!r}: {exc}") from exc


def load_stereo(left_path, right_path, geometry: Geometry | str) -> StereoImage:
    """Load a stereo pair from two 8-bit PNG/JPEG files.

    Raises ValueError on decode failure, dimension mismatch, or ERP aspect
    violation.
    """
    if isinstance(geometry, str):
        geometry = Geometry(geometry.lower())
    left = _decode_rgb(left_path)
    right = _decode_rgb(right_path)
    return StereoImage(left=left, right=right, geometry=geometry)


def abs_diff(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Per-pixel, per-channel absolute difference |left - right|."""
    left = np.asarray(left, dtype=np.float64)
    right = np.asarray(right, dtype=np.float64)
    if left.shape != right.shape:
        raise ValueError(f"dimension mismatch: {left.shape} vs {right.shape}")
    return np.abs(left - right)


# sRGB (D65) to CIE 1931 XYZ, linear-light primaries.
_SRGB_TO_XYZ = np.array(
    [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ]
)

# D65 reference white = row sums of the matrix, so that (255,255,255)
# maps to exactly neutral chroma.
_WHITE = _SRGB_TO_XYZ.sum(axis=1)

_LAB_DELTA = 6.0 / 29.0


def rgb_to_lab(rgb: np.ndarray) -> np.ndarray:
    """Convert an (H, W, 3) raster with 0-255 sRGB values to CIE 1976 L*a*b*.

    Uses the standard sRGB linearization and D65 white point. L lands in
    [0, 100]; a/b roughly in [-128, 127]. Black maps to exactly (0, 0, 0).
    """
    rgb = np.asarray(rgb, dtype=np.float64)
    if rgb.ndim != 3 or rgb.shape[2] != 3:
        raise ValueError(f"expected (H, W, 3) raster, got shape {rgb.shape}")

    c = rgb / 255.0
    linear = np.where(c <= 0.04045, c / 12.92, ((c + 0.055) / 1.055) ** 2.4)
    xyz = linear @ _SRGB_TO_XYZ.T
    t = xyz / _WHITE

    cube_root = np.cbrt(t)
    above = t > _LAB_DELTA**3
    f = np.where(above, cube_root, t / (3.0 * _LAB_DELTA**2) + 4.0 / 29.0)

    fx, fy, fz = f[..., 0], f[..., 1], f[..., 2]
    # Below the knee, 116*f(t) - 16 reduces to a pure linear ramp; computing
    # it that way keeps L(black) at exactly zero.
    ty = t[..., 1]
    lum = np.where(
        above[..., 1],
        116.0 * cube_root[..., 1] - 16.0,
        ty * (116.0 / (3.0 * _LAB_DELTA**2)),
    )
    a = 500.0 * (fx - fy)
    b = 200.0 * (fy - fz)
    return np.stack([lum, a, b], axis=-1)
