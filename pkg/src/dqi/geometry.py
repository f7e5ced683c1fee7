"""Viewport sampling on the sphere, gnomonic extraction from ERP planes,
and the planar center-crop variant.

ERP convention used throughout: grid sample (row r, col c) of an H x 2H
plane sits at longitude c * (360 / W) degrees and latitude 90 - r * (180 / H)
degrees. Longitude wraps; latitude clamps at the poles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_FOV_DEG = 90.0
DEFAULT_OUT_SIZE = 256
MAX_AUTO_OUT_SIZE = 512


@dataclass(frozen=True)
class ViewportSpec:
    """Center direction, field of view, and output resolution of one viewport."""

    center_longitude: float  # degrees in [0, 360)
    center_latitude: float  # degrees in [-90, 90]
    fov: float = DEFAULT_FOV_DEG  # degrees in (0, 180)
    out_size: int = DEFAULT_OUT_SIZE  # square output, pixels

    def __post_init__(self):
        if not 0.0 <= self.center_longitude < 360.0:
            raise ValueError(f"center_longitude out of [0, 360): {self.center_longitude}")
        if not -90.0 <= self.center_latitude <= 90.0:
            raise ValueError(f"center_latitude out of [-90, 90]: {self.center_latitude}")
        if not 0.0 < self.fov < 180.0:
            raise ValueError(f"fov must lie strictly between 0 and 180: {self.fov}")
        if self.out_size < 16:
            raise ValueError(f"out_size must be >= 16: {self.out_size}")


@dataclass(frozen=True)
class SamplingScheme:
    """Where viewports are taken on the sphere.

    ``equatorial(n)`` places n viewports evenly along the equator at
    360/n degree intervals. ``nonuniform_six()`` is the legacy layout:
    four equatorial viewports plus one at each pole.
    """

    kind: str  # "equatorial" | "nonuniform6"
    n: int = 4

    def __post_init__(self):
        if self.kind not in ("equatorial", "nonuniform6"):
            raise ValueError(f"unknown sampling scheme {self.kind!r}")
        if self.n < 1:
            raise ValueError("viewport count must be >= 1")

    @classmethod
    def equatorial(cls, n: int = 4) -> "SamplingScheme":
        return cls(kind="equatorial", n=n)

    @classmethod
    def nonuniform_six(cls) -> "SamplingScheme":
        return cls(kind="nonuniform6", n=6)

    def centers(self, fov: float = DEFAULT_FOV_DEG, out_size: int = DEFAULT_OUT_SIZE):
        if self.kind == "equatorial":
            return equatorial_centers(self.n, fov=fov, out_size=out_size)
        return nonuniform_six_centers(fov=fov, out_size=out_size)


def equatorial_centers(n: int, fov: float = DEFAULT_FOV_DEG,
                       out_size: int = DEFAULT_OUT_SIZE) -> list[ViewportSpec]:
    """n viewports on the equator at longitudes 0, 360/n, 2*360/n, ..."""
    if n < 1:
        raise ValueError("viewport count must be >= 1")
    step = 360.0 / n
    return [
        ViewportSpec(center_longitude=i * step, center_latitude=0.0,
                     fov=fov, out_size=out_size)
        for i in range(n)
    ]


def nonuniform_six_centers(fov: float = DEFAULT_FOV_DEG,
                           out_size: int = DEFAULT_OUT_SIZE) -> list[ViewportSpec]:
    """Four equatorial viewports plus the north and south poles."""
    specs = equatorial_centers(4, fov=fov, out_size=out_size)
    specs.append(ViewportSpec(0.0, 90.0, fov=fov, out_size=out_size))
    specs.append(ViewportSpec(0.0, -90.0, fov=fov, out_size=out_size))
    return specs


def auto_out_size(erp_height: int) -> int:
    """Default viewport resolution: half the ERP height, capped at 512."""
    return max(16, min(MAX_AUTO_OUT_SIZE, erp_height // 2))


def _bilinear_erp(plane: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Bilinear sample at fractional (u=col, v=row) with horizontal wrap
    and vertical clamp."""
    h, w = plane.shape
    u = np.mod(u, w)
    v = np.clip(v, 0.0, h - 1.0)

    j0 = np.floor(u).astype(np.intp)
    fu = u - j0
    j0 = np.mod(j0, w)
    j1 = np.mod(j0 + 1, w)

    i0 = np.floor(v).astype(np.intp)
    fv = v - i0
    i1 = np.minimum(i0 + 1, h - 1)

    # lerp form: interpolating a constant plane reproduces it exactly
    p00, p01 = plane[i0, j0], plane[i0, j1]
    p10, p11 = plane[i1, j0], plane[i1, j1]
    top = p00 + fu * (p01 - p00)
    bot = p10 + fu * (p11 - p10)
    return top + fv * (bot - top)


def extract_viewport(plane: np.ndarray, spec: ViewportSpec) -> np.ndarray:
    """Render a square gnomonic (rectilinear) viewport from an ERP plane.

    The output grid covers spec.fov degrees edge to edge with half-pixel
    centers; each output pixel is mapped through the inverse gnomonic
    projection and sampled bilinearly on the ERP plane.
    """
    plane = np.asarray(plane, dtype=np.float64)
    if plane.ndim != 2:
        raise ValueError(f"expected single-channel plane, got shape {plane.shape}")
    h, w = plane.shape
    if w != 2 * h:
        raise ValueError(f"ERP plane must satisfy width = 2*height, got {w}x{h}")

    size = spec.out_size
    half_tan = np.tan(np.radians(spec.fov) / 2.0)
    coords = (2.0 * (np.arange(size) + 0.5) / size - 1.0) * half_tan
    x = coords[None, :]  # tangent-plane horizontal, right positive
    y = -coords[:, None]  # tangent-plane vertical, up positive

    lat0 = np.radians(spec.center_latitude)
    lon0 = np.radians(spec.center_longitude)
    rho = np.hypot(x, y)
    c = np.arctan(rho)
    sin_c, cos_c = np.sin(c), np.cos(c)
    safe_rho = np.where(rho == 0.0, 1.0, rho)

    lat = np.arcsin(
        np.clip(cos_c * np.sin(lat0) + y * sin_c * np.cos(lat0) / safe_rho, -1.0, 1.0)
    )
    lon = lon0 + np.arctan2(
        x * sin_c, safe_rho * np.cos(lat0) * cos_c - y * np.sin(lat0) * sin_c
    )
    # rho == 0 is the tangent point itself.
    lat = np.where(rho == 0.0, lat0, lat)
    lon = np.where(rho == 0.0, lon0, lon)

    u = np.degrees(lon) / 360.0 * w
    v = (90.0 - np.degrees(lat)) / 180.0 * h
    out = _bilinear_erp(plane, np.broadcast_to(u, (size, size)),
                        np.broadcast_to(v, (size, size)))
    return out


def center_crop(plane: np.ndarray) -> np.ndarray:
    """Middle-third crop: rows [Y/3, 2Y/3) x cols [X/3, 2X/3), floor indices."""
    plane = np.asarray(plane, dtype=np.float64)
    if plane.ndim != 2:
        raise ValueError(f"expected single-channel plane, got shape {plane.shape}")
    h, w = plane.shape
    if h < 3 or w < 3:
        raise ValueError(f"plane too small for center crop: {w}x{h}")
    r0, r1 = h // 3, (2 * h) // 3
    c0, c1 = w // 3, (2 * w) // 3
    return plane[r0:r1, c0:c1].copy()
