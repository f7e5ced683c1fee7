"""Depth-feature extraction: interocular discrepancy -> LAB -> local
viewports or center crop -> Haar subbands -> per-subband statistics.

The final vector has 24 values in a fixed canonical order: standard
deviations first, entropies second; channels L, a, b within each; subbands
LL, HL, LH, HH innermost. Keeping the order pinned makes trained model
files portable.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .geometry import (
    DEFAULT_FOV_DEG,
    SamplingScheme,
    auto_out_size,
    center_crop,
    extract_viewport,
)
from .image import Geometry, StereoImage, abs_diff, rgb_to_lab
from .wavelet import SubbandQuad, haar_decompose

SUBBAND_NAMES = ("ll", "hl", "lh", "hh")
CHANNEL_NAMES = ("l", "a", "b")

DEPTH_FEATURE_NAMES = tuple(
    f"{stat}_{ch}_{sb}"
    for stat in ("std", "ent")
    for ch in CHANNEL_NAMES
    for sb in SUBBAND_NAMES
)

DEFAULT_ENTROPY_BINS = 256


class ExtractionMode(enum.Enum):
    """Which spatial selection the pipeline applies to the discrepancy map."""

    OMNIDIRECTIONAL = "omnidirectional"
    PLANAR_CENTER_CROP = "planar_center_crop"


@dataclass(frozen=True)
class ExtractionConfig:
    """Knobs for the feature pipeline.

    out_size None means "half the ERP height, capped at 512", resolved per
    image. The planar mode ignores fov/out_size/sampling.
    """

    mode: ExtractionMode = ExtractionMode.OMNIDIRECTIONAL
    sampling: SamplingScheme = field(default_factory=SamplingScheme.equatorial)
    fov: float = DEFAULT_FOV_DEG
    out_size: int | None = None
    entropy_bins: int = DEFAULT_ENTROPY_BINS

    def __post_init__(self):
        if self.entropy_bins < 2:
            raise ValueError(f"entropy_bins must be >= 2: {self.entropy_bins}")

    @classmethod
    def for_geometry(cls, geometry: Geometry, **kwargs) -> "ExtractionConfig":
        mode = (
            ExtractionMode.OMNIDIRECTIONAL
            if geometry is Geometry.ERP
            else ExtractionMode.PLANAR_CENTER_CROP
        )
        return cls(mode=mode, **kwargs)


def subband_std(plane: np.ndarray) -> float:
    """Population standard deviation over all samples of the plane."""
    plane = np.asarray(plane, dtype=np.float64)
    if plane.size == 0:
        raise ValueError("empty plane")
    return float(np.std(plane))


def subband_entropy(plane: np.ndarray, bins: int = DEFAULT_ENTROPY_BINS) -> float:
    """Shannon entropy (bits) of the plane quantized uniformly over its range.

    A constant plane has a degenerate range and returns 0.
    """
    if bins < 2:
        raise ValueError(f"bins must be >= 2: {bins}")
    plane = np.asarray(plane, dtype=np.float64)
    if plane.size == 0:
        raise ValueError("empty plane")
    lo = float(plane.min())
    hi = float(plane.max())
    if lo == hi:
        return 0.0
    counts, _ = np.histogram(plane, bins=bins, range=(lo, hi))
    p = counts[counts > 0] / plane.size
    return float(-np.sum(p * np.log2(p)))


def viewport_statistics(quad: SubbandQuad, bins: int = DEFAULT_ENTROPY_BINS) -> np.ndarray:
    """[std(LL), std(HL), std(LH), std(HH), ent(LL), ent(HL), ent(LH), ent(HH)]."""
    planes = quad.planes()
    stds = [subband_std(p) for p in planes]
    ents = [subband_entropy(p, bins) for p in planes]
    return np.array(stds + ents)


def aggregate_over_viewports(per_viewport) -> np.ndarray:
    """Element-wise arithmetic mean of the per-viewport statistic sets."""
    stacked = np.asarray(list(per_viewport), dtype=np.float64)
    if stacked.size == 0:
        raise ValueError("no viewport statistics to aggregate")
    return stacked.mean(axis=0)


def _channel_planes(channel: np.ndarray, stereo_geometry: Geometry,
                    config: ExtractionConfig) -> list[np.ndarray]:
    if config.mode is ExtractionMode.PLANAR_CENTER_CROP:
        return [center_crop(channel)]
    out_size = config.out_size or auto_out_size(channel.shape[0])
    specs = config.sampling.centers(fov=config.fov, out_size=out_size)
    return [extract_viewport(channel, spec) for spec in specs]


def depth_features(stereo: StereoImage, config: ExtractionConfig | None = None) -> np.ndarray:
    """The 24-value depth-quality feature vector of a stereo pair.

    Pipeline: per-channel |left - right| -> CIELAB decomposition of the
    difference raster -> viewports (omnidirectional) or center crop
    (planar) per channel -> single-level Haar subbands -> std and entropy
    per subband -> mean across viewports.
    """
    if config is None:
        config = ExtractionConfig.for_geometry(stereo.geometry)
    if config.mode is ExtractionMode.OMNIDIRECTIONAL and stereo.geometry is not Geometry.ERP:
        raise ValueError("omnidirectional extraction requires an ERP stereo pair")
    if config.mode is ExtractionMode.PLANAR_CENTER_CROP and stereo.geometry is not Geometry.PLANAR:
        raise ValueError("center-crop extraction requires a planar stereo pair")

    discrepancy = abs_diff(stereo.left, stereo.right)
    lab = rgb_to_lab(discrepancy)

    per_channel = []
    for ch in range(3):
        planes = _channel_planes(lab[..., ch], stereo.geometry, config)
        stats = [viewport_statistics(haar_decompose(p), config.entropy_bins) for p in planes]
        per_channel.append(aggregate_over_viewports(stats))

    stds = [stats[:4] for stats in per_channel]
    ents = [stats[4:] for stats in per_channel]
    return np.concatenate(stds + ents)


def write_features_csv(path, rows, names=DEPTH_FEATURE_NAMES, ids=None) -> None:
    """Write feature vectors as CSV with a header row (canonical order)."""
    rows = [np.asarray(r, dtype=np.float64) for r in rows]
    for r in rows:
        if r.shape != (len(names),):
            raise ValueError(f"expected {len(names)}-value rows, got shape {r.shape}")
    with open(path, "w", encoding="utf-8") as fh:
        header = list(names) if ids is None else ["id", *names]
        fh.write(",".join(header) + "\n")
        for i, r in enumerate(rows):
            cells = [repr(v) for v in r.tolist()]
            if ids is not None:
                cells = [str(ids[i]), *cells]
            fh.write(",".join(cells) + "\n")
