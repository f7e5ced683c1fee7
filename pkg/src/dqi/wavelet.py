"""Single-level orthonormal 2-D Haar decomposition.

Uses the 1/sqrt(2) normalization so the transform is orthonormal: subband
energies sum to the input energy and the inverse is the transpose. Odd
dimensions are edge-replicated to even before transforming.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_INV_SQRT2 = 1.0 / np.sqrt(2.0)


@dataclass(frozen=True)
class SubbandQuad:
    """The four subbands of one decomposition level, laid out [[LL, HL], [LH, HH]].

    HL is horizontally highpass / vertically lowpass; LH the converse.
    """

    ll: np.ndarray
    hl: np.ndarray
    lh: np.ndarray
    hh: np.ndarray

    def __post_init__(self):
        shapes = {self.ll.shape, self.hl.shape, self.lh.shape, self.hh.shape}
        if len(shapes) != 1:
            raise ValueError(f"subband shape mismatch: {shapes}")

    def planes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Subbands in canonical order (LL, HL, LH, HH)."""
        return self.ll, self.hl, self.lh, self.hh


def haar_decompose(plane: np.ndarray) -> SubbandQuad:
    """One level of the orthonormal 2-D Haar transform.

    Equivalent to W @ plane @ W.T with the orthonormal Haar matrix W
    (paired (1,1)/(1,-1) rows scaled by 1/sqrt(2)), read out as the four
    quadrants LL (top-left), HL (top-right), LH (bottom-left), HH.
    """
    plane = np.asarray(plane, dtype=np.float64)
    if plane.ndim != 2:
        raise ValueError(f"expected single-channel plane, got shape {plane.shape}")
    h, w = plane.shape
    if h < 2 or w < 2:
        raise ValueError(f"plane must be at least 2x2, got {w}x{h}")

    if h % 2 or w % 2:
        plane = np.pad(plane, ((0, h % 2), (0, w % 2)), mode="edge")

    lo_v = (plane[0::2, :] + plane[1::2, :]) * _INV_SQRT2
    hi_v = (plane[0::2, :] - plane[1::2, :]) * _INV_SQRT2
    ll = (lo_v[:, 0::2] + lo_v[:, 1::2]) * _INV_SQRT2
    hl = (lo_v[:, 0::2] - lo_v[:, 1::2]) * _INV_SQRT2
    lh = (hi_v[:, 0::2] + hi_v[:, 1::2]) * _INV_SQRT2
    hh = (hi_v[:, 0::2] - hi_v[:, 1::2]) * _INV_SQRT2
    return SubbandQuad(ll=ll, hl=hl, lh=lh, hh=hh)


def haar_reconstruct(quad: SubbandQuad) -> np.ndarray:
    """Invert haar_decompose; returns the (possibly padded) even-dimension plane."""
    ll, hl, lh, hh = quad.planes()
    sh, sw = ll.shape
    lo_v = np.empty((sh, 2 * sw))
    hi_v = np.empty((sh, 2 * sw))
    lo_v[:, 0::2] = (ll + hl) * _INV_SQRT2
    lo_v[:, 1::2] = (ll - hl) * _INV_SQRT2
    hi_v[:, 0::2] = (lh + hh) * _INV_SQRT2
    hi_v[:, 1::2] = (lh - hh) * _INV_SQRT2
    plane = np.empty((2 * sh, 2 * sw))
    plane[0::2, :] = (lo_v + hi_v) * _INV_SQRT2
    plane[1::2, :] = (lo_v - hi_v) * _INV_SQRT2
    return plane
