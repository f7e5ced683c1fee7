"""From discrepancy viewports to the 24-value depth feature vector.

Shows the single-level Haar decomposition (energy conservation makes the
orthonormal convention easy to sanity-check), the per-subband statistics,
and the canonical feature layout used everywhere else in the package.
"""

import numpy as np

from dqi import (
    DEPTH_FEATURE_NAMES,
    Geometry,
    depth_features,
    generate_texture,
    haar_decompose,
    render_stereopair,
    subband_entropy,
    subband_std,
)

rng = np.random.default_rng(1)
plane = rng.random((64, 64)) * 50.0
quad = haar_decompose(plane)

print("single-level Haar decomposition of a 64x64 plane:")
energy_in = np.sum(plane**2)
energy_out = sum(np.sum(s**2) for s in quad.planes())
for name, subband in zip(("LL", "HL", "LH", "HH"), quad.planes()):
    print(f"  {name}: shape {subband.shape}, std {subband_std(subband):8.3f}, "
          f"entropy {subband_entropy(subband, 256):6.3f} bits")
print(f"  energy in/out: {energy_in:.6e} / {energy_out:.6e} "
      f"(relative gap {abs(energy_in - energy_out) / energy_in:.1e})")

texture = generate_texture(seed=3, width=512, height=256)
pair = render_stereopair(texture, 16, Geometry.ERP)
features = depth_features(pair)

print("\ndepth feature vector of a 16 px disparity pair "
      "(std block, then entropy block):")
for i in range(0, 24, 4):
    chunk = ", ".join(
        f"{name}={value:7.3f}"
        for name, value in zip(DEPTH_FEATURE_NAMES[i : i + 4], features[i : i + 4])
    )
    print(f"  {chunk}")
