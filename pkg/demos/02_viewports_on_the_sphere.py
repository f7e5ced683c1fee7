"""Equatorial viewport sampling and gnomonic extraction from ERP planes.

Walks through the two sampling schemes, then demonstrates two properties
of the extractor: viewports of a constant plane are constant, and rotating
the ERP plane while shifting the viewport centers by the same angle leaves
the rendered viewports unchanged.
"""

import numpy as np

from dqi import (
    ViewportSpec,
    equatorial_centers,
    extract_viewport,
    nonuniform_six_centers,
)

print("equatorial sampling, n=4 (the default):")
for spec in equatorial_centers(4):
    print(f"  lon={spec.center_longitude:6.1f}  lat={spec.center_latitude:5.1f}"
          f"  fov={spec.fov:.0f}")

print("\nlegacy non-uniform six (equator + both poles):")
for spec in nonuniform_six_centers():
    print(f"  lon={spec.center_longitude:6.1f}  lat={spec.center_latitude:5.1f}")

rng = np.random.default_rng(0)
plane = rng.random((128, 256)) * 100.0

viewport = extract_viewport(plane, ViewportSpec(45.0, 0.0, fov=90.0, out_size=64))
print(f"\n64x64 viewport at lon=45: values within "
      f"[{viewport.min():.2f}, {viewport.max():.2f}]"
      f" (plane range [{plane.min():.2f}, {plane.max():.2f}])")

constant = extract_viewport(np.full((128, 256), 3.25), ViewportSpec(10.0, 0.0))
print(f"constant plane stays constant: min={constant.min()}, max={constant.max()}")

# rotate the plane by 32 columns = 45 degrees of longitude
rolled = np.roll(plane, 32, axis=1)
moved = extract_viewport(rolled, ViewportSpec(90.0, 0.0, fov=90.0, out_size=64))
print(f"longitude equivariance: max |difference| = "
      f"{np.abs(viewport - moved).max():.2e}")
