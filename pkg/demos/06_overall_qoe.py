"""Depth-guided overall QoE: combining local image quality with depth features.

The overall label of the synthetic dataset blends distortion quality and
disparity, so neither the 2-value image-quality features nor the 24-value
depth features explain it alone. Concatenating them (the 26-value overall
vector) clearly outperforms both ablations under identical splits.
"""

import tempfile

import numpy as np

from dqi import (
    ImageMetric,
    SynthConfig,
    Task,
    build_dataset,
    extract_dataset_features,
    run_protocol_on_features,
)

with tempfile.TemporaryDirectory() as workdir:
    config = SynthConfig(seed=13, width=256, height=128,
                         disparity_levels=(0, 6, 12, 24),
                         distortion_levels=(80.0, 30.0))
    dataset = build_dataset(config, count_per_level=6, out_dir=workdir)
    labels = dataset.labels(Task.OVERALL)
    # PSNR keeps this demo fast; MS-SSIM needs >= 176 px viewports
    features = extract_dataset_features(dataset, Task.OVERALL,
                                        metric=ImageMetric.PSNR)
    print(f"{len(dataset)} entries, overall labels in "
          f"[{labels.min():.2f}, {labels.max():.2f}]")

    print(f"\n{'feature set':>24} | median SROCC over 50 splits")
    print("-" * 52)
    for name, columns in (("local PSNR only (2)", slice(0, 2)),
                          ("depth features only (24)", slice(2, 26)),
                          ("combined overall (26)", slice(0, 26))):
        sroccs, _, _ = run_protocol_on_features(
            features[:, columns], labels, iterations=50, seed=21
        )
        print(f"{name:>24} | {np.median(sroccs):.4f}")

print("\nThe combined vector wins because the two blocks carry the two")
print("independent axes of the ground truth: distortion and parallax.")
