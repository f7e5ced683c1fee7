import os
import sys

import numpy as np
import pytest
from PIL import Image

sys.path.insert(0, os.path.dirname(__file__))

from dqi.cli import main as cli_main


def save_rgb(path, array):
    arr = np.rint(np.clip(array, 0, 255)).astype(np.uint8)
    Image.fromarray(arr, mode="RGB").save(path, format="PNG")


@pytest.fixture(scope="session")
def default_dataset_dir(tmp_path_factory):
    """The default 60-entry synthetic dataset, built once through the CLI."""
    out = tmp_path_factory.mktemp("default-dataset") / "data"
    rc = cli_main(["synth", "--out", str(out), "--quiet"])
    assert rc == 0
    return out


@pytest.fixture(scope="session")
def small_dataset_dir(tmp_path_factory):
    """A small, fast dataset (24 entries, 256x128 ERP) for CLI-level tests."""
    root = tmp_path_factory.mktemp("small-dataset")
    cfg = root / "synth.cfg"
    cfg.write_text(
        "seed=3\nwidth=256\nheight=128\ndisparity_levels=0,6,12,24\n"
        "distortion_levels=70,35\ncount_per_level=6\n"
    )
    out = root / "data"
    rc = cli_main(["synth", "--config", str(cfg), "--out", str(out), "--quiet"])
    assert rc == 0
    return out
