"""Correlation criteria, dataset manifests, and the split/train/test protocol.

The protocol repeatedly splits a labeled dataset 80/20, trains the SVR on
the training split, predicts the held-out split, and reports the medians
of SROCC, KROCC, and logistic-mapped PLCC across iterations. Features are
extracted once per image and reused across iterations.
"""

from __future__ import annotations

import csv
import enum
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import rankdata

from .features import ExtractionConfig, ExtractionMode, depth_features
from .image import Geometry, load_stereo
from .iqa import ImageMetric, overall_features
from .regression import (
    LogisticFit,
    SvrHyper,
    logistic_apply,
    logistic_fit,
    svr_grid_search,
    svr_predict,
    svr_train,
)

MANIFEST_COLUMNS = (
    "id", "left", "right", "ref_left", "ref_right",
    "content_id", "mos_depth", "mos_overall",
)

MIN_DATASET_SIZE = 10
MIN_TEST_SIZE = 5  # logistic-mapped PLCC needs at least 5 pairs


class InsufficientDataError(ValueError):
    """Raised when a dataset or split is too small for the protocol."""


class Task(enum.Enum):
    DEPTH = "depth"
    OVERALL = "overall"


def _as_vectors(a, b, min_len: int):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"inputs must be equal-length vectors, got {a.shape} and {b.shape}")
    if a.size < min_len:
        raise ValueError(f"need at least {min_len} samples, got {a.size}")
    return a, b


def _pearson(a: np.ndarray, b: np.ndarray) -> float:
    da = a - a.mean()
    db = b - b.mean()
    denom = np.sqrt(np.dot(da, da) * np.dot(db, db))
    if denom == 0.0:
        raise ValueError("correlation undefined for constant input")
    return float(np.dot(da, db) / denom)


def srocc(a, b) -> float:
    """Spearman rank-order correlation with fractional (mid) ranks for ties."""
    a, b = _as_vectors(a, b, 3)
    return _pearson(rankdata(a), rankdata(b))


def krocc(a, b) -> float:
    """Kendall tau-a: (concordant - discordant) / total pairs; ties count in neither."""
    a, b = _as_vectors(a, b, 2)
    n = a.size
    sign_a = np.sign(a[:, None] - a[None, :])
    sign_b = np.sign(b[:, None] - b[None, :])
    upper = np.triu_indices(n, k=1)
    numer = float(np.sum(sign_a[upper] * sign_b[upper]))
    return numer / (n * (n - 1) / 2.0)


def plcc(objective, subjective, with_mapping: bool = False) -> float:
    """Pearson correlation, optionally after the five-parameter logistic mapping."""
    objective, subjective = _as_vectors(objective, subjective, 5 if with_mapping else 3)
    if with_mapping:
        fit = logistic_fit(objective, subjective)
        objective = logistic_apply(fit, objective)
    return _pearson(objective, subjective)


@dataclass(frozen=True)
class DatasetEntry:
    """One labeled stereo image: distorted pair, optional reference pair, labels."""

    id: str
    left: str
    right: str
    content_id: str
    ref_left: str | None = None
    ref_right: str | None = None
    mos_depth: float | None = None
    mos_overall: float | None = None


@dataclass(frozen=True)
class Dataset:
    entries: tuple[DatasetEntry, ...]

    def __post_init__(self):
        ids = [e.id for e in self.entries]
        if len(set(ids)) != len(ids):
            raise ValueError("dataset entry ids must be unique")

    def __len__(self) -> int:
        return len(self.entries)

    def labels(self, task: Task) -> np.ndarray:
        out = []
        for e in self.entries:
            label = e.mos_depth if task is Task.DEPTH else e.mos_overall
            if label is None:
                raise ValueError(f"entry {e.id!r} lacks a {task.value} label")
            out.append(label)
        return np.array(out, dtype=np.float64)

    def content_ids(self) -> list[str]:
        return [e.content_id for e in self.entries]


def load_manifest(path) -> Dataset:
    """Read a dataset manifest CSV; file paths are resolved against its directory."""
    base = os.path.dirname(os.path.abspath(path))

    def resolve(p):
        return p if os.path.isabs(p) else os.path.join(base, p)

    entries = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != MANIFEST_COLUMNS:
            raise ValueError(
                f"manifest header must be {','.join(MANIFEST_COLUMNS)}, "
                f"got {reader.fieldnames}"
            )
        for row in reader:
            entry = DatasetEntry(
                id=row["id"],
                left=resolve(row["left"]),
                right=resolve(row["right"]),
                ref_left=resolve(row["ref_left"]) if row["ref_left"] else None,
                ref_right=resolve(row["ref_right"]) if row["ref_right"] else None,
                content_id=row["content_id"],
                mos_depth=float(row["mos_depth"]) if row["mos_depth"] else None,
                mos_overall=float(row["mos_overall"]) if row["mos_overall"] else None,
            )
            for p in (entry.left, entry.right, entry.ref_left, entry.ref_right):
                if p is not None and not os.path.exists(p):
                    raise ValueError(f"manifest references missing file {p!r}")
            entries.append(entry)
    return Dataset(entries=tuple(entries))


def _infer_geometry(path) -> Geometry:
    from PIL import Image

    with Image.open(path) as img:
        w, h = img.size
    return Geometry.ERP if w == 2 * h else Geometry.PLANAR


def _entry_features(entry: DatasetEntry, task: Task, config: ExtractionConfig | None,
                    metric: ImageMetric, overrides: dict | None = None) -> np.ndarray:
    geometry = _infer_geometry(entry.left)
    cfg = config or ExtractionConfig.for_geometry(geometry, **(overrides or {}))
    dist = load_stereo(entry.left, entry.right, geometry)
    if task is Task.DEPTH:
        return depth_features(dist, cfg)
    if entry.ref_left is None or entry.ref_right is None:
        raise ValueError(f"entry {entry.id!r} lacks reference paths for overall task")
    ref = load_stereo(entry.ref_left, entry.ref_right, geometry)
    return overall_features(ref, dist, metric, cfg)


def extract_dataset_features(dataset: Dataset, task: Task,
                             config: ExtractionConfig | None = None,
                             metric: ImageMetric = ImageMetric.MSSSIM,
                             threads: int = 1,
                             config_overrides: dict | None = None) -> np.ndarray:
    """Feature matrix for all entries, row order matching dataset order.

    With config None, each entry gets geometry-appropriate defaults (ERP
    aspect implies the omnidirectional mode) plus any config_overrides.
    """
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(
                lambda e: _entry_features(e, task, config, metric, config_overrides),
                dataset.entries,
            ))
    else:
        rows = [_entry_features(e, task, config, metric, config_overrides)
                for e in dataset.entries]
    return np.vstack(rows)


@dataclass(frozen=True)
class EvalReport:
    """Per-iteration correlations, their medians, and the run configuration."""

    task: str
    iterations: int
    seed: int
    split: str
    srocc: tuple[float, ...]
    krocc: tuple[float, ...]
    plcc: tuple[float, ...]
    median_srocc: float
    median_krocc: float
    median_plcc: float
    config: dict = field(default_factory=dict)

    def to_json(self) -> str:
        doc = {
            "format": "dqi-report/1",
            "task": self.task,
            "iterations": self.iterations,
            "seed": self.seed,
            "split": self.split,
            "median_srocc": self.median_srocc,
            "median_krocc": self.median_krocc,
            "median_plcc": self.median_plcc,
            "per_iteration": {
                "srocc": list(self.srocc),
                "krocc": list(self.krocc),
                "plcc": list(self.plcc),
            },
            "config": self.config,
        }
        return json.dumps(doc, indent=1, sort_keys=True) + "\n"

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())


def _split_indices(n: int, rng: np.random.Generator, groups: list[str] | None,
                   train_fraction: float):
    if groups is None:
        perm = rng.permutation(n)
        n_train = int(round(train_fraction * n))
        n_train = min(max(n_train, 1), n - 1)
        return perm[:n_train], perm[n_train:]
    unique = sorted(set(groups))
    perm = rng.permutation(len(unique))
    n_train = int(round(train_fraction * len(unique)))
    n_train = min(max(n_train, 1), len(unique) - 1)
    train_groups = {unique[i] for i in perm[:n_train]}
    idx = np.arange(n)
    mask = np.array([g in train_groups for g in groups])
    return idx[mask], idx[~mask]


def run_protocol_on_features(features, labels, iterations: int, seed: int,
                             groups: list[str] | None = None,
                             hyper: SvrHyper | None = None,
                             grid_search: bool = False,
                             train_fraction: float = 0.8,
                             threads: int = 1):
    """The split/train/test loop on a precomputed feature matrix.

    Every iteration derives its own RNG from (seed, iteration), so results
    are independent of execution order and thread count. Returns three
    per-iteration lists (srocc, krocc, plcc-with-mapping).
    """
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    n = features.shape[0]
    if n < MIN_DATASET_SIZE:
        raise InsufficientDataError(f"protocol needs >= {MIN_DATASET_SIZE} entries, got {n}")

    def one_iteration(i: int):
        rng = np.random.default_rng([int(seed), int(i)])
        train_idx, test_idx = _split_indices(n, rng, groups, train_fraction)
        if len(test_idx) < MIN_TEST_SIZE or len(train_idx) < 2:
            raise InsufficientDataError(
                f"iteration {i}: split sizes {len(train_idx)}/{len(test_idx)} too small"
            )
        h = hyper
        if grid_search:
            h = svr_grid_search(features[train_idx], labels[train_idx], hyper)
        model = svr_train(features[train_idx], labels[train_idx], h)
        pred = svr_predict(model, features[test_idx])
        truth = labels[test_idx]
        return (srocc(pred, truth), krocc(pred, truth), plcc(pred, truth, with_mapping=True))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one_iteration, range(iterations)))
    else:
        results = [one_iteration(i) for i in range(iterations)]

    sroccs = [r[0] for r in results]
    kroccs = [r[1] for r in results]
    plccs = [r[2] for r in results]
    return sroccs, kroccs, plccs


def run_protocol(dataset: Dataset, task: Task, iterations: int, seed: int,
                 split: str = "random",
                 hyper: SvrHyper | None = None,
                 grid_search: bool = False,
                 config: ExtractionConfig | None = None,
                 metric: ImageMetric = ImageMetric.MSSSIM,
                 threads: int = 1,
                 config_overrides: dict | None = None) -> EvalReport:
    """Run the 80/20 split protocol end to end on a labeled dataset."""
    if split not in ("random", "by-content"):
        raise ValueError(f"unknown split mode {split!r}")
    if len(dataset) < MIN_DATASET_SIZE:
        raise InsufficientDataError(
            f"protocol needs >= {MIN_DATASET_SIZE} entries, got {len(dataset)}"
        )
    labels = dataset.labels(task)
    features = extract_dataset_features(dataset, task, config, metric, threads,
                                        config_overrides)
    groups = dataset.content_ids() if split == "by-content" else None

    sroccs, kroccs, plccs = run_protocol_on_features(
        features, labels, iterations, seed, groups=groups,
        hyper=hyper, grid_search=grid_search, threads=threads,
    )

    used_hyper = hyper or SvrHyper()
    if config is not None:
        extraction = {
            "mode": config.mode.value,
            "sampling": f"{config.sampling.kind}:{config.sampling.n}",
            "fov": config.fov,
            "out_size": config.out_size,
            "entropy_bins": config.entropy_bins,
        }
    else:
        extraction = {"mode": "auto", **(config_overrides or {})}
        if "sampling" in extraction:
            s = extraction["sampling"]
            extraction["sampling"] = f"{s.kind}:{s.n}"
    echo = {
        "metric": metric.value,
        "grid_search": grid_search,
        "hyper": {"C": used_hyper.C, "epsilon": used_hyper.epsilon,
                  "gamma": used_hyper.gamma},
        "extraction": extraction,
    }
    return EvalReport(
        task=task.value,
        iterations=iterations,
        seed=seed,
        split=split,
        srocc=tuple(sroccs),
        krocc=tuple(kroccs),
        plcc=tuple(plccs),
        median_srocc=float(np.median(sroccs)),
        median_krocc=float(np.median(kroccs)),
        median_plcc=float(np.median(plccs)),
        config=echo,
    )
