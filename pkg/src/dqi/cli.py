"""Command-line entry point: scoring, training, evaluation, synthesis.

Exit codes: 0 success, 2 usage/input error, 3 model/feature-dimension
mismatch, 4 insufficient data. Scores are printed to stdout as a final
``score=<value>`` line (6 significant digits); human-oriented log lines go
to stderr.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .evaluation import (
    InsufficientDataError,
    Task,
    extract_dataset_features,
    load_manifest,
    run_protocol,
    srocc,
    plcc,
)
from .features import ExtractionConfig, depth_features
from .geometry import SamplingScheme
from .image import Geometry, load_stereo
from .iqa import ImageMetric, overall_features
from .regression import (
    SvrHyper,
    load_model,
    save_model,
    svr_grid_search,
    svr_predict,
    svr_train,
)
from .synth import DistortionKind, SynthConfig, build_dataset


class ModelMismatchError(Exception):
    """Model feature dimension does not fit the requested command."""


def _log(args, message: str) -> None:
    if not getattr(args, "quiet", False):
        print(message, file=sys.stderr)


def _parse_sampling(text: str) -> SamplingScheme:
    if text == "six":
        return SamplingScheme.nonuniform_six()
    if text.startswith("equatorial"):
        suffix = text[len("equatorial"):]
        return SamplingScheme.equatorial(int(suffix) if suffix else 4)
    raise ValueError(f"unknown sampling scheme {text!r}")


def _extraction_kwargs(args) -> dict:
    kwargs = {}
    if getattr(args, "sampling", None):
        kwargs["sampling"] = _parse_sampling(args.sampling)
    if getattr(args, "fov", None) is not None:
        kwargs["fov"] = args.fov
    if getattr(args, "out_size", None) is not None:
        kwargs["out_size"] = args.out_size
    return kwargs


def _hyper_from_args(args) -> SvrHyper:
    return SvrHyper(C=args.svr_c, epsilon=args.svr_epsilon, gamma=args.svr_gamma)


def _load_model_checked(path, expected_dim: int):
    model = load_model(path)
    if model.feature_dim != expected_dim:
        raise ModelMismatchError(
            f"model has feature_dim {model.feature_dim}, command needs {expected_dim}"
        )
    return model


def _dump_features(vector: np.ndarray) -> None:
    print(",".join(f"{v:.6g}" for v in vector))


def _cmd_score_depth(args) -> int:
    geometry = Geometry(args.geometry)
    config = ExtractionConfig.for_geometry(geometry, **_extraction_kwargs(args))
    model = _load_model_checked(args.model, 24)
    stereo = load_stereo(args.left, args.right, geometry)
    feats = depth_features(stereo, config)
    if args.dump_features:
        _dump_features(feats)
    score = svr_predict(model, feats)
    print(f"score={score:.6g}")
    return 0


def _cmd_score_overall(args) -> int:
    geometry = Geometry(args.geometry)
    config = ExtractionConfig.for_geometry(geometry, **_extraction_kwargs(args))
    model = _load_model_checked(args.model, 26)
    dist = load_stereo(args.left, args.right, geometry)
    ref = load_stereo(args.ref_left, args.ref_right, geometry)
    feats = overall_features(ref, dist, ImageMetric(args.metric), config)
    if args.dump_features:
        _dump_features(feats)
    score = svr_predict(model, feats)
    print(f"score={score:.6g}")
    return 0


def _cmd_train(args) -> int:
    dataset = load_manifest(args.manifest)
    task = Task(args.task)
    labels = dataset.labels(task)
    _log(args, f"extracting features for {len(dataset)} entries")
    features = extract_dataset_features(
        dataset, task, metric=ImageMetric(args.metric), threads=args.threads,
        config_overrides=_extraction_kwargs(args),
    )
    hyper = _hyper_from_args(args)
    if args.grid_search:
        hyper = svr_grid_search(features, labels, hyper)
        _log(args, f"grid search selected C={hyper.C:.6g} gamma={hyper.gamma:.6g}")
    model = svr_train(features, labels, hyper)
    save_model(model, args.out)
    pred = svr_predict(model, features)
    print(f"train_srocc={srocc(pred, labels):.6g}")
    print(f"train_plcc={plcc(pred, labels, with_mapping=True):.6g}")
    _log(args, f"model written to {args.out}")
    return 0


def _cmd_evaluate(args) -> int:
    dataset = load_manifest(args.manifest)
    report = run_protocol(
        dataset,
        Task(args.task),
        iterations=args.iterations,
        seed=args.seed,
        split=args.split,
        hyper=_hyper_from_args(args),
        grid_search=args.grid_search,
        metric=ImageMetric(args.metric),
        threads=args.threads,
        config_overrides=_extraction_kwargs(args),
    )
    report.write(args.report)
    print(f"median_srocc={report.median_srocc:.6g}")
    print(f"median_krocc={report.median_krocc:.6g}")
    print(f"median_plcc={report.median_plcc:.6g}")
    _log(args, f"report written to {args.report}")
    return 0


_SYNTH_KEYS = ("seed", "geometry", "width", "height", "disparity_levels",
               "distortion", "distortion_levels", "symmetric", "count_per_level")


def _read_synth_config(path) -> dict:
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in _SYNTH_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = value.strip()
    return values


def _cmd_synth(args) -> int:
    raw = _read_synth_config(args.config) if args.config else {}
    config = SynthConfig(
        seed=int(raw.get("seed", args.seed)),
        geometry=Geometry(raw.get("geometry", "erp")),
        width=int(raw.get("width", 512)),
        height=int(raw.get("height", 256)),
        disparity_levels=tuple(
            int(v) for v in raw.get("disparity_levels", "0,4,8,16,32").split(",")
        ),
        distortion_kind=DistortionKind(raw.get("distortion", "jpeg_like")),
        distortion_levels=tuple(
            float(v) for v in raw.get("distortion_levels", "60,30").split(",")
        ),
        symmetric=raw.get("symmetric", "true").lower() in ("true", "1", "yes"),
    )
    count_per_level = int(raw.get("count_per_level", 12))
    dataset = build_dataset(config, count_per_level, args.out)
    print(f"entries={len(dataset)}")
    print(f"manifest={args.out}/manifest.csv")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed")
    common.add_argument("--threads", type=int, default=1,
                        help="worker threads (results are thread-count independent)")
    common.add_argument("--quiet", action="store_true", help="suppress log lines")

    viewport = argparse.ArgumentParser(add_help=False)
    viewport.add_argument("--sampling", choices=["equatorial4", "six"], default=None,
                          help="viewport sampling scheme for ERP inputs")
    viewport.add_argument("--fov", type=float, default=None, help="viewport fov, degrees")
    viewport.add_argument("--out-size", type=int, default=None, dest="out_size",
                          help="viewport resolution, pixels")

    hyper = argparse.ArgumentParser(add_help=False)
    hyper.add_argument("--svr-c", type=float, default=100.0, dest="svr_c")
    hyper.add_argument("--svr-epsilon", type=float, default=0.1, dest="svr_epsilon")
    hyper.add_argument("--svr-gamma", type=float, default=None, dest="svr_gamma")
    hyper.add_argument("--grid-search", action="store_true", dest="grid_search")

    parser = argparse.ArgumentParser(
        prog="dqi",
        description="Depth quality index for stereoscopic omnidirectional and 3D images",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score-depth", parents=[common, viewport],
                       help="predict depth quality of one stereo pair")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--geometry", choices=["erp", "planar"], required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--dump-features", action="store_true", dest="dump_features")
    p.set_defaults(handler=_cmd_score_depth)

    p = sub.add_parser("score-overall", parents=[common, viewport],
                       help="predict overall QoE of one stereo pair")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--ref-left", required=True, dest="ref_left")
    p.add_argument("--ref-right", required=True, dest="ref_right")
    p.add_argument("--geometry", choices=["erp", "planar"], required=True)
    p.add_argument("--metric", choices=["psnr", "msssim"], default="msssim")
    p.add_argument("--model", required=True)
    p.add_argument("--dump-features", action="store_true", dest="dump_features")
    p.set_defaults(handler=_cmd_score_overall)

    p = sub.add_parser("train", parents=[common, viewport, hyper],
                       help="train a model on every manifest row")
    p.add_argument("--manifest", required=True)
    p.add_argument("--task", choices=["depth", "overall"], required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--metric", choices=["psnr", "msssim"], default="msssim")
    p.set_defaults(handler=_cmd_train)

    p = sub.add_parser("evaluate", parents=[common, viewport, hyper],
                       help="run the split/train/test protocol and write a report")
    p.add_argument("--manifest", required=True)
    p.add_argument("--task", choices=["depth", "overall"], required=True)
    p.add_argument("--iterations", type=int, default=1000)
    p.add_argument("--split", choices=["random", "by-content"], default="random")
    p.add_argument("--report", required=True)
    p.add_argument("--metric", choices=["psnr", "msssim"], default="msssim")
    p.set_defaults(handler=_cmd_evaluate)

    p = sub.add_parser("synth", parents=[common],
                       help="generate a labeled synthetic dataset")
    p.add_argument("--config", default=None, help="flat key=value config file")
    p.add_argument("--out", required=True)
    p.set_defaults(handler=_cmd_synth)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ModelMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except InsufficientDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
