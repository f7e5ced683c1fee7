"""Epsilon-SVR quality regression and the five-parameter logistic mapping.

The SVR dual problem is solved with libsvm's SMO implementation (via
scikit-learn, KKT tolerance 1e-3); the trained model is extracted into a
self-contained SvrModel holding support vectors, dual coefficients, bias,
and the z-score normalization, so prediction and serialization do not
depend on the solver. The logistic mapping follows standard VQEG practice
and is fitted by Nelder-Mead simplex descent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from sklearn.svm import SVR as _SklearnSVR

MODEL_FORMAT = "dqi-svr/1"

GRID_SEARCH_CS = (1.0, 10.0, 100.0, 1000.0)


class ModelFormatError(ValueError):
    """Raised when a model file is corrupt or has the wrong schema."""


@dataclass(frozen=True)
class SvrHyper:
    """Hyperparameters of the epsilon-SVR; gamma None means 1/feature_dim."""

    C: float = 100.0
    epsilon: float = 0.1
    gamma: float | None = None

    def resolve_gamma(self, feature_dim: int) -> float:
        return self.gamma if self.gamma is not None else 1.0 / feature_dim


@dataclass(frozen=True)
class SvrModel:
    """Self-contained RBF epsilon-SVR model.

    Feature normalization (training-set z-score) is stored with the model;
    zero-variance features keep stddev 1 and are flagged so prediction
    leaves them centered at zero.
    """

    support_vectors: np.ndarray  # (n_sv, feature_dim), normalized space
    dual_coefficients: np.ndarray  # (n_sv,)
    bias: float
    gamma: float
    feature_dim: int
    norm_mean: np.ndarray  # (feature_dim,)
    norm_std: np.ndarray  # (feature_dim,), zero-variance entries stored as 1
    zero_variance: np.ndarray  # (feature_dim,) bool flags
    kernel: str = "rbf"
    hyper: SvrHyper = field(default_factory=SvrHyper)

    def __post_init__(self):
        if self.kernel != "rbf":
            raise ValueError(f"unsupported kernel {self.kernel!r}")
        if self.support_vectors.ndim != 2 or self.support_vectors.shape[1] != self.feature_dim:
            raise ValueError("support vector width must equal feature_dim")
        if self.dual_coefficients.shape != (self.support_vectors.shape[0],):
            raise ValueError("one dual coefficient per support vector required")
        if np.any(np.abs(self.dual_coefficients) > self.hyper.C * (1 + 1e-9)):
            raise ValueError("dual coefficients must satisfy |alpha| <= C")
        if np.any(self.norm_std <= 0):
            raise ValueError("stored normalization stddevs must be positive")


def _validate_training_input(features: np.ndarray, labels: np.ndarray):
    if features.ndim != 2:
        raise ValueError(f"feature matrix must be 2-D, got shape {features.shape}")
    if features.shape[0] < 2:
        raise ValueError("need at least 2 training rows")
    if labels.shape != (features.shape[0],):
        raise ValueError("one label per training row required")
    if not np.all(np.isfinite(features)) or not np.all(np.isfinite(labels)):
        raise ValueError("training data must be finite")


def svr_train(features, labels, hyper: SvrHyper | None = None) -> SvrModel:
    """Fit an RBF epsilon-SVR on z-score-normalized features.

    Normalization statistics come from the training set and travel with
    the returned model.
    """
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    _validate_training_input(features, labels)
    hyper = hyper or SvrHyper()

    mean = features.mean(axis=0)
    std = features.std(axis=0)
    zero_variance = std == 0.0
    std = np.where(zero_variance, 1.0, std)
    normalized = (features - mean) / std

    gamma = hyper.resolve_gamma(features.shape[1])
    solver = _SklearnSVR(kernel="rbf", C=hyper.C, epsilon=hyper.epsilon,
                         gamma=gamma, tol=1e-3)
    solver.fit(normalized, labels)

    return SvrModel(
        support_vectors=np.array(solver.support_vectors_, dtype=np.float64),
        dual_coefficients=np.array(solver.dual_coef_[0], dtype=np.float64),
        bias=float(solver.intercept_[0]),
        gamma=gamma,
        feature_dim=features.shape[1],
        norm_mean=mean,
        norm_std=std,
        zero_variance=zero_variance,
        hyper=hyper,
    )


def svr_predict(model: SvrModel, features) -> float | np.ndarray:
    """Evaluate sum_i alpha_i * K(x_i, x) + b on normalized input.

    Accepts a single feature vector (returns float) or a matrix of rows
    (returns an array).
    """
    x = np.asarray(features, dtype=np.float64)
    single = x.ndim == 1
    if single:
        x = x[None, :]
    if x.ndim != 2 or x.shape[1] != model.feature_dim:
        raise ValueError(
            f"feature width {x.shape[-1] if x.ndim else 0} does not match "
            f"model feature_dim {model.feature_dim}"
        )
    z = (x - model.norm_mean) / model.norm_std
    sq_dist = (
        np.sum(z**2, axis=1)[:, None]
        + np.sum(model.support_vectors**2, axis=1)[None, :]
        - 2.0 * z @ model.support_vectors.T
    )
    kernel = np.exp(-model.gamma * np.maximum(sq_dist, 0.0))
    out = kernel @ model.dual_coefficients + model.bias
    return float(out[0]) if single else out


def _kfold_slices(n: int, folds: int):
    sizes = np.full(folds, n // folds)
    sizes[: n % folds] += 1
    stop = np.cumsum(sizes)
    start = stop - sizes
    return [(int(a), int(b)) for a, b in zip(start, stop)]


def svr_grid_search(features, labels, hyper: SvrHyper | None = None,
                    folds: int = 5) -> SvrHyper:
    """Pick (C, gamma) by k-fold cross-validated MSE on the given rows only.

    The grid is C in {1, 10, 100, 1000} and gamma in {0.01, 1/d, 0.1, 1};
    epsilon is taken from the incoming hyperparameters. Folds are
    contiguous in the given row order, so the search is deterministic.
    """
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    _validate_training_input(features, labels)
    base = hyper or SvrHyper()
    folds = min(folds, features.shape[0])
    gammas = (0.01, 1.0 / features.shape[1], 0.1, 1.0)

    best = None
    best_mse = np.inf
    for c in GRID_SEARCH_CS:
        for g in gammas:
            candidate = SvrHyper(C=c, epsilon=base.epsilon, gamma=g)
            errs = []
            for a, b in _kfold_slices(features.shape[0], folds):
                mask = np.ones(features.shape[0], dtype=bool)
                mask[a:b] = False
                if mask.sum() < 2 or (~mask).sum() < 1:
                    continue
                model = svr_train(features[mask], labels[mask], candidate)
                pred = svr_predict(model, features[~mask])
                errs.append(np.mean((pred - labels[~mask]) ** 2))
            mse = float(np.mean(errs))
            if mse < best_mse:
                best_mse = mse
                best = candidate
    return best


def save_model(model: SvrModel, path) -> None:
    """Write the model as a versioned JSON document (bit-exact round-trip)."""
    doc = {
        "format": MODEL_FORMAT,
        "kernel": model.kernel,
        "gamma": model.gamma,
        "bias": model.bias,
        "feature_dim": model.feature_dim,
        "hyper": {"C": model.hyper.C, "epsilon": model.hyper.epsilon,
                  "gamma": model.hyper.gamma},
        "norm_mean": model.norm_mean.tolist(),
        "norm_std": model.norm_std.tolist(),
        "zero_variance": model.zero_variance.astype(int).tolist(),
        "support_vectors": model.support_vectors.tolist(),
        "dual_coefficients": model.dual_coefficients.tolist(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_model(path) -> SvrModel:
    """Read a model written by save_model; raises ModelFormatError on damage."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ModelFormatError(f"not a valid model file: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != MODEL_FORMAT:
        raise ModelFormatError(
            f"unsupported model format {doc.get('format') if isinstance(doc, dict) else doc!r}"
        )
    try:
        hyper = SvrHyper(C=doc["hyper"]["C"], epsilon=doc["hyper"]["epsilon"],
                         gamma=doc["hyper"]["gamma"])
        return SvrModel(
            support_vectors=np.array(doc["support_vectors"], dtype=np.float64),
            dual_coefficients=np.array(doc["dual_coefficients"], dtype=np.float64),
            bias=float(doc["bias"]),
            gamma=float(doc["gamma"]),
            feature_dim=int(doc["feature_dim"]),
            norm_mean=np.array(doc["norm_mean"], dtype=np.float64),
            norm_std=np.array(doc["norm_std"], dtype=np.float64),
            zero_variance=np.array(doc["zero_variance"], dtype=bool),
            kernel=doc["kernel"],
            hyper=hyper,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"malformed model document: {exc}") from exc


@dataclass(frozen=True)
class LogisticFit:
    """The five fitted parameters of the monotone logistic mapping."""

    beta: tuple[float, float, float, float, float]

    def __post_init__(self):
        if len(self.beta) != 5 or not np.all(np.isfinite(self.beta)):
            raise ValueError("beta must be 5 finite values")


def logistic_apply(fit: LogisticFit, u):
    """b1*(1/2 - 1/(1 + exp(b2*(u - b3)))) + b4*u + b5, elementwise."""
    b1, b2, b3, b4, b5 = fit.beta
    u = np.asarray(u, dtype=np.float64)
    with np.errstate(over="ignore"):
        sigmoid = 1.0 / (1.0 + np.exp(b2 * (u - b3)))
    out = b1 * (0.5 - sigmoid) + b4 * u + b5
    return float(out) if out.ndim == 0 else out


def _sse(beta, u, g):
    fit = LogisticFit(beta=tuple(float(b) for b in beta))
    resid = logistic_apply(fit, u) - g
    return float(np.dot(resid, resid))


def logistic_fit(objective, subjective) -> LogisticFit:
    """Least-squares fit of the five-parameter logistic mapping.

    Runs Nelder-Mead from the conventional initialization (range of the
    subjective scores, inverse objective spread, objective mean, zero
    slope, subjective mean) and from the closed-form affine fit, keeping
    whichever candidate reaches the lower residual.
    """
    u = np.asarray(objective, dtype=np.float64)
    g = np.asarray(subjective, dtype=np.float64)
    if u.shape != g.shape or u.ndim != 1:
        raise ValueError("objective and subjective must be equal-length vectors")
    if u.size < 5:
        raise ValueError("need at least 5 samples to fit 5 parameters")
    if np.std(u) == 0.0:
        raise ValueError("objective scores are constant")

    slope, intercept = np.polyfit(u, g, 1)
    starts = [
        np.array([g.max() - g.min(), 1.0 / np.std(u), np.mean(u), 0.0, np.mean(g)]),
        np.array([0.0, 1.0 / np.std(u), np.mean(u), slope, intercept]),
    ]
    candidates = [np.array([0.0, 1.0, 0.0, slope, intercept])]
    for x0 in starts:
        res = minimize(
            _sse, x0, args=(u, g), method="Nelder-Mead",
            options={"maxfev": 10000, "xatol": 1e-9, "fatol": 1e-12},
        )
        if np.all(np.isfinite(res.x)):
            candidates.append(res.x)

    best = min(candidates, key=lambda beta: _sse(beta, u, g))
    return LogisticFit(beta=tuple(float(b) for b in best))
