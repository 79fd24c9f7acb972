"""From-scratch multi-class models over averaged traces and band features.

Two model families cover the attacks: softmax regression trained by
full-batch gradient descent on z-scored features, and a nearest-centroid
matcher that scores classes by maximal Pearson correlation over rotational
shifts (robust to the rotation normalization of averaged traces).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dsp import max_corr_shift
from .errors import FormatError, IoError, ParamError

CENTROID_TEMPERATURE = 10.0


@dataclass(frozen=True)
class LabeledDataset:
    features: np.ndarray      # (n, feature_len)
    labels: np.ndarray        # (n,) class ids
    screen_ids: list          # length n
    label_names: list

    def __post_init__(self):
        X = np.asarray(self.features, dtype=np.float64)
        y = np.asarray(self.labels, dtype=np.int64)
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", y)
        if X.ndim != 2 or len(X) != len(y) or len(y) != len(self.screen_ids):
            raise ParamError("features, labels, screen_ids must align")
        if not np.all(np.isfinite(X)):
            raise ParamError("features must be finite")
        if len(y) and (y.min() < 0 or y.max() >= len(self.label_names)):
            raise ParamError("label ids out of range")

    @property
    def feature_len(self) -> int:
        return self.features.shape[1]

    def take(self, indices) -> "LabeledDataset":
        idx = np.asarray(indices, dtype=np.int64)
        return LabeledDataset(self.features[idx], self.labels[idx],
                              [self.screen_ids[i] for i in idx], self.label_names)


@dataclass(frozen=True)
class SoftmaxModel:
    weights: np.ndarray       # (classes, feature_len + 1), bias last
    mu: np.ndarray            # training-set feature means
    sigma: np.ndarray         # training-set feature stds (zeros replaced by 1)
    label_names: list
    train_meta: dict = field(default_factory=dict)

    @property
    def feature_len(self) -> int:
        return self.weights.shape[1] - 1


@dataclass(frozen=True)
class CentroidModel:
    centroids: np.ndarray     # (classes, feature_len), standardized
    label_names: list

    @property
    def feature_len(self) -> int:
        return self.centroids.shape[1]


@dataclass(frozen=True)
class EvalReport:
    accuracy: float
    per_class_accuracy: np.ndarray
    confusion: np.ndarray
    thresholded: tuple | None = None  # (threshold, precision, recall)


@dataclass(frozen=True)
class MixSpec:
    per_screen_quota: dict    # screen_id -> samples per class
    exclude: frozenset = frozenset()

    def __post_init__(self):
        if any(q < 1 for q in self.per_screen_quota.values()):
            raise ParamError("quotas must be at least 1")


def _softmax_rows(z):
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def _design(model: SoftmaxModel, X):
    Xs = (X - model.mu) / model.sigma
    return np.hstack([Xs, np.ones((len(Xs), 1))])


def train_softmax(data: LabeledDataset, epochs: int = 300, learn_rate: float = 1.0,
                  seed: int = 0) -> SoftmaxModel:
    """Full-batch gradient descent on multinomial cross-entropy.  The step
    halves whenever it would increase the loss, so the loss trajectory is
    non-increasing; features are z-scored with statistics kept in the model."""
    classes = len(data.label_names)
    if classes < 2:
        raise ParamError("need at least 2 classes")
    counts = np.bincount(data.labels, minlength=classes)
    if counts.min() < 2:
        raise ParamError("need at least 2 samples per class")

    mu = data.features.mean(axis=0)
    sigma = data.features.std(axis=0)
    sigma = np.where(sigma == 0, 1.0, sigma)
    X = np.hstack([(data.features - mu) / sigma,
                   np.ones((len(data.features), 1))])
    n, d1 = X.shape
    Y = np.zeros((n, classes))
    Y[np.arange(n), data.labels] = 1.0

    rng = np.random.default_rng(seed)
    W = 0.01 * rng.standard_normal((classes, d1))
    lr = float(learn_rate)

    def loss_of(weights):
        P = _softmax_rows(X @ weights.T)
        return float(-np.mean(np.log(P[np.arange(n), data.labels] + 1e-300)))

    loss = loss_of(W)
    for _ in range(epochs):
        P = _softmax_rows(X @ W.T)
        grad = (P - Y).T @ X / n
        while lr > 1e-12:
            W_new = W - lr * grad
            new_loss = loss_of(W_new)
            if new_loss <= loss:
                W, loss = W_new, new_loss
                break
            lr *= 0.5
        if lr <= 1e-12:
            break

    meta = {"epochs": epochs, "learn_rate": lr, "final_loss": loss}
    return SoftmaxModel(W, mu, sigma, list(data.label_names), meta)


def train_centroid(data: LabeledDataset) -> CentroidModel:
    """Per class: rotationally align every trace to the class's first trace,
    average, standardize."""
    classes = len(data.label_names)
    centroids = np.zeros((classes, data.feature_len))
    for c in range(classes):
        rows = np.nonzero(data.labels == c)[0]
        if len(rows) == 0:
            raise ParamError(f"class {data.label_names[c]!r} has no samples")
        ref = data.features[rows[0]]
        acc = ref.copy()
        for i in rows[1:]:
            shift, _ = max_corr_shift(ref, data.features[i])
            acc += np.roll(data.features[i], -shift)
        mean = acc / len(rows)
        mean = mean - mean.mean()
        norm = np.linalg.norm(mean)
        centroids[c] = mean / norm if norm > 0 else mean
    return CentroidModel(centroids, list(data.label_names))


def predict_proba(model, features) -> np.ndarray:
    x = np.asarray(features, dtype=np.float64)
    if x.ndim != 1:
        raise ParamError("predict_proba takes a single feature vector")
    if x.shape[0] != model.feature_len:
        raise ParamError(f"feature length {x.shape[0]} != model {model.feature_len}")
    if isinstance(model, SoftmaxModel):
        return _softmax_rows(_design(model, x[None, :]) @ model.weights.T)[0]
    if isinstance(model, CentroidModel):
        corrs = np.array([max_corr_shift(c, x)[1] for c in model.centroids])
        return _softmax_rows(CENTROID_TEMPERATURE * corrs[None, :])[0]
    raise ParamError(f"unknown model type {type(model).__name__}")


def predict_confident(model, features, threshold: float):
    """(label_name, confidence) for the argmax class when its probability
    clears the threshold, else None."""
    if not 0.0 <= threshold < 1.0:
        raise ParamError("threshold must be in [0, 1)")
    probs = predict_proba(model, features)
    best = int(np.argmax(probs))
    if probs[best] >= threshold or threshold == 0.0:
        return model.label_names[best], float(probs[best])
    return None


def predict_proba_batch(model, X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if isinstance(model, SoftmaxModel):
        return _softmax_rows(_design(model, X) @ model.weights.T)
    return np.vstack([predict_proba(model, x) for x in X])


def evaluate(model, data: LabeledDataset, threshold: float | None = None) -> EvalReport:
    if len(data.labels) == 0:
        raise ParamError("empty evaluation set")
    name_to_id = {n: i for i, n in enumerate(model.label_names)}
    if not set(data.label_names) <= set(model.label_names):
        raise ParamError("evaluation labels outside the model's classes")
    target = np.array([name_to_id[data.label_names[lab]] for lab in data.labels])

    probs = predict_proba_batch(model, data.features)
    pred = probs.argmax(axis=1)
    classes = len(model.label_names)
    confusion = np.zeros((classes, classes), dtype=np.int64)
    for t, p in zip(target, pred):
        confusion[t, p] += 1
    accuracy = float(np.trace(confusion) / confusion.sum())
    with np.errstate(invalid="ignore"):
        per_class = np.where(confusion.sum(axis=1) > 0,
                             np.diag(confusion) / np.maximum(confusion.sum(axis=1), 1),
                             np.nan)

    thresholded = None
    if threshold is not None:
        conf = probs.max(axis=1)
        confident = conf >= threshold
        correct_confident = int(np.sum(confident & (pred == target)))
        n_confident = int(confident.sum())
        precision = correct_confident / n_confident if n_confident else 1.0
        recall = correct_confident / len(target)
        thresholded = (threshold, float(precision), float(recall))
    return EvalReport(accuracy, per_class, confusion, thresholded)


def assemble_collection(datasets: dict, spec: MixSpec, seed: int) -> LabeledDataset:
    """Per class, draw each non-excluded screen's quota uniformly without
    replacement; deterministic given the seed."""
    included = sorted(sid for sid in datasets if sid not in spec.exclude)
    if not included:
        raise ParamError("no screens left after exclusion")
    label_names = datasets[included[0]].label_names
    for sid in included:
        if datasets[sid].label_names != label_names:
            raise ParamError("screens disagree on label names")

    rng = np.random.default_rng(seed)
    parts = []
    for sid in included:
        ds = datasets[sid]
        quota = spec.per_screen_quota.get(sid)
        if quota is None:
            raise ParamError(f"no quota for screen {sid!r}")
        chosen = []
        for c in range(len(label_names)):
            rows = np.nonzero(ds.labels == c)[0]
            if len(rows) < quota:
                raise ParamError(
                    f"screen {sid!r} class {label_names[c]!r}: "
                    f"{len(rows)} samples < quota {quota}")
            chosen.extend(rng.choice(rows, size=quota, replace=False).tolist())
        parts.append(ds.take(sorted(chosen)))

    feats = np.vstack([p.features for p in parts])
    labels = np.concatenate([p.labels for p in parts])
    screens = [s for p in parts for s in p.screen_ids]
    return LabeledDataset(feats, labels, screens, label_names)


def trace_features(values: np.ndarray, length: int = 3200) -> np.ndarray:
    """Resample a cycle trace to a fixed feature length by linear
    interpolation, so screens with slightly different cycle lengths share a
    feature space."""
    values = np.asarray(values, dtype=np.float64)
    if len(values) == length:
        return values.copy()
    src = np.linspace(0.0, 1.0, len(values), endpoint=False)
    dst = np.linspace(0.0, 1.0, length, endpoint=False)
    return np.interp(dst, src, values)


def align_to_reference(reference: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Rotate `values` so it best correlates with `reference`."""
    shift, _ = max_corr_shift(reference, values)
    return np.roll(values, -shift)


MODEL_MAGIC = "rasterleak-model v1"


def _fmt_row(row) -> str:
    return " ".join(repr(float(v)) for v in row)


def write_model(model, path) -> None:
    """Versioned line-oriented text serialization; decimal float repr keeps
    round trips prediction-exact on the same platform."""
    lines = [MODEL_MAGIC]
    if isinstance(model, SoftmaxModel):
        lines.append("kind softmax")
        lines.append(f"labels {len(model.label_names)}")
        lines.extend(model.label_names)
        lines.append(f"feature_len {model.feature_len}")
        lines.append("mu " + _fmt_row(model.mu))
        lines.append("sigma " + _fmt_row(model.sigma))
        lines.append(f"weights {model.weights.shape[0]} {model.weights.shape[1]}")
        lines.extend(_fmt_row(r) for r in model.weights)
    elif isinstance(model, CentroidModel):
        lines.append("kind centroid")
        lines.append(f"labels {len(model.label_names)}")
        lines.extend(model.label_names)
        lines.append(f"feature_len {model.feature_len}")
        lines.append(f"centroids {model.centroids.shape[0]} {model.centroids.shape[1]}")
        lines.extend(_fmt_row(r) for r in model.centroids)
    else:
        raise ParamError(f"cannot serialize {type(model).__name__}")
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def read_model(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    try:
        if lines[0] != MODEL_MAGIC:
            raise FormatError(f"{path}: bad magic line")
        kind = lines[1].split()[1]
        n_labels = int(lines[2].split()[1])
        labels = lines[3:3 + n_labels]
        i = 3 + n_labels
        i += 1  # feature_len line is implied by the matrices
        if kind == "softmax":
            mu = np.array([float(v) for v in lines[i].split()[1:]])
            sigma = np.array([float(v) for v in lines[i + 1].split()[1:]])
            rows, cols = (int(v) for v in lines[i + 2].split()[1:])
            W = np.array([[float(v) for v in lines[i + 3 + r].split()]
                          for r in range(rows)])
            if W.shape != (rows, cols):
                raise FormatError(f"{path}: weight matrix shape mismatch")
            return SoftmaxModel(W, mu, sigma, labels)
        if kind == "centroid":
            rows, cols = (int(v) for v in lines[i].split()[1:])
            C = np.array([[float(v) for v in lines[i + 1 + r].split()]
                          for r in range(rows)])
            if C.shape != (rows, cols):
                raise FormatError(f"{path}: centroid matrix shape mismatch")
            return CentroidModel(C, labels)
        raise FormatError(f"{path}: unknown model kind {kind!r}")
    except (IndexError, ValueError) as exc:
        raise FormatError(f"{path}: malformed model file") from exc
