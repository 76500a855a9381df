"""Logistic-regression classifier for NSIT-conforming (0) vs NSIT-violating (1) vectors.

Two feature maps are available.  ``linear`` feeds the raw probability vector.
``tuple-quadratic`` (default) appends, for every probability tuple, all
pairwise products p_n(k) p_n(l) with k <= l.  The model stays linear in its
features, but can now express sum_n <l_n>^2, which a linear model on p cannot:
both classes are symmetric about the maximally mixed point, so any hyperplane
in p splits them near chance.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, InconsistentProbabilities
from .states import MALFORMED_TOL, ProbabilityVector

FEATURE_MAPS = ("linear", "tuple-quadratic")


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 2000
    learning_rate: float = 1.0
    seed: int = 0
    validation_fraction: float = 0.2
    features: str = "tuple-quadratic"


@dataclass(frozen=True, eq=False)
class ClassifierModel:
    dim: int
    weights: np.ndarray
    bias: float
    features: str = "tuple-quadratic"
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if not (np.all(np.isfinite(w)) and np.isfinite(self.bias)):
            raise ValueError("model parameters must be finite")
        if len(w) != feature_count(self.dim, self.features):
            raise DimensionError(f"{len(w)} weights do not fit N={self.dim} with {self.features} features")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)


@dataclass(frozen=True)
class Metrics:
    accuracy: float
    precision: float
    recall: float
    tn: int
    fp: int
    fn: int
    tp: int

    @property
    def total(self) -> int:
        return self.tn + self.fp + self.fn + self.tp

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "confusion": {"tn": self.tn, "fp": self.fp, "fn": self.fn, "tp": self.tp},
        }


def feature_count(dim: int, features: str) -> int:
    m = dim * dim - 1
    if features == "linear":
        return m * dim
    if features == "tuple-quadratic":
        return m * dim + m * dim * (dim + 1) // 2
    raise ValueError(f"unknown feature map {features!r}; expected one of {FEATURE_MAPS}")


def featurize(x: np.ndarray, dim: int, features: str) -> np.ndarray:
    """Map an (S, M*N) batch of flattened probability vectors to model features."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if features == "linear":
        return x
    if features != "tuple-quadratic":
        raise ValueError(f"unknown feature map {features!r}; expected one of {FEATURE_MAPS}")
    t = x.reshape(len(x), -1, dim)
    iu, ju = np.triu_indices(dim)
    quad = (t[:, :, iu] * t[:, :, ju]).reshape(len(x), -1)
    return np.hstack([x, quad])


def _stack(examples) -> tuple[np.ndarray, np.ndarray, int]:
    dims = {e.vector.dim for e in examples}
    if len(dims) != 1:
        raise DimensionError(f"examples mix dimensions {sorted(dims)}")
    x = np.array([e.vector.flat for e in examples])
    y = np.array([e.label for e in examples], dtype=float)
    return x, y, dims.pop()


def _sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def _loss(z, y) -> float:
    # mean logistic loss, log(1 + e^z) - y z, evaluated stably
    return float(np.mean(np.logaddexp(0.0, z) - y * z))


def split(examples, fraction: float, seed: int):
    """Seeded (train, validation) split."""
    order = np.random.default_rng(seed).permutation(len(examples))
    n_val = int(round(fraction * len(examples)))
    val = [examples[i] for i in order[:n_val]]
    train_ = [examples[i] for i in order[n_val:]]
    return train_, val


def fit(x: np.ndarray, y: np.ndarray, epochs: int, learning_rate: float):
    """Full-batch gradient descent from zero; a step that raises the loss is undone and the rate halved."""
    w = np.zeros(x.shape[1])
    b = 0.0
    lr = learning_rate
    loss = _loss(x @ w + b, y)
    history = [loss]
    for _ in range(epochs):
        r = _sigmoid(x @ w + b) - y
        gw = x.T @ r / len(y)
        gb = float(r.mean())
        while True:
            w_new, b_new = w - lr * gw, b - lr * gb
            new = _loss(x @ w_new + b_new, y)
            if new <= loss + 1e-12 or lr < 1e-12:
                break
            lr *= 0.5
        w, b, loss = w_new, b_new, new
        history.append(loss)
    return w, b, history


def train(train_set, config: TrainConfig = TrainConfig()) -> ClassifierModel:
    """Fit on ``train_set`` minus a seeded validation split; metrics on the split go in metadata."""
    if config.epochs < 1 or config.learning_rate <= 0:
        raise ValueError("epochs and learning rate must be positive")
    labels = [e.label for e in train_set]
    if min(labels.count(0), labels.count(1)) < 2:
        raise ValueError("need at least two examples of each class")
    _stack(train_set)  # dimension check on the full set

    fit_set, val_set = split(train_set, config.validation_fraction, config.seed)
    x, y, dim = _stack(fit_set)
    w, b, history = fit(featurize(x, dim, config.features), y, config.epochs, config.learning_rate)
    meta = {
        "epochs": config.epochs,
        "learning_rate": config.learning_rate,
        "seed": config.seed,
        "validation_fraction": config.validation_fraction,
        "final_loss": history[-1],
        "train_size": len(fit_set),
    }
    model = ClassifierModel(dim, w, float(b), config.features, meta)
    if val_set:
        model.metadata["validation"] = evaluate(model, val_set).to_dict()
    return model


def scores(model: ClassifierModel, x: np.ndarray) -> np.ndarray:
    return _sigmoid(featurize(x, model.dim, model.features) @ model.weights + model.bias)


def predict(model: ClassifierModel, vector: ProbabilityVector) -> dict:
    if vector.dim != model.dim:
        raise DimensionError(f"vector dim {vector.dim} != model dim {model.dim}")
    err = vector.tuple_sum_error()
    if err > MALFORMED_TOL:
        raise InconsistentProbabilities(f"tuple sums deviate from 1 by {err:.3g}")
    score = float(scores(model, vector.flat)[0])
    return {"label": int(score >= 0.5), "score": score}


def evaluate(model: ClassifierModel, test_set) -> Metrics:
    if not test_set:
        raise ValueError("test set is empty")
    x, y, dim = _stack(test_set)
    if dim != model.dim:
        raise DimensionError(f"test set dim {dim} != model dim {model.dim}")
    pred = scores(model, x) >= 0.5
    truth = y.astype(bool)
    tp = int(np.sum(pred & truth))
    tn = int(np.sum(~pred & ~truth))
    fp = int(np.sum(pred & ~truth))
    fn = int(np.sum(~pred & truth))
    return Metrics(
        accuracy=(tp + tn) / len(y),
        precision=tp / (tp + fp) if tp + fp else 0.0,
        recall=tp / (tp + fn) if tp + fn else 0.0,
        tn=tn,
        fp=fp,
        fn=fn,
        tp=tp,
    )
