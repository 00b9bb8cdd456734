"""Softmax intent classifier over frozen features.

Because the encoder features are frozen, training here is plain multinomial
logistic regression: convex in (W, b), so zero init needs no symmetry
breaking. Gradients are analytic and checked against finite differences in
the test suite.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .rng import SplitMix64

PROB_FLOOR = 1e-12

ADAM = "adam"
SGD = "sgd"


@dataclass
class SoftmaxHead:
    W: np.ndarray  # (C, F)
    b: np.ndarray  # (C,)

    @property
    def C(self) -> int:
        return self.W.shape[0]

    @property
    def F(self) -> int:
        return self.W.shape[1]


@dataclass
class TrainConfig:
    learning_rate: float = 1e-3
    epochs: int = 200
    batch_size: int = 32
    optimizer: str = ADAM
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    shuffle_seed: int | None = None

    def validate(self) -> "TrainConfig":
        if self.learning_rate <= 0 or self.epochs <= 0 or self.batch_size <= 0:
            raise ValueError("learning rate, epochs, and batch size must be positive")
        if self.optimizer not in (ADAM, SGD):
            raise ValueError(f"unknown optimizer {self.optimizer!r}")
        return self


def _as_matrix(features: np.ndarray, F: int) -> np.ndarray:
    X = np.asarray(features, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    if X.shape[1] != F:
        raise ValueError(f"feature dim {X.shape[1]} does not match head dim {F}")
    return X


def predict_proba(head: SoftmaxHead, features) -> np.ndarray:
    """Row-wise softmax(W x + b); accepts one feature vector or an (N, F) matrix."""
    single = np.asarray(features).ndim == 1
    logits = _as_matrix(features, head.F) @ head.W.T + head.b
    logits -= logits.max(axis=1, keepdims=True)
    expl = np.exp(logits)
    probs = expl / expl.sum(axis=1, keepdims=True)
    return probs[0] if single else probs


def predict(head: SoftmaxHead, features) -> np.ndarray:
    """Class probabilities for a single feature vector."""
    features = np.asarray(features)
    if features.ndim != 1:
        raise ValueError("predict takes one feature vector; use predict_proba for batches")
    return predict_proba(head, features)


def cross_entropy(probs, label: int) -> float:
    """-log p[label], with p clamped below at 1e-12."""
    probs = np.asarray(probs, dtype=np.float64)
    if not 0 <= label < probs.shape[-1]:
        raise ValueError(f"label {label} out of range for {probs.shape[-1]} classes")
    return float(-np.log(max(float(probs[label]), PROB_FLOOR)))


def mean_cross_entropy(head: SoftmaxHead, X, y) -> float:
    probs = predict_proba(head, X)
    picked = np.clip(probs[np.arange(len(y)), y], PROB_FLOOR, None)
    return float(-np.log(picked).mean())


def gradients(head: SoftmaxHead, X, y) -> tuple[np.ndarray, np.ndarray]:
    """Mean-batch gradient of the cross-entropy: ((p - onehot) x^T, p - onehot)."""
    X = _as_matrix(X, head.F)
    y = np.asarray(y, dtype=np.int64)
    if len(X) == 0:
        raise ValueError("gradient of an empty batch is undefined")
    if y.shape != (len(X),):
        raise ValueError(f"got {len(X)} feature rows but {y.shape} labels")
    if y.min() < 0 or y.max() >= head.C:
        raise ValueError(f"label out of range for {head.C} classes")
    delta = predict_proba(head, X)
    delta[np.arange(len(y)), y] -= 1.0
    dW = delta.T @ X / len(X)
    db = delta.mean(axis=0)
    return dW, db


def train(X, y, config: TrainConfig | None = None, seed: int = 0, num_classes: int | None = None) -> SoftmaxHead:
    """Mini-batch training from zero-initialized (W, b).

    The shuffle stream comes from config.shuffle_seed when set, else `seed`;
    identical data/config/seed reproduce the head bitwise on one platform.
    """
    config = (config or TrainConfig()).validate()
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or len(X) == 0:
        raise ValueError("training needs a non-empty (N, F) feature matrix")
    if y.shape != (len(X),):
        raise ValueError(f"got {len(X)} feature rows but {y.shape} labels")
    C = int(num_classes) if num_classes is not None else int(y.max()) + 1
    if C < 2:
        raise ValueError(f"need at least 2 classes (got {C})")
    if y.min() < 0 or y.max() >= C:
        raise ValueError(f"labels must lie in [0, {C})")
    F = X.shape[1]
    head = SoftmaxHead(np.zeros((C, F)), np.zeros(C))

    shuffle = SplitMix64(config.shuffle_seed if config.shuffle_seed is not None else seed)
    adam = config.optimizer == ADAM
    if adam:
        mW, vW = np.zeros_like(head.W), np.zeros_like(head.W)
        mb, vb = np.zeros_like(head.b), np.zeros_like(head.b)
        step = 0
    order = list(range(len(X)))
    for _ in range(config.epochs):
        shuffle.shuffle(order)
        for start in range(0, len(order), config.batch_size):
            idx = order[start : start + config.batch_size]
            dW, db = gradients(head, X[idx], y[idx])
            if adam:
                step += 1
                mW = config.beta1 * mW + (1 - config.beta1) * dW
                mb = config.beta1 * mb + (1 - config.beta1) * db
                vW = config.beta2 * vW + (1 - config.beta2) * dW**2
                vb = config.beta2 * vb + (1 - config.beta2) * db**2
                bias1 = 1 - config.beta1**step
                bias2 = 1 - config.beta2**step
                head.W -= config.learning_rate * (mW / bias1) / (np.sqrt(vW / bias2) + config.eps)
                head.b -= config.learning_rate * (mb / bias1) / (np.sqrt(vb / bias2) + config.eps)
            else:
                head.W -= config.learning_rate * dW
                head.b -= config.learning_rate * db
    return head


def accuracy(head: SoftmaxHead, X, y) -> float:
    probs = predict_proba(head, X)
    return float((probs.argmax(axis=1) == np.asarray(y)).mean())


def save_head(path, head: SoftmaxHead, extra: dict | None = None) -> None:
    """Serialize as {C, F, W (row-major), b} plus optional documented extras."""
    payload = {
        "C": head.C,
        "F": head.F,
        "W": [float(v) for v in head.W.reshape(-1)],
        "b": [float(v) for v in head.b],
    }
    if extra:
        payload.update(extra)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)
        fh.write("\n")


def load_head(path) -> tuple[SoftmaxHead, dict]:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    try:
        C, F = int(payload["C"]), int(payload["F"])
        W = np.array(payload["W"], dtype=np.float64).reshape(C, F)
        b = np.array(payload["b"], dtype=np.float64)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"{path}: not a valid head file: {exc}") from exc
    if b.shape != (C,):
        raise ValueError(f"{path}: bias length {b.shape} does not match C={C}")
    extra = {k: v for k, v in payload.items() if k not in {"C", "F", "W", "b"}}
    return SoftmaxHead(W, b), extra
