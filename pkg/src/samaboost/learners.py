"""Weak learners trainable under an example-weight distribution.

Every trained learner reads one view and emits a confidence vector over the
``K`` classes (rows sum to one). The predicted label is the argmax of that
vector, ties going to the lowest class index.
"""

from dataclasses import dataclass

import numpy as np

from .data import one_hot
from .errors import DomainError, TrainingError

LEARNER_KINDS = ("stump", "shallow_net")


@dataclass(frozen=True)
class LearnerConfig:
    kind: str = "shallow_net"
    hidden_units: int = 5
    epochs: int = 30
    learning_rate: float = 2.0
    regularization: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in LEARNER_KINDS:
            raise DomainError(f"unknown learner kind {self.kind!r}")
        if self.hidden_units < 1:
            raise DomainError("hidden_units must be at least 1")
        if self.epochs < 1:
            raise DomainError("epochs must be at least 1")
        if not self.learning_rate > 0:
            raise DomainError("learning_rate must be positive")
        if self.regularization < 0:
            raise DomainError("regularization must be non-negative")

    def replace(self, **changes):
        fields = dict(self.__dict__)
        fields.update(changes)
        return LearnerConfig(**fields)


class TrainedLearner:
    """Base class: a fitted hypothesis on one view."""

    def __init__(self, view_index, K, n_features):
        self.view_index = view_index
        self.K = K
        self.n_features = n_features

    def _check(self, X):
        X = np.asarray(X, dtype=np.float64)
        single = X.ndim == 1
        X = np.atleast_2d(X)
        if X.shape[1] != self.n_features:
            raise DomainError(
                f"learner expects {self.n_features} features, got {X.shape[1]}")
        return X, single

    def predict_confidence(self, X):
        """Confidence rows of shape (m, K); a 1-D record gives a length-K vector."""
        X, single = self._check(X)
        conf = self._confidence(X)
        return conf[0] if single else conf

    def predict(self, X):
        conf = self.predict_confidence(X)
        return np.argmax(conf, axis=-1) + 1

    def _confidence(self, X):
        raise NotImplementedError


def predict_confidence(learner, x):
    return learner.predict_confidence(x)


class ConstantLearner(TrainedLearner):
    """Emits the same confidence vector for every input."""

    def __init__(self, view_index, K, n_features, confidence):
        super().__init__(view_index, K, n_features)
        self.confidence = np.asarray(confidence, dtype=np.float64)

    @classmethod
    def for_class(cls, c, K, n_features, view_index=0):
        return cls(view_index, K, n_features, one_hot([c], K)[0])

    def _confidence(self, X):
        return np.tile(self.confidence, (X.shape[0], 1))


class Stump(TrainedLearner):
    """Axis-aligned split ``x[feature] <= threshold``; each side votes its
    normalized weighted class histogram."""

    def __init__(self, view_index, K, n_features, feature, threshold, left, right):
        super().__init__(view_index, K, n_features)
        self.feature = feature
        self.threshold = threshold
        self.left = left
        self.right = right

    def _confidence(self, X):
        go_left = X[:, self.feature] <= self.threshold
        return np.where(go_left[:, None], self.left, self.right)


def _normalized(hist):
    total = hist.sum()
    return hist / total if total > 0 else np.full(hist.shape, 1.0 / hist.size)


def train_stump(X, labels, weights, K, view_index=0):
    """Fit the stump of least weighted 0/1 error.

    Candidate thresholds are midpoints between consecutive distinct values of
    each feature. The constant (no-split) predictor competes too, and wins
    ties, so the result is never worse than the best constant.
    """
    X = np.asarray(X, dtype=np.float64)
    labels = np.asarray(labels)
    w = np.asarray(weights, dtype=np.float64)
    n, d = X.shape
    Yw = one_hot(labels, K) * w[:, None]
    total = Yw.sum(axis=0)
    best_err = w.sum() - total.max()
    best = None
    for j in range(d):
        order = np.argsort(X[:, j], kind="stable")
        xs = X[order, j]
        cum = np.cumsum(Yw[order], axis=0)[:-1]
        valid = xs[:-1] < xs[1:]
        if not valid.any():
            continue
        right = total - cum
        err = w.sum() - cum.max(axis=1) - right.max(axis=1)
        err = np.where(valid, err, np.inf)
        i = int(np.argmin(err))
        # Strict improvement with a small slack keeps ties on the earlier candidate.
        if err[i] < best_err - 1e-15:
            best_err = err[i]
            best = (j, 0.5 * (xs[i] + xs[i + 1]), cum[i], right[i])
    if best is None:
        return ConstantLearner(view_index, K, d, _normalized(total))
    j, thr, left, right = best
    return Stump(view_index, K, d, j, thr, _normalized(left), _normalized(right))


def _sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def _softmax(z):
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


class ShallowNet(TrainedLearner):
    """Sigmoid hidden layer followed by a softmax output layer.

    Inputs are standardized with the training mean and spread before the
    first layer.
    """

    def __init__(self, view_index, K, n_features, mean, scale, W1, b1, W2, b2,
                 loss_curve):
        super().__init__(view_index, K, n_features)
        self.mean, self.scale = mean, scale
        self.W1, self.b1, self.W2, self.b2 = W1, b1, W2, b2
        self.loss_curve = loss_curve

    def _forward(self, X):
        Z = (X - self.mean) / self.scale
        H = _sigmoid(Z @ self.W1 + self.b1)
        return Z, H, _softmax(H @ self.W2 + self.b2)

    def _confidence(self, X):
        return self._forward(X)[2]


def train_shallow_net(X, labels, weights, config, K, view_index=0):
    """Full-batch gradient descent on weight-scaled squared error.

    The loss is ``sum_i W_i * 0.5 * ||p_i - y_i||^2`` (each example's squared
    error scaled by ``n * W_i``, then averaged) plus ``lambda/2`` times the
    squared norm of the connection weights.
    """
    X = np.asarray(X, dtype=np.float64)
    n, d = X.shape
    w = np.asarray(weights, dtype=np.float64)
    T = one_hot(labels, K)
    rng = np.random.default_rng(config.seed)
    mean = X.mean(axis=0)
    scale = X.std(axis=0)
    scale[scale == 0] = 1.0
    Z = (X - mean) / scale
    h = config.hidden_units
    W1 = rng.normal(0.0, 1.0 / np.sqrt(d), size=(d, h))
    b1 = np.zeros(h)
    W2 = rng.normal(0.0, 1.0 / np.sqrt(h), size=(h, K))
    b2 = np.zeros(K)
    lam, eta = config.regularization, config.learning_rate
    losses = []
    # Divergence shows up as a non-finite loss below; numpy's own warnings are noise.
    with np.errstate(over="ignore", invalid="ignore"):
        for epoch in range(1, config.epochs + 1):
            H = _sigmoid(Z @ W1 + b1)
            P = _softmax(H @ W2 + b2)
            E = P - T
            loss = 0.5 * np.sum(w * np.sum(E * E, axis=1)) \
                + 0.5 * lam * (np.sum(W1 * W1) + np.sum(W2 * W2))
            if not np.isfinite(loss):
                raise TrainingError(f"non-finite loss at epoch {epoch}", epoch=epoch)
            losses.append(float(loss))
            G = w[:, None] * E
            # Squared-error gradient pulled back through the softmax Jacobian.
            dA2 = P * (G - np.sum(G * P, axis=1, keepdims=True))
            dW2 = H.T @ dA2 + lam * W2
            db2 = dA2.sum(axis=0)
            dA1 = (dA2 @ W2.T) * H * (1.0 - H)
            dW1 = Z.T @ dA1 + lam * W1
            db1 = dA1.sum(axis=0)
            W1 -= eta * dW1
            b1 -= eta * db1
            W2 -= eta * dW2
            b2 -= eta * db2
    return ShallowNet(view_index, K, d, mean, scale, W1, b1, W2, b2,
                      np.array(losses))


def train_learner(X, labels, weights, config, K, view_index=0):
    """Dispatch on ``config.kind``; single-class data yields a constant learner."""
    labels = np.asarray(labels)
    present = np.unique(labels)
    if present.size == 1:
        return ConstantLearner.for_class(int(present[0]), K, X.shape[1], view_index)
    if config.kind == "stump":
        return train_stump(X, labels, weights, K, view_index)
    return train_shallow_net(X, labels, weights, config, K, view_index)
