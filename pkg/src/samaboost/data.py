"""Multiview datasets, label vectors, weight distributions and dataset preparation.

Class labels are 1-based throughout (``1..K``). Columns of the feature matrix
are grouped into ``V`` disjoint views.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

WEIGHT_SUM_TOL = 1e-9


def _frozen(a, dtype=None):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class MultiviewDataset:
    """Labelled examples whose feature columns are split into disjoint views.

    Parameters
    ----------
    X : array-like, shape (n, d)
        Feature matrix.
    labels : array-like of int, shape (n,)
        Class indices in ``1..K``.
    views : sequence of sequences of int
        Column-index groups, one per view. Every column must appear in
        exactly one group.
    K : int, optional
        Class count. Defaults to ``max(labels)``.
    feature_names, label_names : optional
        Column headers and original label values (``label_names[k-1]`` is the
        source label of class ``k``).
    """

    X: np.ndarray
    labels: np.ndarray
    views: tuple
    K: int = None
    feature_names: tuple = None
    label_names: tuple = None

    def __post_init__(self):
        X = _frozen(self.X, dtype=np.float64)
        if X.ndim != 2:
            raise DomainError(f"feature matrix must be 2-D, got shape {X.shape}")
        labels = _frozen(self.labels, dtype=np.int64)
        if labels.shape != (X.shape[0],):
            raise DomainError(
                f"{labels.shape[0] if labels.ndim else 0} labels for {X.shape[0]} examples")
        views = tuple(tuple(int(c) for c in g) for g in self.views)
        validate_views(views, X.shape[1])
        K = int(self.K) if self.K is not None else int(labels.max(initial=0))
        if K < 1:
            raise DomainError("class count K must be at least 1")
        if labels.size and (labels.min() < 1 or labels.max() > K):
            raise DomainError(f"labels must lie in 1..{K}")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "views", views)
        object.__setattr__(self, "K", K)
        if self.feature_names is not None:
            object.__setattr__(self, "feature_names", tuple(self.feature_names))
        if self.label_names is not None:
            object.__setattr__(self, "label_names", tuple(self.label_names))

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def d(self):
        return self.X.shape[1]

    @property
    def V(self):
        return len(self.views)

    def view(self, v):
        """Feature submatrix of view ``v`` (0-based)."""
        return self.X[:, list(self.views[v])]

    def subset(self, index):
        index = np.asarray(index, dtype=np.int64)
        return self._replace(X=self.X[index], labels=self.labels[index])

    def with_labels(self, labels):
        return self._replace(labels=labels)

    def with_views(self, views):
        return self._replace(views=views)

    def _replace(self, **changes):
        fields = dict(X=self.X, labels=self.labels, views=self.views, K=self.K,
                      feature_names=self.feature_names, label_names=self.label_names)
        fields.update(changes)
        return MultiviewDataset(**fields)


def validate_views(views, d):
    if len(views) < 1:
        raise DomainError("at least one view is required")
    seen = []
    for v, group in enumerate(views):
        if len(group) == 0:
            raise DomainError(f"view {v} is empty")
        seen.extend(group)
    if sorted(seen) != list(range(d)):
        raise DomainError(
            f"views must partition the {d} columns exactly once each")


def encode_label(c, K):
    """One-hot label vector of length ``K`` with a 1 at (1-based) position ``c``."""
    if not 1 <= c <= K:
        raise DomainError(f"class index {c} outside 1..{K}")
    Y = np.zeros(K, dtype=np.int64)
    Y[c - 1] = 1
    return Y


def one_hot(labels, K):
    """Row-wise one-hot encoding of a label array."""
    labels = np.asarray(labels, dtype=np.int64)
    out = np.zeros((labels.shape[0], K))
    out[np.arange(labels.shape[0]), labels - 1] = 1.0
    return out


def uniform_weights(n):
    """Initial distribution ``1/n`` on every example."""
    if n < 1:
        raise DomainError("weight distribution needs at least one example")
    return np.full(n, 1.0 / n)


def check_distribution(w, tol=WEIGHT_SUM_TOL):
    """Raise unless ``w`` is a strictly positive probability vector."""
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 1 or w.size == 0:
        raise DomainError("weights must be a non-empty 1-D vector")
    if not np.all(w > 0):
        raise DomainError("weights must be strictly positive")
    if abs(w.sum() - 1.0) > tol:
        raise DomainError(f"weights sum to {w.sum()!r}, expected 1")
    return w


def partition_views(d, V, seed):
    """Randomly split ``d`` columns into ``V`` balanced, disjoint groups.

    Columns are shuffled with ``seed`` then dealt round-robin, so group sizes
    differ by at most one. Each group is returned sorted.
    """
    if V < 1:
        raise DomainError("view count must be at least 1")
    if V > d:
        raise DomainError(f"cannot split {d} columns into {V} non-empty views")
    perm = np.random.default_rng(seed).permutation(d)
    return tuple(tuple(sorted(int(c) for c in perm[v::V])) for v in range(V))


@dataclass(frozen=True)
class SplitSpec:
    """Train/validation/test proportions and the shuffling seed."""

    ratios: tuple = (0.6, 0.2, 0.2)
    seed: int = 0

    def __post_init__(self):
        ratios = tuple(float(r) for r in self.ratios)
        if len(ratios) != 3:
            raise DomainError("split needs exactly three ratios")
        if any(r < 0 for r in ratios):
            raise DomainError("split ratios must be non-negative")
        if abs(sum(ratios) - 1.0) > 1e-9:
            raise DomainError(f"split ratios sum to {sum(ratios)}, expected 1")
        object.__setattr__(self, "ratios", ratios)


def _allocate(n_c, ratios):
    # Largest-remainder apportionment, then guarantee one example to every
    # partition with a positive ratio.
    target = np.array(ratios) * n_c
    sizes = np.floor(target).astype(int)
    rest = n_c - sizes.sum()
    order = np.argsort(-(target - sizes), kind="stable")
    sizes[order[:rest]] += 1
    for p in range(3):
        if ratios[p] > 0 and sizes[p] == 0:
            donor = int(np.argmax(sizes))
            sizes[donor] -= 1
            sizes[p] += 1
    return sizes


def stratified_split(dataset, spec=SplitSpec()):
    """Shuffle each class with ``spec.seed`` and cut it by ``spec.ratios``.

    Returns ``(train, validation, test)`` datasets. Per-class proportions
    match the ratios within one example. Rows inside each partition keep
    their original relative order.
    """
    positive = sum(r > 0 for r in spec.ratios)
    rng = np.random.default_rng(spec.seed)
    parts = [[], [], []]
    for c in range(1, dataset.K + 1):
        idx = np.flatnonzero(dataset.labels == c)
        if idx.size < max(positive, 1):
            raise DomainError(
                f"class {c} has {idx.size} examples; {positive} partitions need one each")
        idx = rng.permutation(idx)
        sizes = _allocate(idx.size, spec.ratios)
        start = 0
        for p in range(3):
            parts[p].append(idx[start:start + sizes[p]])
            start += sizes[p]
    return tuple(dataset.subset(np.sort(np.concatenate(p))) for p in parts)


def inject_label_noise(dataset, fraction, seed):
    """Replace ``round(fraction * n)`` labels by a uniformly drawn wrong class.

    The corrupted examples are chosen without replacement; every other label
    is untouched.
    """
    if not 0.0 <= fraction <= 1.0:
        raise DomainError(f"noise fraction {fraction} outside [0, 1]")
    if dataset.K < 2:
        raise DomainError("label noise needs at least two classes")
    count = int(np.floor(fraction * dataset.n + 0.5))
    if count == 0:
        return dataset
    rng = np.random.default_rng(seed)
    chosen = rng.choice(dataset.n, size=count, replace=False)
    labels = dataset.labels.copy()
    # Draw from 1..K-1 then skip over the true class.
    shift = rng.integers(1, dataset.K, size=count)
    labels[chosen] = (labels[chosen] - 1 + shift) % dataset.K + 1
    return dataset.with_labels(labels)
