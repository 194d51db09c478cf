import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from samaboost import (
    MultiviewDataset,
    SplitSpec,
    encode_label,
    inject_label_noise,
    partition_views,
    stratified_split,
)
from samaboost.data import check_distribution, uniform_weights
from samaboost.errors import DomainError

from conftest import toy_dataset


def test_encode_label():
    assert encode_label(1, 4).tolist() == [1, 0, 0, 0]
    assert encode_label(3, 3).tolist() == [0, 0, 1]
    assert encode_label(2, 2).tolist() == [0, 1]
    with pytest.raises(DomainError):
        encode_label(4, 3)
    with pytest.raises(DomainError):
        encode_label(0, 3)


def test_partition_sizes():
    g = partition_views(4, 2, seed=0)
    assert sorted(map(len, g)) == [2, 2]
    assert sorted(map(len, partition_views(5, 2, seed=0))) == [2, 3]
    assert partition_views(4, 1, seed=7) == ((0, 1, 2, 3),)
    with pytest.raises(DomainError):
        partition_views(3, 4, seed=0)


@given(st.integers(1, 30), st.integers(1, 30), st.integers(0, 2**32 - 1))
def test_partition_covers_columns(d, V, seed):
    if V > d:
        return
    groups = partition_views(d, V, seed)
    flat = [c for g in groups for c in g]
    assert sorted(flat) == list(range(d))
    assert max(map(len, groups)) - min(map(len, groups)) <= 1


def test_dataset_validation():
    X = np.zeros((3, 2))
    with pytest.raises(DomainError):
        MultiviewDataset(X, np.array([1, 2, 3]), ((0,), (0, 1)))
    with pytest.raises(DomainError):
        MultiviewDataset(X, np.array([1, 2, 3]), ((0,), ()))
    with pytest.raises(DomainError):
        MultiviewDataset(X, np.array([1, 2, 0]), ((0,), (1,)))
    ds = MultiviewDataset(X, np.array([1, 2, 2]), ((0,), (1,)))
    assert (ds.n, ds.d, ds.V, ds.K) == (3, 2, 2, 2)
    with pytest.raises(ValueError):
        ds.X[0, 0] = 1.0


def test_split_sizes():
    ds = toy_dataset(n=100)
    train, val, test = stratified_split(ds, SplitSpec((0.6, 0.2, 0.2), seed=1))
    assert (train.n, val.n, test.n) == (60, 20, 20)
    for part, ratio in ((train, 0.6), (val, 0.2), (test, 0.2)):
        for c in (1, 2):
            assert abs(np.sum(part.labels == c) - ratio * 50) <= 1


def test_split_degenerate_and_deterministic():
    ds = toy_dataset(n=30)
    train, val, test = stratified_split(ds, SplitSpec((1.0, 0.0, 0.0), seed=0))
    assert train.n == 30 and val.n == 0 and test.n == 0
    np.testing.assert_array_equal(train.X, ds.X)
    a = stratified_split(ds, SplitSpec(seed=5))
    b = stratified_split(ds, SplitSpec(seed=5))
    for p, q in zip(a, b):
        np.testing.assert_array_equal(p.X, q.X)
        np.testing.assert_array_equal(p.labels, q.labels)


def test_split_rejects_starved_class():
    X = np.zeros((4, 2))
    ds = MultiviewDataset(X, np.array([1, 1, 1, 2]), ((0,), (1,)), K=3)
    with pytest.raises(DomainError):
        stratified_split(ds)


def test_split_ratio_validation():
    with pytest.raises(DomainError):
        SplitSpec((0.5, 0.2, 0.2))
    with pytest.raises(DomainError):
        SplitSpec((1.2, -0.2, 0.0))


def test_noise_counts():
    ds = toy_dataset(n=100, K=3)
    assert inject_label_noise(ds, 0.0, seed=0) is ds
    noisy = inject_label_noise(ds, 0.2, seed=3)
    assert np.sum(noisy.labels != ds.labels) == 20
    np.testing.assert_array_equal(noisy.X, ds.X)
    flipped = inject_label_noise(toy_dataset(n=10), 1.0, seed=0)
    assert np.all(flipped.labels == 3 - toy_dataset(n=10).labels)
    with pytest.raises(DomainError):
        inject_label_noise(ds, 1.5, seed=0)


@settings(max_examples=50)
@given(st.floats(0, 1), st.integers(2, 5), st.integers(0, 1000))
def test_noise_is_pure_and_exact(fraction, K, seed):
    ds = toy_dataset(n=37, K=K)
    a = inject_label_noise(ds, fraction, seed)
    b = inject_label_noise(ds, fraction, seed)
    np.testing.assert_array_equal(a.labels, b.labels)
    assert np.sum(a.labels != ds.labels) == int(np.floor(fraction * 37 + 0.5))
    assert a.labels.min() >= 1 and a.labels.max() <= K


def test_uniform_weights():
    w = uniform_weights(7)
    assert check_distribution(w) is not None
    with pytest.raises(DomainError):
        check_distribution(np.array([0.5, 0.6]))
