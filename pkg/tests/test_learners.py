import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from samaboost import LearnerConfig, predict_confidence, train_shallow_net, train_stump
from samaboost.errors import DomainError, TrainingError
from samaboost.learners import ConstantLearner, Stump, train_learner

XOR_X = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])
XOR_Y = np.array([1, 2, 2, 1])


def weighted_error(learner, X, y, w):
    return float(np.sum(w * (learner.predict(X) != y)))


def brute_force_stump_error(X, y, w, K):
    """Enumerate every feature, threshold and pair of side labels."""
    best = min(np.sum(w * (y != c)) for c in range(1, K + 1))
    for j in range(X.shape[1]):
        vals = np.unique(X[:, j])
        for lo, hi in zip(vals[:-1], vals[1:]):
            left = X[:, j] <= 0.5 * (lo + hi)
            for a, b in itertools.product(range(1, K + 1), repeat=2):
                pred = np.where(left, a, b)
                best = min(best, np.sum(w * (pred != y)))
    return float(best)


def test_stump_separable():
    X = np.array([[0.0], [1.0]])
    y = np.array([1, 2])
    s = train_stump(X, y, np.array([0.5, 0.5]), K=2)
    assert weighted_error(s, X, y, np.array([0.5, 0.5])) == 0.0


def test_stump_constant_labels():
    X = np.array([[0.0], [1.0], [2.0]])
    s = train_learner(X, np.array([2, 2, 2]), np.full(3, 1 / 3), LearnerConfig("stump"), K=3)
    assert isinstance(s, ConstantLearner)
    np.testing.assert_array_equal(s.predict_confidence(X[0]), [0, 1, 0])


def test_stump_heavy_outlier():
    # The heavy point at x=2 is the lone class-2 example.
    X = np.array([[2.0], [0.0], [1.0], [3.0]])
    y = np.array([2, 1, 1, 1])
    w = np.array([0.7, 0.1, 0.1, 0.1])
    s = train_stump(X, y, w, K=2)
    assert s.predict(np.array([2.0]))[()] == 2
    assert weighted_error(s, X, y, w) == pytest.approx(brute_force_stump_error(X, y, w, 2),
                                                       abs=1e-15)
    assert weighted_error(s, X, y, w) == pytest.approx(0.1)


@settings(max_examples=60)
@given(st.integers(0, 10_000), st.integers(2, 4), st.integers(3, 12))
def test_stump_matches_enumeration(seed, K, n):
    rng = np.random.default_rng(seed)
    X = rng.integers(0, 4, size=(n, 2)).astype(float)
    y = rng.integers(1, K + 1, size=n)
    w = rng.random(n) + 0.01
    w /= w.sum()
    s = train_stump(X, y, w, K)
    err = weighted_error(s, X, y, w)
    assert err == pytest.approx(brute_force_stump_error(X, y, w, K), abs=1e-12)
    best_constant = min(np.sum(w * (y != c)) for c in range(1, K + 1))
    assert err <= best_constant + 1e-12


def test_stump_confidence_is_side_histogram():
    X = np.arange(5.0)[:, None]
    y = np.array([1, 2, 1, 2, 2])
    w = np.full(5, 0.2)
    s = train_stump(X, y, w, K=2)
    assert isinstance(s, Stump)
    side = X[:, 0] <= s.threshold
    for mask in (side, ~side):
        hist = np.array([w[mask & (y == c)].sum() for c in (1, 2)])
        np.testing.assert_allclose(s.predict_confidence(X[mask][0]), hist / hist.sum())


@settings(max_examples=40)
@given(st.integers(0, 10_000))
def test_upweighting_never_hurts_on_1d(seed):
    rng = np.random.default_rng(seed)
    n = 6
    X = rng.permutation(n).astype(float)[:, None]
    y = rng.integers(1, 3, size=n)
    if len(np.unique(y)) < 2:
        return
    w = rng.random(n) + 0.05
    w /= w.sum()
    i = int(rng.integers(n))
    before = train_stump(X, y, w, 2).predict(X[i])[()] != y[i]
    w2 = w.copy()
    w2[i] *= 3.0
    w2 /= w2.sum()
    after = train_stump(X, y, w2, 2).predict(X[i])[()] != y[i]
    assert after <= before


def test_net_learns_xor():
    w = np.full(4, 0.25)
    for seed in range(5):
        cfg = LearnerConfig(hidden_units=5, epochs=500, learning_rate=2.0, seed=seed)
        net = train_shallow_net(XOR_X, XOR_Y, w, cfg, K=2)
        assert np.all(net.predict(XOR_X) == XOR_Y)
        assert np.all(np.diff(net.loss_curve) <= 1e-15)


def test_net_deterministic():
    cfg = LearnerConfig(epochs=50, seed=11)
    w = np.full(4, 0.25)
    a = train_shallow_net(XOR_X, XOR_Y, w, cfg, K=2)
    b = train_shallow_net(XOR_X, XOR_Y, w, cfg, K=2)
    for name in ("W1", "b1", "W2", "b2"):
        np.testing.assert_array_equal(getattr(a, name), getattr(b, name))


def test_net_regularization_shrinks_weights():
    w = np.full(4, 0.25)
    free = train_shallow_net(XOR_X, XOR_Y, w, LearnerConfig(epochs=200, seed=1), K=2)
    tied = train_shallow_net(XOR_X, XOR_Y, w,
                             LearnerConfig(epochs=200, seed=1, regularization=0.1), K=2)
    assert np.sum(tied.W1 ** 2) < np.sum(free.W1 ** 2)


def test_net_reports_nonfinite_epoch():
    X = np.array([[0.0], [1.0]])
    w = np.array([np.inf, 0.0])
    with pytest.raises(TrainingError) as info:
        train_shallow_net(X, np.array([1, 2]), w, LearnerConfig(epochs=5), K=2)
    assert info.value.epoch == 1


def test_config_contract():
    with pytest.raises(DomainError):
        LearnerConfig(epochs=0)
    with pytest.raises(DomainError):
        LearnerConfig(learning_rate=0.0)
    with pytest.raises(DomainError):
        LearnerConfig(kind="tree")


def test_confidence_contract():
    c = ConstantLearner.for_class(2, 3, n_features=2)
    np.testing.assert_array_equal(predict_confidence(c, [0.0, 0.0]), [0, 1, 0])
    with pytest.raises(DomainError):
        c.predict_confidence([1.0, 2.0, 3.0])
    rng = np.random.default_rng(0)
    X = rng.normal(size=(30, 3))
    y = rng.integers(1, 4, size=30)
    w = np.full(30, 1 / 30)
    for learner in (train_stump(X, y, w, 3),
                    train_shallow_net(X, y, w, LearnerConfig(epochs=20), 3)):
        conf = learner.predict_confidence(X)
        assert conf.shape == (30, 3)
        assert np.all((conf >= 0) & (conf <= 1))
        np.testing.assert_allclose(conf.sum(axis=1), 1.0, atol=1e-9)
        np.testing.assert_array_equal(learner.predict(X), np.argmax(conf, axis=1) + 1)


def test_argmax_ties_go_low():
    c = ConstantLearner(0, 3, 1, np.array([0.4, 0.4, 0.2]))
    assert c.predict([[0.0]])[0] == 1
