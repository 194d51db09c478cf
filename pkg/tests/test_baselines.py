import numpy as np
import pytest

from samaboost import BoostConfig, LearnerConfig, fit_baseline, samme_alpha
from samaboost.baselines import ALPHA_CAP, BoostLateEnsemble, fit_samme
from samaboost.errors import DomainError

STUMPS = BoostConfig(rounds=8, learner=LearnerConfig(kind="stump"))


def test_alpha_examples():
    assert samme_alpha(0.25, 3) == pytest.approx(np.log(6), abs=1e-15)
    assert samme_alpha(0.3, 2) == pytest.approx(np.log(0.7 / 0.3), abs=1e-15)
    assert samme_alpha(0.0, 4) == pytest.approx(np.log(1e12))


def test_random_guess_round_stops():
    # Alternating labels on one constant feature: every stump is a coin flip.
    X = np.zeros((6, 1))
    y = np.array([1, 2, 1, 2, 1, 2])
    ens = fit_samme(X, y, 2, STUMPS, columns=[0])
    assert ens.T == 1
    assert ens.errors[0] >= 0.5 and ens.alphas[0] == 1.0


def test_perfect_round_is_capped_and_continues():
    X = np.array([[0.0], [1.0], [2.0], [3.0]])
    y = np.array([1, 1, 2, 2])
    ens = fit_samme(X, y, 2, BoostConfig(rounds=3, learner=LearnerConfig(kind="stump")),
                    columns=[0])
    assert ens.T == 3
    assert ens.alphas[0] == pytest.approx(ALPHA_CAP)
    assert np.all(ens.predict(X) == y)


def test_samme_matches_reference_update(three_class_data):
    ens = fit_baseline(three_class_data, STUMPS, "samme")
    X, y = three_class_data.X, three_class_data.labels
    w = np.full(len(y), 1 / len(y))
    for learner, alpha, err in zip(ens.learners, ens.alphas, ens.errors):
        miss = learner.predict(X) != y
        assert err == pytest.approx(w[miss].sum(), abs=1e-12)
        assert alpha == pytest.approx(np.log((1 - err) / err) + np.log(2), abs=1e-12)
        w = w * np.exp(alpha * miss)
        w /= w.sum()
    staged = list(ens.staged_predict(X))
    assert len(staged) == ens.T
    np.testing.assert_array_equal(staged[-1], ens.predict(X))


def test_boost_early_uses_all_columns(binary_data):
    ens = fit_baseline(binary_data, STUMPS, "boost_early")
    assert ens.columns == tuple(range(binary_data.d))


def test_boost_late_majority(binary_data):
    ens = fit_baseline(binary_data, STUMPS, "boost_late")
    assert isinstance(ens, BoostLateEnsemble)
    assert len(ens.members) == binary_data.V
    for m, cols in zip(ens.members, binary_data.views):
        assert m.columns == cols
    votes = sum(np.eye(2)[m.predict(binary_data.X) - 1] for m in ens.members)
    np.testing.assert_array_equal(ens.predict(binary_data.X), np.argmax(votes, axis=1) + 1)
    staged = list(ens.staged_predict(binary_data.X))
    np.testing.assert_array_equal(staged[-1], ens.predict(binary_data.X))
    assert ens.member_predictions(binary_data.X).shape == (ens.T, binary_data.n)


def test_unknown_strategy(binary_data):
    with pytest.raises(DomainError):
        fit_baseline(binary_data, STUMPS, "boost_middle")
