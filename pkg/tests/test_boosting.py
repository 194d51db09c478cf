import numpy as np
import pytest

from samaboost import (
    BoostConfig,
    LearnerConfig,
    MultiviewDataset,
    SamaEnsemble,
    fit_ma,
    fit_sama,
    learner_fitness,
    ma_beta,
    predict_ensemble,
)
from samaboost.boosting import BoostRound, fitness_from_predictions
from samaboost.errors import DegenerateEnsembleError, DomainError
from samaboost.learners import ConstantLearner, train_stump
from samaboost.objective import clip_errors

from conftest import toy_dataset
from oracles import adaboost_weights

STUMPS = LearnerConfig(kind="stump")


def fake_round(confidences, fitness, beta=1.0):
    learners = tuple(ConstantLearner(v, len(c), 1, np.asarray(c, float))
                     for v, c in enumerate(confidences))
    return BoostRound(learners=learners, fitness=np.asarray(fitness, float), beta=beta,
                      z=1.0, per_view_error=np.zeros(len(learners)),
                      weights=np.ones(1), misclassified=np.zeros(1, int), objective=1.0)


def test_fitness_examples():
    f = fitness_from_predictions([1, 2], [1.0, 1.0], [1, 2], [0.5, 0.5])
    assert (f.correct_rate, f.reward, f.fitness) == (1.0, 1.0, 2.0)
    f = fitness_from_predictions([2, 1], [0.9, 0.3], [1, 2], [0.5, 0.5])
    assert f.correct_rate == 0.0 and f.fitness == 0.0
    f = fitness_from_predictions([1, 1], [0.8, 0.6], [1, 2], [0.5, 0.5])
    assert f.correct_rate == 0.5
    assert f.reward == pytest.approx(-0.3, abs=1e-15)
    assert f.fitness == pytest.approx(0.35, abs=1e-15)


def test_learner_fitness_reads_its_view():
    ds = MultiviewDataset(np.array([[0.0, 5.0], [1.0, 5.0]]), np.array([1, 2]),
                          ((0,), (1,)))
    stump = train_stump(ds.view(0), ds.labels, np.full(2, 0.5), 2, view_index=0)
    assert learner_fitness(stump, ds, np.full(2, 0.5)).fitness == 2.0


def test_v2_example():
    ens = SamaEnsemble([fake_round([[0.6, 0.4], [0.1, 0.9]], [2.0, 1.0])], 2,
                       ((0,), (0,)))
    label, scores = predict_ensemble(ens, [0.0], "V2")
    np.testing.assert_allclose(scores, [1.3, 1.7], atol=1e-15)
    assert label == 2


def test_v1_unanimous():
    ens = SamaEnsemble([fake_round([[0.7, 0.3], [0.9, 0.1]], [0.4, 3.0])], 2,
                       ((0,), (0,)), combiner="V1")
    label, scores = predict_ensemble(ens, [0.0])
    assert scores[0] == pytest.approx(0.5, abs=1e-15)
    assert label == 1


def test_v1_falls_back_to_argmax():
    # Three views split 1/1/1 over three classes leave no entry near one.
    ens = SamaEnsemble([fake_round([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [1.0, 2.0, 1.5])],
                       3, ((0,), (0,), (0,)), combiner="V1")
    assert ens.predict([[0.0]])[0] == 2


def test_single_member_identity():
    ens = SamaEnsemble([fake_round([[0, 1, 0]], [0.7])], 3, ((0,),))
    assert ens.predict([[0.0]], "V1")[0] == 2
    assert ens.predict([[0.0]], "V2")[0] == 2


def test_zero_fitness_is_degenerate():
    ens = SamaEnsemble([fake_round([[0.2, 0.8], [0.6, 0.4]], [0.0, 0.0])], 2,
                       ((0,), (0,)))
    for combiner in ("V1", "V2"):
        with pytest.raises(DegenerateEnsembleError):
            ens.predict([[0.0]], combiner)
    assert list(ens.staged_predict([[0.0]])) == [None]


def test_reduces_to_adaboost(binary_data):
    sub = binary_data.subset(np.arange(0, 200, 4)).with_views((tuple(range(binary_data.d)),))
    ens = fit_sama(sub, BoostConfig(rounds=10, learner=STUMPS))
    oracle = adaboost_weights(sub.X, sub.labels, 10)
    for t in range(1, 10):
        np.testing.assert_allclose(ens.rounds[t].weights, oracle[t - 1], atol=1e-12, rtol=0)


def test_separable_two_views_one_round():
    X = np.array([[0.0, 10.0], [1.0, 11.0], [2.0, 12.0], [3.0, 13.0]])
    ds = MultiviewDataset(X, np.array([1, 1, 2, 2]), ((0,), (1,)))
    ens = fit_sama(ds, BoostConfig(rounds=1, learner=STUMPS))
    assert np.all(ens.predict(ds.X) == ds.labels)
    assert ens.rounds[0].beta_clamped == "upper"


def test_round_bookkeeping(three_class_data):
    ens = fit_sama(three_class_data, BoostConfig(rounds=6, learner=STUMPS))
    assert ens.T == 6
    for r in ens.rounds:
        assert abs(r.weights.sum() - 1.0) <= 1e-9 and np.all(r.weights > 0)
        assert 0 <= r.beta <= 10.0
        assert r.z == pytest.approx(np.sum(r.weights * np.exp(
            r.beta * (2.0 * r.misclassified / ens.V - 1.0))), rel=1e-12)
    staged = list(ens.staged_predict(three_class_data.X))
    assert len(staged) == 6
    np.testing.assert_array_equal(staged[-1], ens.predict(three_class_data.X))
    assert ens.truncate(3).T == 3


def test_ma_uses_closed_form(three_class_data):
    ens = fit_ma(three_class_data, BoostConfig(rounds=5, learner=STUMPS))
    assert ens.beta_rule == "ma_closed_form"
    for r in ens.rounds:
        expected = max(ma_beta(clip_errors(r.per_view_error)), 0.0)
        assert r.beta == pytest.approx(expected, abs=1e-15)


def test_fit_is_deterministic():
    ds = toy_dataset(n=60, K=3, d=4)
    cfg = BoostConfig(rounds=3, learner=LearnerConfig(epochs=10), seed=4)
    a, b = fit_sama(ds, cfg), fit_sama(ds, cfg)
    np.testing.assert_array_equal(a.betas, b.betas)
    np.testing.assert_array_equal(a.scores(ds.X), b.scores(ds.X))


def test_config_contract():
    with pytest.raises(DomainError):
        BoostConfig(rounds=0)
    with pytest.raises(DomainError):
        BoostConfig(combiner="V3")
    with pytest.raises(DomainError):
        BoostConfig(beta_rule="line_search")
