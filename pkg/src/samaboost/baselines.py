"""Non-collaborative baselines: SAMME, Boost-Early and Boost-Late.

Boost-Early (and plain SAMME) boosts on the concatenation of every view.
Boost-Late boosts each view independently and takes an unweighted majority
vote of the per-view ensembles.
"""

import numpy as np

from .boosting import BoostConfig, _round_seed
from .data import one_hot, uniform_weights
from .errors import DegenerateEnsembleError, DomainError, TrainingError
from .learners import train_learner

ALPHA_CAP = np.log(1e12)
STRATEGIES = ("samme", "boost_early", "boost_late")


def samme_alpha(err, K):
    """``ln((1 - err) / err) + ln(K - 1)``, capped at ``ln 1e12`` for ``err = 0``."""
    if err <= 0:
        return float(ALPHA_CAP)
    return float(np.log((1.0 - err) / err) + np.log(K - 1))


class SammeEnsemble:
    """Stagewise SAMME classifier reading a fixed set of columns."""

    def __init__(self, learners, alphas, K, columns, errors=()):
        self.learners = list(learners)
        self.alphas = np.asarray(alphas, dtype=np.float64)
        self.K = K
        self.columns = tuple(columns)
        self.errors = np.asarray(errors, dtype=np.float64)

    @property
    def T(self):
        return len(self.learners)

    def truncate(self, T):
        return SammeEnsemble(self.learners[:T], self.alphas[:T], self.K, self.columns,
                             self.errors[:T])

    def member_predictions(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))[:, list(self.columns)]
        return np.array([l.predict(X) for l in self.learners])

    def scores(self, X):
        if not self.learners:
            raise DegenerateEnsembleError("SAMME ensemble has no rounds")
        preds = self.member_predictions(X)
        s = np.zeros((preds.shape[1], self.K))
        for a, p in zip(self.alphas, preds):
            s += a * one_hot(p, self.K)
        return s

    def predict(self, X):
        return np.argmax(self.scores(X), axis=1) + 1

    def staged_predict(self, X):
        s = 0.0
        for a, p in zip(self.alphas, self.member_predictions(X)):
            s = s + a * one_hot(p, self.K)
            yield np.argmax(s, axis=1) + 1


class BoostLateEnsemble:
    """Majority vote over independently boosted per-view ensembles."""

    def __init__(self, members, K):
        self.members = list(members)
        self.K = K

    @property
    def T(self):
        return min(m.T for m in self.members)

    def truncate(self, T):
        return BoostLateEnsemble([m.truncate(T) for m in self.members], self.K)

    def scores(self, X):
        """Vote counts per class, shape (m, K)."""
        return sum(one_hot(m.predict(X), self.K) for m in self.members)

    def predict(self, X):
        return np.argmax(self.scores(X), axis=1) + 1

    def staged_predict(self, X):
        # Views that stopped early keep voting with their final ensemble.
        stages = [list(m.staged_predict(X)) for m in self.members]
        for t in range(max(len(st) for st in stages)):
            votes = sum(one_hot(st[min(t, len(st) - 1)], self.K) for st in stages)
            yield np.argmax(votes, axis=1) + 1

    def member_predictions(self, X):
        """Round-level hypotheses: the per-view majority over round ``t`` learners."""
        per_view = [m.member_predictions(X) for m in self.members]
        T = min(p.shape[0] for p in per_view)
        out = []
        for t in range(T):
            votes = sum(one_hot(p[t], self.K) for p in per_view)
            out.append(np.argmax(votes, axis=1) + 1)
        return np.array(out)


def fit_samme(X, labels, K, config, columns, seed_offset=0):
    """Discrete SAMME on the columns ``columns`` of ``X``.

    A round whose weighted error reaches ``(K - 1) / K`` is discarded and
    boosting stops. If that happens on the first round, the rejected learner
    is kept with unit weight so the ensemble can still vote.
    """
    Xc = np.asarray(X, dtype=np.float64)[:, list(columns)]
    y = np.asarray(labels)
    n = y.shape[0]
    W = uniform_weights(n)
    learners, alphas, errors = [], [], []
    for t in range(1, config.rounds + 1):
        cfg = config.learner.replace(seed=_round_seed(config.seed, t, seed_offset))
        try:
            learner = train_learner(Xc, y, W, cfg, K, view_index=seed_offset)
        except TrainingError as exc:
            raise TrainingError(f"round {t}: {exc}", epoch=exc.epoch,
                                round_index=t) from exc
        miss = learner.predict(Xc) != y
        err = float(W[miss].sum())
        if err >= (K - 1) / K:
            if not learners:
                learners, alphas, errors = [learner], [1.0], [err]
            break
        alpha = samme_alpha(err, K)
        learners.append(learner)
        alphas.append(alpha)
        errors.append(err)
        W = W * np.exp(alpha * miss)
        W /= W.sum()
    return SammeEnsemble(learners, alphas, K, columns, errors)


def fit_baseline(train, config=BoostConfig(), strategy="samme"):
    """Fit one of the non-collaborative baselines on a multiview dataset."""
    if strategy not in STRATEGIES:
        raise DomainError(f"strategy must be one of {STRATEGIES}")
    if train.K < 2:
        raise DomainError("SAMME needs at least two classes")
    if strategy in ("samme", "boost_early"):
        return fit_samme(train.X, train.labels, train.K, config, range(train.d))
    members = [fit_samme(train.X, train.labels, train.K, config, cols, seed_offset=v)
               for v, cols in enumerate(train.views)]
    return BoostLateEnsemble(members, train.K)
