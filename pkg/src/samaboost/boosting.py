"""Collaborative multiview boosting (SAMA-AdaBoost and MA-AdaBoost).

Each round trains one learner per view under a shared weight distribution,
counts for every example how many views got it wrong, picks the round's
learning rate, reweights, and scores each learner's fitness. The fitted
ensemble combines its learners by fitness-weighted voting.
"""

from dataclasses import dataclass, field

import numpy as np

from .data import one_hot, uniform_weights
from .errors import DegenerateEnsembleError, DomainError, TrainingError
from .learners import LearnerConfig, train_learner
from .objective import (
    clip_errors,
    evaluate_objective,
    ma_beta,
    optimize_beta,
    update_weights,
)

COMBINERS = ("V1", "V2")
BETA_RULES = ("optimized", "ma_closed_form")
FITNESS_WEIGHTINGS = ("mean_one", "normalized")


@dataclass(frozen=True)
class BoostConfig:
    """Boosting hyperparameters.

    ``fitness_weighting`` selects the weights fed into the reward term:
    ``"normalized"`` uses the distribution itself, ``"mean_one"`` rescales it
    by ``n`` so the weights start at one.
    """

    rounds: int = 10
    learner: LearnerConfig = field(default_factory=LearnerConfig)
    beta_max: float = 10.0
    beta_tolerance: float = 1e-12
    combiner: str = "V2"
    beta_rule: str = "optimized"
    seed: int = 0
    clamp_fitness: bool = False
    fitness_weighting: str = "mean_one"

    def __post_init__(self):
        if self.rounds < 1:
            raise DomainError("rounds must be at least 1")
        if not self.beta_max > 0:
            raise DomainError("beta_max must be positive")
        if not self.beta_tolerance > 0:
            raise DomainError("beta_tolerance must be positive")
        if self.combiner not in COMBINERS:
            raise DomainError(f"combiner must be one of {COMBINERS}")
        if self.beta_rule not in BETA_RULES:
            raise DomainError(f"beta_rule must be one of {BETA_RULES}")
        if self.fitness_weighting not in FITNESS_WEIGHTINGS:
            raise DomainError(f"fitness_weighting must be one of {FITNESS_WEIGHTINGS}")


@dataclass(frozen=True)
class Fitness:
    correct_rate: float
    reward: float
    fitness: float


def fitness_from_predictions(predicted, confidence, labels, W):
    """Correct rate ``r``, reward ``R`` and fitness ``r (1 + R)``.

    ``confidence`` is the learner's confidence in its own predicted class.
    """
    correct = np.asarray(predicted) == np.asarray(labels)
    wc = np.asarray(W) * np.asarray(confidence)
    r = float(correct.mean())
    R = float(wc[correct].sum() - (1.0 - wc[~correct]).sum())
    return Fitness(r, R, r * (1.0 + R))


def learner_fitness(learner, dataset, W):
    """Fitness of ``learner`` on its view of ``dataset`` under weights ``W``."""
    conf = learner.predict_confidence(dataset.view(learner.view_index))
    pred = np.argmax(conf, axis=1)
    return fitness_from_predictions(pred + 1, conf[np.arange(len(pred)), pred],
                                    dataset.labels, W)


@dataclass(frozen=True)
class BoostRound:
    """One stage: a learner per view plus the quantities that set its vote.

    ``weights`` and ``misclassified`` record the distribution the learners
    were trained on and the per-example wrong-view counts, so the round's
    objective can be re-evaluated at any learning rate.
    """

    learners: tuple
    fitness: np.ndarray
    beta: float
    z: float
    per_view_error: np.ndarray
    weights: np.ndarray
    misclassified: np.ndarray
    objective: float
    beta_clamped: str = None
    correct_rate: np.ndarray = None
    reward: np.ndarray = None


def _round_seed(seed, t, v):
    return int(np.random.SeedSequence([seed, t, v]).generate_state(1)[0])


class SamaEnsemble:
    """Ordered boosting rounds over ``V`` views, with fitness-weighted votes."""

    def __init__(self, rounds, K, views, combiner="V2", beta_rule="optimized"):
        self.rounds = list(rounds)
        self.K = K
        self.views = tuple(tuple(g) for g in views)
        self.combiner = combiner
        self.beta_rule = beta_rule

    @property
    def V(self):
        return len(self.views)

    @property
    def T(self):
        return len(self.rounds)

    @property
    def betas(self):
        return np.array([r.beta for r in self.rounds])

    @property
    def normalizers(self):
        return np.array([r.z for r in self.rounds])

    def truncate(self, T):
        """Ensemble made of the first ``T`` rounds."""
        return SamaEnsemble(self.rounds[:T], self.K, self.views, self.combiner,
                            self.beta_rule)

    def _view_outputs(self, X):
        # confidences[t][v] has shape (m, K)
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        cols = [list(g) for g in self.views]
        return [[l.predict_confidence(X[:, cols[v]]) for v, l in enumerate(r.learners)]
                for r in self.rounds]

    def view_predictions(self, X):
        """Predicted labels, shape (T, V, m)."""
        out = self._view_outputs(X)
        return np.array([[np.argmax(c, axis=1) + 1 for c in row] for row in out])

    def _round_votes(self, X, combiner):
        # Unnormalized per-round vote matrices, each of shape (m, K).
        out = self._view_outputs(X)
        votes = []
        for r, row in zip(self.rounds, out):
            s = np.zeros((row[0].shape[0], self.K))
            for f, conf in zip(r.fitness, row):
                if combiner == "V2":
                    s += f * conf
                else:
                    s += f * one_hot(np.argmax(conf, axis=1) + 1, self.K)
            votes.append(s)
        return votes

    def _finish(self, s, total_fitness, combiner):
        if combiner == "V1":
            if total_fitness == 0:
                raise DegenerateEnsembleError("total fitness is zero")
            return s / (self.V * total_fitness)
        return s

    def scores(self, X, combiner=None):
        """Per-class vote, shape (m, K).

        ``V2`` sums fitness times class confidence. ``V1`` sums fitness times
        one-hot predictions and divides by ``V`` times the total fitness.
        """
        combiner = combiner or self.combiner
        if not self.rounds:
            raise DegenerateEnsembleError("ensemble has no rounds")
        F = np.array([r.fitness for r in self.rounds])
        if np.all(F == 0):
            raise DegenerateEnsembleError("all learner fitness values are zero")
        return self._finish(sum(self._round_votes(X, combiner)), F.sum(), combiner)

    def _labels(self, s, combiner):
        labels = np.argmax(s, axis=1) + 1
        if combiner == "V1":
            rounded = np.floor(s + 0.5)
            hot = np.all((rounded == 0) | (rounded == 1), axis=1) & (rounded.sum(axis=1) == 1)
            labels = np.where(hot, np.argmax(rounded, axis=1) + 1, labels)
        return labels

    def predict(self, X, combiner=None):
        combiner = combiner or self.combiner
        return self._labels(self.scores(X, combiner), combiner)

    def staged_predict(self, X, combiner=None):
        """Predictions after each round; ``None`` where the prefix cannot vote."""
        combiner = combiner or self.combiner
        s, total, any_nonzero = 0.0, 0.0, False
        for r, votes in zip(self.rounds, self._round_votes(X, combiner)):
            s = s + votes
            total += float(np.sum(r.fitness))
            any_nonzero |= bool(np.any(r.fitness != 0))
            if not any_nonzero or (combiner == "V1" and total == 0):
                yield None
            else:
                yield self._labels(self._finish(s, total, combiner), combiner)

    def member_predictions(self, X):
        """Round-level hypotheses: each round's fitness-weighted V2 vote."""
        out = self._view_outputs(X)
        preds = []
        for r, row in zip(self.rounds, out):
            F = np.asarray(r.fitness, dtype=np.float64)
            if np.all(F == 0):
                F = np.ones_like(F)
            s = sum(f * c for f, c in zip(F, row))
            preds.append(np.argmax(s, axis=1) + 1)
        return np.array(preds)


def predict_ensemble(ensemble, x, combiner=None):
    """Label and score vector for one record ``x``."""
    x = np.asarray(x, dtype=np.float64)
    s = ensemble.scores(x[None, :], combiner)[0]
    label = int(ensemble.predict(x[None, :], combiner)[0])
    return label, s


def fit_sama(train, config=BoostConfig()):
    """Run ``config.rounds`` collaborative boosting rounds on ``train``.

    ``config.beta_rule`` chooses the learning rate: ``"optimized"`` minimizes
    the round objective numerically (SAMA-AdaBoost); ``"ma_closed_form"`` uses
    the product of per-view weighted errors (MA-AdaBoost), floored at zero.
    """
    n, V, K = train.n, train.V, train.K
    y = train.labels
    views = [train.view(v) for v in range(V)]
    W = uniform_weights(n)
    rounds = []
    for t in range(1, config.rounds + 1):
        learners, confs = [], []
        for v in range(V):
            cfg = config.learner.replace(seed=_round_seed(config.seed, t, v))
            try:
                learner = train_learner(views[v], y, W, cfg, K, view_index=v)
            except TrainingError as exc:
                raise TrainingError(f"round {t}, view {v}: {exc}", epoch=exc.epoch,
                                    round_index=t) from exc
            learners.append(learner)
            confs.append(learner.predict_confidence(views[v]))
        pred = np.array([np.argmax(c, axis=1) for c in confs]) + 1
        wrong = pred != y
        b = wrong.sum(axis=0)
        per_view_error = (wrong * W).sum(axis=1)

        if config.beta_rule == "optimized":
            sol = optimize_beta(W, b, V, config.beta_max, config.beta_tolerance)
            beta, clamped = sol.beta, sol.clamped
        else:
            beta = ma_beta(clip_errors(per_view_error))
            clamped = None
            if beta < 0:
                beta, clamped = 0.0, "lower"
        objective = evaluate_objective(W, b, V, beta)

        fw = W * n if config.fitness_weighting == "mean_one" else W
        fits = [fitness_from_predictions(pred[v], confs[v][np.arange(n), pred[v] - 1], y, fw)
                for v in range(V)]
        F = np.array([f.fitness for f in fits])
        if config.clamp_fitness:
            F = np.maximum(F, 0.0)

        W_next, Z = update_weights(W, b, V, beta)
        rounds.append(BoostRound(
            learners=tuple(learners), fitness=F, beta=float(beta), z=Z,
            per_view_error=per_view_error, weights=W, misclassified=b,
            objective=objective, beta_clamped=clamped,
            correct_rate=np.array([f.correct_rate for f in fits]),
            reward=np.array([f.reward for f in fits])))
        W = W_next
    return SamaEnsemble(rounds, K, train.views, config.combiner, config.beta_rule)


def fit_ma(train, config=BoostConfig()):
    """MA-AdaBoost: the same loop with the closed-form learning rate."""
    return fit_sama(train, _replace(config, beta_rule="ma_closed_form"))


def _replace(config, **changes):
    fields = dict(config.__dict__)
    fields.update(changes)
    return BoostConfig(**fields)
