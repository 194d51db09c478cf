"""Convergence and margin diagnostics plus evaluation statistics."""

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.stats import rankdata

from .errors import DomainError, UndefinedKappaError


def training_error_bound(z, beta):
    """``prod_t Z_t / exp(sum_t beta_t)``; 1.0 for no rounds."""
    z = np.asarray(z, dtype=np.float64)
    beta = np.asarray(beta, dtype=np.float64)
    if z.shape != beta.shape:
        raise DomainError("z and beta must have equal lengths")
    if np.any(z <= 0):
        raise DomainError("normalizers must be positive")
    # Summed in log space so long runs do not underflow before the ratio.
    return float(np.exp(np.sum(np.log(z)) - np.sum(beta)))


def normalizer_product(z):
    """``prod_t Z_t``: the exponential-loss average that caps the sign-vote error."""
    z = np.asarray(z, dtype=np.float64)
    if np.any(z <= 0):
        raise DomainError("normalizers must be positive")
    return float(np.exp(np.sum(np.log(z))))


def margin_bound(theta, z, beta, V, m=None, printed=False):
    """``exp(2 theta / V) * prod Z / exp(sum beta)``.

    With ``printed=True`` the result is further divided by the training-set
    size ``m``.
    """
    if not 0.0 <= theta <= 1.0:
        raise DomainError("theta must lie in [0, 1]")
    value = np.exp(2.0 * theta / V) * training_error_bound(z, beta)
    if printed:
        if not m:
            raise DomainError("the printed form needs the training-set size m")
        value /= m
    return float(value)


def exponential_margin_bound(theta, z, beta):
    """``exp(theta * sum beta) * prod Z``.

    For binary labels this caps the fraction of training examples whose
    margin is at most ``theta``: the margin of example ``i`` is
    ``-sum_t beta_t d_ti / sum_t beta_t`` with ``d`` the difficulty, and the
    final weights are ``exp(sum_t beta_t d_ti) / (m prod Z)``.
    """
    if not 0.0 <= theta <= 1.0:
        raise DomainError("theta must lie in [0, 1]")
    beta = np.asarray(beta, dtype=np.float64)
    return float(np.exp(theta * beta.sum()) * normalizer_product(z))


def _sign_vote(ensemble, dataset):
    # Binary only: class 1 -> +1, class 2 -> -1. Ties (F = 0) count as errors.
    if ensemble.K != 2:
        raise DomainError("sign-vote diagnostics are defined for binary labels only")
    preds = ensemble.view_predictions(dataset.X)          # (T, V, m)
    h = np.where(preds == 1, 1.0, -1.0)
    y = np.where(dataset.labels == 1, 1.0, -1.0)
    return h, y


def sign_vote_errors(ensemble, dataset):
    """Training error of ``sign(sum_t beta_t sum_v h_v^t)`` after each prefix."""
    h, y = _sign_vote(ensemble, dataset)
    contrib = ensemble.betas[:, None] * h.sum(axis=1)      # (T, m)
    F = np.cumsum(contrib, axis=0)
    return np.mean(y[None, :] * F <= 0, axis=1)


@dataclass(frozen=True)
class BoundRecord:
    t: int
    z: float
    beta: float
    bound: float
    normalizer_product: float
    training_error: float


def bound_trace(ensemble, dataset):
    """Training-error bound against the empirical sign-vote error, per prefix."""
    errs = sign_vote_errors(ensemble, dataset)
    z, beta = ensemble.normalizers, ensemble.betas
    return [BoundRecord(t, float(z[t - 1]), float(beta[t - 1]),
                        training_error_bound(z[:t], beta[:t]),
                        normalizer_product(z[:t]), float(errs[t - 1]))
            for t in range(1, len(z) + 1)]


def class_weights(ensemble, X):
    """Convex vote per class: ``sum_t sum_v beta_t [h_v^t = p] / (V sum_t beta_t)``."""
    beta = ensemble.betas
    total = beta.sum()
    if not total > 0:
        raise DomainError("margins need a positive total learning rate")
    preds = ensemble.view_predictions(X)      # (T, V, m)
    w = np.zeros((preds.shape[2], ensemble.K))
    for p in range(1, ensemble.K + 1):
        w[:, p - 1] = np.einsum("t,tvm->m", beta, (preds == p).astype(float))
    return w / (ensemble.V * total)


def margins(ensemble, dataset):
    """Per-example margin: weight on the true class minus the best wrong class."""
    w = class_weights(ensemble, dataset.X)
    idx = np.arange(dataset.n)
    true = w[idx, dataset.labels - 1]
    others = w.copy()
    others[idx, dataset.labels - 1] = -np.inf
    return true - others.max(axis=1)


def margin_of_example(ensemble, x, y):
    x = np.asarray(x, dtype=np.float64)[None, :]
    w = class_weights(ensemble, x)[0]
    wrong = np.delete(w, y - 1)
    return float(w[y - 1] - wrong.max())


def margin_cdf(values, grid):
    """Fraction of ``values`` that are at most each ``psi`` in ``grid``."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise DomainError("margin distribution needs at least one example")
    return np.array([np.mean(values <= psi) for psi in grid])


def margin_distribution(ensemble, dataset, grid):
    return margin_cdf(margins(ensemble, dataset), grid)


@dataclass(frozen=True)
class MarginReport:
    margins: np.ndarray
    grid: np.ndarray
    cdf: np.ndarray
    thetas: np.ndarray = None
    bound: np.ndarray = None


def margin_report(ensemble, dataset, grid=None, thetas=None):
    """Margins, their CDF on ``grid``, and (binary runs) the bound on ``thetas``."""
    grid = np.linspace(-1.0, 1.0, 41) if grid is None else np.sort(np.asarray(grid, float))
    m = margins(ensemble, dataset)
    bound = None
    if thetas is not None:
        thetas = np.asarray(thetas, dtype=np.float64)
        bound = np.array([margin_bound(th, ensemble.normalizers, ensemble.betas,
                                       ensemble.V) for th in thetas])
    return MarginReport(m, grid, margin_cdf(m, grid), thetas, bound)


def coincidence_matrix(pred_i, pred_j, K):
    a = np.asarray(pred_i, dtype=np.int64)
    b = np.asarray(pred_j, dtype=np.int64)
    M = np.zeros((K, K), dtype=np.int64)
    np.add.at(M, (a - 1, b - 1), 1)
    return M


def kappa(pred_i, pred_j, K):
    """Agreement between two label sequences, corrected for chance."""
    if len(pred_i) != len(pred_j) or len(pred_i) == 0:
        raise DomainError("kappa needs two equal-length, non-empty label sequences")
    M = coincidence_matrix(pred_i, pred_j, K)
    m = M.sum()
    rows, cols = M.sum(axis=1), M.sum(axis=0)
    chance_num = int(rows @ cols)
    if chance_num == m * m:
        if np.trace(M) == m:
            return 1.0
        raise UndefinedKappaError("chance agreement is 1 but agreement is imperfect")
    observed = np.trace(M) / m
    chance = chance_num / (m * m)
    return float((observed - chance) / (1.0 - chance))


@dataclass(frozen=True)
class KappaErrorCloud:
    points: np.ndarray       # (pairs, 2): kappa, mean error
    centroid: tuple


def kappa_error_cloud_from_predictions(member_preds, labels, K):
    preds = np.asarray(member_preds)
    if preds.shape[0] < 2:
        raise DomainError("a kappa-error cloud needs at least two members")
    errors = np.mean(preds != np.asarray(labels)[None, :], axis=1)
    pts = np.array([(kappa(preds[i], preds[j], K), 0.5 * (errors[i] + errors[j]))
                    for i, j in combinations(range(preds.shape[0]), 2)])
    return KappaErrorCloud(pts, (float(pts[:, 0].mean()), float(pts[:, 1].mean())))


def kappa_error_cloud(ensemble, dataset):
    """Pairwise (kappa, mean error) over the ensemble's round-level members."""
    return kappa_error_cloud_from_predictions(
        ensemble.member_predictions(dataset.X), dataset.labels, dataset.K)


def f_score(precision, recall):
    if not (0.0 <= precision <= 1.0 and 0.0 <= recall <= 1.0):
        raise DomainError("precision and recall must lie in [0, 1]")
    if precision + recall == 0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def precision_recall(predicted, labels, positive=1):
    predicted = np.asarray(predicted)
    labels = np.asarray(labels)
    tp = np.sum((predicted == positive) & (labels == positive))
    pp = np.sum(predicted == positive)
    ap = np.sum(labels == positive)
    return (tp / pp if pp else 0.0), (tp / ap if ap else 0.0)


def macro_f_score(predicted, labels, K):
    """Unweighted mean of the one-vs-rest F-scores of every class."""
    return float(np.mean([f_score(*precision_recall(predicted, labels, c))
                          for c in range(1, K + 1)]))


def roc_auc(scores, labels):
    """Probability that a random positive outscores a random negative.

    Tied scores count one half, which equals the trapezoidal ROC area.
    """
    scores = np.asarray(scores, dtype=np.float64)
    pos = np.asarray(labels).astype(bool)
    n_pos, n_neg = pos.sum(), (~pos).sum()
    if n_pos == 0 or n_neg == 0:
        raise DomainError("AUC needs at least one positive and one negative example")
    ranks = rankdata(scores)
    return float((ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def positive_scores(score_matrix, positive=1):
    """Positive-class vote share of each row of a score matrix."""
    s = np.asarray(score_matrix, dtype=np.float64)
    total = s.sum(axis=1)
    safe = np.where(total != 0, total, 1.0)
    return s[:, positive - 1] / safe
