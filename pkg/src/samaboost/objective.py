"""Multiview exponential loss and the stagewise learning-rate problem.

An example misclassified by ``b`` of the ``V`` views has difficulty
``2b/V - 1``. A round with learning rate ``beta`` multiplies its weight by
``exp(beta * difficulty)``; the round objective is the total of those
products.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

MA_ERROR_EPS = 1e-9


def _counts(b, V):
    b = np.asarray(b)
    if V < 1:
        raise DomainError("view count must be at least 1")
    if np.any(b < 0) or np.any(b > V):
        raise DomainError(f"misclassified-view count must lie in 0..{V}")
    return b


def transform_hypothesis(Y, h):
    """Re-sign a one-hot prediction against its one-hot label.

    A correct prediction is returned as is. A wrong one becomes ``-1`` at the
    true and predicted positions and ``0`` elsewhere, so ``Y @ result`` is
    ``+1`` or ``-1``.
    """
    Y = np.asarray(Y)
    h = np.asarray(h)
    if Y.shape != h.shape or Y.ndim != 1:
        raise DomainError("label and hypothesis must be vectors of equal length")
    if not (np.all((h == 0) | (h == 1)) and h.sum() == 1):
        raise DomainError("hypothesis vector must be one-hot")
    agree = int(Y @ h)
    # delta(x) is 1 only at x == 0.
    sign = np.where((Y - h) % 2 == 0, 1, -1)
    miss = (Y + h - 1 == 0).astype(int) * sign
    return (agree == 0) * miss + h * (agree - 1 == 0)


def difficulty(b, V):
    """``2b/V - 1``: -1 when every view is right, +1 when all are wrong."""
    return 2.0 * _counts(b, V) / V - 1.0


def exp_loss(b, V):
    return np.exp(difficulty(b, V))


def evaluate_objective(W, b, V, beta):
    """``sum_i W_i exp(-beta (1 - 2 b_i / V))``."""
    theta = difficulty(b, V)
    return float(np.sum(np.asarray(W) * np.exp(beta * theta)))


def objective_derivative(W, b, V, beta):
    theta = difficulty(b, V)
    return float(np.sum(np.asarray(W) * theta * np.exp(beta * theta)))


@dataclass(frozen=True)
class BetaSolution:
    beta: float
    objective: float
    clamped: str = None   # None, "lower" or "upper"
    iterations: int = 0


def optimize_beta(W, b, V, beta_max=10.0, tolerance=1e-12, max_iter=500):
    """Minimize the round objective over ``[0, beta_max]``.

    The objective is convex in ``beta``, so its derivative is increasing.
    Without a sign change on the interval the minimizer is an endpoint and is
    flagged as clamped. Otherwise the root of the derivative is bisected until
    ``|dA/dbeta| < tolerance`` or the bracket stops shrinking in floating point.
    """
    if not beta_max > 0:
        raise DomainError("beta_max must be positive")
    W = np.asarray(W, dtype=np.float64)
    theta = difficulty(b, V)

    def slope(beta):
        return float(np.sum(W * theta * np.exp(beta * theta)))

    def value(beta):
        return float(np.sum(W * np.exp(beta * theta)))

    if slope(0.0) >= 0.0:
        return BetaSolution(0.0, value(0.0), "lower")
    if slope(beta_max) <= 0.0:
        return BetaSolution(float(beta_max), value(beta_max), "upper")
    lo, hi = 0.0, float(beta_max)
    mid = 0.5 * (lo + hi)
    for it in range(1, max_iter + 1):
        g = slope(mid)
        if abs(g) < tolerance:
            break
        if g < 0:
            lo = mid
        else:
            hi = mid
        new = 0.5 * (lo + hi)
        if new == mid or new == lo or new == hi:
            break
        mid = new
    return BetaSolution(mid, value(mid), None, it)


def ma_beta(per_view_error):
    """Closed-form rate ``0.5 ln((1 - prod P_v) / prod P_v)``."""
    P = float(np.prod(np.asarray(per_view_error, dtype=np.float64)))
    if not 0.0 < P < 1.0:
        raise DomainError(f"product of per-view errors {P} must lie in (0, 1)")
    return 0.5 * np.log((1.0 - P) / P)


def clip_errors(per_view_error, eps=MA_ERROR_EPS):
    return np.clip(np.asarray(per_view_error, dtype=np.float64), eps, 1.0 - eps)


def update_weights(W, b, V, beta):
    """Multiply by ``exp(-beta (1 - 2b/V))`` and renormalize.

    Returns ``(new_weights, Z)`` where ``Z`` is the normalizer.
    """
    if beta < 0:
        raise DomainError("beta must be non-negative")
    raw = np.asarray(W, dtype=np.float64) * np.exp(beta * difficulty(b, V))
    Z = float(raw.sum())
    return raw / Z, Z
