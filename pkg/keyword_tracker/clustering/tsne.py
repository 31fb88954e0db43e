"""
Exact t-SNE projection to two dimensions.

High-dimensional affinities come from per-point Gaussian kernels whose
precision is found by bisection so that each conditional distribution
has the target perplexity. Low-dimensional affinities use a Student-t
kernel with one degree of freedom. The layout is found by gradient
descent with momentum, per-coordinate gains and early exaggeration.
Once exaggeration ends, a step that would raise the divergence is
replaced by a backtracking gradient step, so KL is non-increasing from
then on. All pairwise quantities are computed exactly, so cost is
quadratic in the number of points.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial.distance import pdist, squareform
from tqdm import tqdm

from keyword_tracker.core.config import TSNEConfig
from keyword_tracker.exceptions import ConfigurationError, NumericError

logger = logging.getLogger(__name__)

BISECTION_STEPS = 50
ENTROPY_TOLERANCE = 1e-5
INIT_STD = 1e-4
BACKTRACK_STEPS = 30


@dataclass
class Projection2D:
    """A 2-D layout of tokens.

    Attributes:
        rows: (token, x, y) per input point, in input order.
        perplexity: Target perplexity used for calibration.
        final_kl: KL(P || Q) of the final layout.
        kl_trace: KL(P || Q) before each iteration, then of the final layout.
    """

    rows: List[Tuple[str, float, float]]
    perplexity: float
    final_kl: float
    kl_trace: List[float] = field(default_factory=list)

    @property
    def coordinates(self) -> np.ndarray:
        return np.array([[x, y] for _, x, y in self.rows])


def _conditional_row(sq_dist: np.ndarray, target_entropy: float) -> np.ndarray:
    """Gaussian conditional probabilities for one point at the target entropy."""
    # shift by the nearest distance so exp() cannot underflow to all zeros
    shifted = sq_dist - sq_dist.min()
    beta, beta_lo, beta_hi = 1.0, -math.inf, math.inf
    p = np.exp(-shifted * beta)
    for _ in range(BISECTION_STEPS):
        p = np.exp(-shifted * beta)
        total = p.sum()
        entropy = math.log(total) + beta * float(shifted @ p) / total
        gap = entropy - target_entropy
        if abs(gap) < ENTROPY_TOLERANCE:
            break
        if gap > 0:
            beta_lo = beta
            beta = beta * 2.0 if beta_hi == math.inf else (beta + beta_hi) / 2.0
        else:
            beta_hi = beta
            beta = beta / 2.0 if beta_lo == -math.inf else (beta + beta_lo) / 2.0
    return p / p.sum()


def joint_probabilities(vectors: np.ndarray, perplexity: float) -> np.ndarray:
    """Symmetric affinity matrix P with zero diagonal, summing to 1."""
    points = np.asarray(vectors, dtype=np.float64)
    n = points.shape[0]
    sq = squareform(pdist(points, "sqeuclidean"))
    target = math.log(perplexity)
    conditional = np.zeros((n, n))
    others = ~np.eye(n, dtype=bool)
    for i in range(n):
        conditional[i, others[i]] = _conditional_row(sq[i, others[i]], target)
    return (conditional + conditional.T) / (2.0 * n)


def kl_divergence(
    layout: np.ndarray, P: np.ndarray, exaggeration: float = 1.0
) -> Tuple[float, np.ndarray]:
    """KL(P || Q) of a layout and its gradient.

    Args:
        layout: n x 2 coordinates.
        P: Joint affinities from joint_probabilities.
        exaggeration: Factor applied to P in the gradient only.

    Returns:
        The divergence (over pairs with p > 0) and its n x 2 gradient.
    """
    num = 1.0 / (1.0 + squareform(pdist(layout, "sqeuclidean")))
    np.fill_diagonal(num, 0.0)
    Q = num / num.sum()
    mask = P > 0
    kl = float(np.sum(P[mask] * np.log(P[mask] / Q[mask])))
    PQ = (exaggeration * P - Q) * num
    grad = 4.0 * (PQ.sum(axis=1)[:, None] * layout - PQ @ layout)
    return kl, grad


def check_feasible(n: int, perplexity: float) -> None:
    """Reject inputs t-SNE cannot calibrate.

    Raises:
        ConfigurationError: If n < 4 or perplexity >= (n - 1) / 3.
    """
    if n < 4:
        raise ConfigurationError(f"t-SNE needs at least 4 points, got {n}")
    if not 0 < perplexity < (n - 1) / 3:
        raise ConfigurationError(
            f"Perplexity {perplexity} infeasible for {n} points (must be below {(n - 1) / 3:.3f})"
        )


def _descent_step(
    layout: np.ndarray,
    candidate: np.ndarray,
    kl: float,
    grad: np.ndarray,
    P: np.ndarray,
    learning_rate: float,
) -> Tuple[np.ndarray, float, np.ndarray, bool]:
    """Pick the next layout so that KL never increases.

    The momentum candidate is taken when it does not raise the divergence.
    Otherwise plain gradient steps of halving size are tried, and the
    current layout is kept when none of them helps.

    Returns:
        The next layout, its KL and gradient, and whether the momentum
        candidate was taken.
    """
    new_kl, new_grad = kl_divergence(candidate, P)
    if new_kl <= kl:
        return candidate, new_kl, new_grad, True
    step = learning_rate
    for _ in range(BACKTRACK_STEPS):
        trial = layout - step * grad
        trial -= trial.mean(axis=0)
        new_kl, new_grad = kl_divergence(trial, P)
        if new_kl <= kl:
            return trial, new_kl, new_grad, False
        step /= 2.0
    return layout, kl, grad, False


def tsne(
    vectors: np.ndarray,
    perplexity: float = 30.0,
    iters: int = 1000,
    seed: int = 0,
    tokens: Optional[Sequence[str]] = None,
    progress: bool = False,
    **options,
) -> Projection2D:
    """Project rows of ``vectors`` to 2-D.

    Args:
        vectors: n x D points.
        perplexity: Effective neighbor count per point.
        iters: Gradient descent iterations.
        seed: Seed for the initial layout.
        tokens: Labels for the rows; defaults to row numbers.
        progress: Show a progress bar.
        **options: Remaining TSNEConfig fields (learning_rate, momentum, ...).

    Raises:
        ConfigurationError: If the problem is infeasible, before iterating.
        NumericError: If the layout becomes non-finite.
    """
    points = np.asarray(vectors, dtype=np.float64)
    n = points.shape[0]
    check_feasible(n, perplexity)
    cfg = TSNEConfig(perplexity=perplexity, iters=iters, seed=seed, **options)
    labels = list(tokens) if tokens is not None else [str(i) for i in range(n)]
    if len(labels) != n:
        raise ConfigurationError(f"{len(labels)} tokens for {n} points")

    P = joint_probabilities(points, cfg.perplexity)
    rng = np.random.default_rng(cfg.seed)
    layout = rng.normal(0.0, INIT_STD, size=(n, 2))
    update = np.zeros_like(layout)
    gains = np.ones_like(layout)
    trace: List[float] = []
    carried: Optional[Tuple[float, np.ndarray]] = None

    for it in tqdm(range(cfg.iters), desc="t-SNE", disable=not progress):
        exaggeration = cfg.early_exaggeration if it < cfg.exaggeration_iters else 1.0
        momentum = cfg.momentum if it < cfg.momentum_switch_iter else cfg.final_momentum
        kl, grad = carried if carried is not None else kl_divergence(layout, P, exaggeration)
        trace.append(kl)
        # gains grow while a coordinate keeps its direction, shrink when it flips
        steady = (update * grad) < 0.0
        gains = np.where(steady, gains + 0.2, gains * 0.8)
        np.clip(gains, cfg.min_gain, None, out=gains)
        update = momentum * update - cfg.learning_rate * gains * grad
        candidate = layout + update
        candidate -= candidate.mean(axis=0)
        if it < cfg.exaggeration_iters:
            layout = candidate
        else:
            accepted, new_kl, new_grad, kept_momentum = _descent_step(
                layout, candidate, kl, grad, P, cfg.learning_rate
            )
            if not kept_momentum:
                update = np.zeros_like(layout)
                gains = np.ones_like(layout)
            layout, carried = accepted, (new_kl, new_grad)
        if not np.isfinite(layout).all():
            raise NumericError(f"t-SNE layout became non-finite at iteration {it + 1}")
        if (it + 1) % 100 == 0:
            logger.debug("t-SNE iteration %d: KL %.6f", it + 1, kl)

    final_kl, _ = kl_divergence(layout, P)
    trace.append(final_kl)
    logger.info("t-SNE on %d points (perplexity %g): final KL %.6f", n, cfg.perplexity, final_kl)
    rows = [(t, float(x), float(y)) for t, (x, y) in zip(labels, layout.tolist())]
    return Projection2D(rows=rows, perplexity=cfg.perplexity, final_kl=final_kl, kl_trace=trace)
