"""
K-means clustering with Lloyd's algorithm.

Each iteration assigns every point to its nearest centroid (squared
Euclidean distance, ties to the lowest cluster id), repairs empty
clusters by moving the point farthest from its centroid into them, and
recomputes centroids as member means.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from keyword_tracker.core.config import KMeansInit
from keyword_tracker.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

# Points per block when computing point-to-centroid distances
_BLOCK = 1024


@dataclass
class KMeansResult:
    """Outcome of one k-means run.

    Attributes:
        k: Number of clusters.
        centroids: k x D centroid matrix.
        assignments: Cluster id per point.
        wcss: Within-cluster sum of squared distances.
        iterations: Lloyd iterations performed.
        seed: Seed the run was started from.
        wcss_trace: wcss after each iteration.
        converged: Whether assignments stopped changing.
    """

    k: int
    centroids: np.ndarray
    assignments: np.ndarray
    wcss: float
    iterations: int
    seed: int
    wcss_trace: List[float] = field(default_factory=list)
    converged: bool = False

    def members(self, cluster_id: int) -> np.ndarray:
        """Indices of the points assigned to ``cluster_id``, ascending."""
        if not 0 <= cluster_id < self.k:
            raise ConfigurationError(f"Cluster id {cluster_id} outside [0, {self.k})")
        return np.flatnonzero(self.assignments == cluster_id)

    def sizes(self) -> np.ndarray:
        return np.bincount(self.assignments, minlength=self.k)


def squared_distances(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    """n x k matrix of squared Euclidean distances, by direct subtraction."""
    out = np.empty((points.shape[0], centroids.shape[0]))
    for start in range(0, points.shape[0], _BLOCK):
        diff = points[start : start + _BLOCK, None, :] - centroids[None, :, :]
        out[start : start + _BLOCK] = np.einsum("ijk,ijk->ij", diff, diff)
    return out


def normalize_rows(vectors: np.ndarray) -> np.ndarray:
    """Scale rows to unit length; zero rows stay zero."""
    norms = np.linalg.norm(vectors, axis=1, keepdims=True)
    return np.divide(vectors, norms, out=np.zeros_like(vectors), where=norms > 0)


def _init_kmeanspp(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    chosen = [int(rng.integers(n))]
    closest = squared_distances(points, points[chosen])[:, 0]
    for _ in range(1, k):
        total = closest.sum()
        if total > 0:
            idx = int(rng.choice(n, p=closest / total))
        else:
            # every point coincides with a chosen center
            remaining = np.setdiff1d(np.arange(n), chosen)
            idx = int(rng.choice(remaining))
        chosen.append(idx)
        closest = np.minimum(closest, squared_distances(points, points[idx : idx + 1])[:, 0])
    return points[chosen].copy()


def _init_random(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    return points[rng.choice(points.shape[0], size=k, replace=False)].copy()


def _repair_empty(labels: np.ndarray, dist: np.ndarray, k: int) -> np.ndarray:
    counts = np.bincount(labels, minlength=k)
    empty = np.flatnonzero(counts == 0)
    if len(empty) == 0:
        return labels
    labels = labels.copy()
    own = dist[np.arange(len(labels)), labels].copy()
    for e in empty:
        candidates = np.flatnonzero(counts[labels] >= 2)
        # argmax picks the lowest index among equally distant points
        victim = candidates[int(np.argmax(own[candidates]))]
        logger.debug("Cluster %d empty; moving point %d into it", e, victim)
        counts[labels[victim]] -= 1
        labels[victim] = e
        counts[e] = 1
        own[victim] = 0.0
    return labels


def _means(points: np.ndarray, labels: np.ndarray, k: int) -> np.ndarray:
    sums = np.zeros((k, points.shape[1]))
    np.add.at(sums, labels, points)
    return sums / np.bincount(labels, minlength=k)[:, None]


def _wcss(points: np.ndarray, centroids: np.ndarray, labels: np.ndarray) -> float:
    diff = points - centroids[labels]
    return float(np.einsum("ij,ij->", diff, diff))


def kmeans(
    vectors: np.ndarray,
    k: int,
    max_iter: int = 300,
    tol: float = 1e-4,
    seed: int = 0,
    init: KMeansInit = KMeansInit.KMEANSPP,
    normalize: bool = False,
) -> KMeansResult:
    """Cluster the rows of ``vectors`` into k groups.

    Iteration stops when assignments no longer change, when wcss improves
    by less than ``tol``, or after ``max_iter`` iterations.

    Args:
        vectors: V x D points.
        k: Number of clusters, 1 <= k <= V.
        max_iter: Iteration cap.
        tol: Minimum absolute wcss improvement to keep iterating.
        seed: Seed for centroid initialization.
        init: ``kmeanspp`` or ``random`` seeding.
        normalize: Length-normalize points before clustering.

    Returns:
        The clustering; centroids live in the (possibly normalized) point space.

    Raises:
        ConfigurationError: If k is outside [1, V] or another setting is invalid.
    """
    points = np.asarray(vectors, dtype=np.float64)
    if points.ndim != 2:
        raise ConfigurationError(f"Expected a V x D array, got shape {points.shape}")
    n = points.shape[0]
    if not 1 <= k <= n:
        raise ConfigurationError(f"k must be in [1, {n}], got {k}")
    if max_iter < 1 or tol < 0:
        raise ConfigurationError(f"Need max_iter >= 1 and tol >= 0, got {max_iter}, {tol}")
    if normalize:
        points = normalize_rows(points)

    rng = np.random.default_rng(seed)
    init = KMeansInit(init)
    centroids = (
        _init_kmeanspp(points, k, rng) if init == KMeansInit.KMEANSPP else _init_random(points, k, rng)
    )

    trace: List[float] = []
    labels: Optional[np.ndarray] = None
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        dist = squared_distances(points, centroids)
        new_labels = _repair_empty(np.argmin(dist, axis=1), dist, k)
        if labels is not None and np.array_equal(new_labels, labels):
            converged = True
            iterations -= 1
            break
        labels = new_labels
        centroids = _means(points, labels, k)
        wcss = _wcss(points, centroids, labels)
        trace.append(wcss)
        if len(trace) > 1 and trace[-2] - wcss < tol:
            break

    assert labels is not None
    logger.info(
        "k-means k=%d: wcss %.6f after %d iteration(s)%s",
        k,
        trace[-1],
        iterations,
        " (converged)" if converged else "",
    )
    return KMeansResult(
        k=k,
        centroids=centroids,
        assignments=labels,
        wcss=trace[-1],
        iterations=max(iterations, 1),
        seed=seed,
        wcss_trace=trace,
        converged=converged,
    )


def kmeans_restarts(
    vectors: np.ndarray, k: int, restarts: int = 10, seed: int = 0, **options
) -> KMeansResult:
    """Best (lowest wcss) of runs seeded ``seed .. seed + restarts - 1``.

    Ties keep the earliest seed.
    """
    if restarts < 1:
        raise ConfigurationError(f"restarts must be >= 1, got {restarts}")
    best: Optional[KMeansResult] = None
    for s in range(seed, seed + restarts):
        result = kmeans(vectors, k, seed=s, **options)
        if best is None or result.wcss < best.wcss:
            best = result
    assert best is not None
    return best
