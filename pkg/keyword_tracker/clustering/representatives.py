"""
Representative keywords and member listings for k-means clusters.
"""

from typing import List, Mapping, Optional, Tuple

import numpy as np

from keyword_tracker.clustering.kmeans import KMeansResult
from keyword_tracker.core.config import RepresentativeMethod
from keyword_tracker.embedding.vector_space import VectorSpace
from keyword_tracker.exceptions import ConfigurationError, DomainError, KeywordTrackerError


def _check_alignment(space: VectorSpace, result: KMeansResult) -> None:
    if len(result.assignments) != len(space):
        raise ConfigurationError(
            f"Clustering covers {len(result.assignments)} points but the space has {len(space)} tokens"
        )


def centroid_similarities(
    space: VectorSpace, result: KMeansResult, cluster_id: int
) -> List[Tuple[str, float]]:
    """(token, cosine to centroid) for every member, best first.

    Ties are broken by ascending token. A zero-norm centroid scores every
    member 0.
    """
    _check_alignment(space, result)
    members = result.members(cluster_id)
    try:
        sims = space.similarities(result.centroids[cluster_id])
    except DomainError:
        sims = np.zeros(len(space))
    scored = [(space.tokens[i], float(sims[i])) for i in members.tolist()]
    return sorted(scored, key=lambda ts: (-ts[1], ts[0]))


def representative(
    space: VectorSpace,
    result: KMeansResult,
    cluster_id: int,
    method: RepresentativeMethod = RepresentativeMethod.CENTROID_COSINE,
    frequencies: Optional[Mapping[str, int]] = None,
) -> str:
    """Pick the token that stands for a cluster.

    Args:
        space: The clustered vector space.
        result: The clustering of ``space``.
        cluster_id: The cluster.
        method: ``centroid_cosine`` takes the member closest in angle to the
            centroid; ``frequency`` the most frequent member.
        frequencies: Corpus counts, required by the ``frequency`` method.

    Raises:
        KeywordTrackerError: If the cluster has no members.
    """
    method = RepresentativeMethod(method)
    if method == RepresentativeMethod.FREQUENCY:
        if frequencies is None:
            raise ConfigurationError("The frequency method needs corpus frequencies")
        _check_alignment(space, result)
        tokens = [space.tokens[i] for i in result.members(cluster_id).tolist()]
        if not tokens:
            raise KeywordTrackerError(f"Cluster {cluster_id} is empty")
        return min(tokens, key=lambda t: (-frequencies.get(t, 0), t))

    ranked = centroid_similarities(space, result, cluster_id)
    if not ranked:
        raise KeywordTrackerError(f"Cluster {cluster_id} is empty")
    return ranked[0][0]


def cluster_terms(
    space: VectorSpace, result: KMeansResult, cluster_id: int, limit: Optional[int] = None
) -> List[str]:
    """Members by descending cosine to the centroid, at most ``limit``."""
    ranked = centroid_similarities(space, result, cluster_id)
    if limit is not None:
        ranked = ranked[:limit]
    return [t for t, _ in ranked]
