"""
Tabular read-outs of clusterings and projections.

Cluster reports have columns ``token,cluster_id,similarity_to_centroid``;
projections have ``token,x,y,cluster_id``.
"""

from typing import Dict, Iterable, List, Mapping, Optional

from keyword_tracker.clustering.kmeans import KMeansResult
from keyword_tracker.clustering.representatives import centroid_similarities
from keyword_tracker.clustering.tsne import Projection2D
from keyword_tracker.embedding.vector_space import VectorSpace
from keyword_tracker.exceptions import ConfigurationError, UnknownTokenError

CLUSTER_COLUMNS = ["token", "cluster_id", "similarity_to_centroid"]
PROJECTION_COLUMNS = ["token", "x", "y", "cluster_id"]


def cluster_report_rows(
    space: VectorSpace, result: KMeansResult, cluster_ids: Optional[Iterable[int]] = None
) -> List[Dict[str, object]]:
    """One row per member, by cluster id then descending similarity."""
    ids = range(result.k) if cluster_ids is None else sorted(set(cluster_ids))
    rows: List[Dict[str, object]] = []
    for cid in ids:
        for token, sim in centroid_similarities(space, result, cid):
            rows.append({"token": token, "cluster_id": cid, "similarity_to_centroid": sim})
    return rows


def cluster_map(space: VectorSpace, result: KMeansResult) -> Dict[str, int]:
    """Token to cluster id."""
    return {t: int(c) for t, c in zip(space.tokens, result.assignments.tolist())}


def projection_rows(
    projection: Projection2D, cluster_of: Mapping[str, int]
) -> List[Dict[str, object]]:
    """Projection coordinates joined with each token's cluster id.

    Raises:
        UnknownTokenError: If a projected token has no cluster.
    """
    rows: List[Dict[str, object]] = []
    for token, x, y in projection.rows:
        if token not in cluster_of:
            raise UnknownTokenError(token)
        rows.append({"token": token, "x": x, "y": y, "cluster_id": cluster_of[token]})
    return rows


def select_clusters(
    cluster_of: Mapping[str, int],
    cluster_ids: Iterable[int] = (),
    tokens: Iterable[str] = (),
) -> List[int]:
    """Resolve a cluster selection given by id and/or by member token.

    An empty selection means every cluster.

    Raises:
        ConfigurationError: On an id no token belongs to.
        UnknownTokenError: On a token without a cluster.
    """
    known = set(cluster_of.values())
    selected = set()
    for cid in cluster_ids:
        if cid not in known:
            raise ConfigurationError(f"No token belongs to cluster {cid}")
        selected.add(int(cid))
    for token in tokens:
        if token not in cluster_of:
            raise UnknownTokenError(token)
        selected.add(cluster_of[token])
    return sorted(selected) if selected else sorted(known)
