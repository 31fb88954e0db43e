"""
Topic discovery over word vectors: k-means, representatives and t-SNE.
"""

from keyword_tracker.clustering.kmeans import KMeansResult, kmeans, kmeans_restarts
from keyword_tracker.clustering.reports import (
    CLUSTER_COLUMNS,
    PROJECTION_COLUMNS,
    cluster_map,
    cluster_report_rows,
    projection_rows,
    select_clusters,
)
from keyword_tracker.clustering.representatives import (
    centroid_similarities,
    cluster_terms,
    representative,
)
from keyword_tracker.clustering.tsne import Projection2D, joint_probabilities, kl_divergence, tsne

__all__ = [
    "KMeansResult",
    "kmeans",
    "kmeans_restarts",
    "centroid_similarities",
    "cluster_terms",
    "representative",
    "Projection2D",
    "joint_probabilities",
    "kl_divergence",
    "tsne",
    "CLUSTER_COLUMNS",
    "PROJECTION_COLUMNS",
    "cluster_map",
    "cluster_report_rows",
    "projection_rows",
    "select_clusters",
]
