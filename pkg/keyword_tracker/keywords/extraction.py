"""
Candidate keyword extraction.

Two avenues produce (token, score) candidates: words that co-occur most
with the current keywords, and representative words of embedding
clusters. Both are combined by taking each token's best score.
"""

import logging
import math
from importlib import resources
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Union

import numpy as np

from keyword_tracker.clustering.kmeans import kmeans
from keyword_tracker.clustering.representatives import centroid_similarities
from keyword_tracker.cooccurrence.table import CooccurrenceTable
from keyword_tracker.core.config import (
    EngineConfig,
    ExtractMethod,
    KMeansConfig,
    RepresentativeMethod,
)
from keyword_tracker.corpus.vocabulary import Vocabulary
from keyword_tracker.embedding.vector_space import VectorSpace
from keyword_tracker.exceptions import ConfigurationError, ExtractionError
from keyword_tracker.keywords.keyword_set import Candidate

logger = logging.getLogger(__name__)


def load_stoplist(path: Optional[Union[str, Path]] = None) -> FrozenSet[str]:
    """Read a stoplist, one word per line (``#`` starts a comment).

    Without a path the bundled English list is used.
    """
    if path is None:
        text = resources.files("keyword_tracker.keywords").joinpath("stopwords.txt").read_text(
            encoding="utf-8"
        )
    else:
        text = Path(path).read_text(encoding="utf-8")
    words = (line.split("#", 1)[0].strip() for line in text.splitlines())
    return frozenset(w for w in words if w)


def auto_stop_set(vocab: Vocabulary, fraction: float = 0.001) -> Set[str]:
    """The most frequent ``floor(fraction * V)`` tokens of the vocabulary."""
    if not 0 <= fraction < 1:
        raise ConfigurationError(f"fraction must be in [0, 1), got {fraction}")
    # vocabulary ids are already ordered by descending frequency
    return set(vocab.tokens[: math.floor(fraction * len(vocab))])


def _top_k(scores: Mapping[str, float], k: int) -> List[Candidate]:
    return sorted(scores.items(), key=lambda ts: (-ts[1], ts[0]))[:k]


def extract_by_cooccurrence(
    seeds: Sequence[str],
    table: CooccurrenceTable,
    vocab: Vocabulary,
    stoplist: Iterable[str] = (),
    k: int = 25,
    auto_stop_fraction: float = 0.001,
) -> List[Candidate]:
    """Words scoring highest by summed co-occurrence with the seeds.

    score(w) = sum over resolvable seeds s of X[w, s]. Seeds, the stoplist
    and the auto-stop set are excluded, as are words with score 0. Ties
    are ordered by vocabulary id.

    Raises:
        ExtractionError: If no seed is in the vocabulary.
    """
    if k < 1:
        raise ConfigurationError(f"k must be >= 1, got {k}")
    ids = []
    for seed in seeds:
        idx = vocab.id_of(seed)
        if idx is None:
            logger.warning("Seed %r is not in the vocabulary; skipping", seed)
        else:
            ids.append(idx)
    if not ids:
        raise ExtractionError(f"None of the {len(seeds)} seed keyword(s) is in the vocabulary")

    scores = np.asarray(table.to_csr()[sorted(set(ids))].sum(axis=0)).ravel()
    excluded = set(seeds) | set(stoplist) | auto_stop_set(vocab, auto_stop_fraction)
    kept = [j for j in np.flatnonzero(scores > 0).tolist() if vocab.tokens[j] not in excluded]
    # ties keep vocabulary order, the order CooccurrenceTable.row uses
    kept.sort(key=lambda j: (-scores[j], j))
    return [(vocab.tokens[j], float(scores[j])) for j in kept[:k]]


def extract_by_clustering(
    space: VectorSpace,
    k_clusters: int = 100,
    per_cluster: int = 1,
    method: RepresentativeMethod = RepresentativeMethod.CENTROID_COSINE,
    kmeans_config: KMeansConfig = KMeansConfig(),
    frequencies: Optional[Mapping[str, int]] = None,
) -> List[Candidate]:
    """Representatives of each k-means cluster, scored by size x cosine.

    Up to ``per_cluster`` members are taken from every cluster, ordered by
    cosine to the centroid (``centroid_cosine``) or by corpus frequency
    (``frequency``). The score is the cluster size times the member's
    cosine to its centroid, floored at zero.
    """
    if per_cluster < 1:
        raise ConfigurationError(f"per_cluster must be >= 1, got {per_cluster}")
    method = RepresentativeMethod(method)
    if method == RepresentativeMethod.FREQUENCY and frequencies is None:
        raise ConfigurationError("The frequency method needs corpus frequencies")
    result = kmeans(
        space.vectors,
        k_clusters,
        max_iter=kmeans_config.max_iter,
        tol=kmeans_config.tol,
        seed=kmeans_config.seed,
        init=kmeans_config.init,
        normalize=kmeans_config.normalize,
    )
    sizes = result.sizes()
    scores: Dict[str, float] = {}
    for cid in range(result.k):
        ranked = centroid_similarities(space, result, cid)
        if method == RepresentativeMethod.FREQUENCY:
            ranked.sort(key=lambda ts: (-frequencies.get(ts[0], 0), ts[0]))
        for token, sim in ranked[:per_cluster]:
            scores[token] = max(0.0, float(sizes[cid]) * sim)
    return _top_k(scores, len(scores))


def union_candidates(*avenues: Sequence[Candidate]) -> List[Candidate]:
    """Merge candidate lists keeping each token's maximum score."""
    best: Dict[str, float] = {}
    for candidates in avenues:
        for token, score in candidates:
            if token not in best or score > best[token]:
                best[token] = score
    return _top_k(best, len(best))


def extract_candidates(
    seeds: Sequence[str],
    vocab: Vocabulary,
    table: CooccurrenceTable,
    space: VectorSpace,
    config: EngineConfig,
    stoplist: Iterable[str] = (),
) -> List[Candidate]:
    """Run the configured avenues and merge their candidates.

    The clustering avenue is filtered with the same exclusions as the
    co-occurrence avenue. The cluster count is clamped to the vocabulary
    size.
    """
    stoplist = set(stoplist)
    cooccur: List[Candidate] = []
    clustered: List[Candidate] = []
    if config.method in (ExtractMethod.COOCCUR, ExtractMethod.BOTH):
        cooccur = extract_by_cooccurrence(
            seeds, table, vocab, stoplist, config.extract_k, config.auto_stop_fraction
        )
    if config.method in (ExtractMethod.CLUSTER, ExtractMethod.BOTH):
        k_clusters = config.kmeans.k
        if k_clusters > len(space):
            logger.warning(
                "Reducing cluster count from %d to the vocabulary size %d", k_clusters, len(space)
            )
            k_clusters = len(space)
        excluded = set(seeds) | stoplist | auto_stop_set(vocab, config.auto_stop_fraction)
        clustered = [
            (t, s)
            for t, s in extract_by_clustering(
                space,
                k_clusters,
                config.per_cluster,
                config.representative,
                config.kmeans,
                vocab.frequencies(),
            )
            if t not in excluded
        ]
    merged = union_candidates(cooccur, clustered)
    logger.info(
        "Extracted %d candidate(s): %d by co-occurrence, %d by clustering",
        len(merged),
        len(cooccur),
        len(clustered),
    )
    return merged
