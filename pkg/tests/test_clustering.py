"""
Tests for k-means, cluster representatives and the t-SNE projection.
"""

import numpy as np
import pytest

from keyword_tracker.clustering import (
    CLUSTER_COLUMNS,
    PROJECTION_COLUMNS,
    KMeansResult,
    Projection2D,
    cluster_map,
    cluster_report_rows,
    cluster_terms,
    joint_probabilities,
    kl_divergence,
    kmeans,
    kmeans_restarts,
    projection_rows,
    representative,
    select_clusters,
    tsne,
)
from keyword_tracker.clustering.tsne import check_feasible
from keyword_tracker.core.config import KMeansInit, RepresentativeMethod
from keyword_tracker.exceptions import ConfigurationError, UnknownTokenError


def _blobs(centers, per_blob=10, spread=0.05, seed=0):
    rng = np.random.default_rng(seed)
    centers = np.asarray(centers, dtype=float)
    return np.vstack([c + rng.normal(0, spread, size=(per_blob, centers.shape[1])) for c in centers])


def _manual_result(centroids, assignments):
    centroids = np.asarray(centroids, dtype=float)
    return KMeansResult(
        k=len(centroids),
        centroids=centroids,
        assignments=np.asarray(assignments),
        wcss=0.0,
        iterations=1,
        seed=0,
    )


class TestKMeans:
    def test_two_obvious_groups(self):
        points = np.array([[0.0], [1.0], [10.0], [11.0]])
        result = kmeans_restarts(points, 2, restarts=10, seed=0)
        assert result.wcss == 1.0
        assert sorted(result.centroids.ravel().tolist()) == [0.5, 10.5]
        assert result.assignments[0] == result.assignments[1] != result.assignments[2]
        assert result.assignments[2] == result.assignments[3]

    def test_k_equals_size(self):
        points = np.random.default_rng(1).normal(size=(12, 3))
        result = kmeans(points, 12, seed=5)
        assert result.wcss == 0.0
        assert sorted(result.assignments.tolist()) == list(range(12))

    def test_single_cluster_is_the_mean(self):
        points = np.random.default_rng(2).normal(size=(30, 4))
        result = kmeans(points, 1)
        np.testing.assert_allclose(result.centroids[0], points.mean(axis=0), atol=1e-12)
        expected = float(((points - points.mean(axis=0)) ** 2).sum())
        assert result.wcss == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("k", [0, 6])
    def test_k_out_of_range(self, k):
        with pytest.raises(ConfigurationError):
            kmeans(np.zeros((5, 2)), k)

    def test_bad_settings(self):
        with pytest.raises(ConfigurationError):
            kmeans(np.zeros((5, 2)), 2, max_iter=0)
        with pytest.raises(ConfigurationError):
            kmeans(np.zeros((5, 2)), 2, tol=-1.0)

    def test_same_seed_is_bit_identical(self):
        points = np.random.default_rng(3).normal(size=(80, 5))
        first = kmeans(points, 7, seed=11)
        second = kmeans(points, 7, seed=11)
        np.testing.assert_array_equal(first.centroids, second.centroids)
        np.testing.assert_array_equal(first.assignments, second.assignments)
        assert first.wcss_trace == second.wcss_trace

    @pytest.mark.parametrize("init", list(KMeansInit))
    def test_wcss_never_increases(self, init):
        rng = np.random.default_rng(4)
        for _ in range(50):
            n = int(rng.integers(10, 60))
            points = rng.normal(size=(n, int(rng.integers(1, 6))))
            k = int(rng.integers(1, min(n, 12) + 1))
            result = kmeans(points, k, seed=int(rng.integers(0, 1000)), tol=0.0, init=init)
            trace = result.wcss_trace
            for before, after in zip(trace, trace[1:]):
                assert after <= before * (1 + 1e-12) + 1e-12

    def test_wcss_recomputes_from_assignments(self):
        points = _blobs([[0, 0], [5, 5], [0, 5]], seed=5)
        result = kmeans(points, 3, seed=1)
        diff = points - result.centroids[result.assignments]
        assert result.wcss == pytest.approx(float((diff**2).sum()), rel=1e-12)

    def test_converged_assignments_are_nearest_centroids(self):
        rng = np.random.default_rng(6)
        for seed in range(10):
            points = rng.normal(size=(60, 4))
            result = kmeans(points, 5, seed=seed, tol=0.0)
            assert result.converged
            dist = ((points[:, None, :] - result.centroids[None, :, :]) ** 2).sum(axis=2)
            np.testing.assert_array_equal(result.assignments, np.argmin(dist, axis=1))

    def test_no_empty_clusters(self):
        # duplicates force repeated zero-distance seeds
        points = np.vstack([np.zeros((8, 2)), np.ones((2, 2))])
        for init in KMeansInit:
            result = kmeans(points, 4, seed=2, init=init)
            assert (result.sizes() > 0).all()

    def test_recovers_separated_blobs(self):
        points = _blobs([[0, 0], [10, 0], [0, 10], [10, 10]], seed=7)
        result = kmeans_restarts(points, 4, restarts=5, seed=0)
        for start in range(0, 40, 10):
            assert len(set(result.assignments[start : start + 10].tolist())) == 1
        assert len(set(result.assignments.tolist())) == 4

    def test_normalize_clusters_by_direction(self):
        points = np.array([[1.0, 0.0], [100.0, 1.0], [0.0, 1.0], [1.0, 80.0]])
        result = kmeans_restarts(points, 2, restarts=5, normalize=True)
        assert result.assignments[0] == result.assignments[1]
        assert result.assignments[2] == result.assignments[3]
        np.testing.assert_allclose(np.linalg.norm(result.centroids, axis=1), 1.0, atol=0.01)

    def test_restarts_keep_the_best_run(self):
        points = np.random.default_rng(8).normal(size=(50, 3))
        best = kmeans_restarts(points, 6, restarts=4, seed=20)
        assert best.wcss == min(kmeans(points, 6, seed=s).wcss for s in range(20, 24))

    def test_restarts_must_be_positive(self):
        with pytest.raises(ConfigurationError):
            kmeans_restarts(np.zeros((4, 1)), 1, restarts=0)


class TestRepresentatives:
    def test_closest_in_angle_to_centroid(self, make_space):
        space = make_space({"a": [1.0, 0.0], "b": [0.9, 0.1]})
        result = _manual_result([[0.95, 0.05]], [0, 0])
        assert representative(space, result, 0) == "a"

    def test_singleton_cluster(self, make_space):
        space = make_space({"a": [1.0, 0.0], "b": [0.0, 1.0]})
        result = _manual_result([[1.0, 0.0], [0.0, 1.0]], [0, 1])
        assert representative(space, result, 1) == "b"

    def test_by_frequency(self, make_space):
        space = make_space({"x": [1.0, 0.0], "y": [0.0, 1.0]})
        result = _manual_result([[0.5, 0.5]], [0, 0])
        chosen = representative(space, result, 0, RepresentativeMethod.FREQUENCY, {"x": 5, "y": 9})
        assert chosen == "y"

    def test_frequency_needs_counts(self, make_space):
        space = make_space({"x": [1.0, 0.0]})
        with pytest.raises(ConfigurationError):
            representative(space, _manual_result([[1.0, 0.0]], [0]), 0, RepresentativeMethod.FREQUENCY)

    def test_misaligned_result(self, make_space):
        space = make_space({"x": [1.0, 0.0], "y": [0.0, 1.0]})
        with pytest.raises(ConfigurationError):
            representative(space, _manual_result([[1.0, 0.0]], [0]), 0)

    def test_terms_follow_assignments(self, make_space):
        space = make_space(
            {"p": [1.0, 0.1], "q": [1.0, 0.0], "r": [0.0, 1.0], "s": [0.2, 1.0]}
        )
        result = _manual_result([[1.0, 0.05], [0.1, 1.0]], [0, 0, 1, 1])
        assert sorted(cluster_terms(space, result, 0)) == ["p", "q"]
        assert sorted(cluster_terms(space, result, 1)) == ["r", "s"]

    def test_first_term_is_the_representative(self, random_space):
        space = random_space(60, 5, seed=9)
        result = kmeans(space.vectors, 6, seed=3)
        for cid in range(6):
            assert cluster_terms(space, result, cid, limit=1) == [representative(space, result, cid)]

    def test_terms_match_membership_scan(self, random_space):
        space = random_space(80, 4, seed=10)
        result = kmeans(space.vectors, 5, seed=0)
        for cid in range(5):
            scanned = {t for t, c in zip(space.tokens, result.assignments.tolist()) if c == cid}
            assert set(cluster_terms(space, result, cid)) == scanned


class TestJointProbabilities:
    def test_symmetric_and_normalized(self):
        points = np.random.default_rng(12).normal(size=(25, 6))
        P = joint_probabilities(points, 5.0)
        np.testing.assert_allclose(P, P.T, atol=1e-15)
        assert P.sum() == pytest.approx(1.0, abs=1e-12)
        assert (np.diag(P) == 0).all()
        assert (P >= 0).all()

    def test_higher_perplexity_spreads_mass(self):
        points = np.random.default_rng(13).normal(size=(20, 3))
        narrow = joint_probabilities(points, 2.0)
        wide = joint_probabilities(points, 6.0)
        assert wide.max() < narrow.max()

    def test_sub_unit_perplexity_keeps_only_nearest(self):
        points = np.array([[0.0, 0.0], [0.1, 0.0], [5.0, 5.0], [5.0, 5.1]])
        P = joint_probabilities(points, 0.9)
        np.testing.assert_allclose(P[0], [0.0, 0.25, 0.0, 0.0], atol=1e-12)
        np.testing.assert_allclose(P[2], [0.0, 0.0, 0.0, 0.25], atol=1e-12)


class TestKLDivergence:
    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(14)
        P = joint_probabilities(rng.normal(size=(10, 5)), 2.0)
        layout = rng.normal(size=(10, 2))
        _, analytic = kl_divergence(layout, P)
        h = 1e-5
        numeric = np.zeros_like(layout)
        for index in np.ndindex(layout.shape):
            saved = layout[index]
            layout[index] = saved + h
            up, _ = kl_divergence(layout, P)
            layout[index] = saved - h
            down, _ = kl_divergence(layout, P)
            layout[index] = saved
            numeric[index] = (up - down) / (2 * h)
        rel = np.linalg.norm(numeric - analytic) / np.linalg.norm(numeric + analytic)
        assert rel < 1e-4

    def test_exaggeration_only_scales_the_gradient(self):
        rng = np.random.default_rng(15)
        P = joint_probabilities(rng.normal(size=(8, 3)), 2.0)
        layout = rng.normal(size=(8, 2))
        plain, _ = kl_divergence(layout, P)
        exaggerated, _ = kl_divergence(layout, P, exaggeration=4.0)
        assert plain == exaggerated


class TestTSNE:
    @pytest.mark.parametrize("n,perplexity", [(3, 0.5), (10, 3.0), (10, 5.0), (10, 0.0)])
    def test_infeasible(self, n, perplexity):
        with pytest.raises(ConfigurationError):
            check_feasible(n, perplexity)
        with pytest.raises(ConfigurationError):
            tsne(np.zeros((n, 2)) + np.arange(n)[:, None], perplexity, iters=5)

    def test_token_count_must_match(self):
        with pytest.raises(ConfigurationError):
            tsne(np.eye(5), 1.0, iters=5, tokens=["a", "b"])

    def test_pairs_stay_together(self):
        rng = np.random.default_rng(16)
        far_a, far_b = np.zeros(10), np.full(10, 5.0)
        points = np.vstack(
            [far_a, far_a + rng.normal(0, 0.01, 10), far_b, far_b + rng.normal(0, 0.01, 10)]
        )
        projection = tsne(points, 0.9, iters=500, seed=1, tokens=["a1", "a2", "b1", "b2"])
        xy = projection.coordinates
        within_a = np.linalg.norm(xy[0] - xy[1])
        within_b = np.linalg.norm(xy[2] - xy[3])
        between = min(np.linalg.norm(xy[i] - xy[j]) for i in (0, 1) for j in (2, 3))
        assert within_a < between
        assert within_b < between

    def test_projection_shape_and_trace(self):
        points = _blobs([[0, 0, 0], [4, 4, 4]], per_blob=15, seed=17)
        projection = tsne(points, 5.0, iters=300, seed=2)
        assert isinstance(projection, Projection2D)
        assert [t for t, _, _ in projection.rows] == [str(i) for i in range(30)]
        assert np.isfinite(projection.coordinates).all()
        assert len(projection.kl_trace) == 301
        assert projection.final_kl == projection.kl_trace[-1] >= 0.0
        np.testing.assert_allclose(projection.coordinates.mean(axis=0), 0.0, atol=1e-9)

    def test_kl_settles_in_final_iterations(self):
        points = _blobs([[0, 0, 0, 0], [3, 0, 3, 0], [0, 3, 0, 3]], per_blob=10, spread=0.5, seed=18)
        projection = tsne(points, 5.0, iters=1000, seed=3)
        tail = projection.kl_trace[-101:]
        for before, after in zip(tail, tail[1:]):
            assert after <= before + 1e-6

    @pytest.mark.parametrize("seed", range(10))
    def test_kl_settles_for_every_seed(self, seed):
        points = _blobs([[0, 0, 0], [4, 0, 0], [0, 4, 0]], per_blob=10, spread=0.5, seed=seed)
        projection = tsne(points, 5.0, iters=1000, seed=seed)
        tail = projection.kl_trace[-101:]
        increases = [after - before for before, after in zip(tail, tail[1:]) if after > before + 1e-6]
        assert increases == []

    def test_kl_never_rises_after_exaggeration(self):
        points = _blobs([[0, 0, 0, 0], [3, 0, 3, 0], [0, 3, 0, 3]], per_blob=8, spread=0.5, seed=20)
        projection = tsne(points, 4.0, iters=400, seed=5, exaggeration_iters=50, momentum_switch_iter=120)
        after = projection.kl_trace[50:]
        assert all(b <= a for a, b in zip(after, after[1:]))
        assert after[-1] < after[0]

    def test_same_seed_same_layout(self):
        points = np.random.default_rng(19).normal(size=(20, 4))
        first = tsne(points, 4.0, iters=200, seed=8)
        second = tsne(points, 4.0, iters=200, seed=8)
        assert first.rows == second.rows
        assert first.kl_trace == second.kl_trace


class TestReports:
    def _fixture(self, make_space):
        space = make_space({"p": [1.0, 0.1], "q": [1.0, 0.0], "r": [0.0, 1.0]})
        return space, _manual_result([[1.0, 0.02], [0.0, 1.0]], [0, 0, 1])

    def test_cluster_rows(self, make_space):
        space, result = self._fixture(make_space)
        rows = cluster_report_rows(space, result)
        assert list(rows[0]) == CLUSTER_COLUMNS
        assert [(r["token"], r["cluster_id"]) for r in rows] == [("q", 0), ("p", 0), ("r", 1)]
        assert rows[2]["similarity_to_centroid"] == pytest.approx(1.0)

    def test_cluster_rows_for_selection(self, make_space):
        space, result = self._fixture(make_space)
        assert [r["token"] for r in cluster_report_rows(space, result, [1])] == ["r"]

    def test_projection_rows_join_clusters(self, make_space):
        space, result = self._fixture(make_space)
        projection = Projection2D(rows=[("p", 0.0, 1.0), ("r", 2.0, 3.0)], perplexity=1.0, final_kl=0.1)
        rows = projection_rows(projection, cluster_map(space, result))
        assert list(rows[0]) == PROJECTION_COLUMNS
        assert rows == [
            {"token": "p", "x": 0.0, "y": 1.0, "cluster_id": 0},
            {"token": "r", "x": 2.0, "y": 3.0, "cluster_id": 1},
        ]

    def test_projection_of_unclustered_token(self):
        projection = Projection2D(rows=[("zz", 0.0, 0.0)], perplexity=1.0, final_kl=0.0)
        with pytest.raises(UnknownTokenError):
            projection_rows(projection, {"a": 0})

    def test_select_clusters(self):
        cluster_of = {"a": 0, "b": 2, "c": 2, "d": 5}
        assert select_clusters(cluster_of) == [0, 2, 5]
        assert select_clusters(cluster_of, [5], ["b"]) == [2, 5]
        with pytest.raises(ConfigurationError):
            select_clusters(cluster_of, [1])
        with pytest.raises(UnknownTokenError):
            select_clusters(cluster_of, tokens=["zz"])
