"""
Tests for the flat pipeline configuration and its derived stage settings.
"""

from pathlib import Path

import pytest

from keyword_tracker.core.config import (
    ExtractMethod,
    KMeansInit,
    PipelineConfig,
    TrainMode,
    Weighting,
    read_config_file,
)
from keyword_tracker.exceptions import ConfigurationError

SHIPPED_CONFIG = Path(__file__).resolve().parent.parent / "config" / "pipeline.conf"


class TestPipelineConfig:
    def test_defaults(self):
        config = PipelineConfig()
        assert (config.dim, config.window, config.clusters, config.kmax) == (50, 10, 100, 100)
        assert config.decay == 0.7
        assert config.probes == ["female", "male"]

    def test_shipped_file_matches_defaults(self):
        assert PipelineConfig.from_file(SHIPPED_CONFIG) == PipelineConfig()

    def test_file_values_are_coerced(self, tmp_path):
        path = tmp_path / "pipeline.conf"
        path.write_text(
            "# comment\n\nwindow = 5\nweighting = uniform\nlowercase = false\nprobes = a, b ,c\n",
            encoding="utf-8",
        )
        config = PipelineConfig.from_file(path)
        assert config.window == 5
        assert config.weighting == Weighting.UNIFORM
        assert config.lowercase is False
        assert config.probes == ["a", "b", "c"]

    def test_unknown_key(self, tmp_path):
        path = tmp_path / "pipeline.conf"
        path.write_text("windw = 5\n", encoding="utf-8")
        with pytest.raises(ConfigurationError, match="windw"):
            PipelineConfig.from_file(path)

    @pytest.mark.parametrize(
        "line", ["window = 0", "decay = 1.5", "extract_method = guess", "probes = ,", "dim = many"]
    )
    def test_invalid_values(self, tmp_path, line):
        path = tmp_path / "pipeline.conf"
        path.write_text(line + "\n", encoding="utf-8")
        with pytest.raises(ConfigurationError):
            PipelineConfig.from_file(path)

    def test_overrides_skip_none(self):
        config = PipelineConfig().with_overrides({"dim": 20, "window": None, "kmeans_init": "random"})
        assert config.dim == 20
        assert config.window == 10
        assert config.kmeans_init == KMeansInit.RANDOM

    def test_invalid_override(self):
        with pytest.raises(ConfigurationError):
            PipelineConfig().with_overrides({"clusters": 0})

    def test_stage_seeds_differ(self):
        config = PipelineConfig(seed=10)
        seeds = [config.stage_seed(s) for s in ("train", "cluster", "project", "simulate")]
        assert len(set(seeds)) == 4
        assert all(s > 10 for s in seeds)
        with pytest.raises(ConfigurationError):
            config.stage_seed("bake")

    def test_stage_configs(self):
        config = PipelineConfig(seed=3, threads=4, clusters=12, extract_method="cooccur", tsne_iters=50)
        assert config.train_config().mode == TrainMode.PARALLEL
        assert config.train_config().seed == config.stage_seed("train")
        assert config.kmeans_config().k == 12
        assert config.tsne_config().iters == 50
        engine = config.engine_config()
        assert engine.method == ExtractMethod.COOCCUR
        assert engine.kmeans == config.kmeans_config()
        assert PipelineConfig().train_config().mode == TrainMode.DETERMINISTIC

    def test_lines_read_back(self, tmp_path):
        config = PipelineConfig(seed=5, probes=["#metoo", "believe"], kmeans_tol=1e-6, normalize=True)
        path = tmp_path / "resolved.conf"
        path.write_text("\n".join(config.to_lines()) + "\n", encoding="utf-8")
        assert PipelineConfig.from_file(path) == config

    def test_lines_are_flat(self):
        lines = PipelineConfig().to_lines()
        assert "weighting = inverse_distance" in lines
        assert "probes = female,male" in lines
        assert "fresh_corpus = false" in lines


class TestReadConfigFile:
    def test_missing_equals(self, tmp_path):
        path = tmp_path / "bad.conf"
        path.write_text("window 5\n", encoding="utf-8")
        with pytest.raises(ConfigurationError, match=":1:"):
            read_config_file(path)

    def test_duplicate_key(self, tmp_path):
        path = tmp_path / "bad.conf"
        path.write_text("window = 5\nwindow = 6\n", encoding="utf-8")
        with pytest.raises(ConfigurationError, match="duplicate"):
            read_config_file(path)

    def test_value_may_contain_equals(self, tmp_path):
        path = tmp_path / "ok.conf"
        path.write_text("probes = a=b\n", encoding="utf-8")
        assert read_config_file(path) == {"probes": "a=b"}

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            read_config_file(tmp_path / "absent.conf")
