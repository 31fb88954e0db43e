"""
Configuration module for the keyword tracker.

This module defines the configuration options and defaults for every
pipeline stage, plus the flat PipelineConfig that the command line and
config files resolve into.
"""

from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Mapping, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from keyword_tracker.exceptions import ConfigurationError


class DocumentFormat(str, Enum):
    """Supported corpus file formats."""

    JSONL = "jsonl"
    TXT = "txt"


class Weighting(str, Enum):
    """Co-occurrence weighting schemes."""

    INVERSE_DISTANCE = "inverse_distance"  # 1/d for tokens d positions apart
    UNIFORM = "uniform"


class ExportMode(str, Enum):
    """How trained parameters are turned into word vectors."""

    SUM = "sum"  # w_i + w~_i
    MAIN = "main"  # w_i only


class TrainMode(str, Enum):
    """Update scheduling for GloVe training."""

    DETERMINISTIC = "deterministic"
    PARALLEL = "parallel"


class KMeansInit(str, Enum):
    """Centroid seeding strategies."""

    KMEANSPP = "kmeanspp"
    RANDOM = "random"


class RepresentativeMethod(str, Enum):
    """Rules for picking a cluster's representative keyword."""

    CENTROID_COSINE = "centroid_cosine"
    FREQUENCY = "frequency"


class ExtractMethod(str, Enum):
    """Keyword extraction avenues."""

    COOCCUR = "cooccur"
    CLUSTER = "cluster"
    BOTH = "both"


class TableFormat(str, Enum):
    """Text renderings for domain comparison reports."""

    CSV = "csv"
    MARKDOWN = "markdown"


class TokenRules(BaseModel):
    """Tokenizer switches applied to raw social-media text."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    lowercase: bool = True
    keep_hashtags: bool = True
    drop_urls: bool = True
    drop_mentions: bool = True
    min_token_len: int = Field(default=2, ge=1)


class TrainConfig(BaseModel):
    """Hyperparameters of the GloVe weighted least-squares fit."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    dim: int = Field(default=50, ge=1)
    x_max: float = Field(default=100.0, gt=0)
    alpha: float = Field(default=0.75, gt=0, le=1)
    eta: float = Field(default=0.05, gt=0)
    epochs: int = Field(default=25, ge=1)
    seed: int = 0
    gradient_clip: float = Field(default=100.0, gt=0)
    threads: int = Field(default=1, ge=1)
    mode: TrainMode = TrainMode.DETERMINISTIC


class KMeansConfig(BaseModel):
    """Settings for Lloyd's algorithm."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    k: int = Field(default=100, ge=1)
    max_iter: int = Field(default=300, ge=1)
    tol: float = Field(default=1e-4, ge=0)
    seed: int = 0
    init: KMeansInit = KMeansInit.KMEANSPP
    normalize: bool = False


class TSNEConfig(BaseModel):
    """Settings for the exact t-SNE projection."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    perplexity: float = Field(default=30.0, gt=0)
    iters: int = Field(default=1000, ge=1)
    seed: int = 0
    learning_rate: float = Field(default=200.0, gt=0)
    early_exaggeration: float = Field(default=4.0, ge=1)
    exaggeration_iters: int = Field(default=100, ge=0)
    momentum: float = Field(default=0.5, ge=0, lt=1)
    final_momentum: float = Field(default=0.8, ge=0, lt=1)
    momentum_switch_iter: int = Field(default=250, ge=0)
    min_gain: float = Field(default=0.01, gt=0)


class EngineConfig(BaseModel):
    """Everything one collect-train-extract round needs."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    token_rules: TokenRules = TokenRules()
    min_count: int = Field(default=5, ge=1)
    window: int = Field(default=10, ge=1)
    weighting: Weighting = Weighting.INVERSE_DISTANCE
    train: TrainConfig = TrainConfig()
    export_mode: ExportMode = ExportMode.SUM
    kmeans: KMeansConfig = KMeansConfig()
    method: ExtractMethod = ExtractMethod.BOTH
    extract_k: int = Field(default=25, ge=1)
    per_cluster: int = Field(default=1, ge=1)
    representative: RepresentativeMethod = RepresentativeMethod.CENTROID_COSINE
    auto_stop_fraction: float = Field(default=0.001, ge=0, lt=1)
    kmax: int = Field(default=100, ge=1)
    decay: float = Field(default=0.7, gt=0, le=1)
    query_limit: int = Field(default=1000, ge=1)
    fresh_corpus: bool = False
    raw_counts: bool = False


class PlantedFamily(BaseModel):
    """Tokens planted to co-occur with an anchor keyword in one round."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    tokens: List[str] = Field(min_length=1)
    anchor: str
    intensity: float = Field(gt=0)  # expected family tokens per family document


class DriftConfig(BaseModel):
    """Synthetic corpus whose topical vocabulary changes every round."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    rounds: int = Field(ge=1)
    families: List[List[PlantedFamily]]
    background_vocab_size: int = Field(default=2000, ge=1)
    background_prefix: str = "bg"
    docs_per_round: int = Field(default=400, ge=1)
    doc_length: int = Field(default=20, ge=1)
    family_doc_share: float = Field(default=0.5, ge=0, le=1)
    seed: int = 0

    @model_validator(mode="after")
    def validate_families(self) -> "DriftConfig":
        """Require one family list per round, disjoint from the background."""
        if len(self.families) != self.rounds:
            raise ValueError(f"Expected {self.rounds} family lists, got {len(self.families)}")
        background = set(self.background_tokens())
        for round_families in self.families:
            for family in round_families:
                clash = background.intersection(family.tokens + [family.anchor])
                if clash:
                    raise ValueError(f"Family tokens overlap the background vocabulary: {sorted(clash)}")
        return self

    def background_tokens(self) -> List[str]:
        width = len(str(self.background_vocab_size - 1))
        return [f"{self.background_prefix}{i:0{width}d}" for i in range(self.background_vocab_size)]

    def planted(self, round: int) -> List[str]:
        """All family tokens planted in a 1-based round."""
        return sorted({t for family in self.families[round - 1] for t in family.tokens})

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "DriftConfig":
        """Load a drift configuration from a JSON file.

        Raises:
            ConfigurationError: If the file does not validate.
        """
        try:
            return cls.model_validate_json(Path(path).read_text(encoding="utf-8"))
        except ValidationError as e:
            raise ConfigurationError(f"Invalid drift configuration {path}: {e}") from e


# Offsets added to the global seed so one seed reproduces a whole pipeline
STAGE_SEED_OFFSETS: Dict[str, int] = {
    "train": 1,
    "cluster": 2,
    "project": 3,
    "simulate": 4,
}


class PipelineConfig(BaseModel):
    """Flat, fully-defaulted configuration for the whole pipeline.

    Every field can be set from a ``key = value`` config file and
    overridden by a command-line flag. Unknown keys are rejected.
    """

    model_config = ConfigDict(extra="forbid")

    # Tokenizer and vocabulary
    lowercase: bool = True
    keep_hashtags: bool = True
    drop_urls: bool = True
    drop_mentions: bool = True
    min_token_len: int = Field(default=2, ge=1)
    min_count: int = Field(default=5, ge=1)

    # Co-occurrence
    window: int = Field(default=10, ge=1)
    weighting: Weighting = Weighting.INVERSE_DISTANCE

    # Training
    dim: int = Field(default=50, ge=1)
    epochs: int = Field(default=25, ge=1)
    eta: float = Field(default=0.05, gt=0)
    x_max: float = Field(default=100.0, gt=0)
    alpha: float = Field(default=0.75, gt=0, le=1)
    gradient_clip: float = Field(default=100.0, gt=0)
    threads: int = Field(default=1, ge=1)
    export_mode: ExportMode = ExportMode.SUM

    # Clustering and projection
    clusters: int = Field(default=100, ge=1)
    kmeans_max_iter: int = Field(default=300, ge=1)
    kmeans_tol: float = Field(default=1e-4, ge=0)
    kmeans_init: KMeansInit = KMeansInit.KMEANSPP
    normalize: bool = False
    perplexity: float = Field(default=30.0, gt=0)
    tsne_iters: int = Field(default=1000, ge=1)

    # Keyword engine
    extract_method: ExtractMethod = ExtractMethod.BOTH
    extract_k: int = Field(default=25, ge=1)
    per_cluster: int = Field(default=1, ge=1)
    representative: RepresentativeMethod = RepresentativeMethod.CENTROID_COSINE
    kmax: int = Field(default=100, ge=1)
    decay: float = Field(default=0.7, gt=0, le=1)
    rounds: int = Field(default=5, ge=1)
    query_limit: int = Field(default=1000, ge=1)
    fresh_corpus: bool = False
    raw_counts: bool = False

    # Queries and comparison
    neighbors_k: int = Field(default=10, ge=0)
    probes: List[str] = Field(default_factory=lambda: ["female", "male"])
    compare_k: int = Field(default=9, ge=1)

    seed: int = Field(default=0, ge=0)

    @field_validator("probes", mode="before")
    @classmethod
    def split_probes(cls, v: Any) -> Any:
        """Accept comma-separated probe lists from flat config files."""
        if isinstance(v, str):
            return [p.strip() for p in v.split(",") if p.strip()]
        return v

    @field_validator("probes")
    @classmethod
    def validate_probes(cls, v: List[str]) -> List[str]:
        """Require at least one probe word."""
        if not v:
            raise ValueError("At least one probe word is required")
        return v

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "PipelineConfig":
        """Create a configuration instance from a flat ``key = value`` file.

        Args:
            path: Path to the config file.

        Returns:
            PipelineConfig: Configuration initialized from the file.

        Raises:
            ConfigurationError: If a line is malformed or a key is unknown.
        """
        return cls.from_mapping(read_config_file(path))

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any]) -> "PipelineConfig":
        """Validate a mapping of settings, wrapping pydantic errors."""
        try:
            return cls(**dict(values))
        except ValidationError as e:
            raise ConfigurationError(f"Invalid configuration: {e}") from e

    def with_overrides(self, overrides: Mapping[str, Any]) -> "PipelineConfig":
        """Return a copy with the non-None overrides applied and re-validated."""
        merged = self.model_dump()
        merged.update({k: v for k, v in overrides.items() if v is not None})
        return self.from_mapping(merged)

    def stage_seed(self, stage: str) -> int:
        """Derive the seed for a pipeline stage from the global seed."""
        try:
            return self.seed + STAGE_SEED_OFFSETS[stage]
        except KeyError:
            raise ConfigurationError(f"Unknown pipeline stage: {stage}") from None

    def token_rules(self) -> TokenRules:
        return TokenRules(
            lowercase=self.lowercase,
            keep_hashtags=self.keep_hashtags,
            drop_urls=self.drop_urls,
            drop_mentions=self.drop_mentions,
            min_token_len=self.min_token_len,
        )

    def train_config(self) -> TrainConfig:
        return TrainConfig(
            dim=self.dim,
            x_max=self.x_max,
            alpha=self.alpha,
            eta=self.eta,
            epochs=self.epochs,
            seed=self.stage_seed("train"),
            gradient_clip=self.gradient_clip,
            threads=self.threads,
            mode=TrainMode.PARALLEL if self.threads > 1 else TrainMode.DETERMINISTIC,
        )

    def kmeans_config(self) -> KMeansConfig:
        return KMeansConfig(
            k=self.clusters,
            max_iter=self.kmeans_max_iter,
            tol=self.kmeans_tol,
            seed=self.stage_seed("cluster"),
            init=self.kmeans_init,
            normalize=self.normalize,
        )

    def tsne_config(self) -> TSNEConfig:
        return TSNEConfig(
            perplexity=self.perplexity,
            iters=self.tsne_iters,
            seed=self.stage_seed("project"),
        )

    def engine_config(self) -> EngineConfig:
        return EngineConfig(
            token_rules=self.token_rules(),
            min_count=self.min_count,
            window=self.window,
            weighting=self.weighting,
            train=self.train_config(),
            export_mode=self.export_mode,
            kmeans=self.kmeans_config(),
            method=self.extract_method,
            extract_k=self.extract_k,
            per_cluster=self.per_cluster,
            representative=self.representative,
            kmax=self.kmax,
            decay=self.decay,
            query_limit=self.query_limit,
            fresh_corpus=self.fresh_corpus,
            raw_counts=self.raw_counts,
        )

    def to_lines(self) -> List[str]:
        """Render the resolved configuration as ``key = value`` lines."""
        lines = []
        for key, value in self.model_dump(mode="json").items():
            if isinstance(value, list):
                value = ",".join(str(v) for v in value)
            elif isinstance(value, bool):
                value = str(value).lower()
            lines.append(f"{key} = {value}")
        return lines


def read_config_file(path: Union[str, Path]) -> Dict[str, str]:
    """Parse a flat ``key = value`` file into a dictionary of strings.

    Blank lines and lines starting with ``#`` are ignored.

    Raises:
        FileNotFoundError: If the file does not exist.
        ConfigurationError: On a line without ``=`` or a repeated key.
    """
    values: Dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as f:
        for line_number, raw in enumerate(f, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigurationError(
                    f"{path}:{line_number}: expected 'key = value', got {line!r}"
                )
            key, value = (part.strip() for part in line.split("=", 1))
            if key in values:
                raise ConfigurationError(f"{path}:{line_number}: duplicate key {key!r}")
            values[key] = value
    return values
