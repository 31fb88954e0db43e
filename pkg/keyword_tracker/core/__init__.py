"""
Core components for the keyword tracker.

This package contains the configuration models shared by every stage.
"""

from keyword_tracker.core.config import (
    DocumentFormat,
    DriftConfig,
    EngineConfig,
    ExportMode,
    ExtractMethod,
    KMeansConfig,
    KMeansInit,
    PipelineConfig,
    PlantedFamily,
    RepresentativeMethod,
    TableFormat,
    TokenRules,
    TrainConfig,
    TrainMode,
    TSNEConfig,
    Weighting,
)

__all__ = [
    "DocumentFormat",
    "DriftConfig",
    "EngineConfig",
    "ExportMode",
    "ExtractMethod",
    "KMeansConfig",
    "KMeansInit",
    "PipelineConfig",
    "PlantedFamily",
    "RepresentativeMethod",
    "TableFormat",
    "TokenRules",
    "TrainConfig",
    "TrainMode",
    "TSNEConfig",
    "Weighting",
]
