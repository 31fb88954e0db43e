"""
Shared fixtures for the keyword tracker tests.
"""

import json
from pathlib import Path
from typing import Callable, Iterable, Mapping

import numpy as np
import pytest

from keyword_tracker.embedding.vector_space import VectorSpace

REPO_ROOT = Path(__file__).resolve().parent.parent
DATA_DIR = REPO_ROOT / "data"


@pytest.fixture
def write_jsonl(tmp_path) -> Callable[..., Path]:
    """Write dict rows (or raw strings) as a jsonl file under tmp_path."""

    def _write(rows: Iterable, name: str = "corpus.jsonl") -> Path:
        path = tmp_path / name
        with open(path, "w", encoding="utf-8") as f:
            for row in rows:
                f.write(row if isinstance(row, str) else json.dumps(row))
                f.write("\n")
        return path

    return _write


@pytest.fixture
def make_space() -> Callable[..., VectorSpace]:
    """Build a VectorSpace from a token -> vector mapping."""

    def _make(vectors: Mapping[str, Iterable[float]], domain: str = "default") -> VectorSpace:
        tokens = list(vectors)
        return VectorSpace(tokens, np.array([list(vectors[t]) for t in tokens], dtype=float), domain)

    return _make


@pytest.fixture
def random_space() -> Callable[..., VectorSpace]:
    """A seeded random space with tokens w000, w001, ..."""

    def _make(size: int = 200, dim: int = 8, seed: int = 0, domain: str = "default") -> VectorSpace:
        rng = np.random.default_rng(seed)
        tokens = [f"w{i:03d}" for i in range(size)]
        return VectorSpace(tokens, rng.normal(size=(size, dim)), domain)

    return _make


@pytest.fixture
def drift_fixture_path() -> Path:
    return DATA_DIR / "drift_fixture.json"


@pytest.fixture
def sample_dir() -> Path:
    return DATA_DIR / "sample"
