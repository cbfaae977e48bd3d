import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from keyclips.model import EmbeddingSequence, QueryEmbedding

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def unit_rows(n: int, d: int, seed: int) -> np.ndarray:
    """Seeded random unit vectors, float32, norms exact to f32 rounding."""
    rng = np.random.default_rng(seed)
    rows = rng.normal(size=(n, d))
    rows /= np.linalg.norm(rows, axis=1, keepdims=True)
    return rows.astype(np.float32)


def make_sequence(n: int, d: int = 8, seed: int = 0, fps: float = 1.0,
                  src_height: int = 448, src_width: int = 448,
                  label: str = "test") -> EmbeddingSequence:
    return EmbeddingSequence(frames=unit_rows(n, d, seed), fps=fps,
                             src_height=src_height, src_width=src_width,
                             label=label)


def make_query(d: int = 8, seed: int = 1) -> QueryEmbedding:
    return QueryEmbedding(unit_rows(1, d, seed)[0])


@pytest.fixture
def small_seq() -> EmbeddingSequence:
    return make_sequence(24, d=8, seed=3)


@pytest.fixture
def small_query() -> QueryEmbedding:
    return make_query(d=8, seed=4)
