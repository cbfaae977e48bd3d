"""Frame-query relevancy: the cosine similarity curve that drives selection."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .model import DimMismatch, EmbeddingSequence, QueryEmbedding, SimilarityCurve


def _row_norms(mat: np.ndarray) -> np.ndarray:
    return np.sqrt(np.add.reduce(mat * mat, axis=1))


def relevancy_scores(seq: EmbeddingSequence, query: QueryEmbedding) -> SimilarityCurve:
    """Cosine similarity of every frame against the query, in float64.

    Inputs are unit-norm by contract (within the 1e-4 ingest tolerance);
    normalizing here keeps scores inside [-1, 1] even at the edge of that
    tolerance.  Reductions use numpy ufuncs only, so results do not depend
    on BLAS threading.
    """
    if seq.d != query.d:
        raise DimMismatch(f"query dimension {query.d} != sequence dimension {seq.d}")
    frames = seq.frames.astype(np.float64)
    q = query.vector.astype(np.float64)
    qn = float(np.sqrt(np.add.reduce(q * q)))
    dots = np.add.reduce(frames * q, axis=1)
    scores = dots / (_row_norms(frames) * qn)
    return SimilarityCurve(scores)


def export_curve_csv(curve: SimilarityCurve, path: str | Path) -> None:
    """Write the curve as CSV: header "index,score", scores with 9 decimals."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(curve_to_csv(curve))


def curve_to_csv(curve: SimilarityCurve) -> str:
    lines = ["index,score"]
    lines += [f"{i},{s:.9f}" for i, s in enumerate(curve.scores)]
    return "\n".join(lines) + "\n"
