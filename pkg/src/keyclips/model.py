"""Core domain types: embedding sequences, selection configs, clips and plans.

All types are immutable after construction (frozen dataclasses, read-only
numpy buffers) and safe to share across threads.  Similarity math elsewhere
in the package is done in float64 even though embeddings are stored as
float32, so that argmax-style decisions are stable across platforms.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

#: Tolerance on the L2 norm of ingested embeddings.  Encoders emit normalized
#: vectors in 32-bit floats; a tighter bound produces false rejections.
NORM_TOL = 1e-4

#: Slack allowed on cosine scores beyond the mathematical [-1, 1] range.
SCORE_TOL = 1e-6


class ValidationError(ValueError):
    """A domain object violates one of its invariants."""


class EmptySequence(ValidationError):
    """An embedding sequence contains no frames."""


class DimMismatch(ValidationError):
    """Embedding dimensions disagree (ragged frames, or query vs. sequence)."""


class NormViolation(ValidationError):
    """An embedding's L2 norm falls outside the accepted tolerance."""

    def __init__(self, index: int, norm: float):
        self.index = index
        self.norm = norm
        super().__init__(f"embedding {index} has norm {norm:.6g}, "
                         f"outside [{1 - NORM_TOL}, {1 + NORM_TOL}]")


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(arr)
    out.flags.writeable = False
    return out


def _as_matrix(frames) -> np.ndarray:
    """Coerce frames to a read-only float32 (N, D) matrix.

    Raises DimMismatch for ragged per-frame dimensions and EmptySequence
    for zero frames.
    """
    if isinstance(frames, np.ndarray) and frames.dtype == np.float32 and frames.ndim == 2:
        mat = frames
    else:
        rows = list(frames)
        if not rows:
            raise EmptySequence("sequence has no frames")
        lens = {len(np.atleast_1d(r)) for r in rows}
        if len(lens) != 1:
            raise DimMismatch(f"frames have mixed dimensions {sorted(lens)}")
        mat = np.asarray(rows, dtype=np.float32)
    if mat.ndim != 2:
        raise DimMismatch(f"expected a 2-d frame matrix, got shape {mat.shape}")
    if mat.shape[0] == 0:
        raise EmptySequence("sequence has no frames")
    return _freeze(mat.astype(np.float32, copy=False))


@dataclass(frozen=True, eq=False)
class EmbeddingSequence:
    """Per-frame embeddings of one video plus its source metadata.

    ``frames`` is an (N, D) float32 matrix of unit-norm rows.  ``fps`` is
    stored at 32-bit precision so container round-trips are bit-exact.
    """

    frames: np.ndarray
    fps: float
    src_height: int
    src_width: int
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "frames", _as_matrix(self.frames))
        object.__setattr__(self, "fps", float(np.float32(self.fps)))

    @property
    def n(self) -> int:
        return self.frames.shape[0]

    @property
    def d(self) -> int:
        return self.frames.shape[1]


@dataclass(frozen=True, eq=False)
class QueryEmbedding:
    """A single unit-norm query vector in the same space as the frames."""

    vector: np.ndarray

    def __post_init__(self):
        vec = np.asarray(self.vector, dtype=np.float32)
        if vec.ndim != 1 or vec.shape[0] < 1:
            raise DimMismatch(f"query must be a non-empty vector, got shape {vec.shape}")
        object.__setattr__(self, "vector", _freeze(vec))

    @property
    def d(self) -> int:
        return self.vector.shape[0]


@dataclass(frozen=True, eq=False)
class SimilarityCurve:
    """Per-frame relevancy scores against one query, stored in float64."""

    scores: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.scores, dtype=np.float64)
        if arr.ndim != 1:
            raise ValidationError(f"curve must be a vector, got shape {arr.shape}")
        if arr.shape[0] < 1:
            raise EmptySequence("curve has no scores")
        if np.any(np.isnan(arr)) or np.any(np.abs(arr) > 1.0 + SCORE_TOL):
            raise ValidationError("curve scores must lie in [-1, 1] up to 1e-6")
        object.__setattr__(self, "scores", _freeze(arr))

    def __len__(self) -> int:
        return self.scores.shape[0]


@dataclass(frozen=True)
class SelectionConfig:
    """Budget-side knobs of the selection engine.

    ``k`` is the full-resolution frame budget; ``k_anchor`` the number of
    clip anchors (defaults to ``k``); ``s_max`` the largest spatial
    downscale; ``z`` the pixels-per-token constant; ``grid`` the pixel
    granularity of output dimensions.  ``seed`` feeds any randomized step
    so identical inputs give identical plans.
    """

    k: int = 16
    k_anchor: int | None = None
    s_max: float = 2.0
    lambda_r: float = 0.5
    lambda_l: float = 0.05
    z: float = 392.0
    grid: int = 28
    seed: int = 0
    merge: bool = True

    def __post_init__(self):
        if self.k_anchor is None:
            object.__setattr__(self, "k_anchor", self.k)
        if self.k < 1:
            raise ValidationError(f"k must be >= 1, got {self.k}")
        if self.k_anchor < 1:
            raise ValidationError(f"k_anchor must be >= 1, got {self.k_anchor}")
        if not self.s_max >= 1:
            raise ValidationError(f"s_max must be >= 1, got {self.s_max}")
        if self.lambda_r < 0 or self.lambda_l < 0:
            raise ValidationError("lambda_r and lambda_l must be >= 0")
        if not self.z > 0:
            raise ValidationError(f"z must be > 0, got {self.z}")
        if self.grid < 1:
            raise ValidationError(f"grid must be >= 1, got {self.grid}")
        if self.seed < 0:
            raise ValidationError(f"seed must be >= 0, got {self.seed}")


@dataclass(frozen=True)
class KeyClip:
    """A contiguous frame window centered on an anchor, with output scale."""

    anchor: int
    start: int
    end: int
    length: int
    scale: float
    out_height: int
    out_width: int
    tokens: int

    def __post_init__(self):
        if not 0 <= self.start <= self.anchor <= self.end:
            raise ValidationError(f"clip span [{self.start}, {self.end}] must contain "
                                  f"anchor {self.anchor}")
        if self.length != self.end - self.start + 1:
            raise ValidationError("clip length must equal end - start + 1")
        if self.scale < 1:
            raise ValidationError(f"scale must be >= 1, got {self.scale}")

    @property
    def pixels(self) -> int:
        """Raw pixel count of the clip's encoded frames."""
        return self.length * self.out_height * self.out_width


@dataclass(frozen=True, eq=False)
class ClipPlan:
    """The token-budgeted output of the selection engine."""

    clips: tuple[KeyClip, ...]
    budget_tokens: int
    total_tokens: int
    config: SelectionConfig
    label: str = ""

    def __post_init__(self):
        starts = [c.start for c in self.clips]
        if starts != sorted(starts):
            raise ValidationError("clips must be sorted by start")
        if self.total_tokens > self.budget_tokens:
            raise ValidationError(f"total_tokens {self.total_tokens} exceeds budget "
                                  f"{self.budget_tokens}")

    @property
    def encoded_frames(self) -> int:
        """Number of frame encodings the plan sends downstream."""
        return sum(c.length for c in self.clips)


def validate_sequence(seq: EmbeddingSequence) -> None:
    """Check all EmbeddingSequence invariants, raising on the first violation.

    Frame count, dimensionality and raggedness are enforced at construction;
    this re-checks them together with the norm bound and metadata ranges.
    """
    if seq.n < 1:
        raise EmptySequence("sequence has no frames")
    if seq.d < 1:
        raise DimMismatch("embedding dimension must be >= 1")
    norms = np.sqrt(np.add.reduce(seq.frames.astype(np.float64) ** 2, axis=1))
    bad = np.nonzero(np.abs(norms - 1.0) > NORM_TOL)[0]
    if bad.size:
        i = int(bad[0])
        raise NormViolation(i, float(norms[i]))
    if not seq.fps > 0:
        raise ValidationError(f"fps must be > 0, got {seq.fps}")
    if seq.src_height < 1 or seq.src_width < 1:
        raise ValidationError("source dimensions must be >= 1")


def validate_query(query: QueryEmbedding, d: int | None = None) -> None:
    """Check the query norm bound and, if given, its dimension."""
    if d is not None and query.d != d:
        raise DimMismatch(f"query dimension {query.d} != sequence dimension {d}")
    norm = math.sqrt(float(np.add.reduce(query.vector.astype(np.float64) ** 2)))
    if abs(norm - 1.0) > NORM_TOL:
        raise NormViolation(0, norm)


def ceil_tokens(pixels: int, z: float) -> int:
    """Token cost of ``pixels`` raw pixels: ceil(pixels / z), exactly.

    Uses rational arithmetic on the exact binary value of ``z`` so the
    ceiling never flips due to float rounding near integer boundaries.
    """
    if pixels < 0:
        raise ValueError("pixels must be >= 0")
    return int(math.ceil(Fraction(pixels) / Fraction(z)))


# ---------------------------------------------------------------------------
# plan serialization
#
# The JSON layout is part of the external contract: fixed key order, scale
# printed with 6 decimals.  Hand-rolled so output is byte-stable.

def _jnum(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    return json.dumps(x)


def clip_to_dict(clip: KeyClip) -> dict:
    return {
        "anchor": clip.anchor, "start": clip.start, "end": clip.end,
        "length": clip.length, "scale": clip.scale,
        "out_width": clip.out_width, "out_height": clip.out_height,
        "tokens": clip.tokens,
    }


def plan_to_json(plan: ClipPlan, indent: int = 2) -> str:
    """Serialize a plan to its canonical JSON form."""
    pad = " " * indent
    cfg = plan.config
    cfg_items = [
        ("k", cfg.k), ("k_anchor", cfg.k_anchor), ("s_max", cfg.s_max),
        ("lambda_r", cfg.lambda_r), ("lambda_l", cfg.lambda_l),
        ("z", cfg.z), ("grid", cfg.grid), ("seed", cfg.seed), ("merge", cfg.merge),
    ]
    cfg_body = ", ".join(f"{_jnum(k)}: {_jnum(v)}" for k, v in cfg_items)
    lines = [
        "{",
        f'{pad}"label": {json.dumps(plan.label)},',
        f'{pad}"config": {{{cfg_body}}},',
        f'{pad}"clips": [',
    ]
    for i, c in enumerate(plan.clips):
        entry = (f'{{"anchor": {c.anchor}, "start": {c.start}, "end": {c.end}, '
                 f'"length": {c.length}, "scale": {c.scale:.6f}, '
                 f'"out_width": {c.out_width}, "out_height": {c.out_height}, '
                 f'"tokens": {c.tokens}}}')
        comma = "," if i < len(plan.clips) - 1 else ""
        lines.append(f"{pad}{pad}{entry}{comma}")
    lines += [
        f"{pad}],",
        f'{pad}"total_tokens": {plan.total_tokens},',
        f'{pad}"budget_tokens": {plan.budget_tokens}',
        "}",
    ]
    return "\n".join(lines) + "\n"


def plan_from_json(text: str) -> ClipPlan:
    """Parse canonical plan JSON back into a validated ClipPlan."""
    doc = json.loads(text)
    cfg = SelectionConfig(**doc["config"])
    clips = tuple(
        KeyClip(anchor=c["anchor"], start=c["start"], end=c["end"],
                length=c["length"], scale=c["scale"],
                out_height=c["out_height"], out_width=c["out_width"],
                tokens=c["tokens"])
        for c in doc["clips"]
    )
    return ClipPlan(clips=clips, budget_tokens=doc["budget_tokens"],
                    total_tokens=doc["total_tokens"], config=cfg,
                    label=doc.get("label", ""))
