"""Reference frame selectors: uniform, top-k, inverse transform sampling,
and watershed-frames.

The inverse-transform selector is a deterministic reconstruction of the
score-weighted sampling idea (min-max weight normalization, midpoint
quantiles, forward collision advance); it is not a faithful port of any
published implementation.  The midpoint convention is shared with uniform
sampling, which makes the two selectors coincide exactly on constant
curves.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .anchors import select_anchors
from .model import (
    EmbeddingSequence,
    KeyClip,
    ClipPlan,
    SelectionConfig,
    SimilarityCurve,
    ceil_tokens,
)
from .planner import budget_tokens, clip_span, merge_clips, output_dims, total_plan_tokens

DEFAULT_ITS_ALPHA = 2.5


@dataclass(frozen=True)
class FrameSelection:
    """Sorted distinct frame indices chosen by one selection method."""

    method: str
    indices: tuple[int, ...]

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.indices, self.indices[1:])):
            raise ValueError("selection indices must be strictly increasing")

    def __len__(self) -> int:
        return len(self.indices)

    def to_json(self) -> str:
        return json.dumps({"method": self.method, "indices": list(self.indices)})


def uniform_select(n: int, k: int) -> FrameSelection:
    """Frames at equal temporal intervals: floor((j + 0.5) * n / k).

    Duplicates (possible only when k > n) are removed, which clamps the
    selection to all frames.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    picks = sorted({(2 * j + 1) * n // (2 * k) for j in range(k)})
    return FrameSelection("uniform", tuple(picks))


def topk_select(curve: SimilarityCurve, k: int) -> FrameSelection:
    """The k highest-scoring frames, ties to the earlier index."""
    order = np.argsort(-curve.scores, kind="stable")
    picks = sorted(int(i) for i in order[:k])
    return FrameSelection("topk", tuple(picks))


def its_select(curve: SimilarityCurve, k: int,
               alpha: float = DEFAULT_ITS_ALPHA) -> FrameSelection:
    """Deterministic inverse transform sampling over score weights.

    Weights are min-max normalized scores raised to ``alpha`` (uniform when
    the curve is constant).  Midpoint quantiles (j + 0.5) / k are mapped
    through the generalized inverse of the cumulative weight distribution;
    a quantile landing on an already-selected frame advances to the next
    unselected index (falling back to earlier frames when the tail is
    exhausted).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    scores = curve.scores
    n = scores.shape[0]
    lo, hi = float(np.min(scores)), float(np.max(scores))
    if hi == lo:
        weights = np.ones(n)
    else:
        weights = ((scores - lo) / (hi - lo)) ** alpha
    cdf = np.cumsum(weights).tolist()
    # Exact rational quantile thresholds: a float product can round an
    # integer-valued threshold downward, which would desynchronize the
    # constant-curve case from uniform_select at exact boundaries.
    total = Fraction(cdf[-1])

    taken: set[int] = set()
    for j in range(min(k, n)):
        q = Fraction(2 * j + 1, 2 * k) * total
        hit = min(bisect_right(cdf, q), n - 1)
        idx = _advance(hit, taken, n)
        taken.add(idx)
    return FrameSelection("its", tuple(sorted(taken)))


def _advance(hit: int, taken: set[int], n: int) -> int:
    for idx in range(hit, n):
        if idx not in taken:
            return idx
    for idx in range(hit - 1, -1, -1):
        if idx not in taken:
            return idx
    raise AssertionError("no free index left")


def watershed_select(curve: SimilarityCurve, k: int, seed: int = 0) -> FrameSelection:
    """Basin peaks clustered down to at most k frames."""
    cfg = SelectionConfig(k=k, k_anchor=k, seed=seed)
    anchors = select_anchors(curve, cfg)
    return FrameSelection("watershed", anchors.indices)


def augment_to_clips(selection: FrameSelection, per_frame_extension: int,
                     n: int) -> list[tuple[int, int]]:
    """Extend each selected frame into a span of the given length.

    Spans sharing at least one frame are merged (all spans are at the
    same, full resolution).  Extension 1 is the identity on the selection.
    """
    if per_frame_extension < 1:
        raise ValueError("per_frame_extension must be >= 1")
    spans = [clip_span(i, min(per_frame_extension, n), n) for i in selection.indices]
    spans.sort()
    merged: list[tuple[int, int]] = []
    for start, end in spans:
        if merged and start <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], end))
        else:
            merged.append((start, end))
    return merged


def selection_to_plan(selection: FrameSelection, seq: EmbeddingSequence,
                      cfg: SelectionConfig,
                      per_frame_extension: int = 1) -> ClipPlan:
    """Express a frame selection as a full-resolution clip plan.

    Each selected frame becomes a span of ``per_frame_extension`` frames at
    scale 1; overlapping spans merge.  This makes baselines comparable to
    the engine's plans under the same token accounting.
    """
    out_h, out_w = output_dims(seq.src_height, seq.src_width, 1.0, cfg.grid)
    clips = []
    for idx in selection.indices:
        start, end = clip_span(idx, min(per_frame_extension, seq.n), seq.n)
        length = end - start + 1
        clips.append(KeyClip(
            anchor=idx, start=start, end=end, length=length, scale=1.0,
            out_height=out_h, out_width=out_w,
            tokens=ceil_tokens(length * out_h * out_w, cfg.z),
        ))
    clips.sort(key=lambda c: (c.start, c.anchor))
    clips = merge_clips(clips, z=cfg.z)
    return ClipPlan(
        clips=tuple(clips), budget_tokens=budget_tokens(cfg, seq),
        total_tokens=total_plan_tokens(clips, cfg.z), config=cfg,
        label=seq.label,
    )
