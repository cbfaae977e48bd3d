"""Turn anchors into budget-exact key clips.

The budget is B = ceil(K*H*W/Z) tokens.  Each anchor is extended to the
clip length that maximizes mean relevancy minus weighted redundancy plus a
length reward, searched exhaustively over [1, l_max] where
l_max = floor(s_max^2 * K / anchor_count).  The chosen length fixes the
spatial downscale s = sqrt(anchor_count * l / K), output dimensions are
rounded down to grid multiples, and overlapping clips with identical
output dimensions are merged so shared frames are only encoded once.

Rounding down plus counting each encoded frame's pixels exactly once makes
total_tokens <= budget_tokens hold by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .anchors import select_anchors
from .model import (
    ClipPlan,
    EmbeddingSequence,
    KeyClip,
    QueryEmbedding,
    SelectionConfig,
    SimilarityCurve,
    ceil_tokens,
    validate_query,
    validate_sequence,
)
from .relevance import relevancy_scores


class BudgetViolation(RuntimeError):
    """Internal assertion: an assembled plan exceeded its token budget."""


@dataclass(frozen=True)
class ObjectivePoint:
    """One evaluated candidate length."""

    length: int
    relevancy: float
    redundancy: float
    reward: float
    objective: float


@dataclass(frozen=True)
class ObjectiveTrace:
    """All candidate lengths evaluated for one anchor, lengths 1..l_max."""

    anchor: int
    points: tuple[ObjectivePoint, ...]

    def __post_init__(self):
        lengths = [p.length for p in self.points]
        if lengths != list(range(1, len(lengths) + 1)):
            raise ValueError("trace must cover lengths 1..l_max exactly once")


def budget_tokens(cfg: SelectionConfig, seq: EmbeddingSequence) -> int:
    """Token budget for K full-resolution source frames."""
    return ceil_tokens(cfg.k * seq.src_height * seq.src_width, cfg.z)


def max_clip_length(cfg: SelectionConfig, anchor_count: int) -> int:
    """Largest clip length reachable at the maximum downscale.

    Uses the actual anchor count, which may be below k_anchor; scarce
    anchors then earn longer clips and keep the plan near the budget.
    Rational arithmetic keeps the floor exact for any float s_max.
    """
    if anchor_count < 1:
        raise ValueError("anchor_count must be >= 1")
    l_max = int(Fraction(cfg.s_max) ** 2 * cfg.k / anchor_count)
    return max(1, l_max)


def clip_span(anchor: int, length: int, n: int) -> tuple[int, int]:
    """Window of ``length`` frames around ``anchor`` within [0, n-1].

    The nominal window [anchor - floor((l-1)/2), anchor + ceil((l-1)/2)] is
    shifted (never truncated) when it crosses a sequence boundary, so the
    budgeted length is always realized.
    """
    if not 1 <= length <= n:
        raise ValueError(f"length {length} not in [1, {n}]")
    if not 0 <= anchor < n:
        raise ValueError(f"anchor {anchor} not in [0, {n})")
    start = anchor - (length - 1) // 2
    if start < 0:
        start = 0
    elif start + length > n:
        start = n - length
    return start, start + length - 1


def clip_relevancy(curve: SimilarityCurve, start: int, end: int) -> float:
    """Mean relevancy score over the inclusive span."""
    seg = curve.scores[start:end + 1]
    return float(np.add.reduce(seg) / seg.shape[0])


def clip_redundancy(seq: EmbeddingSequence, start: int, end: int) -> float:
    """Mean pairwise cosine similarity between the span's frames.

    Defined as 0 for a single frame.  Computed via the identity
    sum_{i != j} cos_ij = |sum_i u_i|^2 - sum_i |u_i|^2 on the normalized
    rows, which is O(l*D) and free of BLAS reductions.
    """
    length = end - start + 1
    if length < 2:
        return 0.0
    rows = seq.frames[start:end + 1].astype(np.float64)
    norms = np.sqrt(np.add.reduce(rows * rows, axis=1))
    unit = rows / norms[:, None]
    colsum = np.add.reduce(unit, axis=0)
    total = float(np.add.reduce(colsum * colsum))
    diag = float(np.add.reduce((unit * unit).ravel()))
    return (total - diag) / (length * (length - 1))


def optimize_clip_length(seq: EmbeddingSequence, curve: SimilarityCurve,
                         anchor: int, cfg: SelectionConfig,
                         l_max: int) -> tuple[int, ObjectiveTrace]:
    """Exhaustive search for the best clip length at one anchor.

    Evaluates relevancy - lambda_r * redundancy + lambda_l * (l / l_max)
    for every integer l in [1, l_max] and returns the smallest maximizer
    together with the full trace.
    """
    if not 1 <= l_max <= seq.n:
        raise ValueError(f"l_max {l_max} not in [1, {seq.n}]")
    points = []
    best_l, best_obj = 1, -math.inf
    for length in range(1, l_max + 1):
        start, end = clip_span(anchor, length, seq.n)
        rel = clip_relevancy(curve, start, end)
        red = clip_redundancy(seq, start, end)
        reward = cfg.lambda_l * (length / l_max)
        obj = rel - cfg.lambda_r * red + reward
        points.append(ObjectivePoint(length, rel, red, reward, obj))
        if obj > best_obj:
            best_l, best_obj = length, obj
    return best_l, ObjectiveTrace(anchor, tuple(points))


def scale_for_length(length: int, k: int, anchor_count: int) -> float:
    """Spatial downscale that pays for ``length`` frames per clip."""
    if length < 1:
        raise ValueError("length must be >= 1")
    return max(1.0, math.sqrt(anchor_count * length / k))


def budget_length_cap(cfg: SelectionConfig, seq: EmbeddingSequence,
                      anchor_count: int, l_limit: int) -> int:
    """Longest search prefix whose realized pixel cost fits the clip share.

    The scaling law says a length-l clip downscaled by s(l) costs at most
    K*H*W/anchor_count pixels, but the grid floor and the no-upscale clamp
    put a lower bound on frame cost, which breaks that law for sources
    within about s_max*grid of the grid size.  Restricting the search to
    lengths that actually fit keeps total tokens inside the budget by
    construction; for comfortably large sources the cap never binds.
    """
    share = Fraction(cfg.k * seq.src_height * seq.src_width, anchor_count)
    fit = 1
    for length in range(1, l_limit + 1):
        s = scale_for_length(length, cfg.k, anchor_count)
        out_h, out_w = output_dims(seq.src_height, seq.src_width, s, cfg.grid)
        if length * out_h * out_w <= share:
            fit = length
        else:
            break
    return fit


def output_dims(src_h: int, src_w: int, s: float, grid: int) -> tuple[int, int]:
    """Scaled output dimensions, rounded down to grid multiples.

    Rounding down guarantees the budget is never exceeded.  A source side
    smaller than one grid cell keeps its native size (never upscaled).
    """
    if s < 1 or grid < 1:
        raise ValueError("need s >= 1 and grid >= 1")

    def one(src: int) -> int:
        if src < grid:
            return src
        return max(grid, int((src / s) / grid) * grid)

    return one(src_h), one(src_w)


def merge_clips(clips: list[KeyClip], *, z: float,
                curve: SimilarityCurve | None = None) -> list[KeyClip]:
    """Merge clips that share frames at identical output dimensions.

    Works per resolution group, so interleaved clips at other resolutions
    never block a merge.  The merged clip keeps the higher-relevancy anchor
    (earlier anchor on ties, or without a curve) and its scale; its token
    cost is recomputed over the union span so shared frames count once.
    One pass per group reaches the fixpoint.
    """
    groups: dict[tuple[int, int], list[KeyClip]] = {}
    for clip in sorted(clips, key=lambda c: (c.start, c.anchor)):
        groups.setdefault((clip.out_height, clip.out_width), []).append(clip)

    def better_anchor(a: KeyClip, b: KeyClip) -> KeyClip:
        if curve is not None:
            sa, sb = curve.scores[a.anchor], curve.scores[b.anchor]
            if sb > sa:
                return b
            if sa > sb:
                return a
        return a if a.anchor <= b.anchor else b

    merged: list[KeyClip] = []
    for (oh, ow), group in groups.items():
        current = group[0]
        for nxt in group[1:]:
            if nxt.start <= current.end:
                keeper = better_anchor(current, nxt)
                start = min(current.start, nxt.start)
                end = max(current.end, nxt.end)
                length = end - start + 1
                current = KeyClip(
                    anchor=keeper.anchor, start=start, end=end, length=length,
                    scale=keeper.scale, out_height=oh, out_width=ow,
                    tokens=ceil_tokens(length * oh * ow, z),
                )
            else:
                merged.append(current)
                current = nxt
        merged.append(current)
    return sorted(merged, key=lambda c: (c.start, c.anchor))


def total_plan_tokens(clips: list[KeyClip], z: float) -> int:
    """Token cost of all encoded frames: one ceiling over the pixel sum.

    Merging already removed duplicate encodings; remaining clips each
    encode their own frames, so the pixel sum counts exactly the distinct
    encodings sent downstream.
    """
    return ceil_tokens(sum(c.pixels for c in clips), z)


def plan(seq: EmbeddingSequence, query: QueryEmbedding,
         cfg: SelectionConfig) -> ClipPlan:
    """Full selection pipeline: relevancy, anchors, per-anchor length, merge.

    Raises BudgetViolation if the assembled plan exceeds its budget, which
    indicates a bug rather than an expected outcome on valid input.
    """
    validate_sequence(seq)
    validate_query(query, seq.d)
    curve = relevancy_scores(seq, query)
    anchors = select_anchors(curve, cfg)
    count = len(anchors)
    l_limit = min(max_clip_length(cfg, count), seq.n)
    l_max = budget_length_cap(cfg, seq, count, l_limit)

    clips = []
    for anchor in anchors.indices:
        length, _ = optimize_clip_length(seq, curve, anchor, cfg, l_max)
        s = scale_for_length(length, cfg.k, count)
        out_h, out_w = output_dims(seq.src_height, seq.src_width, s, cfg.grid)
        start, end = clip_span(anchor, length, seq.n)
        clips.append(KeyClip(
            anchor=anchor, start=start, end=end, length=length, scale=s,
            out_height=out_h, out_width=out_w,
            tokens=ceil_tokens(length * out_h * out_w, cfg.z),
        ))
    clips.sort(key=lambda c: (c.start, c.anchor))
    if cfg.merge:
        clips = merge_clips(clips, z=cfg.z, curve=curve)

    budget = budget_tokens(cfg, seq)
    total = total_plan_tokens(clips, cfg.z)
    if total > budget:
        raise BudgetViolation(f"planned {total} tokens over budget {budget}")
    return ClipPlan(clips=tuple(clips), budget_tokens=budget,
                    total_tokens=total, config=cfg, label=seq.label)
