"""Synthetic ground truth, coverage metrics, token accounting, and sweeps.

Real benchmark annotations are out of reach at desk scale, so the harness
plants evidence events in a synthetic similarity curve, builds embeddings
that reproduce that curve exactly, and measures how well each selection
policy covers the planted events under identical token budgets.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass

import numpy as np

from . import baselines
from .baselines import FrameSelection, selection_to_plan
from .model import (
    ClipPlan,
    EmbeddingSequence,
    QueryEmbedding,
    SelectionConfig,
    SimilarityCurve,
)
from .planner import plan

#: Frames either side of an event center that count as covering it.
DEFAULT_WINDOW = 2


@dataclass(frozen=True)
class GroundTruth:
    """Planted evidence events and the tolerance window around them."""

    event_centers: tuple[int, ...]
    window: int = DEFAULT_WINDOW

    def __post_init__(self):
        if list(self.event_centers) != sorted(self.event_centers):
            raise ValueError("event centers must be sorted")
        if self.window < 0:
            raise ValueError("window must be >= 0")

    def to_json(self) -> str:
        return json.dumps({"event_centers": list(self.event_centers),
                           "window": self.window})

    @classmethod
    def from_json(cls, text: str) -> "GroundTruth":
        doc = json.loads(text)
        return cls(tuple(doc["event_centers"]), doc.get("window", DEFAULT_WINDOW))


def synth_curve(n: int, event_centers: tuple[int, ...] | list[int], amp: float,
                width: float, noise_sigma: float, seed: int) -> SimilarityCurve:
    """Gaussian relevance bumps at the event centers plus seeded noise.

    The curve is zero-baseline and clipped to [-1, 1].
    """
    if n < 1 or width <= 0:
        raise ValueError("need n >= 1 and width > 0")
    for c in event_centers:
        if not 0 <= c < n:
            raise ValueError(f"event center {c} outside [0, {n})")
    idx = np.arange(n, dtype=np.float64)
    scores = np.zeros(n)
    for c in event_centers:
        scores += amp * np.exp(-((idx - c) ** 2) / (2.0 * width ** 2))
    if noise_sigma > 0:
        rng = np.random.default_rng(seed)
        scores += rng.normal(0.0, noise_sigma, size=n)
    return SimilarityCurve(np.clip(scores, -1.0, 1.0))


def synth_embeddings(curve: SimilarityCurve, d: int, seed: int,
                     src_height: int = 448, src_width: int = 448,
                     ) -> tuple[EmbeddingSequence, QueryEmbedding]:
    """Embeddings whose relevancy against the query reproduces ``curve``.

    The query is the first basis vector; frame i is
    r_i * q + sqrt(1 - r_i^2) * u_i with u_i a seeded unit vector
    orthogonal to q.  Reconstruction is exact up to float32 storage.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    r = curve.scores
    n = r.shape[0]
    rng = np.random.default_rng(seed)
    ortho = rng.normal(size=(n, d))
    ortho[:, 0] = 0.0
    norms = np.sqrt(np.add.reduce(ortho * ortho, axis=1))
    norms[norms == 0] = 1.0
    ortho /= norms[:, None]
    frames = np.sqrt(np.maximum(0.0, 1.0 - r ** 2))[:, None] * ortho
    frames[:, 0] = r
    q = np.zeros(d, dtype=np.float32)
    q[0] = 1.0
    seq = EmbeddingSequence(frames=frames.astype(np.float32), fps=1.0,
                            src_height=src_height, src_width=src_width,
                            label=f"synth-{seed}")
    return seq, QueryEmbedding(q)


def _selected_frames(sel) -> list[int]:
    if isinstance(sel, ClipPlan):
        out: set[int] = set()
        for c in sel.clips:
            out.update(range(c.start, c.end + 1))
        return sorted(out)
    if isinstance(sel, FrameSelection):
        return list(sel.indices)
    return sorted(sel)


def _anchors_of(sel) -> list[int]:
    if isinstance(sel, ClipPlan):
        return [c.anchor for c in sel.clips]
    if isinstance(sel, FrameSelection):
        return list(sel.indices)
    return sorted(sel)


def coverage(sel, gt: GroundTruth) -> tuple[float, float]:
    """(event_coverage, anchor_recall) of a plan or selection.

    Event coverage is the fraction of events with at least one selected or
    clip frame within the window; anchor recall is the fraction of anchors
    that land within the window of some event.  Both are 0 for the empty
    selection.
    """
    frames = _selected_frames(sel)
    anchors = _anchors_of(sel)
    w = gt.window
    if not gt.event_centers:
        return 0.0, 0.0
    hit_events = sum(
        1 for c in gt.event_centers if any(abs(f - c) <= w for f in frames)
    )
    event_coverage = hit_events / len(gt.event_centers)
    if not anchors:
        return event_coverage, 0.0
    good_anchors = sum(
        1 for a in anchors if any(abs(a - c) <= w for c in gt.event_centers)
    )
    return event_coverage, good_anchors / len(anchors)


@dataclass(frozen=True)
class TokenRow:
    policy: str
    budget_tokens: int
    total_tokens: int
    encoded_frames: int
    delta_tokens: int | None
    delta_pct: float | None


def token_report(plans: dict[str, ClipPlan], baseline: str) -> list[TokenRow]:
    """Token accounting per policy with deltas against a named baseline.

    Token deltas are exact integers; the percent column is cosmetic.
    """
    if baseline not in plans:
        raise KeyError(f"baseline policy {baseline!r} not among {sorted(plans)}")
    base_total = plans[baseline].total_tokens
    rows = []
    for name, p in plans.items():
        dt = pct = None
        if name != baseline:
            dt = p.total_tokens - base_total
            if base_total > 0:
                pct = 100.0 * dt / base_total
        rows.append(TokenRow(name, p.budget_tokens, p.total_tokens,
                             p.encoded_frames, dt, pct))
    return rows


def token_report_csv(rows: list[TokenRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["policy", "budget_tokens", "total_tokens",
                     "encoded_frames", "delta_tokens", "delta_pct"])
    for r in rows:
        dt = "" if r.delta_tokens is None else r.delta_tokens
        pct = "" if r.delta_pct is None else f"{r.delta_pct:.2f}"
        writer.writerow([r.policy, r.budget_tokens, r.total_tokens,
                         r.encoded_frames, dt, pct])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# policy sweep

POLICIES = ("keyclips", "uniform", "topk", "its", "watershed")


@dataclass(frozen=True)
class SweepInstance:
    """Synthetic-instance shape used across one sweep."""

    n: int = 1800
    num_events: int = 3
    amp: float = 0.6
    width: float = 10.0
    noise_sigma: float = 0.05
    min_separation: int = 120
    d: int = 32
    window: int = DEFAULT_WINDOW


@dataclass(frozen=True)
class SweepRow:
    policy: str
    k: int
    anchor_ratio: float
    runs: int
    mean_coverage: float
    std_coverage: float
    mean_recall: float
    std_recall: float
    mean_tokens: float


@dataclass(frozen=True)
class EvalReport:
    rows: tuple[SweepRow, ...]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["policy", "k", "anchor_ratio", "runs",
                         "mean_coverage", "std_coverage",
                         "mean_recall", "std_recall", "mean_tokens"])
        for r in self.rows:
            writer.writerow([r.policy, r.k, f"{r.anchor_ratio:.4f}", r.runs,
                             f"{r.mean_coverage:.6f}", f"{r.std_coverage:.6f}",
                             f"{r.mean_recall:.6f}", f"{r.std_recall:.6f}",
                             f"{r.mean_tokens:.2f}"])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps([asdict(r) for r in self.rows], indent=1)


def make_instance(shape: SweepInstance, seed: int) -> tuple[
        EmbeddingSequence, QueryEmbedding, SimilarityCurve, GroundTruth]:
    """One seeded synthetic video with planted events."""
    rng = np.random.default_rng((seed, 0xEC))
    centers: list[int] = []
    margin = shape.min_separation
    for _ in range(200):
        if len(centers) == shape.num_events:
            break
        c = int(rng.integers(margin, shape.n - margin))
        if all(abs(c - o) >= margin for o in centers):
            centers.append(c)
    centers.sort()
    curve = synth_curve(shape.n, centers, shape.amp, shape.width,
                        shape.noise_sigma, seed)
    seq, query = synth_embeddings(curve, shape.d, seed)
    return seq, query, curve, GroundTruth(tuple(centers), shape.window)


def run_policy(policy: str, seq: EmbeddingSequence, query: QueryEmbedding,
               curve: SimilarityCurve, cfg: SelectionConfig):
    """Evaluate one policy; returns a ClipPlan for token-comparable output."""
    if policy == "keyclips":
        return plan(seq, query, cfg)
    if policy == "uniform":
        sel = baselines.uniform_select(seq.n, cfg.k)
    elif policy == "topk":
        sel = baselines.topk_select(curve, cfg.k)
    elif policy == "its":
        sel = baselines.its_select(curve, cfg.k)
    elif policy == "watershed":
        sel = baselines.watershed_select(curve, cfg.k, cfg.seed)
    else:
        raise ValueError(f"unknown policy {policy!r}")
    return selection_to_plan(sel, seq, cfg)


def sweep(policies: tuple[str, ...], k_values: tuple[int, ...],
          anchor_ratios: tuple[float, ...], seeds: tuple[int, ...],
          shape: SweepInstance = SweepInstance()) -> EvalReport:
    """Cartesian sweep over policies, budgets, and anchor ratios.

    Every (k, ratio, seed) cell shares one synthetic instance, so policies
    are compared on identical inputs.  Aggregation is order-independent.
    """
    rows = []
    for k in k_values:
        for ratio in anchor_ratios:
            k_anchor = max(1, round(ratio * k))
            per_policy: dict[str, list[tuple[float, float, int]]] = {
                p: [] for p in policies}
            for seed in seeds:
                seq, query, curve, gt = make_instance(shape, seed)
                cfg = SelectionConfig(k=k, k_anchor=k_anchor, seed=seed)
                for policy in policies:
                    result = run_policy(policy, seq, query, curve, cfg)
                    cov, rec = coverage(result, gt)
                    per_policy[policy].append((cov, rec, result.total_tokens))
            for policy in policies:
                cov = np.array([x[0] for x in per_policy[policy]])
                rec = np.array([x[1] for x in per_policy[policy]])
                tok = np.array([x[2] for x in per_policy[policy]], dtype=float)
                rows.append(SweepRow(
                    policy=policy, k=k, anchor_ratio=ratio, runs=len(seeds),
                    mean_coverage=float(cov.mean()), std_coverage=float(cov.std()),
                    mean_recall=float(rec.mean()), std_recall=float(rec.std()),
                    mean_tokens=float(tok.mean()),
                ))
    return EvalReport(tuple(rows))
