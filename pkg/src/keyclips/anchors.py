"""Anchor key-frame selection: watershed peaks plus 1-d k-means.

The similarity curve is segmented into basins at its local minima; each
basin contributes its peak frame as a candidate.  When there are more
candidates than anchors allowed, candidates are clustered on their temporal
indices and each cluster keeps its best-scoring member.  Every step is
deterministic: quantile-based k-means init, fixed tie rules, no random
restarts.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .model import SelectionConfig, SimilarityCurve, ValidationError


class KTooLarge(ValueError):
    """Requested more clusters than there are points."""


@dataclass(frozen=True)
class AnchorSet:
    """Strictly increasing frame indices chosen as clip centers."""

    indices: tuple[int, ...]

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.indices, self.indices[1:])):
            raise ValidationError("anchor indices must be strictly increasing")

    def __len__(self) -> int:
        return len(self.indices)


def find_valleys(curve: SimilarityCurve) -> list[int]:
    """Interior local minima of the curve, ascending.

    A plateau of minimal values yields exactly its first index: i is a
    valley iff scores[i] < scores[i-1] and scores[i] <= scores[i+1].
    Endpoints are never valleys.
    """
    s = curve.scores
    out = []
    for i in range(1, len(s) - 1):
        if s[i] < s[i - 1] and s[i] <= s[i + 1]:
            out.append(i)
    return out


def basin_peaks(curve: SimilarityCurve, valleys: list[int]) -> list[int]:
    """Argmax of each basin delimited by consecutive valleys.

    Valley indices belong to both adjacent basins; the first basin starts
    at 0 and the last ends at N-1.  Ties go to the earliest index; the
    result is deduplicated and ascending.
    """
    s = curve.scores
    bounds = [0, *valleys, len(s) - 1]
    peaks: list[int] = []
    for lo, hi in zip(bounds, bounds[1:]):
        seg = s[lo:hi + 1]
        peak = lo + int(np.argmax(seg))  # np.argmax returns the first maximum
        if not peaks or peaks[-1] != peak:
            peaks.append(peak)
    return peaks


def kmeans_1d(points: list[int], k: int, seed: int = 0) -> list[list[int]]:
    """Lloyd's algorithm on scalar values with deterministic behavior.

    Init places centroids at the (j+0.5)/k quantiles of the (ascending)
    points.  Assignment ties go to the lower-centroid cluster; an emptied
    cluster is reseeded with the point farthest from its own centroid.
    Stops at an assignment fixpoint or after 100 iterations.  Clusters are
    returned ordered by centroid.  ``seed`` is accepted for signature
    stability but unused: every step above is already deterministic.
    """
    n = len(points)
    if k > n:
        raise KTooLarge(f"k={k} exceeds {n} points")
    pts = np.asarray(points, dtype=np.float64)
    centroids = [float(points[(2 * j + 1) * n // (2 * k)]) for j in range(k)]
    assign: list[int] | None = None
    for _ in range(100):
        # vectorized argmin over (distance, centroid) pairs: scanning
        # columns in stable centroid order makes numpy's first-minimum
        # rule equal to the lower-centroid tie rule
        cents = np.asarray(centroids)
        order = np.argsort(cents, kind="stable")
        dists = np.abs(pts[:, None] - cents[order][None, :])
        new_assign = order[np.argmin(dists, axis=1)].tolist()
        _fix_empty_clusters(points, centroids, new_assign, k)
        if new_assign == assign:
            break
        assign = new_assign
        counts = np.bincount(assign, minlength=k)
        sums = np.bincount(assign, weights=pts, minlength=k)
        centroids = (sums / counts).tolist()
    order = sorted(range(k), key=lambda j: centroids[j])
    return [[p for p, a in zip(points, assign) if a == j] for j in order]


def _fix_empty_clusters(points, centroids, assign, k) -> None:
    """Move the worst-fit point into each empty cluster, in index order."""
    for j in range(k):
        if j in assign:
            continue
        counts = Counter(assign)
        movable = [i for i, a in enumerate(assign) if counts[a] > 1]
        far = max(movable, key=lambda i: (abs(points[i] - centroids[assign[i]]), -i))
        assign[far] = j


def select_anchors(curve: SimilarityCurve, cfg: SelectionConfig) -> AnchorSet:
    """Pick up to ``cfg.k_anchor`` anchors from the curve's basin peaks.

    All candidates pass through when they already fit the anchor budget;
    otherwise candidates are clustered by temporal index and each cluster
    keeps its highest-scoring member (ties to the earliest frame).
    """
    candidates = basin_peaks(curve, find_valleys(curve))
    if len(candidates) <= cfg.k_anchor:
        return AnchorSet(tuple(candidates))
    s = curve.scores
    clusters = kmeans_1d(candidates, cfg.k_anchor, cfg.seed)
    anchors = []
    for cluster in clusters:
        best = cluster[0]
        for p in cluster[1:]:
            if s[p] > s[best]:
                best = p
        anchors.append(best)
    return AnchorSet(tuple(sorted(anchors)))
