"""Deterministic, training-free selection of token-budgeted video key clips.

Given per-frame embeddings and a query embedding, the planner scores
frames by cosine relevancy, extracts candidate peaks with a watershed
pass, clusters them into anchors, grows each anchor into a temporally
coherent clip, and trades clip length against spatial resolution so the
whole plan fits a fixed token budget.
"""

from .anchors import AnchorSet, KTooLarge, select_anchors
from .baselines import (
    FrameSelection,
    its_select,
    topk_select,
    uniform_select,
    watershed_select,
)
from .container import ContainerError, read_container, write_container
from .harness import GroundTruth, coverage, sweep, synth_curve, synth_embeddings
from .model import (
    ClipPlan,
    EmbeddingSequence,
    KeyClip,
    QueryEmbedding,
    SelectionConfig,
    SimilarityCurve,
    ValidationError,
    plan_from_json,
    plan_to_json,
)
from .planner import BudgetViolation, budget_tokens, plan
from .relevance import relevancy_scores

__all__ = [
    "AnchorSet",
    "BudgetViolation",
    "ClipPlan",
    "ContainerError",
    "EmbeddingSequence",
    "FrameSelection",
    "GroundTruth",
    "KTooLarge",
    "KeyClip",
    "QueryEmbedding",
    "SelectionConfig",
    "SimilarityCurve",
    "ValidationError",
    "budget_tokens",
    "coverage",
    "its_select",
    "plan",
    "plan_from_json",
    "plan_to_json",
    "read_container",
    "relevancy_scores",
    "select_anchors",
    "sweep",
    "synth_curve",
    "synth_embeddings",
    "topk_select",
    "uniform_select",
    "watershed_select",
    "write_container",
]

__version__ = "0.1.0"
