import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from keyclips.harness import (
    GroundTruth,
    SweepInstance,
    coverage,
    make_instance,
    run_policy,
    sweep,
    synth_curve,
    synth_embeddings,
    token_report,
    token_report_csv,
)
from keyclips.model import (
    ClipPlan,
    KeyClip,
    SelectionConfig,
    SimilarityCurve,
    ceil_tokens,
    validate_query,
    validate_sequence,
)
from keyclips.baselines import FrameSelection
from keyclips.relevance import relevancy_scores

from oracles import coverage_oracle


class TestSynthCurve:
    def test_no_events_no_noise_is_zero(self):
        curve = synth_curve(50, (), 0.6, 10.0, 0.0, seed=0)
        assert np.all(curve.scores == 0.0)

    def test_single_event_peaks_at_center(self):
        curve = synth_curve(200, (73,), 0.6, 10.0, 0.0, seed=0)
        assert int(np.argmax(curve.scores)) == 73

    def test_seeded_noise_is_reproducible(self):
        a = synth_curve(300, (50,), 0.6, 10.0, 0.05, seed=9)
        b = synth_curve(300, (50,), 0.6, 10.0, 0.05, seed=9)
        assert a.scores.tobytes() == b.scores.tobytes()

    def test_out_of_range_center_rejected(self):
        with pytest.raises(ValueError):
            synth_curve(10, (10,), 0.6, 5.0, 0.0, seed=0)

    def test_clipped_to_unit_band(self):
        curve = synth_curve(100, (50,), 1.0, 30.0, 0.5, seed=3)
        assert np.all(np.abs(curve.scores) <= 1.0)


class TestSynthEmbeddings:
    def test_full_relevance_reproduces_query(self):
        curve = SimilarityCurve([1.0, 0.0])
        seq, query = synth_embeddings(curve, 6, seed=0)
        assert np.array_equal(seq.frames[0], query.vector)

    def test_zero_relevance_is_orthogonal(self):
        curve = SimilarityCurve([1.0, 0.0])
        seq, query = synth_embeddings(curve, 6, seed=0)
        assert float(seq.frames[1] @ query.vector) == 0.0

    def test_construction_identity_within_tolerance(self):
        curve = synth_curve(400, (100, 300), 0.7, 12.0, 0.05, seed=11)
        seq, query = synth_embeddings(curve, 32, seed=11)
        back = relevancy_scores(seq, query)
        assert np.max(np.abs(back.scores - curve.scores)) < 1e-6

    def test_output_passes_validation(self):
        curve = synth_curve(50, (25,), 0.6, 5.0, 0.05, seed=2)
        seq, query = synth_embeddings(curve, 8, seed=2)
        validate_sequence(seq)
        validate_query(query, d=8)

    def test_dimension_floor(self):
        with pytest.raises(ValueError):
            synth_embeddings(SimilarityCurve([0.5]), 1, seed=0)


def _plan_with_span(start, end, anchor=None, budget=10**9):
    anchor = start if anchor is None else anchor
    length = end - start + 1
    clip = KeyClip(anchor=anchor, start=start, end=end, length=length,
                   scale=1.0, out_height=448, out_width=448,
                   tokens=ceil_tokens(length * 448 * 448, 392.0))
    return ClipPlan(clips=(clip,), budget_tokens=budget,
                    total_tokens=clip.tokens, config=SelectionConfig())


class TestCoverage:
    def test_half_covered(self):
        gt = GroundTruth((5, 50))
        cov, rec = coverage(_plan_with_span(4, 6, anchor=5), gt)
        assert cov == 0.5
        assert rec == 1.0

    def test_empty_selection_scores_zero(self):
        assert coverage(FrameSelection(method="topk", indices=()),
                        GroundTruth((5,))) == (0.0, 0.0)

    def test_exact_hits_score_one(self):
        gt = GroundTruth((5, 50))
        sel = FrameSelection(method="topk", indices=(5, 50))
        assert coverage(sel, gt) == (1.0, 1.0)

    def test_plain_index_set_accepted(self):
        assert coverage({4, 6}, GroundTruth((5,), window=1)) == (1.0, 1.0)

    @given(st.sets(st.integers(0, 99), max_size=12),
           st.sets(st.integers(0, 99), min_size=1, max_size=5),
           st.integers(0, 4))
    def test_matches_oracle_and_bounds(self, picks, centers, window):
        gt = GroundTruth(tuple(sorted(centers)), window)
        got = coverage(sorted(picks), gt)
        assert got == coverage_oracle(sorted(picks), sorted(picks),
                                      sorted(centers), window)
        assert 0.0 <= got[0] <= 1.0 and 0.0 <= got[1] <= 1.0

    @given(st.sets(st.integers(0, 99), max_size=8),
           st.sets(st.integers(0, 99), max_size=8),
           st.sets(st.integers(0, 99), min_size=1, max_size=5))
    def test_adding_frames_never_decreases_coverage(self, base, extra,
                                                    centers):
        gt = GroundTruth(tuple(sorted(centers)))
        before, _ = coverage(sorted(base), gt)
        after, _ = coverage(sorted(base | extra), gt)
        assert after >= before


class TestGroundTruth:
    def test_json_round_trip(self):
        gt = GroundTruth((3, 9), window=1)
        assert GroundTruth.from_json(gt.to_json()) == gt

    def test_unsorted_centers_rejected(self):
        with pytest.raises(ValueError):
            GroundTruth((9, 3))


class TestTokenReport:
    def test_identical_plans_zero_delta(self):
        p = _plan_with_span(0, 3)
        rows = token_report({"a": p, "b": p}, baseline="a")
        by_name = {r.policy: r for r in rows}
        assert by_name["a"].delta_tokens is None
        assert by_name["b"].delta_tokens == 0
        assert by_name["b"].delta_pct == 0.0

    def test_two_frame_overlap_saves_two_frames_of_tokens(self):
        # 448x448 frames cost exactly 512 tokens each at z=392, so a
        # 2-frame overlap merged away must save exactly 1024 tokens
        unmerged_clips = (
            _plan_with_span(0, 3).clips[0],
            KeyClip(anchor=2, start=2, end=5, length=4, scale=1.0,
                    out_height=448, out_width=448, tokens=2048),
        )
        unmerged = ClipPlan(clips=unmerged_clips, budget_tokens=10**9,
                            total_tokens=4096, config=SelectionConfig())
        merged = _plan_with_span(0, 5)
        rows = token_report({"unmerged": unmerged, "merged": merged},
                            baseline="unmerged")
        merged_row = next(r for r in rows if r.policy == "merged")
        assert merged_row.delta_tokens == -1024
        assert merged_row.delta_pct == pytest.approx(-25.0)

    def test_unknown_baseline_rejected(self):
        with pytest.raises(KeyError):
            token_report({"a": _plan_with_span(0, 1)}, baseline="zz")

    def test_csv_layout(self):
        p = _plan_with_span(0, 1)
        text = token_report_csv(token_report({"a": p, "b": p}, baseline="a"))
        lines = text.splitlines()
        assert lines[0] == ("policy,budget_tokens,total_tokens,"
                            "encoded_frames,delta_tokens,delta_pct")
        assert lines[1].startswith("a,")
        assert lines[1].endswith(",,")


class TestSweep:
    SMALL = SweepInstance(n=240, num_events=2, min_separation=60, d=8)

    def test_single_cell_yields_one_row_per_policy(self):
        report = sweep(("uniform",), (8,), (1.0,), (0,), self.SMALL)
        assert len(report.rows) == 1
        row = report.rows[0]
        assert (row.policy, row.k, row.runs) == ("uniform", 8, 1)

    def test_ratio_grid_row_count_and_runs(self):
        report = sweep(("uniform", "topk"), (8,), (0.25, 0.5, 1.0),
                       tuple(range(4)), self.SMALL)
        assert len(report.rows) == 6
        assert all(r.runs == 4 for r in report.rows)

    def test_deterministic_given_seeds(self):
        args = (("keyclips", "uniform"), (8,), (0.5, 1.0), (0, 1, 2),
                self.SMALL)
        assert sweep(*args).to_csv() == sweep(*args).to_csv()

    def test_bounds_and_csv_shape(self):
        report = sweep(("keyclips",), (8,), (1.0,), (0, 1), self.SMALL)
        for row in report.rows:
            assert 0.0 <= row.mean_coverage <= 1.0
            assert 0.0 <= row.mean_recall <= 1.0
            assert row.mean_tokens > 0
        lines = report.to_csv().splitlines()
        assert len(lines) == 1 + len(report.rows)
        assert json.loads(report.to_json())[0]["policy"] == "keyclips"


class TestMakeInstance:
    def test_reproducible(self):
        shape = SweepInstance(n=600, min_separation=100)
        a_seq, _, a_curve, a_gt = make_instance(shape, seed=5)
        b_seq, _, b_curve, b_gt = make_instance(shape, seed=5)
        assert a_gt == b_gt
        assert a_seq.frames.tobytes() == b_seq.frames.tobytes()
        assert a_curve.scores.tobytes() == b_curve.scores.tobytes()

    def test_event_separation_honored(self):
        shape = SweepInstance(n=1800, num_events=3, min_separation=120)
        for seed in range(10):
            _, _, _, gt = make_instance(shape, seed)
            centers = gt.event_centers
            assert len(centers) == 3
            assert all(b - a >= 120 for a, b in zip(centers, centers[1:]))

    def test_policy_runner_covers_every_policy(self):
        shape = SweepInstance(n=240, num_events=2, min_separation=60, d=8)
        seq, query, curve, _ = make_instance(shape, seed=1)
        cfg = SelectionConfig(k=4)
        for policy in ("keyclips", "uniform", "topk", "its", "watershed"):
            result = run_policy(policy, seq, query, curve, cfg)
            assert result.total_tokens <= result.budget_tokens
        with pytest.raises(ValueError):
            run_policy("qframe", seq, query, curve, cfg)
