import math

import numpy as np
import pytest
from sklearn.metrics import average_precision_score, roc_auc_score

from models.benchmark import Label
from models.errors import EmptyInput, InvalidConfig, MissingProgramCounts, NoPositives, SingleClass
from models.evaluation import ScoredSample
from utils.calculators import aucpr, auroc, build_curves, confusion, indiscriminate_totals, roc_curve, threshold_sweep

P, F = Label.PASSED, Label.FAILED


def scored(scores, labels, counts=None):
    counts = counts or [(None, None)] * len(scores)
    return [
        ScoredSample(f"s{k}", float(score), label, correct, total)
        for k, (score, label, (correct, total)) in enumerate(zip(scores, labels, counts))
    ]


def mann_whitney_oracle(scores, positives):
    pos = scores[positives][:, None]
    neg = scores[~positives][None, :]
    return ((pos > neg).sum() + 0.5 * (pos == neg).sum()) / (pos.size * neg.size)


def threshold_oracle(scores, positives):
    """Precisión media enumerando cada umbral distinto de mayor a menor"""
    area = 0.0
    previous_recall = 0.0
    for t in sorted(set(scores.tolist()), reverse=True):
        predicted = scores >= t
        tp = int((predicted & positives).sum())
        recall = tp / positives.sum()
        area += (recall - previous_recall) * (tp / predicted.sum())
        previous_recall = recall
    return area


def random_datasets(count=100, seed=1):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(2, 201))
        scores = np.round(rng.uniform(0, 1, n), 1)
        positives = rng.uniform(0, 1, n) < 0.4
        positives[0], positives[1] = True, False
        yield scores, positives


def as_scored(scores, positives):
    return scored(scores, [P if p else F for p in positives])


class TestAuroc:
    def test_perfect_separation(self):
        assert auroc(scored([0.9, 0.8, 0.3, 0.2], [P, P, F, F])) == 1.0

    def test_interleaved(self):
        assert auroc(scored([0.9, 0.8, 0.3, 0.2], [F, P, F, P])) == pytest.approx(0.25)

    def test_all_ties(self):
        assert auroc(scored([0.4] * 4, [P, F, P, F])) == pytest.approx(0.5)

    def test_matches_pairwise_oracle(self):
        for scores, positives in random_datasets():
            value = auroc(as_scored(scores, positives))
            assert value == pytest.approx(mann_whitney_oracle(scores, positives), abs=1e-12)
            assert value == pytest.approx(roc_auc_score(positives, scores), abs=1e-12)

    def test_label_reversal(self):
        for scores, positives in random_datasets(20, seed=2):
            forward = auroc(as_scored(scores, positives))
            assert auroc(as_scored(scores, ~positives)) == pytest.approx(1 - forward, abs=1e-12)

    def test_monotone_transform(self):
        for scores, positives in random_datasets(20, seed=3):
            assert auroc(as_scored(np.exp(3 * scores), positives)) == pytest.approx(
                auroc(as_scored(scores, positives)), abs=1e-12
            )

    def test_single_class(self):
        with pytest.raises(SingleClass):
            auroc(scored([0.1, 0.2], [P, P]))


class TestAucpr:
    def test_perfect_separation(self):
        assert aucpr(scored([0.9, 0.8, 0.3, 0.2], [P, P, F, F])) == pytest.approx(1.0)

    def test_all_passed(self):
        assert aucpr(scored([0.9, 0.5, 0.1], [P, P, P])) == pytest.approx(1.0)

    def test_small_case(self):
        value = aucpr(scored([0.9, 0.8, 0.3], [F, P, P]))
        assert value == pytest.approx(0.5 * 0.5 + 0.5 * (2 / 3))

    def test_matches_threshold_oracle(self):
        for scores, positives in random_datasets():
            value = aucpr(as_scored(scores, positives))
            assert value == pytest.approx(threshold_oracle(scores, positives), abs=1e-9)
            assert value == pytest.approx(average_precision_score(positives, scores), abs=1e-9)

    def test_trapezoid_mode(self):
        value = aucpr(scored([0.9, 0.8, 0.3], [F, P, P]), mode="trapezoid")
        assert value == pytest.approx(0.5 * 0.5 / 2 + 0.5 * (0.5 + 2 / 3) / 2)

    def test_unknown_mode(self):
        with pytest.raises(InvalidConfig):
            aucpr(scored([0.9, 0.1], [P, F]), mode="interpolated")

    def test_no_positives(self):
        with pytest.raises(NoPositives):
            aucpr(scored([0.9, 0.1], [F, F]))


class TestThresholdSweep:
    def test_single_sample(self):
        sweep = threshold_sweep(scored([0.5], [P], [(3, 5)]), points=2)
        assert (sweep[0].shown_correct, sweep[0].shown_erroneous) == (3, 2)
        assert sweep[0].threshold < 0.5
        assert (sweep[-1].shown_correct, sweep[-1].shown_erroneous) == (0, 0)

    def test_two_samples_straddling(self):
        sweep = threshold_sweep(scored([0.2, 0.8], [F, P], [(1, 2), (2, 3)]), points=3)
        assert [(p.shown_correct, p.shown_erroneous) for p in sweep] == [(3, 2), (2, 1), (0, 0)]
        assert sweep[1].threshold == pytest.approx(0.5)

    def test_default_points(self):
        rng = np.random.default_rng(4)
        data = scored(rng.uniform(0, 1, 30), [P, F] * 15, [(1, 2)] * 30)
        sweep = threshold_sweep(data)
        assert len(sweep) == 100
        correct = [p.shown_correct for p in sweep]
        assert correct == sorted(correct, reverse=True)
        assert correct[0] == 30

    @pytest.mark.parametrize("points", [2, 7, 100])
    def test_first_point_equals_indiscriminate(self, points):
        for scores, positives in random_datasets(count=30, seed=points):
            rng = np.random.default_rng(len(scores))
            totals = rng.integers(1, 21, len(scores))
            counts = [(int(rng.integers(0, t + 1)), int(t)) for t in totals]
            data = scored(scores, [P if p else F for p in positives], counts)
            first = threshold_sweep(data, points)[0]
            assert first.threshold < scores.min()
            assert (first.shown_correct, first.shown_erroneous) == indiscriminate_totals(data)

    def test_missing_counts(self):
        with pytest.raises(MissingProgramCounts):
            threshold_sweep(scored([0.5, 0.6], [P, F]))

    def test_empty(self):
        with pytest.raises(EmptyInput):
            threshold_sweep([])


class TestConfusion:
    def test_perfect_classifier(self):
        result = confusion(scored([0.9, 0.8, 0.3, 0.2], [P, P, F, F]), 0.5)
        assert (result.tpr, result.fpr) == (1.0, 0.0)

    def test_all_predicted_failed(self):
        result = confusion(scored([0.4, 0.3], [P, F]), 1.0)
        assert result.tp == result.fp == 0
        assert math.isnan(result.precision)

    def test_counts_and_rates(self):
        result = confusion(scored([0.9, 0.8, 0.7, 0.1], [P, P, F, F]), 0.5)
        assert (result.tp, result.fp, result.tn, result.fn) == (2, 1, 1, 0)
        assert result.precision == pytest.approx(2 / 3)
        assert result.recall == 1.0

    def test_strict_threshold(self):
        assert confusion(scored([0.5], [P]), 0.5).fn == 1


class TestCurves:
    def test_roc_endpoints(self):
        points = roc_curve(scored([0.9, 0.8, 0.3, 0.2], [P, F, P, F]))
        assert points[0] == (0.0, 0.0)
        assert points[-1] == (1.0, 1.0)

    def test_build_curves_with_counts(self):
        curves = build_curves(scored([0.9, 0.2], [P, F], [(2, 2), (0, 2)]), sweep_points=5)
        assert len(curves.sweep) == 5
        assert curves.indiscriminate == (2, 2)

    def test_build_curves_without_counts(self):
        curves = build_curves(scored([0.9, 0.2], [P, F]))
        assert curves.sweep == [] and curves.indiscriminate is None
        assert curves.pr[-1][0] == 1.0
