import logging

import numpy as np
import pytest

from graphset.errors import ParameterError, ShapeError
from graphset.forest import (
    EvalReport,
    evaluate_repeated,
    feature_importances,
    predict,
    train_forest,
)


def blobs(m=100, gap=6.0, seed=0, noise_cols=0):
    """Two well-separated 2-D gaussian blobs, labels 0/1."""
    rng = np.random.default_rng(seed)
    half = m // 2
    a = rng.normal(0.0, 1.0, size=(half, 2))
    b = rng.normal(gap, 1.0, size=(m - half, 2))
    X = np.vstack([a, b])
    y = np.array([0] * half + [1] * (m - half))
    if noise_cols:
        X = np.hstack([X, rng.normal(size=(m, noise_cols))])
    return X, y


class TestTraining:
    def test_separable_blobs_training_accuracy(self):
        X, y = blobs()
        model = train_forest(X, y, seed=3)
        acc = np.mean(predict(model, X) == y)
        assert acc >= 0.99

    def test_deterministic_per_seed(self):
        X, y = blobs(m=60)
        p1 = predict(train_forest(X, y, seed=5), X)
        p2 = predict(train_forest(X, y, seed=5), X)
        p3 = predict(train_forest(X, y, seed=6), X)
        assert np.array_equal(p1, p2)
        # a different seed changes the bootstrap draws
        m3 = train_forest(X, y, seed=6)
        assert m3.seed != 5
        assert len(p3) == len(p1)

    def test_thread_count_does_not_change_model(self):
        X, y = blobs(m=60, noise_cols=3)
        p1 = predict(train_forest(X, y, seed=2, threads=1), X)
        p2 = predict(train_forest(X, y, seed=2, threads=4), X)
        assert np.array_equal(p1, p2)

    def test_single_class_notice_and_constant_prediction(self, caplog):
        X = np.random.default_rng(0).normal(size=(20, 3))
        y = np.full(20, 7)
        with caplog.at_level(logging.INFO, logger="graphset"):
            model = train_forest(X, y, seed=0)
        assert any("single class" in r.message for r in caplog.records)
        assert np.all(predict(model, X) == 7)
        assert np.all(feature_importances(model) == 0)

    def test_too_few_samples(self):
        with pytest.raises(ParameterError):
            train_forest(np.zeros((1, 2)), [0], seed=0)

    def test_label_length_mismatch(self):
        with pytest.raises(ShapeError):
            train_forest(np.zeros((4, 2)), [0, 1], seed=0)

    def test_bad_mode(self):
        with pytest.raises(ParameterError):
            train_forest(np.zeros((4, 2)), [0, 1, 0, 1], mode="rank", seed=0)

    def test_noninteger_labels_roundtrip(self):
        # labels are arbitrary ids; predictions come back in the same alphabet
        X, y = blobs(m=40)
        model = train_forest(X, y + 10, seed=0)
        assert set(np.unique(predict(model, X))) <= {10, 11}


class TestPredict:
    def test_single_deep_tree_recalls_training_labels(self):
        X, y = blobs(m=50, gap=3.0, seed=1)
        model = train_forest(
            X, y,
            params={"n_trees": 1, "bootstrap": False, "max_depth": 30,
                    "min_leaf": 1, "feature_subsample": 2},
            seed=0,
        )
        assert np.array_equal(predict(model, X), y)

    def test_constant_rows_same_prediction(self):
        X, y = blobs(m=40)
        model = train_forest(X, y, seed=0)
        rows = np.tile([1.0, 2.0], (5, 1))
        preds = predict(model, rows)
        assert len(set(preds.tolist())) == 1

    def test_width_mismatch(self):
        X, y = blobs(m=40)
        model = train_forest(X, y, seed=0)
        with pytest.raises(ShapeError):
            predict(model, np.zeros((3, 5)))

    def test_empty_forest(self):
        X, y = blobs(m=40)
        model = train_forest(X, y, seed=0)
        model.trees = []
        with pytest.raises(ParameterError):
            predict(model, X)

    def test_single_row_input(self):
        X, y = blobs(m=40)
        model = train_forest(X, y, seed=0)
        assert predict(model, X[0]).shape == (1,)

    def test_tie_breaks_toward_smaller_class(self):
        # two trees voting for different classes: argmax picks the first max
        X = np.array([[0.0], [1.0], [0.0], [1.0]])
        y = np.array([0, 1, 0, 1])
        model = train_forest(
            X, y,
            params={"n_trees": 2, "bootstrap": False, "max_depth": 1,
                    "min_leaf": 1, "feature_subsample": 1},
            seed=0,
        )
        preds = predict(model, X)
        assert preds.dtype.kind in "iu"


class TestImportances:
    def test_sum_to_one(self):
        X, y = blobs(m=80, noise_cols=2)
        model = train_forest(X, y, seed=0)
        imp = feature_importances(model)
        assert np.all(imp >= 0)
        assert imp.sum() == pytest.approx(1.0)

    def test_single_informative_feature_dominates(self):
        rng = np.random.default_rng(4)
        X = rng.normal(size=(200, 5))
        y = (X[:, 0] > 0).astype(int)
        model = train_forest(X, y, seed=1)
        imp = feature_importances(model)
        assert imp[0] > 0.8
        assert np.all(imp[1:] < 0.1)

    def test_duplicated_feature_splits_importance(self):
        rng = np.random.default_rng(7)
        base = rng.normal(size=(200, 1))
        noise = rng.normal(size=(200, 2))
        y = (base[:, 0] > 0).astype(int)
        single = train_forest(np.hstack([base, noise]), y, seed=2)
        dup = train_forest(np.hstack([base, base, noise]), y, seed=2)
        imp_s = feature_importances(single)
        imp_d = feature_importances(dup)
        # the duplicate pair shares what the single column earned
        assert abs(imp_d[0] + imp_d[1] - imp_s[0]) < 0.05
        assert abs(imp_d[0] - imp_d[1]) < 0.15

    def test_splitless_model_zero_with_notice(self, caplog):
        X = np.zeros((10, 3))
        y = np.array([0, 1] * 5)
        model = train_forest(X, y, seed=0)
        with caplog.at_level(logging.INFO, logger="graphset"):
            imp = feature_importances(model)
        assert np.all(imp == 0)
        assert any("no splits" in r.message for r in caplog.records)


class TestEvaluation:
    def test_separable_report(self):
        X, y = blobs(m=120)
        report = evaluate_repeated(X, y, n_runs=10, seed=0)
        assert report.metrics["accuracy_mean"] >= 0.99
        assert report.metrics["accuracy_std"] <= 0.02
        assert report.metrics["f1_mean"] >= 0.98

    def test_random_labels_near_prior(self):
        rng = np.random.default_rng(11)
        X = rng.normal(size=(120, 4))
        y = np.array([0, 1] * 60)
        report = evaluate_repeated(X, y, n_runs=10, seed=0)
        assert 0.4 <= report.metrics["accuracy_mean"] <= 0.6

    def test_single_run_zero_std(self):
        X, y = blobs(m=60)
        report = evaluate_repeated(X, y, n_runs=1, seed=0)
        assert report.metrics["accuracy_std"] == 0.0

    def test_deterministic(self):
        X, y = blobs(m=60)
        r1 = evaluate_repeated(X, y, n_runs=4, seed=9)
        r2 = evaluate_repeated(X, y, n_runs=4, seed=9)
        assert r1.metrics == r2.metrics

    def test_metrics_in_unit_interval(self):
        X, y = blobs(m=60, gap=1.0)
        report = evaluate_repeated(X, y, n_runs=5, seed=0)
        for key, value in report.metrics.items():
            assert 0.0 <= value <= 1.0, key

    def test_missing_class_flagged_not_fatal(self):
        # 11 samples of class 1, one of class 0: many test splits lack class 0
        rng = np.random.default_rng(3)
        X = rng.normal(size=(12, 2))
        y = np.array([0] + [1] * 11)
        report = evaluate_repeated(X, y, n_runs=8, seed=0)
        assert report.n_runs == 8
        assert report.zero_division_runs > 0

    def test_regression_mae(self):
        rng = np.random.default_rng(5)
        X = rng.normal(size=(100, 3))
        y = 2.0 * X[:, 0] + rng.normal(0, 0.05, size=100)
        report = evaluate_repeated(X, y, n_runs=5, seed=0, mode="regress")
        assert report.metrics["mae_mean"] < np.mean(np.abs(y - y.mean()))
        assert report.metrics["mae_mean"] >= 0

    def test_report_serializable(self):
        import json

        X, y = blobs(m=60)
        report = evaluate_repeated(X, y, n_runs=2, seed=0)
        blob = json.dumps(report.to_dict())
        back = json.loads(blob)
        assert back["n_runs"] == 2
        assert "accuracy_mean" in back["metrics"]

    def test_too_few_samples(self):
        with pytest.raises(ParameterError):
            evaluate_repeated(np.zeros((5, 2)), [0, 1, 0, 1, 0], seed=0)

    def test_bad_fraction(self):
        X, y = blobs(m=20)
        with pytest.raises(ParameterError):
            evaluate_repeated(X, y, train_fraction=1.0, seed=0)

    def test_monotone_sanity_separating_feature(self):
        # appending a strictly separating column never hurts by more than 0.02
        X, y = blobs(m=80, gap=2.0, seed=2)
        base = evaluate_repeated(X, y, n_runs=6, seed=1)
        sep = np.where(y == 1, 10.0, -10.0)[:, None]
        extended = evaluate_repeated(np.hstack([X, sep]), y, n_runs=6, seed=1)
        assert (extended.metrics["accuracy_mean"]
                >= base.metrics["accuracy_mean"] - 0.02)
