import logging

import numpy as np
import pytest

from graphset.embedding import EmbeddingConfig, GraphEmbedding
from graphset.errors import ParameterError
from graphset.features import FeatureSpec
from graphset.graphs import GraphCollection, generate_planted_partition
from graphset.sampling import (
    SweepResult,
    embedding_similarity_score,
    sampling_sweep,
)


def make_embedding(matrix):
    return GraphEmbedding(
        matrix=np.asarray(matrix, dtype=np.float64),
        method="approximate", feature_columns=[], singular_values=[],
    )


def planted_collection(seed=0, per_class=6, n=24, degs=(4, 8), labeled=True):
    graphs, labels = [], []
    for c, deg in enumerate(degs):
        for i in range(per_class):
            g = generate_planted_partition(
                n, [n // 2, n // 2], 0.2, seed=(seed, c, i), degree=deg
            )
            graphs.append(g)
            labels.append(c)
    return GraphCollection(
        graphs, labels=np.array(labels) if labeled else None
    )


SPECS = [FeatureSpec("degree_centrality", 2), FeatureSpec("expansion", 2)]
CONFIG = EmbeddingConfig(method="approximate", dim=2, seed=0)


class TestSimilarityScore:
    def test_identical_embeddings_score_one(self):
        rng = np.random.default_rng(0)
        e = make_embedding(rng.normal(size=(10, 3)))
        s = embedding_similarity_score(e, e, 0, probe=[1, 2, 3])
        assert s == pytest.approx(1.0, abs=1e-9)

    def test_global_scaling_is_invisible(self):
        rng = np.random.default_rng(1)
        mat = rng.normal(size=(12, 4))
        a = make_embedding(mat)
        b = make_embedding(2.0 * mat)
        s = embedding_similarity_score(a, b, 0, probe=list(range(1, 12)))
        assert s == pytest.approx(1.0, abs=1e-9)

    def test_unrelated_embeddings_score_below_identity(self):
        rng = np.random.default_rng(2)
        a = make_embedding(rng.normal(size=(30, 3)))
        b = make_embedding(rng.normal(size=(30, 3)) * [5.0, 0.1, 1.0])
        s = embedding_similarity_score(a, b, 0, probe=list(range(1, 30)))
        assert 0.0 <= s < 1.0

    def test_score_bounded(self):
        rng = np.random.default_rng(3)
        a = make_embedding(rng.normal(size=(8, 2)))
        b = make_embedding(rng.normal(size=(8, 2)) * 100)
        s = embedding_similarity_score(a, b, 2, probe=[0, 1, 3])
        assert 0.0 <= s <= 1.0

    def test_both_degenerate_scores_one(self, caplog):
        a = make_embedding(np.zeros((5, 2)))
        b = make_embedding(np.ones((5, 2)))
        with caplog.at_level(logging.INFO, logger="graphset"):
            s = embedding_similarity_score(a, b, 0, probe=[1, 2])
        assert s == 1.0
        assert any("degenerate" in r.message for r in caplog.records)

    def test_one_degenerate_scores_zero(self):
        rng = np.random.default_rng(4)
        a = make_embedding(np.zeros((5, 2)))
        b = make_embedding(rng.normal(size=(5, 2)))
        assert embedding_similarity_score(a, b, 0, probe=[1, 2]) == 0.0

    def test_probe_must_exclude_reference(self):
        e = make_embedding(np.eye(4))
        with pytest.raises(ParameterError):
            embedding_similarity_score(e, e, 1, probe=[1, 2])

    def test_probe_must_be_nonempty(self):
        e = make_embedding(np.eye(4))
        with pytest.raises(ParameterError):
            embedding_similarity_score(e, e, 0, probe=[])

    def test_row_count_mismatch(self):
        a = make_embedding(np.eye(4))
        b = make_embedding(np.eye(5))
        with pytest.raises(ParameterError):
            embedding_similarity_score(a, b, 0, probe=[1])


class TestSweep:
    def test_rate_one_is_the_anchor(self):
        coll = planted_collection(per_class=5)
        sweep = sampling_sweep(coll, SPECS, CONFIG, rates=[1.0, 0.5],
                               n_runs=3, seed=0)
        assert sweep.rates[0] == 1.0
        assert sweep.similarity.scores[0] == pytest.approx(1.0, abs=1e-9)
        assert sweep.normalized_times[0] == pytest.approx(1.0)
        assert sweep.similarity.rate_grid[0] == 0.0

    def test_all_times_positive(self):
        coll = planted_collection(per_class=5)
        sweep = sampling_sweep(coll, SPECS, CONFIG, rates=[0.8, 0.4],
                               n_runs=2, seed=0)
        assert all(t > 0 for t in sweep.normalized_times)

    def test_unlabeled_collection_skips_accuracy(self):
        coll = planted_collection(per_class=5, labeled=False)
        sweep = sampling_sweep(coll, SPECS, CONFIG, rates=[0.5],
                               n_runs=2, seed=0)
        assert sweep.eval_reports == [None]
        rows = sweep.to_rows()
        assert np.isnan(rows[1][2])

    def test_labeled_collection_reports_accuracy(self):
        coll = planted_collection()
        sweep = sampling_sweep(coll, SPECS, CONFIG, rates=[1.0, 0.5],
                               n_runs=3, seed=0)
        for report in sweep.eval_reports:
            assert 0.0 <= report.metrics["accuracy_mean"] <= 1.0
        # degree separation survives halving the node set
        assert (sweep.eval_reports[1].metrics["accuracy_mean"]
                >= sweep.eval_reports[0].metrics["accuracy_mean"] - 0.2)

    def test_similarity_degrades_gently_with_rate(self):
        # sampling fewer nodes should not look MORE like the full space
        coll = planted_collection(per_class=8)
        sweep = sampling_sweep(coll, SPECS, CONFIG,
                               rates=[1.0, 0.6, 0.2], n_runs=1, seed=1)
        s = sweep.similarity.scores
        assert s[0] >= s[1] - 0.02
        assert s[0] >= s[2] - 0.02
        assert all(0.0 <= x <= 1.0 for x in s)

    def test_deterministic(self):
        coll = planted_collection(per_class=5)
        s1 = sampling_sweep(coll, SPECS, CONFIG, rates=[0.5], n_runs=2,
                            seed=4)
        s2 = sampling_sweep(coll, SPECS, CONFIG, rates=[0.5], n_runs=2,
                            seed=4)
        assert s1.similarity.scores == s2.similarity.scores
        assert (s1.eval_reports[0].metrics
                == s2.eval_reports[0].metrics)

    def test_rows_layout(self):
        coll = planted_collection(per_class=5)
        sweep = sampling_sweep(coll, SPECS, CONFIG, rates=[1.0], n_runs=2,
                               seed=0)
        rows = sweep.to_rows()
        assert rows[0] == ("rate", "similarity", "accuracy_mean",
                           "accuracy_std", "normalized_time")
        assert len(rows) == 2
        assert rows[1][0] == 1.0

    def test_serializable(self):
        import json

        coll = planted_collection(per_class=5)
        sweep = sampling_sweep(coll, SPECS, CONFIG, rates=[0.5], n_runs=2,
                               seed=0)
        blob = json.loads(json.dumps(sweep.to_dict()))
        assert blob["worker_count"] >= 1
        assert len(blob["similarity"]["scores"]) == 1

    def test_bad_rate_rejected(self):
        coll = planted_collection(per_class=5)
        with pytest.raises(ParameterError):
            sampling_sweep(coll, SPECS, CONFIG, rates=[0.0], seed=0)
        with pytest.raises(ParameterError):
            sampling_sweep(coll, SPECS, CONFIG, rates=[], seed=0)

    def test_probe_recorded_and_excludes_reference(self):
        coll = planted_collection(per_class=5)
        sweep = sampling_sweep(coll, SPECS, CONFIG, rates=[0.5], n_runs=2,
                               seed=0, reference_graph=3)
        assert sweep.similarity.reference_graph == 3
        assert 3 not in sweep.similarity.probe_set
        assert len(sweep.similarity.probe_set) == len(coll) - 1
