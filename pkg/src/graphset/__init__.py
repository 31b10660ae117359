"""Embeddings for collections of graphs.

Interpretable structural node features are computed per graph, the
resulting node-feature point clouds are vectorized through optimal
transport against a shared reference, and the vectors feed a seeded
forest classifier, feature-ordering strategies, and a node-sampling
evaluation harness.
"""

__version__ = "0.1.0"

from .embedding import EmbeddingConfig, GraphEmbedding, embed_collection
from .errors import GraphsetError
from .features import FeatureSpec, compute_features, register_feature
from .forest import evaluate_repeated, predict, train_forest
from .graphs import Graph, GraphCollection
from .io import load_edge_list, load_tud_dataset
from .ot import PointCloud, exact_ot, sinkhorn_ot, wasserstein_1d
from .sampling import embedding_similarity_score, sampling_sweep
from .selection import (
    fast_select,
    greedy_select,
    random_baseline,
    unsupervised_select,
    worst_select,
)

__all__ = [
    "__version__",
    "EmbeddingConfig",
    "FeatureSpec",
    "Graph",
    "GraphCollection",
    "GraphEmbedding",
    "GraphsetError",
    "PointCloud",
    "compute_features",
    "embed_collection",
    "embedding_similarity_score",
    "evaluate_repeated",
    "exact_ot",
    "fast_select",
    "greedy_select",
    "load_edge_list",
    "load_tud_dataset",
    "predict",
    "random_baseline",
    "register_feature",
    "sampling_sweep",
    "sinkhorn_ot",
    "train_forest",
    "unsupervised_select",
    "wasserstein_1d",
    "worst_select",
]
