"""Collection-level embeddings from node-feature point clouds.

Three methods produce an m x d matrix, one row per graph:

* ``wasserstein``: transport plans from each graph's cloud to a shared
  k-means reference, linearized through barycentric displacements and
  reduced by SVD;
* ``sinkhorn``: same construction with the entropic solver;
* ``approximate``: each cloud collapsed to its weighted mean, then SVD
  with singular-value scaling.

All stages are seeded and deterministic; the pooled points are sorted
before clustering so the reference does not depend on node labels or
graph order.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ._parallel import parallel_map
from .errors import ParameterError, PipelineError
from .features import FeatureMatrix
from .graphs import GraphCollection
from .ot import PointCloud, exact_ot, sinkhorn_ot

log = logging.getLogger("graphset")

METHODS = ("wasserstein", "sinkhorn", "approximate")


@dataclass(frozen=True)
class EmbeddingConfig:
    method: str = "approximate"
    dim: int = 2
    reference_size: int | None = None
    seed: int = 0
    sinkhorn_epsilon: float | None = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ParameterError(
                f"method must be one of {METHODS}, got {self.method!r}"
            )
        if self.dim < 1:
            raise ParameterError(f"dim must be >= 1, got {self.dim}")
        if self.reference_size is not None and self.reference_size < 1:
            raise ParameterError("reference_size must be >= 1")


@dataclass(frozen=True)
class ReferenceDistribution:
    """Uniformly weighted reference points shared by all graphs."""

    points: np.ndarray

    @property
    def size(self) -> int:
        return self.points.shape[0]

    def as_cloud(self) -> PointCloud:
        return PointCloud(self.points)


@dataclass
class GraphEmbedding:
    matrix: np.ndarray
    method: str
    feature_columns: list[str]
    singular_values: list[float]

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=np.float64)
        if not np.all(np.isfinite(self.matrix)):
            raise PipelineError("embedding contains non-finite values")

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]


def _kmeans_once(points, k, rng, iters=100):
    n = len(points)
    # k-means++ seeding
    centers = np.empty((k, points.shape[1]))
    first = int(rng.integers(n))
    centers[0] = points[first]
    d2 = np.sum((points - centers[0]) ** 2, axis=1)
    for c in range(1, k):
        total = d2.sum()
        if total == 0.0:
            centers[c:] = points[first]
            break
        probs = d2 / total
        pick = int(rng.choice(n, p=probs))
        centers[c] = points[pick]
        d2 = np.minimum(d2, np.sum((points - centers[c]) ** 2, axis=1))
    assign = None
    for _ in range(iters):
        dists = np.sum(
            (points[:, None, :] - centers[None, :, :]) ** 2, axis=2
        )
        new_assign = np.argmin(dists, axis=1)
        for c in range(k):
            members = new_assign == c
            if members.any():
                centers[c] = points[members].mean(axis=0)
            else:
                # repopulate an empty cluster with the worst-fit point
                far = int(np.argmax(dists[np.arange(n), new_assign]))
                centers[c] = points[far]
                new_assign[far] = c
        if assign is not None and np.array_equal(new_assign, assign):
            break
        assign = new_assign
    dists = np.sum((points[:, None, :] - centers[None, :, :]) ** 2, axis=2)
    inertia = float(dists.min(axis=1).sum())
    return centers, inertia


def build_reference(clouds: list[PointCloud], R: int, seed: int,
                    restarts: int = 10) -> ReferenceDistribution:
    """Cluster the pooled node vectors into R reference points.

    The pool is row-sorted before clustering, which makes the result
    independent of node labels and of the order graphs arrive in.  R
    larger than the pool is clamped with a notice.
    """
    if R < 1:
        raise ParameterError(f"reference size must be >= 1, got {R}")
    pooled = np.vstack([c.points for c in clouds])
    pooled = pooled[np.lexsort(pooled.T[::-1])]
    if R >= len(pooled):
        if R > len(pooled):
            log.info(
                "reference size %d clamped to %d pooled points", R, len(pooled)
            )
        return ReferenceDistribution(points=pooled.copy())
    rng = np.random.default_rng(seed)
    best = None
    best_inertia = np.inf
    for _ in range(restarts):
        centers, inertia = _kmeans_once(pooled, R, rng)
        if inertia < best_inertia:
            best_inertia = inertia
            best = centers
    return ReferenceDistribution(points=best)


def _svd_embed(rows: np.ndarray, d: int) -> tuple[np.ndarray, np.ndarray]:
    """Center rows, SVD, return (U*S truncated/padded to d, singular values)."""
    centered = rows - rows.mean(axis=0)
    u, s, vt = np.linalg.svd(centered, full_matrices=False)
    # sign convention rides on the right singular vectors
    flip = np.ones(len(s))
    for i in range(len(s)):
        j = int(np.argmax(np.abs(vt[i])))
        if vt[i, j] < 0:
            flip[i] = -1.0
    scaled = u * (s * flip)[None, :]
    out = np.zeros((rows.shape[0], d))
    take = min(d, scaled.shape[1])
    out[:, :take] = scaled[:, :take]
    return out, s


def lot_vectorize(clouds: list[PointCloud], ref: ReferenceDistribution,
                  solver: str = "exact", d: int = 2,
                  sinkhorn_epsilon: float | None = None,
                  threads: int | None = None,
                  feature_columns: list[str] | None = None) -> GraphEmbedding:
    """Transport-plan linearization against a shared reference.

    Each cloud's plan onto the reference is collapsed to per-reference-
    point barycenters; the mass-weighted displacements from the
    reference form one row per graph, and the centered rows are reduced
    by SVD with singular-value scaling.
    """
    if solver not in ("exact", "sinkhorn"):
        raise ParameterError(f"solver must be exact or sinkhorn, got {solver!r}")
    m = len(clouds)
    if m == 0:
        raise ParameterError("no clouds to embed")
    k = clouds[0].dim
    cap = min(m, ref.size * k)
    if d > cap:
        raise ParameterError(
            f"dim {d} exceeds min(m, R*k) = {cap} for this configuration"
        )
    ref_cloud = ref.as_cloud()

    def displacement_row(cloud: PointCloud) -> np.ndarray:
        if solver == "exact":
            plan = exact_ot(cloud, ref_cloud).plan
        else:
            plan = sinkhorn_ot(cloud, ref_cloud, epsilon=sinkhorn_epsilon).plan
        colmass = plan.sum(axis=0)
        bary = np.where(
            colmass[:, None] > 0,
            (plan.T @ cloud.points) / np.maximum(colmass, 1e-300)[:, None],
            ref.points,
        )
        disp = (bary - ref.points) * np.sqrt(colmass)[:, None]
        return disp.ravel()

    rows = np.vstack(parallel_map(displacement_row, clouds, threads=threads))
    matrix, s = _svd_embed(rows, d)
    return GraphEmbedding(
        matrix=matrix,
        method="wasserstein" if solver == "exact" else "sinkhorn",
        feature_columns=list(feature_columns or []),
        singular_values=[float(x) for x in s],
    )


def approx_wasserstein_embed(clouds: list[PointCloud], d: int,
                             feature_columns: list[str] | None = None
                             ) -> GraphEmbedding:
    """Mean-signature embedding: one weighted mean per cloud, then SVD."""
    m = len(clouds)
    if m == 0:
        raise ParameterError("no clouds to embed")
    k = clouds[0].dim
    if d > k:
        raise ParameterError(f"dim {d} exceeds feature width {k}")
    sigs = np.vstack([c.weights @ c.points for c in clouds])
    matrix, s = _svd_embed(sigs, d)
    return GraphEmbedding(
        matrix=matrix,
        method="approximate",
        feature_columns=list(feature_columns or []),
        singular_values=[float(x) for x in s],
    )


def clouds_from_features(collection: GraphCollection,
                         features: list[FeatureMatrix]) -> list[PointCloud]:
    if len(features) != len(collection):
        raise PipelineError(
            f"{len(features)} feature matrices for {len(collection)} graphs"
        )
    clouds = []
    for g, fm in zip(collection, features):
        if fm.values.shape[0] == 0:
            raise PipelineError(f"graph {g.graph_id} has an empty feature matrix")
        clouds.append(PointCloud(fm.values))
    return clouds


def embed_collection(collection: GraphCollection,
                     features: list[FeatureMatrix],
                     config: EmbeddingConfig,
                     threads: int | None = None) -> GraphEmbedding:
    """Dispatch to the configured method; rows come out in graph order."""
    clouds = clouds_from_features(collection, features)
    cols = list(features[0].columns)
    if config.method == "approximate":
        return approx_wasserstein_embed(clouds, config.dim, feature_columns=cols)
    R = config.reference_size
    if R is None:
        R = max(1, int(round(float(np.median(collection.node_counts())))))
    ref = build_reference(clouds, R, config.seed)
    return lot_vectorize(
        clouds,
        ref,
        solver="exact" if config.method == "wasserstein" else "sinkhorn",
        d=config.dim,
        sinkhorn_epsilon=config.sinkhorn_epsilon,
        threads=threads,
        feature_columns=cols,
    )
