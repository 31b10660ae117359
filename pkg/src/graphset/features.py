"""Per-node structural features.

Every feature maps a graph to an n x k matrix, one row per requested
node: expansion profiles, random-walk layer-transition signatures
(lsme), closed-walk counts (self_walk), and five classical centralities
spread over distance rings (element 1 is the node's own value, element
i the mean over nodes at exact distance i-1).

Feature matrices from different specs concatenate horizontally, are
z-scored with moments pooled across the whole collection, and can be
reduced with PCA.  Randomized features draw a private generator per
(seed, graph_id, original node id), so results do not depend on worker
count or node order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConvergenceError,
    DegenerateGraphError,
    ParameterError,
    ShapeError,
)
from .graphs import Graph, GraphCollection

CENTRALITY_KINDS = ("page_rank", "degree", "closeness", "eigenvector", "load")

BUILTIN_FEATURES = (
    "expansion",
    "lsme",
    "self_walk",
    "page_rank",
    "degree_centrality",
    "closeness_centrality",
    "eigenvector_centrality",
    "load_centrality",
)


@dataclass(frozen=True)
class FeatureSpec:
    """A named feature with output length k and optional parameters."""

    name: str
    length: int
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.length < 1:
            raise ParameterError(f"feature length must be >= 1, got {self.length}")

    def column_names(self) -> list[str]:
        return [f"{self.name}_{i}" for i in range(1, self.length + 1)]


@dataclass
class FeatureMatrix:
    """Feature rows for one graph; ``node_index`` maps rows to nodes."""

    graph_id: int
    columns: list[str]
    values: np.ndarray
    node_index: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        self.node_index = np.asarray(self.node_index, dtype=np.int64)
        if self.values.ndim != 2:
            raise ShapeError("feature values must be a 2-D matrix")
        if self.values.shape != (len(self.node_index), len(self.columns)):
            raise ShapeError(
                f"feature matrix shape {self.values.shape} does not match "
                f"{len(self.node_index)} nodes x {len(self.columns)} columns"
            )
        if len(set(self.columns)) != len(self.columns):
            raise ShapeError("duplicate feature column names")
        if not np.all(np.isfinite(self.values)):
            raise ShapeError(
                f"non-finite feature values for graph {self.graph_id}"
            )

    @property
    def width(self) -> int:
        return self.values.shape[1]


class FeatureRegistry:
    """Custom feature hook: name -> fn(graph, nodes, length, params, seed).

    The callable must return one row per node with ``length`` columns.
    """

    def __init__(self):
        self._fns = {}

    def register(self, name, fn):
        if name in BUILTIN_FEATURES:
            raise ParameterError(f"cannot override builtin feature {name!r}")
        self._fns[name] = fn

    def get(self, name):
        return self._fns.get(name)

    def known(self, name) -> bool:
        return name in BUILTIN_FEATURES or name in self._fns


default_registry = FeatureRegistry()


def register_feature(name, fn):
    default_registry.register(name, fn)


def _as_nodes(g: Graph, nodes) -> np.ndarray:
    if nodes is None:
        return np.arange(g.node_count, dtype=np.int64)
    nodes = np.asarray(nodes, dtype=np.int64)
    if len(nodes) and (nodes.min() < 0 or nodes.max() >= g.node_count):
        raise ShapeError("node subset out of range")
    return nodes


def distance_matrix(g: Graph, max_depth: int | None = None) -> np.ndarray:
    """All-pairs shortest-path distances up to ``max_depth``; -1 beyond.

    Frontier expansion by dense matmul, fast for the small graphs this
    package targets.
    """
    n = g.node_count
    if max_depth is None:
        max_depth = n
    A = np.zeros((n, n), dtype=np.float32)
    for u in range(n):
        A[u, g.neighbors(u)] = 1.0
    D = np.full((n, n), -1, dtype=np.int64)
    np.fill_diagonal(D, 0)
    reached = np.eye(n, dtype=bool)
    frontier = np.eye(n, dtype=np.float32)
    for d in range(1, max_depth + 1):
        hit = (frontier @ A) > 0
        new = hit & ~reached
        if not new.any():
            break
        D[new] = d
        reached |= new
        frontier = new.astype(np.float32)
    return D


def _layer_counts(dist_row: np.ndarray, k: int) -> np.ndarray:
    """Sizes of the exact-distance rings 1..k around one node."""
    counts = np.zeros(k, dtype=np.int64)
    inside = dist_row[(dist_row >= 1) & (dist_row <= k)]
    if inside.size:
        got = np.bincount(inside, minlength=k + 1)
        counts[: k] = got[1 : k + 1]
    return counts


def expansion_feature(g: Graph, nodes=None, k: int = 4,
                      dist: np.ndarray | None = None) -> FeatureMatrix:
    """Neighborhood growth rates relative to the graph's mean degree.

    Element i is |ring_i| / (|ring_{i-1}| * mean_degree) with ring_0
    size fixed at 1; once a ring is empty all later elements are 0.
    """
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    if g.edge_count == 0:
        raise DegenerateGraphError(
            f"expansion undefined on edgeless graph {g.graph_id}"
        )
    nodes = _as_nodes(g, nodes)
    dbar = 2.0 * g.edge_count / g.node_count
    if dist is None:
        dist = distance_matrix(g, k)
    out = np.zeros((len(nodes), k))
    for row, v in enumerate(nodes):
        m = _layer_counts(dist[v], k)
        prev = 1.0
        for i in range(k):
            if prev == 0.0:
                break
            out[row, i] = m[i] / (prev * dbar)
            prev = float(m[i])
    spec = FeatureSpec("expansion", k)
    return FeatureMatrix(g.graph_id, spec.column_names(), out, nodes)


def lsme_feature(g: Graph, nodes=None, k: int = 4, walks_per_node: int = 1000,
                 seed: int = 0, dist: np.ndarray | None = None) -> FeatureMatrix:
    """Random-walk layer-transition signature around each node.

    Element i estimates the probability that a walk standing on the
    ring at distance i-1 from the node steps outward to the ring at
    distance i.  Counts pool over ``walks_per_node`` walks of length k
    started at the node; rings past radius k count as outside.  Layers
    the walks never depart from give 0.
    """
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    if walks_per_node < 1:
        raise ParameterError("walks_per_node must be >= 1")
    nodes = _as_nodes(g, nodes)
    if dist is None:
        dist = distance_matrix(g, k)
    degs = g.degrees
    indptr = g.indptr
    # neighbor choice is indexed over original-id order, so relabeling a
    # graph permutes the walks instead of changing them
    row_of = np.repeat(np.arange(g.node_count), degs)
    canon = g.indices[np.lexsort((g.node_ids[g.indices], row_of))]
    out = np.zeros((len(nodes), k))
    for row, v in enumerate(nodes):
        rng = np.random.default_rng((seed, g.graph_id, int(g.node_ids[v])))
        drow = dist[v]
        cur = np.full(walks_per_node, v, dtype=np.int64)
        depart = np.zeros(k, dtype=np.int64)
        outward = np.zeros(k, dtype=np.int64)
        for _ in range(k):
            deg = degs[cur]
            movable = np.flatnonzero(deg > 0)
            if movable.size == 0:
                break
            nxt = cur.copy()
            nxt[movable] = canon[
                indptr[cur[movable]] + rng.integers(0, deg[movable])
            ]
            dj = drow[cur[movable]]
            dn = drow[nxt[movable]]
            counted = (dj >= 0) & (dj < k)
            if counted.any():
                depart += np.bincount(dj[counted], minlength=k)
                up = counted & (dn == dj + 1)
                if up.any():
                    outward += np.bincount(dj[up], minlength=k)
            cur = nxt
        with np.errstate(invalid="ignore"):
            vals = np.where(depart > 0, outward / np.maximum(depart, 1), 0.0)
        out[row] = vals
    spec = FeatureSpec("lsme", k)
    return FeatureMatrix(g.graph_id, spec.column_names(), out, nodes)


def self_walk_feature(g: Graph, nodes=None, k: int = 4) -> FeatureMatrix:
    """Closed-walk counts: element j is the number of closed walks of
    length j+1 through the node (lengths 2..k+1; length 1 is always 0
    on simple graphs, so it is skipped)."""
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    nodes = _as_nodes(g, nodes)
    n = g.node_count
    A = np.zeros((n, n), dtype=np.int64)
    for u in range(n):
        A[u, g.neighbors(u)] = 1
    out = np.zeros((len(nodes), k))
    power = A
    for j in range(k):
        power = power @ A  # A^(j+2)
        out[:, j] = np.diagonal(power)[nodes]
    spec = FeatureSpec("self_walk", k)
    return FeatureMatrix(g.graph_id, spec.column_names(), out, nodes)


def _push_over_edges(g: Graph, values: np.ndarray) -> np.ndarray:
    """out[v] = sum of values[u] over neighbors u of v."""
    contrib = np.repeat(values, g.degrees)
    return np.bincount(g.indices, weights=contrib, minlength=g.node_count)


def _page_rank(g: Graph, damping=0.85, tol=1e-9, max_iters=200) -> np.ndarray:
    n = g.node_count
    if n == 0:
        return np.zeros(0)
    deg = g.degrees.astype(np.float64)
    p = np.full(n, 1.0 / n)
    dangling = deg == 0
    inv_deg = np.where(dangling, 0.0, 1.0 / np.maximum(deg, 1))
    for _ in range(max_iters):
        nxt = _push_over_edges(g, p * inv_deg)
        nxt = (1.0 - damping) / n + damping * (nxt + p[dangling].sum() / n)
        if np.abs(nxt - p).sum() < tol:
            p = nxt
            break
        p = nxt
    return p


def _degree_centrality(g: Graph) -> np.ndarray:
    n = g.node_count
    if n <= 1:
        return np.zeros(n)
    return g.degrees / (n - 1.0)


def _closeness_centrality(g: Graph, dist=None) -> np.ndarray:
    """Reachable-count scaled closeness, defined on disconnected graphs."""
    n = g.node_count
    if dist is None:
        dist = distance_matrix(g)
    out = np.zeros(n)
    if n <= 1:
        return out
    for v in range(n):
        drow = dist[v]
        reach = drow >= 0
        r = int(reach.sum())
        tot = int(drow[reach].sum())
        if tot > 0:
            out[v] = ((r - 1) / (n - 1.0)) * ((r - 1) / float(tot))
    return out


def _eigenvector_centrality(g: Graph, tol=1e-9, max_iters=1000,
                            shift=0.0) -> np.ndarray:
    """Principal adjacency eigenvector by power iteration.

    A positive ``shift`` iterates on A + shift*I, which shares the
    principal eigenvector but cannot oscillate on bipartite graphs;
    the default 0 surfaces such oscillation as a convergence error.
    """
    n = g.node_count
    if n == 0:
        return np.zeros(0)
    x = np.ones(n)
    x /= np.linalg.norm(x)
    for _ in range(max_iters):
        nxt = _push_over_edges(g, x)
        if shift:
            nxt = nxt + shift * x
        norm = np.linalg.norm(nxt)
        if norm == 0.0:
            return np.zeros(n)
        nxt /= norm
        if np.linalg.norm(nxt - x) < tol:
            if nxt.sum() < 0:
                nxt = -nxt
            return nxt
        x = nxt
    raise ConvergenceError(
        f"eigenvector power iteration did not settle in {max_iters} "
        f"iterations on graph {g.graph_id} (bipartite structures "
        f"oscillate; a positive shift parameter avoids this)"
    )


def _load_centrality(g: Graph, dist=None) -> np.ndarray:
    """Shortest-path packet routing load, endpoints excluded,
    normalized by (n-1)(n-2)."""
    n = g.node_count
    out = np.zeros(n)
    if n <= 2:
        return out
    if dist is None:
        dist = distance_matrix(g)
    for s in range(n):
        drow = dist[s]
        reach = np.flatnonzero(drow >= 0)
        order = reach[np.argsort(-drow[reach], kind="stable")]
        between = np.zeros(n)
        between[reach] = 1.0
        for v in order:
            if drow[v] <= 0:
                continue
            preds = [u for u in g.neighbors(v) if drow[u] == drow[v] - 1]
            share = between[v] / len(preds)
            for u in preds:
                if u != s:
                    between[u] += share
        between[reach] -= 1.0
        out += between
    return out / ((n - 1.0) * (n - 2.0))


def base_centrality(g: Graph, kind: str, dist=None, **params) -> np.ndarray:
    """One scalar per node for the named centrality."""
    if kind == "page_rank":
        return _page_rank(g, **params)
    if kind == "degree":
        return _degree_centrality(g)
    if kind == "closeness":
        return _closeness_centrality(g, dist=dist)
    if kind == "eigenvector":
        return _eigenvector_centrality(g, **params)
    if kind == "load":
        return _load_centrality(g, dist=dist)
    raise ParameterError(f"unknown centrality kind {kind!r}")


def khop_average_expand(g: Graph, base: np.ndarray, nodes=None, k: int = 4,
                        name: str = "base",
                        dist: np.ndarray | None = None) -> FeatureMatrix:
    """Spread per-node values over distance rings: element 1 is the
    node's own value, element i the mean over nodes at exact distance
    i-1 (0 when the ring is empty)."""
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    base = np.asarray(base, dtype=np.float64)
    if base.shape != (g.node_count,):
        raise ShapeError("base values must have one entry per node")
    nodes = _as_nodes(g, nodes)
    if dist is None:
        dist = distance_matrix(g, max(k - 1, 1))
    out = np.zeros((len(nodes), k))
    for row, v in enumerate(nodes):
        out[row, 0] = base[v]
        drow = dist[v]
        for i in range(2, k + 1):
            ring = drow == i - 1
            if ring.any():
                out[row, i - 1] = base[ring].mean()
    spec = FeatureSpec(name, k)
    return FeatureMatrix(g.graph_id, spec.column_names(), out, nodes)


def concatenate_features(parts: list[FeatureMatrix]) -> FeatureMatrix:
    """Horizontal concatenation of matrices over identical node rows."""
    if not parts:
        raise ParameterError("nothing to concatenate")
    first = parts[0]
    for p in parts[1:]:
        if p.graph_id != first.graph_id:
            raise ShapeError("cannot concatenate features of different graphs")
        if not np.array_equal(p.node_index, first.node_index):
            raise ShapeError("feature parts cover different node sets")
    return FeatureMatrix(
        first.graph_id,
        [c for p in parts for c in p.columns],
        np.hstack([p.values for p in parts]),
        first.node_index,
    )


def standardize_features(matrices: list[FeatureMatrix]) -> list[FeatureMatrix]:
    """Column z-scores with mean and stddev pooled over all graphs.

    Zero-variance columns become all zeros.
    """
    if not matrices:
        return []
    pooled = np.vstack([m.values for m in matrices])
    mean = pooled.mean(axis=0)
    std = pooled.std(axis=0)
    safe = np.where(std > 0, std, 1.0)
    out = []
    for m in matrices:
        vals = (m.values - mean) / safe
        vals[:, std == 0] = 0.0
        out.append(FeatureMatrix(m.graph_id, list(m.columns), vals, m.node_index))
    return out


def _signed_components(vt: np.ndarray) -> np.ndarray:
    """Fix SVD sign ambiguity: largest-|loading| entry of each row positive."""
    flip = np.ones(vt.shape[0])
    for i, row in enumerate(vt):
        j = int(np.argmax(np.abs(row)))
        if row[j] < 0:
            flip[i] = -1.0
    return vt * flip[:, None]


def pca_reduce(matrices: list[FeatureMatrix], target_dim: int) -> list[FeatureMatrix]:
    """Project pooled node rows onto their top principal components."""
    if not matrices:
        return []
    width = matrices[0].width
    if target_dim > width:
        raise ParameterError(
            f"target_dim {target_dim} exceeds feature width {width}"
        )
    if target_dim < 1:
        raise ParameterError("target_dim must be >= 1")
    pooled = np.vstack([m.values for m in matrices])
    mean = pooled.mean(axis=0)
    _, _, vt = np.linalg.svd(pooled - mean, full_matrices=False)
    comps = _signed_components(vt[:target_dim])
    cols = [f"pc_{i}" for i in range(1, target_dim + 1)]
    return [
        FeatureMatrix(
            m.graph_id, list(cols), (m.values - mean) @ comps.T, m.node_index
        )
        for m in matrices
    ]


def _spec_max_radius(spec: FeatureSpec) -> int:
    # ring element i looks at distance i-1 for centralities, i for the rest
    if spec.name in ("expansion", "lsme"):
        return spec.length
    return max(spec.length - 1, 1)


def compute_feature(g: Graph, spec: FeatureSpec, nodes=None, seed: int = 0,
                    registry: FeatureRegistry | None = None,
                    dist: np.ndarray | None = None,
                    full_dist: np.ndarray | None = None) -> FeatureMatrix:
    """One spec on one graph.

    ``dist`` may carry a distance matrix of depth at least the spec's
    ring radius; ``full_dist`` an uncapped one for the centralities
    that need all distances.
    """
    registry = registry or default_registry
    name, k, params = spec.name, spec.length, spec.params
    if name == "expansion":
        return expansion_feature(g, nodes, k, dist=dist)
    if name == "lsme":
        wpn = int(params.get("walks_per_node", 1000))
        return lsme_feature(g, nodes, k, walks_per_node=wpn, seed=seed, dist=dist)
    if name == "self_walk":
        return self_walk_feature(g, nodes, k)
    if name in (
        "page_rank",
        "degree_centrality",
        "closeness_centrality",
        "eigenvector_centrality",
        "load_centrality",
    ):
        kind = name.removesuffix("_centrality") if name != "page_rank" else name
        base = base_centrality(g, kind, dist=full_dist, **params)
        return khop_average_expand(g, base, nodes, k, name=name, dist=dist)
    fn = registry.get(name)
    if fn is None:
        raise ParameterError(f"unknown feature {name!r}")
    vals = np.asarray(fn(g, _as_nodes(g, nodes), k, params, seed), dtype=np.float64)
    nd = _as_nodes(g, nodes)
    if vals.shape != (len(nd), k):
        raise ShapeError(
            f"custom feature {name!r} returned shape {vals.shape}, "
            f"expected {(len(nd), k)}"
        )
    return FeatureMatrix(g.graph_id, spec.column_names(), vals, nd)


def graph_features(g: Graph, specs: list[FeatureSpec], nodes=None, seed: int = 0,
                   registry: FeatureRegistry | None = None) -> FeatureMatrix:
    """All specs on one graph, concatenated; distance work shared."""
    if not specs:
        raise ParameterError("no feature specs given")
    needs_full = any(
        s.name in ("closeness_centrality", "load_centrality") for s in specs
    )
    depth = max(_spec_max_radius(s) for s in specs)
    dist = distance_matrix(g, None if needs_full else depth)
    full = dist if needs_full else None
    parts = [
        compute_feature(
            g, s, nodes=nodes, seed=seed, registry=registry,
            dist=dist, full_dist=full,
        )
        for s in specs
    ]
    return concatenate_features(parts)


def compute_features(collection: GraphCollection, specs: list[FeatureSpec],
                     seed: int = 0, nodes_per_graph: dict | None = None,
                     standardize: bool = True,
                     registry: FeatureRegistry | None = None,
                     threads: int | None = None) -> list[FeatureMatrix]:
    """Feature matrices for every graph of a collection, in graph order.

    ``nodes_per_graph`` optionally restricts rows to a node subset per
    graph id.  Per-graph work can fan out to a thread pool; assembly is
    in graph order, so the result does not depend on worker count.
    """
    from ._parallel import parallel_map

    def job(g: Graph) -> FeatureMatrix:
        nodes = None
        if nodes_per_graph is not None:
            nodes = nodes_per_graph.get(g.graph_id)
        return graph_features(g, specs, nodes=nodes, seed=seed, registry=registry)

    matrices = parallel_map(job, list(collection), threads=threads)
    if standardize:
        matrices = standardize_features(matrices)
    return matrices


def features_to_rows(matrices: list[FeatureMatrix]):
    """Rows of (graph_id, node_id, feature values...) for CSV output."""
    header = ["graph_id", "node_id"] + list(matrices[0].columns)
    rows = []
    for m in matrices:
        for i in range(m.values.shape[0]):
            rows.append(
                [m.graph_id, int(m.node_index[i])] + list(m.values[i])
            )
    return header, rows
