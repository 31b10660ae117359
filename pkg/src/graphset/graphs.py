"""Graph and collection storage plus structural utilities.

Graphs are simple and undirected, stored in CSR form (each edge appears
in both directions of the adjacency arrays).  Instances are treated as
immutable after construction, so they can be shared freely across
worker threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    EmptyGraphError,
    GenerationError,
    ParameterError,
    ShapeError,
)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph with CSR adjacency.

    ``node_ids`` keeps the original external identifiers; all other
    arrays are indexed by the compact node index ``0..node_count-1``.
    """

    indptr: np.ndarray
    indices: np.ndarray
    node_ids: np.ndarray
    graph_id: int = 0

    @property
    def node_count(self) -> int:
        return len(self.indptr) - 1

    @property
    def edge_count(self) -> int:
        return len(self.indices) // 2

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def edges(self) -> np.ndarray:
        """Each undirected edge once, as (u, v) rows with u < v."""
        out = []
        for u in range(self.node_count):
            nbrs = self.neighbors(u)
            out.extend((u, v) for v in nbrs[nbrs > u])
        return np.array(out, dtype=np.int64).reshape(-1, 2)

    @classmethod
    def from_edges(cls, n_nodes, edges, node_ids=None, graph_id=0) -> "Graph":
        """Build from an iterable of (u, v) pairs over indices 0..n-1.

        Duplicate and reversed pairs collapse to one edge; self loops are
        rejected.  Neighbor lists come out sorted, so construction is
        deterministic for a given edge set.
        """
        edges = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        if len(edges):
            if edges.min() < 0 or edges.max() >= n_nodes:
                raise ShapeError(
                    f"edge endpoint out of range for {n_nodes} nodes"
                )
            if np.any(edges[:, 0] == edges[:, 1]):
                raise ShapeError("self loops are not allowed")
            lo = np.minimum(edges[:, 0], edges[:, 1])
            hi = np.maximum(edges[:, 0], edges[:, 1])
            edges = np.unique(np.stack([lo, hi], axis=1), axis=0)
        both = np.concatenate([edges, edges[:, ::-1]]) if len(edges) else edges
        counts = np.bincount(both[:, 0], minlength=n_nodes) if len(both) else np.zeros(n_nodes, dtype=np.int64)
        indptr = np.zeros(n_nodes + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        order = np.lexsort((both[:, 1], both[:, 0])) if len(both) else np.array([], dtype=np.int64)
        indices = both[order, 1] if len(both) else np.array([], dtype=np.int64)
        if node_ids is None:
            node_ids = np.arange(n_nodes, dtype=np.int64)
        else:
            node_ids = np.asarray(node_ids, dtype=np.int64)
            if len(node_ids) != n_nodes:
                raise ShapeError("node_ids length must equal node count")
            if len(np.unique(node_ids)) != n_nodes:
                raise ShapeError("node_ids must be unique")
        return cls(indptr=indptr, indices=indices, node_ids=node_ids, graph_id=graph_id)

    def induced_subgraph(self, keep, graph_id=None) -> "Graph":
        """Subgraph on the given node indices, compacted, original ids kept."""
        keep = np.asarray(sorted(keep), dtype=np.int64)
        remap = -np.ones(self.node_count, dtype=np.int64)
        remap[keep] = np.arange(len(keep))
        edges = []
        for new_u, u in enumerate(keep):
            for v in self.neighbors(u):
                if remap[v] > new_u:
                    edges.append((new_u, remap[v]))
        return Graph.from_edges(
            len(keep),
            edges,
            node_ids=self.node_ids[keep],
            graph_id=self.graph_id if graph_id is None else graph_id,
        )


@dataclass
class GraphCollection:
    """Ordered set of graphs with optional per-graph labels."""

    graphs: list[Graph]
    labels: np.ndarray | None = None
    name: str = ""

    def __post_init__(self):
        if self.labels is not None:
            self.labels = np.asarray(self.labels)
            if len(self.labels) != len(self.graphs):
                raise ShapeError(
                    f"{len(self.labels)} labels for {len(self.graphs)} graphs"
                )
        self.graphs = [
            g if g.graph_id == i else replace(g, graph_id=i)
            for i, g in enumerate(self.graphs)
        ]

    def __len__(self) -> int:
        return len(self.graphs)

    def __iter__(self):
        return iter(self.graphs)

    def __getitem__(self, i) -> Graph:
        return self.graphs[i]

    def node_counts(self) -> np.ndarray:
        return np.array([g.node_count for g in self.graphs], dtype=np.int64)


@dataclass(frozen=True)
class NodeSample:
    """Uniform node sample for one graph, at rate ``rate``."""

    graph_id: int
    kept_nodes: np.ndarray
    rate: float


def bfs_distances(g: Graph, v: int, max_depth: int | None = None) -> np.ndarray:
    """Shortest-path distances from ``v``; -1 marks unreached nodes.

    Exploration stops after ``max_depth`` levels when given.
    """
    n = g.node_count
    if not 0 <= v < n:
        raise IndexError(f"node {v} out of range for graph with {n} nodes")
    dist = np.full(n, -1, dtype=np.int64)
    dist[v] = 0
    frontier = [v]
    depth = 0
    indptr, indices = g.indptr, g.indices
    while frontier and (max_depth is None or depth < max_depth):
        depth += 1
        nxt = []
        for u in frontier:
            for w in indices[indptr[u] : indptr[u + 1]]:
                if dist[w] < 0:
                    dist[w] = depth
                    nxt.append(w)
        frontier = nxt
    return dist


def bfs_layers(g: Graph, v: int, max_depth: int) -> list[set]:
    """Nodes grouped by exact distance from ``v``: layer 0 is {v}.

    Only non-empty layers up to ``max_depth`` are returned, in distance
    order.
    """
    dist = bfs_distances(g, v, max_depth)
    layers = []
    for d in range(max_depth + 1):
        layer = set(np.flatnonzero(dist == d).tolist())
        if not layer and d > 0:
            break
        layers.append(layer)
    return layers


def connected_components(g: Graph) -> list[np.ndarray]:
    """Node-index arrays of the connected components, in discovery order."""
    seen = np.zeros(g.node_count, dtype=bool)
    comps = []
    for start in range(g.node_count):
        if seen[start]:
            continue
        dist = bfs_distances(g, start)
        members = np.flatnonzero(dist >= 0)
        seen[members] = True
        comps.append(members)
    return comps


def largest_component(g: Graph) -> Graph:
    """Induced subgraph on the largest connected component.

    Ties go to the component containing the smallest original node id.
    Node indices are compacted; original ids are retained.
    """
    if g.node_count == 0:
        raise EmptyGraphError("cannot take the largest component of an empty graph")
    comps = connected_components(g)
    best = None
    best_key = None
    for members in comps:
        key = (-len(members), int(g.node_ids[members].min()))
        if best_key is None or key < best_key:
            best_key = key
            best = members
    return g.induced_subgraph(best)


def k_core(g: Graph, k: int) -> Graph:
    """Maximal induced subgraph in which every node has degree >= k.

    The result may be empty; that is a valid graph.
    """
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    deg = g.degrees.copy()
    alive = np.ones(g.node_count, dtype=bool)
    queue = [v for v in range(g.node_count) if deg[v] < k]
    while queue:
        v = queue.pop()
        if not alive[v]:
            continue
        alive[v] = False
        for w in g.neighbors(v):
            if alive[w]:
                deg[w] -= 1
                if deg[w] == k - 1:
                    queue.append(w)
    return g.induced_subgraph(np.flatnonzero(alive))


def sample_nodes(g: Graph, rate: float, seed) -> NodeSample:
    """Uniform sample without replacement of max(1, round(rate * n)) nodes.

    Deterministic for a given seed; the graph itself is untouched.
    """
    if not 0.0 < rate <= 1.0:
        raise ParameterError(f"sampling rate must be in (0, 1], got {rate}")
    n = g.node_count
    if n == 0:
        raise EmptyGraphError("cannot sample nodes from an empty graph")
    size = max(1, int(round(rate * n)))
    rng = np.random.default_rng(seed)
    kept = np.sort(rng.choice(n, size=size, replace=False))
    return NodeSample(graph_id=g.graph_id, kept_nodes=kept, rate=rate)


def generate_planted_partition(
    n: int,
    communities: list[int],
    xi: float,
    seed,
    degree: int = 5,
    max_retries: int = 100,
) -> Graph:
    """Random graph with planted communities and tunable background noise.

    Every node gets about ``degree`` edge endpoints.  Each endpoint lands
    in the global background with probability ``xi`` and inside the
    node's own community otherwise, so ``xi = 0`` gives purely
    intra-community edges and ``xi = 1`` a structureless random graph.
    Stub pairings that would create self loops or duplicate edges are
    re-drawn a bounded number of times and then dropped, keeping the
    graph simple.
    """
    if sum(communities) != n:
        raise GenerationError(
            f"community sizes sum to {sum(communities)}, expected {n}"
        )
    if not 0.0 <= xi <= 1.0:
        raise GenerationError(f"xi must be in [0, 1], got {xi}")
    if min(communities) <= degree:
        raise GenerationError(
            f"degree {degree} must be smaller than the smallest community "
            f"({min(communities)})"
        )
    rng = np.random.default_rng(seed)
    membership = np.repeat(np.arange(len(communities)), communities)

    background = []
    per_comm = [[] for _ in communities]
    for v in range(n):
        for _ in range(degree):
            if rng.random() < xi:
                background.append(v)
            else:
                per_comm[membership[v]].append(v)

    edge_set = set()

    def pair_stubs(stubs):
        stubs = np.array(stubs, dtype=np.int64)
        for _ in range(max_retries):
            if len(stubs) < 2:
                return
            rng.shuffle(stubs)
            if len(stubs) % 2:
                stubs = stubs[:-1]
            left, right = stubs[0::2], stubs[1::2]
            bad = []
            for u, v in zip(left, right):
                u, v = int(u), int(v)
                key = (min(u, v), max(u, v))
                if u == v or key in edge_set:
                    bad.extend((u, v))
                else:
                    edge_set.add(key)
            if not bad:
                return
            stubs = np.array(bad, dtype=np.int64)
        # leftovers after bounded retries are dropped

    for stubs in per_comm:
        pair_stubs(stubs)
    pair_stubs(background)
    return Graph.from_edges(n, sorted(edge_set))
