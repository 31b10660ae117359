"""Feature-ordering strategies: greedy, worst, fast, unsupervised, random.

Every method returns a SelectionResult whose ordered_features is a
permutation of the candidate names.  Supervised methods score feature
subsets by embedding their columns and running the repeated-split
forest evaluation; the unsupervised method ranks features by how much
their per-graph value distributions spread across the collection.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .embedding import approx_wasserstein_embed, build_reference, lot_vectorize
from .errors import ParameterError
from .features import FeatureSpec, compute_features
from .forest import evaluate_repeated, feature_importances, train_forest
from .graphs import GraphCollection
from .ot import PointCloud, wasserstein_1d
from ._parallel import parallel_map

log = logging.getLogger("graphset")

# selection loops evaluate many subsets, so the per-subset evaluation
# defaults are lighter than the standalone evaluation harness
DEFAULT_EVAL = {
    "n_runs": 10,
    "train_fraction": 0.7,
    "forest": {"n_trees": 50},
}


@dataclass
class SelectionResult:
    """An ordering of feature names with per-prefix quality scores.

    step_scores[i] is a (mean, std) pair for the prefix of size i+1;
    for the unsupervised method the mean is a variance score and the
    std slot is 0.
    """

    method: str
    ordered_features: list[str]
    step_scores: list[tuple[float, float]]
    best_prefix: list[str]
    final_embedding: object | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "ordered_features": list(self.ordered_features),
            "best_prefix": list(self.best_prefix),
            "step_scores": [
                {"prefix_size": i + 1, "mean": float(m), "std": float(s)}
                for i, (m, s) in enumerate(self.step_scores)
            ],
        }

    def score_rows(self) -> list[tuple]:
        rows = [("prefix_size", "mean", "std")]
        for i, (m, s) in enumerate(self.step_scores):
            rows.append((i + 1, float(m), float(s)))
        return rows


def _eval_settings(eval_params: dict | None) -> dict:
    ep = {k: (dict(v) if isinstance(v, dict) else v)
          for k, v in DEFAULT_EVAL.items()}
    for key, value in (eval_params or {}).items():
        if key == "forest":
            ep["forest"].update(value)
        elif key in ("n_runs", "train_fraction"):
            ep[key] = value
        else:
            raise ParameterError(f"unknown eval_params key {key!r}")
    return ep


def _feature_columns(specs: list[FeatureSpec]) -> dict[str, list[int]]:
    names = [s.name for s in specs]
    if len(set(names)) != len(names):
        raise ParameterError("candidate feature names must be unique")
    col_idx = {}
    start = 0
    for s in specs:
        col_idx[s.name] = list(range(start, start + s.length))
        start += s.length
    return col_idx


def _resolve_labels(collection: GraphCollection, labels):
    if labels is None:
        labels = collection.labels
    if labels is None:
        raise ParameterError(
            "no labels available; use unsupervised_select for label-free "
            "feature ordering"
        )
    labels = np.asarray(labels)
    if len(labels) != len(collection):
        raise ParameterError(
            f"{len(labels)} labels for {len(collection)} graphs"
        )
    return labels


def _subset_clouds(mats, cols: list[int]) -> list[PointCloud]:
    return [PointCloud(np.ascontiguousarray(m.values[:, cols])) for m in mats]


def _eval_subset(mats, cols, dim, labels, ep, seed) -> tuple[float, float]:
    emb = approx_wasserstein_embed(_subset_clouds(mats, cols), dim)
    report = evaluate_repeated(
        emb.matrix, labels,
        n_runs=ep["n_runs"], train_fraction=ep["train_fraction"],
        seed=seed, params=ep["forest"],
    )
    return report.metrics["accuracy_mean"], report.metrics["accuracy_std"]


def _exact_final_embedding(collection, mats, cols, col_names, seed,
                           threads=None):
    clouds = _subset_clouds(mats, cols)
    R = max(1, int(round(float(np.median(collection.node_counts())))))
    d = min(len(col_names), len(clouds), R * len(cols))
    ref = build_reference(clouds, R, seed)
    return lot_vectorize(
        clouds, ref, solver="exact", d=d,
        threads=threads, feature_columns=col_names,
    )


def _greedy_like(collection, specs, labels, eval_params, seed, method,
                 prefer_low, final_embed, registry, threads):
    labels = _resolve_labels(collection, labels)
    if not specs:
        raise ParameterError("need at least one candidate feature")
    col_idx = _feature_columns(specs)
    ep = _eval_settings(eval_params)
    mats = compute_features(collection, specs, seed=seed, registry=registry,
                            threads=threads)

    selected: list[str] = []
    sel_cols: list[int] = []
    step_scores: list[tuple[float, float]] = []
    remaining = sorted(col_idx)
    for step in range(len(specs)):
        dim = len(selected) + 1
        eval_seed = (seed, step)

        def score_one(name):
            return _eval_subset(mats, sel_cols + col_idx[name], dim,
                                labels, ep, eval_seed)

        results = parallel_map(score_one, remaining, threads=threads)
        best = None
        for name, (mean, std) in zip(remaining, results):
            better = best is None or (mean < best[0] if prefer_low
                                      else mean > best[0])
            if better:
                best = (mean, std, name)
        mean, std, name = best
        selected.append(name)
        sel_cols.extend(col_idx[name])
        remaining.remove(name)
        step_scores.append((mean, std))

    means = [m for m, _ in step_scores]
    best_prefix = selected[:int(np.argmax(means)) + 1]
    final = None
    if final_embed:
        cols = [c for n in best_prefix for c in col_idx[n]]
        names = [mats[0].columns[c] for c in cols]
        final = _exact_final_embedding(collection, mats, cols, names, seed,
                                       threads=threads)
    return SelectionResult(
        method=method, ordered_features=selected,
        step_scores=step_scores, best_prefix=best_prefix,
        final_embedding=final,
    )


def greedy_select(collection: GraphCollection, candidate_features,
                  labels=None, eval_params: dict | None = None, seed: int = 0,
                  final_embed: bool = True, registry=None,
                  threads: int | None = None) -> SelectionResult:
    """Order features by incremental held-out accuracy.

    At step i each unused feature joins the current prefix, the subset
    is embedded with the approximate method at dimension i+1, and the
    feature whose subset scores the highest mean accuracy wins (ties go
    to the lexicographically smaller name).  The best-scoring prefix is
    then re-embedded with the exact solver as the final product.
    """
    return _greedy_like(collection, list(candidate_features), labels,
                        eval_params, seed, "greedy", False, final_embed,
                        registry, threads)


def worst_select(collection: GraphCollection, candidate_features,
                 labels=None, eval_params: dict | None = None, seed: int = 0,
                 final_embed: bool = True, registry=None,
                 threads: int | None = None) -> SelectionResult:
    """Greedy ordering with argmin selection; a floor for comparisons."""
    return _greedy_like(collection, list(candidate_features), labels,
                        eval_params, seed, "worst", True, final_embed,
                        registry, threads)


def fast_select(collection: GraphCollection, candidate_features,
                labels=None, eval_params: dict | None = None, seed: int = 0,
                registry=None, threads: int | None = None) -> SelectionResult:
    """Order features by forest importance over stacked 1-D embeddings.

    Each candidate becomes a single embedding column, one forest ranks
    the columns, and prefix scores are computed post hoc on the same
    stacked columns (never re-embedded at higher dimension).
    """
    specs = list(candidate_features)
    labels = _resolve_labels(collection, labels)
    if not specs:
        raise ParameterError("need at least one candidate feature")
    col_idx = _feature_columns(specs)
    ep = _eval_settings(eval_params)
    mats = compute_features(collection, specs, seed=seed, registry=registry,
                            threads=threads)

    names = [s.name for s in specs]
    columns = [
        approx_wasserstein_embed(_subset_clouds(mats, col_idx[n]), 1).matrix
        for n in names
    ]
    X = np.hstack(columns)
    model = train_forest(X, labels, params=ep["forest"], seed=seed)
    imp = feature_importances(model)
    order = sorted(range(len(names)), key=lambda j: (-imp[j], names[j]))
    ordered = [names[j] for j in order]

    step_scores = []
    for i in range(1, len(ordered) + 1):
        Xp = np.ascontiguousarray(X[:, order[:i]])
        report = evaluate_repeated(
            Xp, labels, n_runs=ep["n_runs"],
            train_fraction=ep["train_fraction"], seed=(seed, i),
            params=ep["forest"],
        )
        step_scores.append((report.metrics["accuracy_mean"],
                            report.metrics["accuracy_std"]))
    means = [m for m, _ in step_scores]
    best_prefix = ordered[:int(np.argmax(means)) + 1]
    return SelectionResult(
        method="fast", ordered_features=ordered,
        step_scores=step_scores, best_prefix=best_prefix,
    )


def _abs_corr(a: np.ndarray, b: np.ndarray) -> float:
    sa, sb = float(a.std()), float(b.std())
    if sa == 0.0 or sb == 0.0:
        return 0.0
    c = float(np.mean((a - a.mean()) * (b - b.mean())) / (sa * sb))
    return min(abs(c), 1.0)


def _sample_pairs(m: int, P: int, seed) -> list[tuple[int, int]]:
    rng = np.random.default_rng(seed)
    total = m * (m - 1) // 2
    if total <= 200_000:
        ii, jj = np.triu_indices(m, k=1)
        take = rng.choice(total, size=P, replace=False)
        return [(int(ii[t]), int(jj[t])) for t in take]
    out, seen = [], set()
    while len(out) < P:
        i, j = (int(v) for v in rng.integers(0, m, size=2))
        if i == j:
            continue
        pair = (min(i, j), max(i, j))
        if pair not in seen:
            seen.add(pair)
            out.append(pair)
    return out


def unsupervised_select(collection: GraphCollection, candidate_features,
                        M: int = 20, P: int | None = None, seed: int = 0,
                        registry=None,
                        threads: int | None = None) -> SelectionResult:
    """Label-free ordering by spread of per-graph value distributions.

    For each feature, 1-D transport distances between the sampled value
    distributions of P fixed graph pairs form a distance profile; the
    feature score is the variance of that profile.  Later picks are
    discounted by the strongest correlation with an already-selected
    profile, so redundant copies sink.
    """
    specs = list(candidate_features)
    if not specs:
        raise ParameterError("need at least one candidate feature")
    for s in specs:
        if s.length != 1:
            raise ParameterError(
                f"feature {s.name!r} has {s.length} columns; unsupervised "
                "ranking compares scalar distributions, pass single-column "
                "specs"
            )
    col_idx = _feature_columns(specs)
    m = len(collection)
    if m < 2:
        raise ParameterError("need at least 2 graphs to compare")
    if M < 1:
        raise ParameterError(f"M must be >= 1, got {M}")
    total_pairs = m * (m - 1) // 2
    P = total_pairs if P is None else P
    P = min(P, 200, total_pairs)
    if P < 1:
        raise ParameterError("need at least one graph pair")

    nodes_per_graph = {}
    clamped = []
    for g in collection:
        take = min(M, g.node_count)
        if take < M:
            clamped.append(g.graph_id)
        rng = np.random.default_rng((seed, 1, g.graph_id))
        nodes_per_graph[g.graph_id] = np.sort(
            rng.choice(g.node_count, size=take, replace=False)
        )
    if clamped:
        log.info("sample size %d clamped to graph size for %d graphs",
                 M, len(clamped))

    mats = compute_features(collection, specs, seed=seed,
                            nodes_per_graph=nodes_per_graph,
                            registry=registry, threads=threads)
    pairs = _sample_pairs(m, P, (seed, 0))
    names = [s.name for s in specs]
    k = len(names)
    D = np.zeros((k, P))
    for p, (a, b) in enumerate(pairs):
        va, vb = mats[a].values, mats[b].values
        for j, name in enumerate(names):
            c = col_idx[name][0]
            D[j, p] = wasserstein_1d(va[:, c], vb[:, c])
    scores = D.var(axis=1)

    by_name = sorted(range(k), key=lambda j: names[j])
    selected_idx: list[int] = []
    step_scores: list[tuple[float, float]] = []
    max_corr = np.zeros(k)
    remaining = list(by_name)
    while remaining:
        best = None
        for j in remaining:
            eff = scores[j] * (1.0 - max_corr[j])
            if best is None or eff > best[0]:
                best = (eff, j)
        eff, j = best
        selected_idx.append(j)
        remaining.remove(j)
        step_scores.append((float(eff), 0.0))
        for r in remaining:
            max_corr[r] = max(max_corr[r], _abs_corr(D[r], D[j]))

    means = [m_ for m_, _ in step_scores]
    ordered = [names[j] for j in selected_idx]
    best_prefix = ordered[:int(np.argmax(means)) + 1]
    return SelectionResult(
        method="unsupervised", ordered_features=ordered,
        step_scores=step_scores, best_prefix=best_prefix,
    )


def random_baseline(collection: GraphCollection, candidate_features,
                    labels=None, n_outer: int = 500,
                    eval_params: dict | None = None, seed: int = 0,
                    registry=None,
                    threads: int | None = None) -> SelectionResult:
    """Aggregate prefix accuracies over uniformly random orderings.

    step_scores[i] is the mean and std over n_outer random orderings of
    the accuracy of each ordering's size-(i+1) prefix.  Identical
    prefixes are evaluated once and reused, which changes nothing but
    the run time.
    """
    specs = list(candidate_features)
    labels = _resolve_labels(collection, labels)
    if not specs:
        raise ParameterError("need at least one candidate feature")
    if n_outer < 1:
        raise ParameterError(f"n_outer must be >= 1, got {n_outer}")
    col_idx = _feature_columns(specs)
    ep = _eval_settings(eval_params)
    mats = compute_features(collection, specs, seed=seed, registry=registry,
                            threads=threads)
    names = [s.name for s in specs]
    k = len(names)

    cache: dict[tuple, tuple[float, float]] = {}

    def prefix_score(prefix: tuple) -> tuple[float, float]:
        if prefix not in cache:
            cols = [c for n in prefix for c in col_idx[n]]
            cache[prefix] = _eval_subset(mats, cols, len(prefix), labels,
                                         ep, (seed, 1))
        return cache[prefix]

    rng = np.random.default_rng((seed, 0))
    accs = np.zeros((n_outer, k))
    for t in range(n_outer):
        perm = rng.permutation(k)
        ordering = [names[j] for j in perm]
        for i in range(1, k + 1):
            accs[t, i - 1] = prefix_score(tuple(ordering[:i]))[0]

    step_scores = [(float(accs[:, i].mean()), float(accs[:, i].std()))
                   for i in range(k)]
    means = [m_ for m_, _ in step_scores]
    best_prefix = names[:int(np.argmax(means)) + 1]
    return SelectionResult(
        method="random", ordered_features=list(names),
        step_scores=step_scores, best_prefix=best_prefix,
    )
