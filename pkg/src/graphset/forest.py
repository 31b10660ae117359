"""Random forest on CART trees, plus a repeated-split evaluation loop.

Classification trees split on a gini-style score and predict by
majority vote over trees; regression trees minimize within-side squared
error and predict the mean.  Every source of randomness derives from
integer tuples (seed, tree) or (seed, run), so identical inputs give
identical models and reports regardless of worker count.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from ._parallel import parallel_map
from .errors import ParameterError, ShapeError

log = logging.getLogger("graphset")

DEFAULT_PARAMS = {
    "n_trees": 100,
    "max_depth": 6,
    "min_leaf": 2,
    "bootstrap": True,
}


def _seed_tuple(seed) -> tuple:
    if isinstance(seed, (tuple, list)):
        return tuple(int(s) for s in seed)
    return (int(seed),)


@dataclass
class _Node:
    feature: int = -1
    threshold: float = 0.0
    left: "_Node | None" = None
    right: "_Node | None" = None
    value: np.ndarray | float | None = None

    @property
    def is_leaf(self) -> bool:
        return self.feature < 0


@dataclass
class ForestModel:
    trees: list
    n_features: int
    mode: str
    seed: object
    classes: np.ndarray | None
    importance_sums: np.ndarray

    @property
    def n_trees(self) -> int:
        return len(self.trees)


def _leaf_value(y, mode, n_classes):
    if mode == "classify":
        return np.bincount(y, minlength=n_classes)
    return float(y.mean())


def _build_tree(X, y, rng, params, mode, n_classes, importances):
    max_depth = params["max_depth"]
    min_leaf = params["min_leaf"]
    q = params["feature_subsample"]
    d = X.shape[1]

    def grow(idx, depth):
        ysub = y[idx]
        leaf = _Node(value=_leaf_value(ysub, mode, n_classes))
        if depth >= max_depth or len(idx) < 2 * min_leaf:
            return leaf
        if mode == "classify" and np.all(ysub == ysub[0]):
            return leaf
        feats = rng.choice(d, size=q, replace=False)
        Xs = np.ascontiguousarray(X[np.ix_(idx, feats)])
        orders = np.argsort(Xs, axis=0, kind="stable")
        if mode == "classify":
            col, thresh, score, found = _kernels.scan_split_classification(
                Xs, orders, np.ascontiguousarray(ysub), n_classes, min_leaf
            )
            if found:
                counts = np.bincount(ysub, minlength=n_classes)
                before = float(np.sum(counts * counts)) / len(idx)
                gain = score - before
        else:
            col, thresh, score, found = _kernels.scan_split_regression(
                Xs, orders, np.ascontiguousarray(ysub, dtype=np.float64),
                min_leaf,
            )
            if found:
                tot = float(ysub.sum())
                gain = score - tot * tot / len(idx)
        if not found:
            return leaf
        feat = int(feats[col])
        importances[feat] += max(gain, 0.0)
        mask = X[idx, feat] <= thresh
        left = grow(idx[mask], depth + 1)
        right = grow(idx[~mask], depth + 1)
        return _Node(feature=feat, threshold=thresh, left=left, right=right,
                     value=leaf.value)

    return grow


def train_forest(X, y, params: dict | None = None, seed=0,
                 mode: str = "classify",
                 threads: int | None = None) -> ForestModel:
    """Fit a seeded forest; per-tree randomness keys on (seed, tree)."""
    X = np.ascontiguousarray(np.asarray(X, dtype=np.float64))
    if X.ndim != 2:
        raise ShapeError("X must be a 2-D matrix")
    m, d = X.shape
    if m < 2:
        raise ParameterError(f"need at least 2 samples, got {m}")
    if len(np.asarray(y)) != m:
        raise ShapeError(f"got {m} rows but {len(np.asarray(y))} labels")
    if mode not in ("classify", "regress"):
        raise ParameterError(f"mode must be classify or regress, got {mode!r}")
    merged = dict(DEFAULT_PARAMS)
    merged.update(params or {})
    merged.setdefault("feature_subsample", max(1, int(round(np.sqrt(d)))))
    merged["feature_subsample"] = min(merged["feature_subsample"], d)

    if mode == "classify":
        classes, y_idx = np.unique(np.asarray(y), return_inverse=True)
        n_classes = len(classes)
        if n_classes == 1:
            log.info("training labels contain a single class; model is constant")
        y_enc = np.ascontiguousarray(y_idx.astype(np.int64))
    else:
        classes = None
        n_classes = 0
        y_enc = np.ascontiguousarray(np.asarray(y, dtype=np.float64))

    st = _seed_tuple(seed)
    all_idx = np.arange(m)

    def fit_one(t):
        rng = np.random.default_rng(st + (t,))
        if merged["bootstrap"]:
            idx = np.sort(rng.integers(0, m, size=m))
        else:
            idx = all_idx
        imps = np.zeros(d)
        root = _build_tree(X, y_enc, rng, merged, mode, n_classes, imps)(idx, 0)
        return root, imps

    results = parallel_map(fit_one, list(range(merged["n_trees"])),
                           threads=threads)
    trees = [r[0] for r in results]
    importance_sums = np.sum([r[1] for r in results], axis=0)
    return ForestModel(
        trees=trees, n_features=d, mode=mode, seed=seed,
        classes=classes, importance_sums=importance_sums,
    )


def _walk(node: _Node, row: np.ndarray) -> _Node:
    while not node.is_leaf:
        node = node.left if row[node.feature] <= node.threshold else node.right
    return node


def predict(model: ForestModel, X) -> np.ndarray:
    """Majority vote (ties toward the smaller class id) or mean."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    if not model.trees:
        raise ParameterError("cannot predict with an empty forest")
    if X.shape[1] != model.n_features:
        raise ShapeError(
            f"feature width {X.shape[1]} does not match model "
            f"({model.n_features})"
        )
    m = X.shape[0]
    if model.mode == "classify":
        n_classes = len(model.classes)
        votes = np.zeros((m, n_classes), dtype=np.int64)
        for tree in model.trees:
            for i in range(m):
                leaf = _walk(tree, X[i])
                votes[i, int(np.argmax(leaf.value))] += 1
        return model.classes[np.argmax(votes, axis=1)]
    out = np.zeros(m)
    for tree in model.trees:
        for i in range(m):
            out[i] += _walk(tree, X[i]).value
    return out / len(model.trees)


def feature_importances(model: ForestModel) -> np.ndarray:
    """Mean decrease in impurity, normalized to sum to 1."""
    total = model.importance_sums.sum()
    if total <= 0:
        log.info("model has no splits; importances are all zero")
        return np.zeros(model.n_features)
    return model.importance_sums / total


@dataclass
class EvalReport:
    """Mean and spread of metrics over repeated random splits."""

    mode: str
    n_runs: int
    train_fraction: float
    metrics: dict = field(default_factory=dict)
    zero_division_runs: int = 0

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "n_runs": self.n_runs,
            "train_fraction": self.train_fraction,
            "metrics": {k: float(v) for k, v in self.metrics.items()},
            "zero_division_runs": self.zero_division_runs,
        }


def _macro_prf(y_true, y_pred, classes):
    """Macro precision/recall/F1 with the zero-division-to-0 convention.

    Returns (precision, recall, f1, hit_zero_division).
    """
    precs, recs, f1s = [], [], []
    hit = False
    for c in classes:
        tp = int(np.sum((y_pred == c) & (y_true == c)))
        fp = int(np.sum((y_pred == c) & (y_true != c)))
        fn = int(np.sum((y_pred != c) & (y_true == c)))
        if tp + fp == 0:
            prec = 0.0
            hit = True
        else:
            prec = tp / (tp + fp)
        if tp + fn == 0:
            rec = 0.0
            hit = True
        else:
            rec = tp / (tp + fn)
        f1 = 0.0 if prec + rec == 0 else 2 * prec * rec / (prec + rec)
        precs.append(prec)
        recs.append(rec)
        f1s.append(f1)
    return float(np.mean(precs)), float(np.mean(recs)), float(np.mean(f1s)), hit


def evaluate_repeated(X, y, n_runs: int = 50, train_fraction: float = 0.7,
                      seed=0, mode: str = "classify",
                      params: dict | None = None,
                      threads: int | None = None) -> EvalReport:
    """Repeated shuffle-split evaluation; no class rebalancing.

    Each run shuffles with a (seed, run) generator, trains a fresh
    forest seeded the same way, and scores the held-out fraction.
    Standard deviations are population (ddof 0), so a single run
    reports 0.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    m = len(X)
    if m < 10:
        raise ParameterError(f"need at least 10 samples, got {m}")
    if not 0.0 < train_fraction < 1.0:
        raise ParameterError("train_fraction must be in (0, 1)")
    if n_runs < 1:
        raise ParameterError("n_runs must be >= 1")
    st = _seed_tuple(seed)
    n_train = int(round(train_fraction * m))
    n_train = min(max(n_train, 1), m - 1)

    def one_run(r):
        rng = np.random.default_rng(st + (r,))
        perm = rng.permutation(m)
        tr, te = perm[:n_train], perm[n_train:]
        model = train_forest(
            X[tr], y[tr], params=params, seed=st + (r,), mode=mode
        )
        pred = predict(model, X[te])
        if mode == "classify":
            acc = float(np.mean(pred == y[te]))
            prec, rec, f1, hit = _macro_prf(y[te], pred, model.classes)
            return acc, prec, rec, f1, hit
        mae = float(np.mean(np.abs(pred - y[te])))
        return (mae,)

    rows = parallel_map(one_run, list(range(n_runs)), threads=threads)
    report = EvalReport(mode=mode, n_runs=n_runs, train_fraction=train_fraction)
    if mode == "classify":
        arr = np.array([r[:4] for r in rows], dtype=np.float64)
        names = ("accuracy", "precision", "recall", "f1")
        for i, name in enumerate(names):
            report.metrics[f"{name}_mean"] = float(arr[:, i].mean())
            report.metrics[f"{name}_std"] = float(arr[:, i].std())
        report.zero_division_runs = int(sum(r[4] for r in rows))
    else:
        arr = np.array([r[0] for r in rows], dtype=np.float64)
        report.metrics["mae_mean"] = float(arr.mean())
        report.metrics["mae_std"] = float(arr.std())
    return report
