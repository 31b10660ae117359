"""Config-driven command line for the whole pipeline.

A single JSON config describes dataset, features, embedding, and task;
subcommands pick which stage to run and small flags override seed,
output directory, and worker count.  Outputs are plain CSV/JSON files
stamped with a hash of the producing config, and identical config+seed
always reproduces them byte for byte.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import platform
import sys
import time
from datetime import datetime, timezone

import numpy as np

from . import __version__, _kernels
from .embedding import EmbeddingConfig, embed_collection
from .errors import (
    ConfigError,
    ConvergenceError,
    DegenerateGraphError,
    EmptyGraphError,
    GraphsetError,
    IngestError,
    ParameterError,
    ParseError,
    PipelineError,
    ShapeError,
    SolverError,
)
from .features import (
    BUILTIN_FEATURES,
    FeatureSpec,
    compute_features,
    features_to_rows,
)
from .forest import evaluate_repeated
from .graphs import GraphCollection, k_core, largest_component
from .io import load_edge_list, load_tud_dataset, write_csv
from .sampling import sampling_sweep
from .selection import (
    fast_select,
    greedy_select,
    random_baseline,
    unsupervised_select,
    worst_select,
)

log = logging.getLogger("graphset")

TASKS = (
    "embed", "classify", "regress",
    "select:greedy", "select:fast", "select:unsupervised",
    "select:random", "select:worst",
    "similarity-sweep",
)
EMBED_METHODS = ("approximate", "wasserstein", "sinkhorn")
FOREST_KEYS = ("n_trees", "max_depth", "min_leaf", "feature_subsample",
               "bootstrap")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INGEST = 3
EXIT_NUMERIC = 4


def _expect(cond: bool, msg: str) -> None:
    if not cond:
        raise ConfigError(msg)


def _check_keys(section: dict, allowed, where: str) -> None:
    for key in section:
        _expect(key in allowed, f"unknown key {key!r} in {where}")


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _is_num(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def validate_config(raw) -> dict:
    """Normalize a raw config dict, filling defaults, rejecting unknowns.

    Validation happens before any dataset access or output, so a bad
    config never leaves partial artifacts behind.
    """
    _expect(isinstance(raw, dict), "config must be a JSON object")
    _check_keys(raw, {
        "dataset", "preprocessing", "features", "standardize", "embedding",
        "task", "eval", "select", "sweep", "seed", "output_dir",
        "write_features", "threads",
    }, "config")
    for key in ("dataset", "features", "task", "output_dir"):
        _expect(key in raw, f"config is missing required key {key!r}")

    ds = raw["dataset"]
    _expect(isinstance(ds, dict), "dataset must be an object")
    _check_keys(ds, {"path", "format", "name", "labels"}, "dataset")
    _expect(isinstance(ds.get("path"), str) and ds["path"],
            "dataset.path must be a non-empty string")
    fmt = ds.get("format", "tud")
    _expect(fmt in ("tud", "edgelist"),
            f"dataset.format must be 'tud' or 'edgelist', got {fmt!r}")
    name = ds.get("name", os.path.basename(os.path.normpath(ds["path"])))
    _expect(isinstance(name, str) and name, "dataset.name must be a string")
    labels_path = ds.get("labels")
    _expect(labels_path is None or isinstance(labels_path, str),
            "dataset.labels must be a path string")
    _expect(not (fmt == "tud" and labels_path),
            "dataset.labels only applies to the edgelist format")
    dataset = {"path": ds["path"], "format": fmt, "name": name,
               "labels": labels_path}

    pp = raw.get("preprocessing", {})
    _expect(isinstance(pp, dict), "preprocessing must be an object")
    _check_keys(pp, {"largest_component", "k_core"}, "preprocessing")
    lc = pp.get("largest_component", False)
    _expect(isinstance(lc, bool), "preprocessing.largest_component must be a bool")
    kc = pp.get("k_core")
    _expect(kc is None or (_is_int(kc) and kc >= 1),
            "preprocessing.k_core must be null or an integer >= 1")
    preprocessing = {"largest_component": lc, "k_core": kc}

    feats = raw["features"]
    _expect(isinstance(feats, list) and feats,
            "features must be a non-empty list")
    features = []
    seen = set()
    for i, f in enumerate(feats):
        where = f"features[{i}]"
        _expect(isinstance(f, dict), f"{where} must be an object")
        _check_keys(f, {"name", "length", "params"}, where)
        fname = f.get("name")
        _expect(isinstance(fname, str) and fname,
                f"{where}.name must be a string")
        _expect(fname in BUILTIN_FEATURES,
                f"{where}.name {fname!r} is not a known feature "
                f"(choose from {', '.join(BUILTIN_FEATURES)})")
        _expect(fname not in seen, f"duplicate feature name {fname!r}")
        seen.add(fname)
        length = f.get("length", 4)
        _expect(_is_int(length) and length >= 1,
                f"{where}.length must be an integer >= 1")
        params = f.get("params", {})
        _expect(isinstance(params, dict), f"{where}.params must be an object")
        for pk, pv in params.items():
            _expect(isinstance(pk, str), f"{where}.params keys must be strings")
            _expect(_is_num(pv) or isinstance(pv, (bool, str)),
                    f"{where}.params.{pk} must be a scalar")
        features.append({"name": fname, "length": length, "params": params})

    standardize = raw.get("standardize", True)
    _expect(isinstance(standardize, bool), "standardize must be a bool")

    emb = raw.get("embedding", {})
    _expect(isinstance(emb, dict), "embedding must be an object")
    _check_keys(emb, {"method", "dim", "reference_size", "sinkhorn_epsilon"},
                "embedding")
    method = emb.get("method", "approximate")
    _expect(method in EMBED_METHODS,
            f"embedding.method must be one of {EMBED_METHODS}, got {method!r}")
    dim = emb.get("dim", 2)
    _expect(_is_int(dim) and dim >= 1, "embedding.dim must be an integer >= 1")
    ref = emb.get("reference_size")
    _expect(ref is None or (_is_int(ref) and ref >= 1),
            "embedding.reference_size must be null or an integer >= 1")
    eps = emb.get("sinkhorn_epsilon")
    _expect(eps is None or (_is_num(eps) and eps > 0),
            "embedding.sinkhorn_epsilon must be null or a positive number")
    embedding = {"method": method, "dim": dim, "reference_size": ref,
                 "sinkhorn_epsilon": eps}

    task = raw["task"]
    _expect(task in TASKS, f"task must be one of {TASKS}, got {task!r}")

    ev = raw.get("eval", {})
    _expect(isinstance(ev, dict), "eval must be an object")
    _check_keys(ev, {"n_runs", "train_fraction", "forest"}, "eval")
    n_runs = ev.get("n_runs", 50)
    _expect(_is_int(n_runs) and n_runs >= 1,
            "eval.n_runs must be an integer >= 1")
    frac = ev.get("train_fraction", 0.7)
    _expect(_is_num(frac) and 0.0 < frac < 1.0,
            "eval.train_fraction must be in (0, 1)")
    forest = ev.get("forest", {})
    _expect(isinstance(forest, dict), "eval.forest must be an object")
    _check_keys(forest, FOREST_KEYS, "eval.forest")
    for fk in ("n_trees", "max_depth", "min_leaf", "feature_subsample"):
        if fk in forest:
            _expect(_is_int(forest[fk]) and forest[fk] >= 1,
                    f"eval.forest.{fk} must be an integer >= 1")
    if "bootstrap" in forest:
        _expect(isinstance(forest["bootstrap"], bool),
                "eval.forest.bootstrap must be a bool")
    eval_cfg = {"n_runs": n_runs, "train_fraction": float(frac),
                "forest": dict(forest)}

    sel = raw.get("select", {})
    _expect(isinstance(sel, dict), "select must be an object")
    _check_keys(sel, {"n_outer", "M", "P", "final_embed"}, "select")
    n_outer = sel.get("n_outer", 100)
    _expect(_is_int(n_outer) and n_outer >= 1,
            "select.n_outer must be an integer >= 1")
    M = sel.get("M", 20)
    _expect(_is_int(M) and M >= 1, "select.M must be an integer >= 1")
    P = sel.get("P")
    _expect(P is None or (_is_int(P) and P >= 1),
            "select.P must be null or an integer >= 1")
    final_embed = sel.get("final_embed", True)
    _expect(isinstance(final_embed, bool), "select.final_embed must be a bool")
    select = {"n_outer": n_outer, "M": M, "P": P, "final_embed": final_embed}

    sw = raw.get("sweep", {})
    _expect(isinstance(sw, dict), "sweep must be an object")
    _check_keys(sw, {"rates", "reference_graph", "probe_size"}, "sweep")
    rates = sw.get("rates")
    if task == "similarity-sweep":
        _expect(isinstance(rates, list) and rates,
                "sweep.rates must be a non-empty list for similarity-sweep")
        for r in rates:
            _expect(_is_num(r) and 0.0 < r <= 1.0,
                    f"sweep.rates entries must be in (0, 1], got {r!r}")
        rates = [float(r) for r in rates]
    ref_graph = sw.get("reference_graph", 0)
    _expect(_is_int(ref_graph) and ref_graph >= 0,
            "sweep.reference_graph must be an integer >= 0")
    probe_size = sw.get("probe_size")
    _expect(probe_size is None or (_is_int(probe_size) and probe_size >= 1),
            "sweep.probe_size must be null or an integer >= 1")
    sweep = {"rates": rates, "reference_graph": ref_graph,
             "probe_size": probe_size}

    seed = raw.get("seed", 0)
    _expect(_is_int(seed), "seed must be an integer")
    out_dir = raw["output_dir"]
    _expect(isinstance(out_dir, str) and out_dir,
            "output_dir must be a non-empty string")
    write_features = raw.get("write_features", False)
    _expect(isinstance(write_features, bool), "write_features must be a bool")
    threads = raw.get("threads")
    _expect(threads is None or (_is_int(threads) and threads >= 1),
            "threads must be null or an integer >= 1")

    return {
        "dataset": dataset, "preprocessing": preprocessing,
        "features": features, "standardize": standardize,
        "embedding": embedding, "task": task, "eval": eval_cfg,
        "select": select, "sweep": sweep, "seed": seed,
        "output_dir": out_dir, "write_features": write_features,
        "threads": threads,
    }


def config_hash(cfg: dict) -> str:
    """Hash of everything that shapes the numbers (not where they go)."""
    payload = {k: v for k, v in cfg.items()
               if k not in ("output_dir", "threads")}
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _resolve_threads(cfg_threads: int | None,
                     flag_threads: int | None) -> int:
    if flag_threads is not None:
        return flag_threads
    if cfg_threads is not None:
        return cfg_threads
    env = os.environ.get("GRAPHSET_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(
                f"GRAPHSET_THREADS must be an integer, got {env!r}"
            ) from None
    return os.cpu_count() or 1


def _read_label_file(path) -> np.ndarray:
    if not os.path.isfile(path):
        raise IngestError(f"label file not found: {path}")
    values = []
    with open(path) as fh:
        for line_no, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            try:
                values.append(int(text))
            except ValueError:
                try:
                    values.append(float(text))
                except ValueError:
                    raise ParseError(
                        path, line_no, f"not a number: {text!r}"
                    ) from None
    if not values:
        raise IngestError(f"label file is empty: {path}")
    return np.asarray(values)


def _load_collection(cfg: dict) -> GraphCollection:
    ds = cfg["dataset"]
    if ds["format"] == "tud":
        collection = load_tud_dataset(ds["path"], ds["name"])
    else:
        collection = load_edge_list(ds["path"])
        if ds["labels"]:
            labels = _read_label_file(ds["labels"])
            if len(labels) != len(collection):
                raise IngestError(
                    f"{len(labels)} labels for {len(collection)} graphs"
                )
            collection = GraphCollection(collection.graphs, labels=labels,
                                         name=collection.name)
    pp = cfg["preprocessing"]
    if pp["largest_component"] or pp["k_core"] is not None:
        graphs = []
        for g in collection:
            if pp["largest_component"]:
                g = largest_component(g)
            if pp["k_core"] is not None:
                g = k_core(g, pp["k_core"])
                if g.node_count == 0:
                    raise PipelineError(
                        f"graph {g.graph_id} is empty after {pp['k_core']}-core "
                        "pruning"
                    )
            graphs.append(g)
        collection = GraphCollection(graphs, labels=collection.labels,
                                     name=collection.name)
    return collection


def _specs(cfg: dict) -> list[FeatureSpec]:
    return [FeatureSpec(f["name"], f["length"], f["params"])
            for f in cfg["features"]]


def _embedding_config(cfg: dict) -> EmbeddingConfig:
    e = cfg["embedding"]
    return EmbeddingConfig(
        method=e["method"], dim=e["dim"], reference_size=e["reference_size"],
        seed=cfg["seed"], sinkhorn_epsilon=e["sinkhorn_epsilon"],
    )


def _write_json(path, payload: dict) -> None:
    with open(path, "w", newline="") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_embedding_csv(path, collection, emb, chash: str) -> None:
    labeled = collection.labels is not None
    header = ["graph_id"] + (["label"] if labeled else []) + [
        f"e_{i}" for i in range(1, emb.dim + 1)
    ]
    rows = []
    for i in range(emb.matrix.shape[0]):
        row = [i]
        if labeled:
            row.append(collection.labels[i])
        row.extend(emb.matrix[i])
        rows.append(row)
    write_csv(path, header, rows, comment=f"config={chash}")


def _write_manifest(out_dir, cfg, chash, collection, outputs,
                    threads: int) -> None:
    manifest = {
        "config_hash": chash,
        "seed": cfg["seed"],
        "task": cfg["task"],
        "threads": threads,
        "kernel_backend": _kernels.BACKEND,
        "versions": {
            "graphset": __version__,
            "numpy": np.__version__,
            "python": platform.python_version(),
        },
        "dataset": {"name": collection.name, "graphs": len(collection)},
        "outputs": sorted(outputs),
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    _write_json(os.path.join(out_dir, "manifest.json"), manifest)


def _selection_eval_params(cfg: dict) -> dict:
    return {
        "n_runs": cfg["eval"]["n_runs"],
        "train_fraction": cfg["eval"]["train_fraction"],
        "forest": cfg["eval"]["forest"],
    }


def run_task(command: str, cfg: dict, threads: int) -> int:
    """Execute one validated config; returns the process exit code."""
    collection = _load_collection(cfg)
    specs = _specs(cfg)
    seed = cfg["seed"]
    out_dir = cfg["output_dir"]
    chash = config_hash(cfg)
    os.makedirs(out_dir, exist_ok=True)
    outputs = []

    mats = None
    if command == "features" or cfg["write_features"]:
        mats = compute_features(collection, specs, seed=seed,
                                standardize=cfg["standardize"],
                                threads=threads)
        header, rows = features_to_rows(mats)
        write_csv(os.path.join(out_dir, "features.csv"), header, rows,
                  comment=f"config={chash}")
        outputs.append("features.csv")
    if command == "features":
        _write_manifest(out_dir, cfg, chash, collection, outputs, threads)
        return EXIT_OK

    task = cfg["task"]
    if task in ("embed", "classify", "regress"):
        if mats is None:
            mats = compute_features(collection, specs, seed=seed,
                                    standardize=cfg["standardize"],
                                    threads=threads)
        emb = embed_collection(collection, mats, _embedding_config(cfg),
                               threads=threads)
        _write_embedding_csv(os.path.join(out_dir, "embedding.csv"),
                             collection, emb, chash)
        outputs.append("embedding.csv")
        _write_json(os.path.join(out_dir, "embedding.json"), {
            "config_hash": chash,
            "method": emb.method,
            "dim": emb.dim,
            "feature_columns": emb.feature_columns,
            "singular_values": emb.singular_values,
        })
        outputs.append("embedding.json")
        if task in ("classify", "regress"):
            if collection.labels is None:
                raise ParameterError(
                    f"task {task!r} needs graph labels, and the dataset "
                    "has none"
                )
            report = evaluate_repeated(
                emb.matrix, collection.labels,
                n_runs=cfg["eval"]["n_runs"],
                train_fraction=cfg["eval"]["train_fraction"],
                seed=seed,
                mode="classify" if task == "classify" else "regress",
                params=cfg["eval"]["forest"] or None,
                threads=threads,
            )
            _write_json(os.path.join(out_dir, "report.json"), {
                "config_hash": chash,
                "task": task,
                "dataset": collection.name,
                "graphs": len(collection),
                "report": report.to_dict(),
            })
            outputs.append("report.json")

    elif task.startswith("select:"):
        variant = task.split(":", 1)[1]
        ep = _selection_eval_params(cfg)
        sel = cfg["select"]
        if variant == "greedy":
            result = greedy_select(collection, specs, eval_params=ep,
                                   seed=seed, final_embed=sel["final_embed"],
                                   threads=threads)
        elif variant == "worst":
            result = worst_select(collection, specs, eval_params=ep,
                                  seed=seed, final_embed=sel["final_embed"],
                                  threads=threads)
        elif variant == "fast":
            result = fast_select(collection, specs, eval_params=ep,
                                 seed=seed, threads=threads)
        elif variant == "unsupervised":
            result = unsupervised_select(collection, specs, M=sel["M"],
                                         P=sel["P"], seed=seed,
                                         threads=threads)
        else:
            result = random_baseline(collection, specs, n_outer=sel["n_outer"],
                                     eval_params=ep, seed=seed,
                                     threads=threads)
        payload = result.to_dict()
        payload["config_hash"] = chash
        payload["dataset"] = collection.name
        _write_json(os.path.join(out_dir, "selection.json"), payload)
        outputs.append("selection.json")
        rows = result.score_rows()
        write_csv(os.path.join(out_dir, "selection.csv"),
                  list(rows[0]), rows[1:], comment=f"config={chash}")
        outputs.append("selection.csv")
        if result.final_embedding is not None:
            _write_embedding_csv(os.path.join(out_dir, "embedding.csv"),
                                 collection, result.final_embedding, chash)
            outputs.append("embedding.csv")

    else:
        sw = cfg["sweep"]
        sweep = sampling_sweep(
            collection, specs, _embedding_config(cfg), sw["rates"],
            n_runs=cfg["eval"]["n_runs"], seed=seed,
            eval_params={"train_fraction": cfg["eval"]["train_fraction"],
                         "forest": cfg["eval"]["forest"] or None},
            reference_graph=sw["reference_graph"],
            probe_size=sw["probe_size"], threads=threads,
        )
        rows = sweep.to_rows()
        write_csv(os.path.join(out_dir, "sweep.csv"), list(rows[0]), rows[1:],
                  comment=f"config={chash}")
        outputs.append("sweep.csv")
        payload = sweep.to_dict()
        payload["config_hash"] = chash
        payload["dataset"] = collection.name
        _write_json(os.path.join(out_dir, "sweep.json"), payload)
        outputs.append("sweep.json")

    _write_manifest(out_dir, cfg, chash, collection, outputs, threads)
    return EXIT_OK


COMMAND_TASKS = {
    "embed": ("embed",),
    "classify": ("classify", "regress"),
    "select": ("select:greedy", "select:fast", "select:unsupervised",
               "select:random", "select:worst"),
    "similarity": ("similarity-sweep",),
}


def _check_command_task(command: str, task: str) -> None:
    if command == "features":
        return
    allowed = COMMAND_TASKS[command]
    _expect(task in allowed,
            f"subcommand {command!r} expects task in {allowed}, "
            f"config says {task!r}")


def _load_config_file(path) -> dict:
    if not os.path.isfile(path):
        raise ConfigError(f"config file not found: {path}")
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as e:
            raise ConfigError(f"config is not valid JSON: {e}") from None


def _bench_transport(kernels: dict, size: int, repeat: int, rng) -> dict:
    cost = rng.uniform(0.0, 1.0, size=(size, size))
    supply = np.full(size, 1.0 / size)
    demand = np.full(size, 1.0 / size)
    out = {}
    for name, mod in kernels.items():
        best = float("inf")
        for _ in range(repeat):
            t0 = time.perf_counter()
            plan, pivots, status = mod.network_simplex(
                np.ascontiguousarray(cost), supply.copy(), demand.copy(),
                100000, 1e-10,
            )
            best = min(best, time.perf_counter() - t0)
        out[name] = {"seconds": best, "pivots": int(pivots),
                     "status": int(status),
                     "plan_digest": hashlib.sha256(plan.tobytes()).hexdigest()}
    return out


def _bench_scan(kernels: dict, size: int, repeat: int, rng) -> dict:
    X = np.ascontiguousarray(rng.normal(size=(size * 8, 16)))
    y = np.ascontiguousarray(rng.integers(0, 3, size=size * 8))
    orders = np.argsort(X, axis=0, kind="stable")
    out = {}
    for name, mod in kernels.items():
        best = float("inf")
        for _ in range(repeat):
            t0 = time.perf_counter()
            res = mod.scan_split_classification(X, orders, y, 3, 2)
            best = min(best, time.perf_counter() - t0)
        out[name] = {"seconds": best,
                     "result": [float(res[0]), float(res[1]),
                                float(res[2]), float(res[3])]}
    return out


def run_bench(size: int, repeat: int, out_dir=None) -> int:
    """Time both kernel backends on the hot paths and check they agree."""
    kernels = _kernels.backends()
    rng = np.random.default_rng(0)
    transport = _bench_transport(kernels, size, repeat, rng)
    scan = _bench_scan(kernels, size, repeat, rng)

    names = sorted(kernels)
    agree = True
    if len(names) == 2:
        a, b = names
        agree = (transport[a]["plan_digest"] == transport[b]["plan_digest"]
                 and transport[a]["pivots"] == transport[b]["pivots"]
                 and scan[a]["result"] == scan[b]["result"])

    print(f"kernel backends: {', '.join(names)}")
    print(f"{'benchmark':<18}" + "".join(f"{n:>12}" for n in names))
    for label, table in (("transport", transport), ("split-scan", scan)):
        cells = "".join(f"{table[n]['seconds'] * 1e3:>10.2f}ms" for n in names)
        print(f"{label:<18}{cells}")
    if len(names) == 2:
        fast, slow = names[0], names[1]
        for label, table in (("transport", transport), ("split-scan", scan)):
            ratio = table[slow]["seconds"] / max(table[fast]["seconds"], 1e-12)
            print(f"{label} speedup ({slow}/{fast}): {ratio:.1f}x")
        print("backend agreement:", "ok" if agree else "MISMATCH")
    else:
        print("only one backend available; agreement check skipped")

    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        _write_json(os.path.join(out_dir, "bench.json"), {
            "size": size, "repeat": repeat, "transport": transport,
            "split_scan": scan, "agreement": bool(agree),
        })
    if not agree:
        raise SolverError("kernel backends disagree on benchmark instances")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphset",
        description="Graph-collection embeddings via node features and "
                    "optimal transport",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "features": "compute per-node feature tables",
        "embed": "embed a graph collection",
        "classify": "embed, then run the repeated-split evaluation",
        "select": "order features by one of the selection strategies",
        "similarity": "node-sampling sweep with similarity scores",
    }
    for name, help_text in helps.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="path to JSON config")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--out", help="override the output directory")
        p.add_argument("--threads", type=int, help="worker-pool cap")
    b = sub.add_parser("bench", help="time the compiled kernels against "
                                     "the pure fallback")
    b.add_argument("--size", type=int, default=48,
                   help="transport problem size (default 48)")
    b.add_argument("--repeat", type=int, default=3,
                   help="timing repetitions, best kept (default 3)")
    b.add_argument("--out", help="also write bench.json here")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s",
                        stream=sys.stderr)
    try:
        if args.command == "bench":
            return run_bench(args.size, args.repeat, args.out)
        cfg = validate_config(_load_config_file(args.config))
        if args.seed is not None:
            cfg["seed"] = args.seed
        if args.out is not None:
            cfg["output_dir"] = args.out
        _check_command_task(args.command, cfg["task"])
        threads = _resolve_threads(cfg["threads"], args.threads)
        return run_task(args.command, cfg, threads)
    except (ConfigError, ShapeError, ParameterError) as e:
        print(f"graphset: config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (IngestError, EmptyGraphError) as e:
        print(f"graphset: ingestion error: {e}", file=sys.stderr)
        return EXIT_INGEST
    except OSError as e:
        print(f"graphset: ingestion error: {e}", file=sys.stderr)
        return EXIT_INGEST
    except (ConvergenceError, SolverError, DegenerateGraphError,
            PipelineError, FloatingPointError) as e:
        print(f"graphset: numeric error: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except GraphsetError as e:
        print(f"graphset: error: {e}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
