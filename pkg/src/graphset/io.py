"""Dataset ingestion and deterministic text output.

Two input formats are supported:

* edge-list directories: one whitespace-separated edge list per file,
  ``#`` comment lines allowed, one graph per file;
* TU-Dortmund benchmark layout: ``NAME_A.txt`` (comma-separated edge
  pairs over 1-indexed global node ids), ``NAME_graph_indicator.txt``
  and ``NAME_graph_labels.txt``.

All numeric output goes through :func:`format_value`, which fixes the
decimal separator and significant digits so files are byte-identical
across platforms.
"""

from __future__ import annotations

import logging
import os

import numpy as np

from .errors import (
    EmptyGraphError,
    FormatError,
    IngestError,
    ParameterError,
    ParseError,
)
from .graphs import Graph, GraphCollection

log = logging.getLogger("graphset")

SIGNIFICANT_DIGITS = 12


def format_value(x) -> str:
    """Render a number for CSV/JSON output: 12 significant digits, '.' separator."""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    v = float(x)
    if v != v:
        return "nan"
    if v in (float("inf"), float("-inf")):
        return "inf" if v > 0 else "-inf"
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(round(v, -int(np.floor(np.log10(abs(v)))) + SIGNIFICANT_DIGITS - 1))


def write_csv(path, header: list[str], rows, comment: str | None = None) -> None:
    """Write rows of mixed int/float/str cells with '\\n' line endings.

    ``comment`` becomes a leading '# ...' line, readable by parsers
    that skip hash comments.
    """
    with open(path, "w", newline="") as fh:
        if comment is not None:
            fh.write(f"# {comment}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(
                ",".join(c if isinstance(c, str) else format_value(c) for c in row)
                + "\n"
            )


def _parse_edge_line(path, line_no, line):
    parts = line.split()
    if len(parts) != 2:
        raise ParseError(path, line_no, f"expected 2 integers, got {len(parts)} fields")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise ParseError(path, line_no, f"non-integer endpoint in {line!r}") from None


def load_edge_list(path) -> GraphCollection:
    """Load a directory of edge-list files, one graph per file.

    Graphs are ordered by filename sort; node ids are the integers that
    appear on edge lines (isolated ids never mentioned are absent).
    """
    if not os.path.isdir(path):
        raise IngestError(f"not a directory: {path}")
    files = sorted(
        f for f in os.listdir(path) if os.path.isfile(os.path.join(path, f))
    )
    if not files:
        raise IngestError(f"no edge-list files found in {path}")
    graphs = []
    for gid, fname in enumerate(files):
        fpath = os.path.join(path, fname)
        pairs = []
        with open(fpath) as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                u, v = _parse_edge_line(fpath, line_no, line)
                if u == v:
                    raise ParseError(fpath, line_no, f"self loop on node {u}")
                pairs.append((u, v))
        if not pairs:
            raise EmptyGraphError(f"no edges in {fpath}")
        ids = sorted({x for pair in pairs for x in pair})
        remap = {orig: i for i, orig in enumerate(ids)}
        edges = [(remap[u], remap[v]) for u, v in pairs]
        graphs.append(
            Graph.from_edges(len(ids), edges, node_ids=ids, graph_id=gid)
        )
    return GraphCollection(graphs, name=os.path.basename(os.path.normpath(path)))


def _read_int_lines(path, what):
    values = []
    with open(path) as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                values.append(int(line))
            except ValueError:
                raise ParseError(path, line_no, f"non-integer {what}: {line!r}") from None
    return values


def load_tud_dataset(directory, name) -> GraphCollection:
    """Load a TU-Dortmund benchmark directory (NAME_A.txt and friends).

    Node lines in the indicator file assign 1-indexed global node ids to
    graphs; edges must stay within one graph.  Optional files such as
    node labels or attributes are ignored with a logged notice.
    """
    def req(suffix):
        p = os.path.join(directory, f"{name}{suffix}")
        if not os.path.isfile(p):
            raise IngestError(f"missing dataset file: {p}")
        return p

    a_path = req("_A.txt")
    ind_path = req("_graph_indicator.txt")
    lab_path = req("_graph_labels.txt")

    for suffix in ("_node_labels.txt", "_node_attributes.txt", "_edge_labels.txt"):
        extra = os.path.join(directory, f"{name}{suffix}")
        if os.path.isfile(extra):
            log.info("ignoring optional dataset file %s", extra)

    indicator = _read_int_lines(ind_path, "graph indicator")
    n_total = len(indicator)
    graph_of = np.asarray(indicator, dtype=np.int64)
    m = int(graph_of.max())
    if sorted(set(indicator)) != list(range(1, m + 1)):
        raise FormatError(f"{ind_path}: graph ids must cover 1..{m}")

    labels = []
    with open(lab_path) as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                labels.append(int(line))
            except ValueError:
                try:
                    labels.append(float(line))
                except ValueError:
                    raise ParseError(
                        lab_path, line_no, f"unparseable label: {line!r}"
                    ) from None
    if len(labels) != m:
        raise FormatError(
            f"{lab_path}: {len(labels)} labels for {m} graphs"
        )

    per_graph_edges = [[] for _ in range(m)]
    with open(a_path) as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) != 2:
                raise ParseError(a_path, line_no, f"expected 'u, v', got {line!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(a_path, line_no, f"non-integer endpoint in {line!r}") from None
            if not (1 <= u <= n_total and 1 <= v <= n_total):
                raise ParseError(a_path, line_no, f"node id out of range: {line!r}")
            gu, gv = graph_of[u - 1], graph_of[v - 1]
            if gu != gv:
                raise FormatError(
                    f"{a_path}:{line_no}: edge ({u}, {v}) crosses graphs {gu} and {gv}"
                )
            per_graph_edges[gu - 1].append((u, v))

    # global node id -> index within its own graph
    local = np.zeros(n_total, dtype=np.int64)
    counts = np.zeros(m, dtype=np.int64)
    for i, gid in enumerate(graph_of):
        local[i] = counts[gid - 1]
        counts[gid - 1] += 1

    graphs = []
    for gi in range(m):
        members = np.flatnonzero(graph_of == gi + 1) + 1
        edges = [
            (local[u - 1], local[v - 1]) for u, v in per_graph_edges[gi] if u != v
        ]
        graphs.append(
            Graph.from_edges(
                int(counts[gi]), edges, node_ids=members, graph_id=gi
            )
        )
    return GraphCollection(graphs, labels=np.asarray(labels), name=name)


def write_tud_dataset(directory, collection, name: str) -> None:
    """Write a collection in the three-file benchmark layout.

    Produces NAME_A.txt (both edge directions), NAME_graph_indicator.txt,
    and NAME_graph_labels.txt with 1-indexed global node ids, so the
    output round-trips through ``load_tud_dataset``.
    """
    if collection.labels is None:
        raise ParameterError("collection needs labels to write graph labels")
    os.makedirs(directory, exist_ok=True)
    offsets = []
    total = 0
    for g in collection:
        offsets.append(total)
        total += g.node_count
    with open(os.path.join(directory, f"{name}_A.txt"), "w", newline="") as fh:
        for g, off in zip(collection, offsets):
            for u, v in g.edges():
                fh.write(f"{off + u + 1}, {off + v + 1}\n")
                fh.write(f"{off + v + 1}, {off + u + 1}\n")
    with open(os.path.join(directory, f"{name}_graph_indicator.txt"), "w",
              newline="") as fh:
        for gi, g in enumerate(collection):
            fh.write(f"{gi + 1}\n" * g.node_count)
    with open(os.path.join(directory, f"{name}_graph_labels.txt"), "w",
              newline="") as fh:
        for label in collection.labels:
            fh.write(f"{format_value(label)}\n")
