"""Graph loaders and matrix serialization.

Edge-list CSV
    UTF-8, one ``source,target`` pair per line, ``source`` depends on
    ``target``. Blank lines and lines starting with ``#`` are ignored. A line
    holding a single name declares a node without edges (used to keep
    isolated nodes of sampled subgraphs).
Registry JSON
    An array of ``{"name": ..., "dependencies": [...]}`` objects.
Matrix CSV
    A header row of labels followed by ``n`` rows of ``n`` values.

Node ids are assigned in first-appearance order in every format.
"""

from __future__ import annotations

import csv
import json
from os import PathLike
from typing import Sequence

import numpy as np

from .graph import DependencyGraph
from .matrix import DissimilarityMatrix

#: significant digits written to matrix CSV files
MATRIX_DIGITS = 12


class IngestError(ValueError):
    """Malformed input file; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def load_edge_list(path: str | PathLike) -> DependencyGraph:
    g = DependencyGraph()
    index: dict[str, int] = {}

    def node(name: str) -> int:
        idx = index.get(name)
        if idx is None:
            idx = index[name] = g.add_node(name)
        return idx

    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            fields = [f.strip() for f in row]
            if not fields or not any(fields) or fields[0].startswith("#"):
                continue
            if len(fields) == 1:
                node(fields[0])
                continue
            if len(fields) != 2 or not fields[0] or not fields[1]:
                raise IngestError(f"expected 'source,target', got {row!r}", lineno)
            source, target = fields
            if source == target:
                raise IngestError(f"self-loop on {source!r}", lineno)
            g.add_edge(node(source), node(target))
    if g.node_count == 0:
        raise IngestError("no nodes")
    return g.freeze()


def load_registry_json(path: str | PathLike) -> DependencyGraph:
    """Load a registry dump; unknown dependency names become external nodes."""
    try:
        with open(path, encoding="utf-8") as fh:
            records = json.load(fh)
    except json.JSONDecodeError as exc:
        raise IngestError(f"invalid JSON: {exc}") from exc
    if not isinstance(records, list):
        raise IngestError("top-level JSON value must be an array")

    g = DependencyGraph()
    index: dict[str, int] = {}
    defined: set[str] = set()
    edges: list[tuple[str, str]] = []
    for pos, rec in enumerate(records):
        name = rec.get("name") if isinstance(rec, dict) else None
        if not isinstance(name, str) or not name:
            raise IngestError(f"record {pos} has no 'name'")
        deps = rec.get("dependencies") or []
        if not isinstance(deps, list):
            raise IngestError(f"record {pos} ('{name}'): 'dependencies' must be an array")
        defined.add(name)
        if name not in index:
            index[name] = g.add_node(name)
        for dep in deps:
            if not isinstance(dep, str) or not dep:
                raise IngestError(f"record {pos} ('{name}'): bad dependency {dep!r}")
            if dep not in index:
                index[dep] = g.add_node(dep)
            edges.append((name, dep))
    if g.node_count == 0:
        raise IngestError("no nodes")
    for a, b in edges:
        if a == b:
            raise IngestError(f"package {a!r} depends on itself")
        g.add_edge(index[a], index[b])
    g.external = {i for name, i in index.items() if name not in defined}
    return g.freeze()


def load_graph(path: str | PathLike, fmt: str | None = None) -> DependencyGraph:
    """Dispatch on ``fmt`` (``'edges'`` or ``'json'``) or the file suffix."""
    if fmt is None:
        fmt = "json" if str(path).endswith(".json") else "edges"
    if fmt == "json":
        return load_registry_json(path)
    if fmt == "edges":
        return load_edge_list(path)
    raise IngestError(f"unknown graph format {fmt!r}")


def write_edge_list(g: DependencyGraph, path: str | PathLike) -> None:
    """Write ``g`` so that :func:`load_edge_list` restores the same ids."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        # node declarations first so first-appearance order equals id order
        for u in range(g.node_count):
            w.writerow([g.label(u)])
        for u, v in g.edges():
            w.writerow([g.label(u), g.label(v)])


def write_matrix_csv(
    m: DissimilarityMatrix, path: str | PathLike, labels: Sequence[str] | None = None
) -> None:
    if labels is None:
        labels = [str(i) for i in range(m.n)]
    if len(labels) != m.n:
        raise IngestError(f"{len(labels)} labels for a {m.n}x{m.n} matrix")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(labels)
        for row in m.values:
            w.writerow([format(float(x), f".{MATRIX_DIGITS}g") for x in row])


def read_matrix_csv(path: str | PathLike) -> tuple[DissimilarityMatrix, list[str]]:
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise IngestError("empty matrix file")
    labels = rows[0]
    body = rows[1:]
    if len(body) != len(labels):
        raise IngestError(f"{len(labels)} labels but {len(body)} rows")
    try:
        values = np.array([[float(x) for x in r] for r in body], dtype=np.float64)
    except ValueError as exc:
        raise IngestError(f"non-numeric matrix entry: {exc}") from exc
    if values.shape != (len(labels), len(labels)):
        raise IngestError(f"matrix rows must have {len(labels)} values")
    return DissimilarityMatrix(values), labels
