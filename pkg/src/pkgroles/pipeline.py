"""End-to-end runs: ingest -> sample -> [closure] -> equivalence -> k sweep -> report.

Per-sample seeds come from :func:`pkgroles.sampling.subseed`, so sample
``i`` can be reproduced alone. Output files contain no timestamps and are
byte-identical for identical configurations.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .closure import DEFAULT_EDGE_BUDGET, descendant_closure
from .clustering import Clustering, SilhouetteReport, Sweep, k_sweep, silhouette
from .graph import DependencyGraph
from .ingest import load_graph, write_edge_list, write_matrix_csv
from .matrix import DissimilarityMatrix
from .regular import DEFAULT_NODE_CAP, RolePartition, catrege, regular_dissimilarity
from .report import (DEFAULT_PURITY, RoleLabel, blockmodel, classify_roles, embed_2d,
                     write_pgm)
from .sampling import SampleSpec, random_walk_sample, subseed
from .structural import DEFAULT_PAIR_BUDGET, ContractionMap, structural_dissimilarity

log = logging.getLogger(__name__)

OUTPUT_ROOT_ENV = "PKGROLES_OUTPUT_ROOT"

PIPELINE_DEFAULTS = {
    "structural": {"sample_size": 1000, "k_min": 1, "k_max": 30, "closure": True},
    "regular": {"sample_size": 500, "k_min": 2, "k_max": 20, "closure": False},
}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    """Configuration of one run. ``None`` fields take pipeline defaults."""

    input: str = ""
    input_format: str | None = None
    pipeline: str = "regular"
    sample: bool = True
    sample_size: int | None = None
    samples: int = 20
    restart_prob: float = 0.15
    max_steps: int | None = None
    seed: int = 0
    k_min: int | None = None
    k_max: int | None = None
    closure: bool | None = None
    closure_order: str = "sample-first"
    neighborhood: str = "out"
    distance: str = "inverse"
    output: str = "out"
    role_purity: float = DEFAULT_PURITY
    init: str = "build"
    node_cap: int | None = DEFAULT_NODE_CAP
    pair_budget: int = DEFAULT_PAIR_BUDGET
    edge_budget: int = DEFAULT_EDGE_BUDGET
    trace: bool = False

    def resolved(self) -> "RunConfig":
        if self.pipeline not in PIPELINE_DEFAULTS:
            raise ConfigError(f"unknown pipeline {self.pipeline!r}")
        defaults = PIPELINE_DEFAULTS[self.pipeline]
        cfg = dataclasses.replace(self)
        for key, value in defaults.items():
            if getattr(cfg, key) is None:
                setattr(cfg, key, value)
        if self.pipeline == "structural" and cfg.neighborhood == "undirected":
            # closure of an undirected view connects every component completely
            cfg.closure = False
        if cfg.closure_order not in ("sample-first", "closure-first"):
            raise ConfigError(f"unknown closure_order {cfg.closure_order!r}")
        if cfg.k_min < 1 or cfg.k_max < cfg.k_min:
            raise ConfigError(f"bad k range [{cfg.k_min}, {cfg.k_max}]")
        if cfg.samples < 1:
            raise ConfigError("samples must be >= 1")
        return cfg

    def output_dir(self) -> Path:
        out = Path(self.output)
        root = os.environ.get(OUTPUT_ROOT_ENV)
        if root and not out.is_absolute():
            out = Path(root) / out
        return out


def _coerce(name: str, raw: str):
    ftype = {f.name: f.type for f in dataclasses.fields(RunConfig)}.get(name)
    if ftype is None:
        raise ConfigError(f"unknown config key {name!r}")
    raw = raw.strip()
    if "None" in ftype and raw.lower() in ("", "none"):
        return None
    if ftype.startswith("bool"):
        low = raw.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"{name}: expected a boolean, got {raw!r}")
    try:
        if ftype.startswith("int"):
            return int(raw)
        if ftype.startswith("float"):
            return float(raw)
    except ValueError:
        raise ConfigError(f"{name}: bad value {raw!r}") from None
    return raw


def parse_config(text: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment line; keys may use ``-``."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected 'key = value'")
        key, raw = line.split("=", 1)
        key = key.strip().replace("-", "_")
        values[key] = _coerce(key, raw)
    return values


def load_config(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


# -- writers --------------------------------------------------------------

def _dump_json(obj, path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def contraction_json(cmap: ContractionMap, labels: list[str]) -> dict:
    return {
        "representative": {labels[v]: labels[r] for v, r in enumerate(cmap.representative)},
        "classes": [[labels[v] for v in members] for members in cmap.nontrivial_classes()],
    }


def partition_json(p: RolePartition, labels: list[str], trace: bool = False) -> dict:
    out = {
        "roles": {labels[v]: int(r) for v, r in enumerate(p.final)},
        "classes": [[labels[v] for v in members] for members in p.classes()],
        "total_iterations": p.total_iterations,
    }
    if trace:
        out["trace"] = [[int(r) for r in a] for a in p.assignment]
    return out


def clustering_json(c: Clustering, labels: list[str], sil: SilhouetteReport | None) -> dict:
    out = {
        "k": c.k,
        "medoids": [labels[m] for m in c.medoids],
        "assignment": {labels[i]: int(a) for i, a in enumerate(c.assignment)},
        "cost": c.cost,
    }
    if sil is not None:
        out["silhouette"] = {
            "overall": sil.overall_mean,
            "per_cluster": [float(x) for x in sil.per_cluster_mean],
            "per_node": {labels[i]: float(s) for i, s in enumerate(sil.per_node)},
        }
    return out


def clustering_from_json(obj: dict, labels: list[str], m: DissimilarityMatrix) -> Clustering:
    index = {lab: i for i, lab in enumerate(labels)}
    medoids = np.array([index[x] for x in obj["medoids"]], dtype=np.int64)
    assignment = np.array([obj["assignment"][lab] for lab in labels], dtype=np.int64)
    cost = float(m.values[np.arange(m.n), medoids[assignment]].sum())
    return Clustering(int(obj["k"]), medoids, assignment, cost)


def write_sweep_csv(sweep: Sweep, path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["k", "silhouette", "cost"])
        for e in sweep:
            sil = "" if e.silhouette is None else repr(e.silhouette)
            w.writerow([e.k, sil, repr(e.clustering.cost)])


def write_report(
    outdir: Path,
    m: DissimilarityMatrix,
    c: Clustering,
    labels: list[str],
    g: DependencyGraph | None = None,
    nodes=None,
    purity: float = DEFAULT_PURITY,
) -> dict[int, RoleLabel] | None:
    """Blockmodel PGM and means, embedding CSV and (with a graph) roles JSON."""
    outdir.mkdir(parents=True, exist_ok=True)
    bm = blockmodel(m, c)
    write_pgm(bm, outdir / "blockmodel.pgm")
    with open(outdir / "block_means.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["cluster"] + [str(j) for j in bm.cluster_order])
        for j, row in zip(bm.cluster_order, bm.block_mean):
            w.writerow([str(j)] + [repr(float(x)) for x in row])
    if m.n >= 3:
        emb = embed_2d(m)
        with open(outdir / "embedding.csv", "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["node", "x", "y", "cluster"])
            for i, (x, y) in enumerate(emb.coords):
                w.writerow([labels[i], repr(float(x)), repr(float(y)), int(c.assignment[i])])
        _dump_json({"captured_fraction": emb.captured}, outdir / "embedding_info.json")
    if g is None:
        return None
    roles = classify_roles(g, c, nodes=nodes, purity=purity)
    _dump_json(
        {
            str(j): {
                "role": r.role,
                "size": r.size,
                "in_only": r.in_only,
                "out_only": r.out_only,
                "both": r.both,
                "isolated": r.isolated,
                "mean_in_degree": r.mean_in,
                "mean_out_degree": r.mean_out,
                "members": [labels[i] for i in c.members(j)],
            }
            for j, r in roles.items()
        },
        outdir / "roles.json",
    )
    return roles


# -- pipeline -------------------------------------------------------------

@dataclass
class SampleResult:
    index: int
    nodes: int = 0
    edges: int = 0
    closed_edges: int | None = None
    matrix_size: int = 0
    contracted_nodes: int | None = None
    identical_classes: int | None = None
    role_count: int | None = None
    best_k: int | None = None
    best_silhouette: float | None = None
    roles: list[str] = field(default_factory=list)
    error: str | None = None


@dataclass
class RunSummary:
    config: RunConfig
    samples: list[SampleResult]

    @property
    def succeeded(self) -> list[SampleResult]:
        return [s for s in self.samples if s.error is None]

    def aggregate(self) -> dict:
        ok = self.succeeded

        def stat(values):
            values = [v for v in values if v is not None]
            if not values:
                return None
            arr = np.asarray(values, dtype=np.float64)
            return {"mean": float(arr.mean()), "std": float(arr.std(ddof=1)) if len(arr) > 1 else 0.0}

        hist: dict[str, int] = {}
        for s in ok:
            if s.best_k is not None:
                hist[str(s.best_k)] = hist.get(str(s.best_k), 0) + 1
        return {
            "samples": len(self.samples),
            "failed": len(self.samples) - len(ok),
            "nodes": stat([s.nodes for s in ok]),
            "edges": stat([s.edges for s in ok]),
            "closed_edges": stat([s.closed_edges for s in ok]),
            "contracted_nodes": stat([s.contracted_nodes for s in ok]),
            "best_silhouette": stat([s.best_silhouette for s in ok]),
            "best_k_histogram": dict(sorted(hist.items(), key=lambda kv: int(kv[0]))),
        }

    def to_json(self) -> dict:
        return {
            "config": dataclasses.asdict(self.config),
            "samples": [dataclasses.asdict(s) for s in self.samples],
            "aggregate": self.aggregate(),
        }


def _draw_samples(g: DependencyGraph, cfg: RunConfig):
    if not cfg.sample:
        yield 0, g, None
        return
    target = min(cfg.sample_size, g.node_count)
    for i in range(cfg.samples):
        seed = subseed(cfg.seed, i)
        spec = SampleSpec(target, cfg.restart_prob, seed=seed, max_steps=cfg.max_steps)
        yield i, None, spec


def analyze_sample(
    sub: DependencyGraph, cfg: RunConfig, outdir: Path, result: SampleResult,
    closed: DependencyGraph | None = None,
) -> None:
    """Run the equivalence, clustering and report stages on one sample."""
    outdir.mkdir(parents=True, exist_ok=True)
    result.nodes, result.edges = sub.node_count, sub.edge_count
    write_edge_list(sub, outdir / "graph.csv")
    if closed is None and cfg.closure:
        closed = descendant_closure(sub, cfg.edge_budget)
    work = closed if closed is not None else sub
    if closed is not None:
        result.closed_edges = closed.edge_count
    labels_all = sub.labels
    if cfg.pipeline == "structural":
        res = structural_dissimilarity(work, cfg.neighborhood, cfg.pair_budget)
        m, nodes = res.matrix, res.nodes
        result.contracted_nodes = res.contraction.contracted_node_count
        result.identical_classes = len(res.contraction.nontrivial_classes())
        _dump_json(contraction_json(res.contraction, labels_all), outdir / "contraction.json")
    else:
        part = catrege(work, cfg.node_cap)
        m, nodes = regular_dissimilarity(part, cfg.distance), list(range(sub.node_count))
        result.role_count = part.role_count
        _dump_json(partition_json(part, labels_all, cfg.trace), outdir / "partition.json")
    labels = [labels_all[v] for v in nodes]
    result.matrix_size = m.n
    write_matrix_csv(m, outdir / "matrix.csv", labels)

    k_hi = min(cfg.k_max, m.n)
    if cfg.k_min > k_hi:
        raise ValueError(f"k range [{cfg.k_min}, {cfg.k_max}] empty for {m.n} matrix rows")
    sweep = k_sweep(m, range(cfg.k_min, k_hi + 1), seed=int(cfg.seed), init=cfg.init)
    write_sweep_csv(sweep, outdir / "sweep.csv")
    best = sweep.best
    sil = silhouette(m, best.clustering) if best.k >= 2 else None
    _dump_json(clustering_json(best.clustering, labels, sil), outdir / "assignments.json")
    result.best_k, result.best_silhouette = best.k, best.silhouette
    roles = write_report(outdir, m, best.clustering, labels, sub, nodes, cfg.role_purity)
    result.roles = [r.role for _, r in sorted(roles.items())]


def run_pipeline(cfg: RunConfig) -> RunSummary:
    cfg = cfg.resolved()
    out = cfg.output_dir()
    out.mkdir(parents=True, exist_ok=True)
    g = load_graph(cfg.input, cfg.input_format)
    source = g
    if cfg.closure and cfg.closure_order == "closure-first":
        source = descendant_closure(g, cfg.edge_budget)
    results = []
    for i, whole, spec in _draw_samples(source, cfg):
        result = SampleResult(i)
        sdir = out / f"sample-{i:03d}"
        try:
            if whole is not None:
                nodes = range(g.node_count)
            else:
                nodes = sorted(random_walk_sample(source, spec)[0])
            sub = g.induced_subgraph(nodes)
            closed = source.induced_subgraph(nodes) if source is not g else None
            analyze_sample(sub, cfg, sdir, result, closed)
        except (ValueError, RuntimeError, MemoryError) as exc:
            log.warning("sample %d failed: %s", i, exc)
            result.error = f"{type(exc).__name__}: {exc}"
        results.append(result)
    summary = RunSummary(cfg, results)
    _dump_json(summary.to_json(), out / "summary.json")
    return summary
