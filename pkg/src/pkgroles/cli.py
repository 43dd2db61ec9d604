"""Command-line interface.

Subcommands: ingest, sample, closure, structural, regular, cluster, report,
run (full pipeline) and synth (synthetic graphs).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .closure import DEFAULT_EDGE_BUDGET, descendant_closure
from .clustering import k_sweep, silhouette
from .ingest import load_graph, read_matrix_csv, write_edge_list, write_matrix_csv
from .pipeline import (RunConfig, _dump_json, clustering_from_json, clustering_json,
                       contraction_json, load_config, partition_json, run_pipeline,
                       write_report, write_sweep_csv)
from .regular import DEFAULT_NODE_CAP, catrege, regular_dissimilarity
from .report import DEFAULT_PURITY
from .sampling import SampleSpec, random_walk_sample, sample_statistics, subseed
from .structural import DEFAULT_PAIR_BUDGET, structural_dissimilarity
from .synth import planted_roles, preferential_dag

log = logging.getLogger("pkgroles")


def _add_input(p):
    p.add_argument("input", help="edge-list CSV or registry JSON")
    p.add_argument("--format", dest="input_format", choices=["edges", "json"],
                   help="input format (default: by file suffix)")


def _bool_flag(p, name, help, default=None):
    p.add_argument(f"--{name}", dest=name.replace("-", "_"), action=argparse.BooleanOptionalAction,
                   default=default, help=help)


def cmd_ingest(args):
    g = load_graph(args.input, args.input_format)
    if args.output:
        write_edge_list(g, args.output)
    stats = sample_statistics(g)
    stats["external"] = len(g.external)
    print(json.dumps(stats, sort_keys=True))


def cmd_sample(args):
    g = load_graph(args.input, args.input_format)
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    target = min(args.sample_size, g.node_count)
    rows = []
    for i in range(args.samples):
        spec = SampleSpec(target, args.restart_prob, seed=subseed(args.seed, i))
        _, sub = random_walk_sample(g, spec)
        write_edge_list(sub, out / f"sample-{i:03d}.csv")
        rows.append({"sample": i, **sample_statistics(sub)})
    print(json.dumps(rows, sort_keys=True))


def cmd_closure(args):
    g = load_graph(args.input, args.input_format)
    closed = descendant_closure(g, args.edge_budget)
    write_edge_list(closed, args.output)
    print(json.dumps({"edges": g.edge_count, "closed_edges": closed.edge_count}))


def cmd_structural(args):
    g = load_graph(args.input, args.input_format)
    closure = args.closure if args.closure is not None else args.neighborhood == "out"
    work = descendant_closure(g, args.edge_budget) if closure else g
    res = structural_dissimilarity(work, args.neighborhood, args.pair_budget)
    labels = g.labels
    write_matrix_csv(res.matrix, args.output, [labels[v] for v in res.nodes])
    if args.contraction:
        _dump_json(contraction_json(res.contraction, labels), Path(args.contraction))
    print(json.dumps({
        "nodes": g.node_count,
        "representatives": len(res.nodes),
        "scored_pairs": res.scored_pairs,
        "identical_pairs": res.identical_pairs,
    }))


def cmd_regular(args):
    g = load_graph(args.input, args.input_format)
    work = descendant_closure(g, args.edge_budget) if args.closure else g
    part = catrege(work, None if args.no_node_cap else args.node_cap)
    write_matrix_csv(regular_dissimilarity(part, args.distance), args.output, g.labels)
    if args.roles:
        _dump_json(partition_json(part, g.labels, args.trace), Path(args.roles))
    print(json.dumps({"roles": part.role_count, "iterations": part.total_iterations}))


def cmd_cluster(args):
    m, labels = read_matrix_csv(args.matrix)
    if args.k is not None:
        ks = [args.k]
    else:
        ks = range(args.k_min, min(args.k_max, m.n) + 1)
    sweep = k_sweep(m, ks, seed=args.seed, init=args.init)
    best = sweep.best
    sil = silhouette(m, best.clustering) if best.k >= 2 else None
    _dump_json(clustering_json(best.clustering, labels, sil), Path(args.output))
    if args.sweep:
        write_sweep_csv(sweep, Path(args.sweep))
    print(json.dumps({"best_k": best.k, "silhouette": best.silhouette}))


def cmd_report(args):
    m, labels = read_matrix_csv(args.matrix)
    with open(args.assignments, encoding="utf-8") as fh:
        c = clustering_from_json(json.load(fh), labels, m)
    g = nodes = None
    if args.graph:
        g = load_graph(args.graph, args.graph_format)
        nodes = [g.index_of(lab) for lab in labels]
    roles = write_report(Path(args.output), m, c, labels, g, nodes, args.role_purity)
    if roles is not None:
        print(json.dumps({str(j): r.role for j, r in roles.items()}, sort_keys=True))


def cmd_synth(args):
    if args.model == "planted":
        g, _ = planted_roles(args.seed, args.cores, args.popular, args.supplementary)
    else:
        g = preferential_dag(args.nodes, args.mean_deps, args.seed)
    write_edge_list(g, args.output)
    print(json.dumps(sample_statistics(g)))


RUN_FLAGS = {
    # flag: (dest, type, help)
    "--pipeline": ("pipeline", str, "structural or regular"),
    "--sample-size": ("sample_size", int, "nodes per sample (default 1000 structural / 500 regular)"),
    "--samples": ("samples", int, "number of samples (default 20)"),
    "--seed": ("seed", int, "master seed"),
    "--restart-prob": ("restart_prob", float, "random-walk restart probability (default 0.15)"),
    "--max-steps": ("max_steps", int, "random-walk step limit (default 100 x sample size)"),
    "--k-min": ("k_min", int, "smallest k (default 1 structural / 2 regular)"),
    "--k-max": ("k_max", int, "largest k (default 30 structural / 20 regular)"),
    "--closure-order": ("closure_order", str, "sample-first or closure-first"),
    "--neighborhood": ("neighborhood", str, "structural neighbourhood: out or undirected"),
    "--distance": ("distance", str, "regular distance form: inverse or linear"),
    "--role-purity": ("role_purity", float, "share of members needed for a role label"),
    "--init": ("init", str, "PAM start: build or random"),
    "--node-cap": ("node_cap", int, "CATREGE node cap"),
    "--pair-budget": ("pair_budget", int, "per-node predecessor pair budget"),
    "--edge-budget": ("edge_budget", int, "closure edge budget"),
    "--format": ("input_format", str, "input format: edges or json"),
    "--output": ("output", str, "output directory"),
}


def cmd_run(args):
    values = load_config(args.config) if args.config else {}
    cli = {k: v for k, v in vars(args).items()
           if k in {f.name for f in dataclasses.fields(RunConfig)} and v is not None}
    values.update(cli)
    if args.no_sample:
        values["sample"] = False
    cfg = RunConfig(**values)
    if not cfg.input:
        raise SystemExit("error: no input graph given (positional argument or 'input' config key)")
    summary = run_pipeline(cfg)
    print(json.dumps(summary.aggregate(), sort_keys=True))
    return 0 if summary.succeeded else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pkgroles", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load a graph and print its size")
    _add_input(p)
    p.add_argument("-o", "--output", help="write the normalized edge list here")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("sample", help="random-walk samples as edge lists")
    _add_input(p)
    p.add_argument("--sample-size", type=int, default=500)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restart-prob", type=float, default=0.15)
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("closure", help="add edges to all descendants")
    _add_input(p)
    p.add_argument("--edge-budget", type=int, default=DEFAULT_EDGE_BUDGET)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("structural", help="cosine structural dissimilarity matrix")
    _add_input(p)
    _bool_flag(p, "closure", "close the graph first (default: on for 'out' neighbourhoods)")
    p.add_argument("--neighborhood", choices=["out", "undirected"], default="out")
    p.add_argument("--pair-budget", type=int, default=DEFAULT_PAIR_BUDGET)
    p.add_argument("--edge-budget", type=int, default=DEFAULT_EDGE_BUDGET)
    p.add_argument("-o", "--output", required=True, help="matrix CSV")
    p.add_argument("--contraction", help="contraction-map JSON")
    p.set_defaults(func=cmd_structural)

    p = sub.add_parser("regular", help="CATREGE regular-equivalence dissimilarity matrix")
    _add_input(p)
    _bool_flag(p, "closure", "close the graph first", default=False)
    p.add_argument("--distance", choices=["inverse", "linear"], default="inverse")
    p.add_argument("--node-cap", type=int, default=DEFAULT_NODE_CAP)
    p.add_argument("--no-node-cap", action="store_true", help="lift the node cap")
    p.add_argument("--edge-budget", type=int, default=DEFAULT_EDGE_BUDGET)
    p.add_argument("--trace", action="store_true", help="include per-iteration roles")
    p.add_argument("-o", "--output", required=True, help="matrix CSV")
    p.add_argument("--roles", help="roles JSON")
    p.set_defaults(func=cmd_regular)

    p = sub.add_parser("cluster", help="PAM with silhouette-based k selection")
    p.add_argument("matrix", help="matrix CSV")
    p.add_argument("--k", type=int)
    p.add_argument("--k-min", type=int, default=2)
    p.add_argument("--k-max", type=int, default=20)
    p.add_argument("--init", choices=["build", "random"], default="build")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True, help="assignments JSON")
    p.add_argument("--sweep", help="sweep CSV of (k, silhouette, cost)")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("report", help="blockmodel, embedding and role labels")
    p.add_argument("matrix")
    p.add_argument("assignments")
    p.add_argument("--graph", help="graph file for role classification")
    p.add_argument("--graph-format", choices=["edges", "json"])
    p.add_argument("--role-purity", type=float, default=DEFAULT_PURITY)
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("run", help="full pipeline over seeded samples")
    p.add_argument("input", nargs="?", help="graph file (or 'input' in the config)")
    p.add_argument("--config", help="key = value configuration file")
    for flag, (dest, typ, hlp) in RUN_FLAGS.items():
        names = (flag, "-o") if flag == "--output" else (flag,)
        p.add_argument(*names, dest=dest, type=typ, default=None, help=hlp)
    _bool_flag(p, "closure", "descendant closure (default: on structural, off regular)")
    p.add_argument("--no-sample", action="store_true", help="analyse the whole graph once")
    p.add_argument("--trace", action="store_true", default=None)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("synth", help="write a synthetic graph")
    p.add_argument("model", choices=["planted", "dag"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cores", type=int, default=10)
    p.add_argument("--popular", type=int, default=40)
    p.add_argument("--supplementary", type=int, default=450)
    p.add_argument("--nodes", type=int, default=1000)
    p.add_argument("--mean-deps", type=float, default=8.0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args) or 0
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
