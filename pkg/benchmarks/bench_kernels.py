"""Time the compiled kernels against the numpy fallback.

Usage::

    python3 benchmarks/bench_kernels.py [--nodes 1000] [--repeat 3]

Pair scoring runs on the descendant closure of a preferential DAG; PAM
BUILD+SWAP runs on its structural dissimilarity matrix for a few k.
"""

import argparse
import time

import numpy as np

from pkgroles import _kernels
from pkgroles.closure import descendant_closure
from pkgroles.clustering import SWAP_TOL
from pkgroles.structural import structural_dissimilarity
from pkgroles.synth import preferential_dag


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=1000)
    ap.add_argument("--mean-deps", type=float, default=8.0)
    ap.add_argument("--ks", type=int, nargs="+", default=[5, 15, 30])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)

    g = descendant_closure(preferential_dag(args.nodes, args.mean_deps, seed=args.seed))
    nptr, nidx = g.csr("out")
    pptr, pidx = g.csr("in")
    D = np.ascontiguousarray(structural_dissimilarity(g).matrix.values)
    print(f"closure: {g.node_count} nodes, {g.edge_count} edges; matrix {D.shape[0]}x{D.shape[0]}")

    backends = _kernels.available_backends()
    if "cython" not in backends:
        print("compiled extension not built; only the fallback is timed")
    rows, ref = [], {}
    for name, mod in backends.items():
        t, (a, b, common) = best_of(lambda: mod.predecessor_pairs(nptr, nidx, pptr, pidx), args.repeat)
        rows.append(("pairs", "-", name, t))
        ref.setdefault("pairs", (a, b, common))
        assert all(np.array_equal(x, y) for x, y in zip(ref["pairs"], (a, b, common)))
        for k in args.ks:
            def run():
                start = mod.pam_build(D, k)
                return mod.pam_swap(D, start, SWAP_TOL, 10_000)
            t, (med, _) = best_of(run, args.repeat)
            rows.append(("pam", k, name, t))
            key = ("pam", k)
            ref.setdefault(key, sorted(med))
            assert sorted(med) == ref[key], f"backends disagree on k={k}"

    print(f"{'kernel':<8}{'k':>4}  {'backend':<8}{'seconds':>10}{'speedup':>10}")
    base = {(r[0], r[1]): r[3] for r in rows if r[2] == "python"}
    for kern, k, name, t in rows:
        print(f"{kern:<8}{k!s:>4}  {name:<8}{t:>10.4f}{base[(kern, k)] / t:>9.1f}x")


if __name__ == "__main__":
    main()
