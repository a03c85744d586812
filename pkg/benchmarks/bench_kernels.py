"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3]

Workloads mirror one default pipeline run: betweenness over the 52 weekly
snapshots of a synthetic 70-firm study, the continuous coreness fixed point
and the annealed partition of the aggregate graph, plus an exhaustive
partition of a 16-node graph.
"""

import argparse
import importlib
import time

import numpy as np

from rlnet import _pykernels
from rlnet.centrality import to_csr
from rlnet.core_periphery import AnnealConfig, adjacency
from rlnet.ingest import aggregate_graph, build_snapshots
from rlnet.synthgen import SynthConfig, generate


def workloads():
    cfg = SynthConfig(seed=0)
    data = generate(cfg)
    snaps = [to_csr(s) for s in build_snapshots(data.events, cfg.window_spec)]
    _, A = adjacency(aggregate_graph(data.events, [r.id for r in data.registry]))
    rng = np.random.default_rng(0)
    B = np.triu((rng.random((16, 16)) < 0.3).astype(np.uint8), 1)
    B = B + B.T

    ac = AnnealConfig()
    n = A.shape[0]
    steps = ac.sweeps * n
    r = np.random.default_rng(1)
    init = (r.random(n) < 0.5).astype(np.uint8)
    flips = r.integers(0, n, steps, dtype=np.int64)
    uni = r.random(steps)
    temps = np.geomspace(ac.t_start, ac.t_end, steps)
    deg = A.sum(axis=1).astype(float)

    return {
        "betweenness x52 windows": lambda k: [k.betweenness_csr(p, i, len(nodes)) for nodes, p, i in snaps],
        f"coreness fixed point (n={n})": lambda k: k.coreness_fixed_point(A.astype(float), deg / deg.max(), 1e-10, 10_000),
        f"annealing, one restart (n={n})": lambda k: k.cp_anneal(A, init.copy(), flips, uni, temps),
        "exhaustive partition (n=16)": lambda k: k.cp_exhaustive(B),
    }


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    try:
        ck = importlib.import_module("rlnet._ckernels")
    except ImportError:
        ck = None
        print("compiled kernels not built; timing the fallback only")
    print(f"{'workload':34s} {'cython':>10s} {'python':>10s} {'speedup':>8s}")
    for name, fn in workloads().items():
        tp = best_of(lambda: fn(_pykernels), args.repeat)
        if ck is None:
            print(f"{name:34s} {'-':>10s} {tp:10.4f}")
            continue
        tc = best_of(lambda: fn(ck), args.repeat)
        print(f"{name:34s} {tc:10.4f} {tp:10.4f} {tp / tc:7.0f}x")


if __name__ == "__main__":
    main()
