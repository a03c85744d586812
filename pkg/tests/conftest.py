import importlib
from datetime import date

import numpy as np
import pytest

from rlnet import _pykernels, centrality, core_periphery
from rlnet.ingest import GraphSnapshot

try:
    _ckernels = importlib.import_module("rlnet._ckernels")
except ImportError:
    _ckernels = None

BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["cython"] = _ckernels

D0 = date(2005, 7, 4)


@pytest.fixture(params=sorted(BACKENDS))
def backend(request, monkeypatch):
    """Run the test once per available kernel backend."""
    mod = BACKENDS[request.param]
    monkeypatch.setattr(centrality, "kernels", mod)
    monkeypatch.setattr(core_periphery, "kernels", mod)
    return request.param


def snapshot(edges, nodes=None, index=0):
    edges = {tuple(sorted(e)): 1 for e in edges}
    if nodes is None:
        nodes = {v for e in edges for v in e}
    return GraphSnapshot(index, frozenset(nodes), edges, D0, D0)


def random_snapshot(rng, n, p, index=0, min_edges=0):
    names = [f"v{i}" for i in range(n)]
    edges = [(names[i], names[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    if len(edges) < min_edges:
        edges = [(names[0], names[1])]
    return snapshot(edges, nodes=names, index=index)


def adjacency_matrix(snap):
    nodes = sorted(snap.nodes)
    idx = {v: i for i, v in enumerate(nodes)}
    A = np.zeros((len(nodes), len(nodes)), dtype=int)
    for u, v in snap.edges:
        A[idx[u], idx[v]] = A[idx[v], idx[u]] = 1
    return nodes, A
