"""Seeded random instances for tests and experiments.

The seed defaults to ``COMPOSABLE_FABRIC_SEED`` (0 when unset).  Solvers never
read it; only instance generation does.
"""

from __future__ import annotations

import os

import numpy as np

from .topology import KINDS, DataCenter, Node, Pod, Rack, ResourceComponent, Scope
from .workload import AppTemplate, WorkloadSet

SEED_ENV = "COMPOSABLE_FABRIC_SEED"


def default_seed() -> int:
    return int(os.environ.get(SEED_ENV, "0"))


def make_rng(seed: int | None = None) -> np.random.Generator:
    return np.random.default_rng(default_seed() if seed is None else seed)


def random_demand(rng: np.random.Generator, n: int, *, density: float = 0.7,
                  step: float = 50.0, max_steps: int = 12) -> np.ndarray:
    """Integer multiples of ``step`` Gbps on a random subset of ordered pairs."""
    d = rng.integers(0, max_steps + 1, size=(n, n)) * step
    d = d * (rng.random((n, n)) < density)
    np.fill_diagonal(d, 0.0)
    return d.astype(float)


def random_dc(rng: np.random.Generator, n_nodes: int = 4, *, homogeneous: bool = False,
              max_components: int = 3, max_capacity: int = 4, n_racks: int | None = None,
              n_pods: int = 1) -> DataCenter:
    """Nodes spread round-robin over racks and pods.

    With ``homogeneous`` every node holds components of a single kind.
    """
    n_racks = n_racks or int(rng.integers(1, 3))
    racks: list[list[Node]] = [[] for _ in range(n_racks * n_pods)]
    for i in range(n_nodes):
        count = int(rng.integers(1, max_components + 1))
        if homogeneous:
            kind = KINDS[int(rng.integers(len(KINDS)))]
            kinds = [kind] * count
        else:
            kinds = [KINDS[int(rng.integers(len(KINDS)))] for _ in range(count)]
        comps = tuple(ResourceComponent(k, int(rng.integers(1, max_capacity + 1))) for k in kinds)
        racks[i % len(racks)].append(Node(f"n{i}", comps))
    pods = []
    for p in range(n_pods):
        members = racks[p * n_racks:(p + 1) * n_racks]
        pods.append(Pod(f"p{p}", tuple(Rack(f"r{r}", tuple(nodes))
                                       for r, nodes in enumerate(members))))
    return DataCenter(tuple(pods))


def random_workloads(rng: np.random.Generator, n_apps: int = 4, *, max_units: int = 2,
                     scopes=tuple(Scope)) -> WorkloadSet:
    apps = []
    for i in range(n_apps):
        while True:
            units = [int(u) for u in rng.integers(0, max_units + 1, size=3)]
            if any(units):
                break
        scope = scopes[int(rng.integers(len(scopes)))]
        apps.append(AppTemplate(f"app{i}", *units, scope))
    return WorkloadSet(tuple(apps))
