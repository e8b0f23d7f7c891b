"""Maximum carried throughput of a rack fabric.

In the targeted design every wavelength is a partial matching between
transmitters and receivers (one transmitter per node and wavelength, one
source per combiner and wavelength, no self-loops).  Stacking the matchings of
all ``W = 2T`` wavelengths gives a multiplicity matrix ``m`` whose row and
column sums are at most ``W``; conversely any such matrix splits back into
``W`` matchings because bipartite multigraphs are edge-colorable with
max-degree colors.  The carried traffic on a pair is
``min(d[s][t], rate * m[s][t])``, concave in ``m``, so the optimum is a
min-cost flow through a row/column network with two parallel arcs per pair
(full wavelengths, then one partial wavelength).
"""

from __future__ import annotations

import heapq
import math
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from ..topology import ValidationResult
from .models import (
    DemandMatrix,
    GenericFabric,
    ScheduleEntry,
    TargetedFabric,
    ThroughputReport,
    as_demand,
    check_dimensions,
    validate_plan,
)

_EPS = 1e-9


class PlanError(ValueError):
    """The targeted fabric's wavelength plan is invalid."""

    def __init__(self, result: ValidationResult):
        super().__init__("; ".join(v.message for v in result.violations))
        self.result = result


class _FlowGraph:
    def __init__(self, n_vertices: int):
        self.head: list[list[int]] = [[] for _ in range(n_vertices)]
        self.to: list[int] = []
        self.cap: list[float] = []
        self.cost: list[float] = []

    def add(self, u: int, v: int, cap: float, cost: float) -> int:
        e = len(self.to)
        self.to += [v, u]
        self.cap += [cap, 0.0]
        self.cost += [cost, -cost]
        self.head[u].append(e)
        self.head[v].append(e + 1)
        return e


def _min_cost_flow(g: _FlowGraph, source: int, sink: int, potential: list[float]) -> None:
    """Augment along shortest paths while they have negative cost.

    ``potential`` must make every residual arc's reduced cost non-negative.
    """
    n = len(g.head)
    while True:
        dist = [math.inf] * n
        prev = [-1] * n
        dist[source] = 0.0
        heap = [(0.0, source)]
        while heap:
            du, u = heapq.heappop(heap)
            if du > dist[u]:
                continue
            for e in g.head[u]:
                if g.cap[e] <= _EPS:
                    continue
                v = g.to[e]
                nd = du + max(0.0, g.cost[e] + potential[u] - potential[v])
                if nd < dist[v] - _EPS:
                    dist[v] = nd
                    prev[v] = e
                    heapq.heappush(heap, (nd, v))
        if math.isinf(dist[sink]):
            return
        for v in range(n):
            potential[v] += min(dist[v], dist[sink])
        path_cost = potential[sink] - potential[source]
        if path_cost >= -_EPS:
            return
        push, v = math.inf, sink
        while v != source:
            e = prev[v]
            push = min(push, g.cap[e])
            v = g.to[e ^ 1]
        v = sink
        while v != source:
            e = prev[v]
            g.cap[e] -= push
            g.cap[e ^ 1] += push
            v = g.to[e ^ 1]


def _pair_gains(demand: float, rate: float, width: int) -> list[tuple[int, float]]:
    """(count, gain per wavelength) pieces for one ordered pair, best first."""
    if demand <= 0:
        return []
    if math.isinf(demand):
        return [(width, rate)]
    full = min(width, int(demand // rate))
    pieces = [(full, rate)] if full else []
    rest = demand - full * rate
    if full < width and rest > 0:
        pieces.append((1, rest))
    return pieces


def optimal_multiplicities(d: np.ndarray, rate: float, width: int) -> np.ndarray:
    """Wavelengths per ordered pair that maximize carried traffic.

    Each row and column sum of the result is at most ``width``.
    """
    n = d.shape[0]
    source, sink = 2 * n, 2 * n + 1
    g = _FlowGraph(2 * n + 2)
    potential = [0.0] * (2 * n + 2)
    for s in range(n):
        g.add(source, s, width, 0.0)
    arcs = []
    for s in range(n):
        for t in range(n):
            if s == t:
                continue
            for count, gain in _pair_gains(float(d[s, t]), rate, width):
                arcs.append((s, t, g.add(s, n + t, count, -gain)))
                potential[n + t] = min(potential[n + t], -gain)
    for t in range(n):
        g.add(n + t, sink, width, 0.0)
    potential[sink] = min(potential[n:2 * n], default=0.0)
    _min_cost_flow(g, source, sink, potential)

    m = np.zeros((n, n), dtype=int)
    for s, t, e in arcs:
        m[s, t] += int(round(g.cap[e ^ 1]))
    return m


def color_edges(m: np.ndarray, width: int) -> list[list[tuple[int, int]]]:
    """Split a multiplicity matrix into ``width`` matchings.

    Classic alternating-path recoloring for bipartite multigraphs; needs every
    row and column sum of ``m`` to be at most ``width``.
    """
    n = m.shape[0]
    at_src: list[dict[int, int]] = [{} for _ in range(n)]  # color -> dest
    at_dst: list[dict[int, int]] = [{} for _ in range(n)]  # color -> source

    def free(table: dict[int, int]) -> int:
        return next(c for c in range(width) if c not in table)

    for s in range(n):
        for t in range(n):
            for _ in range(int(m[s, t])):
                a, b = free(at_src[s]), free(at_dst[t])
                if a in at_dst[t]:
                    # Swap colors a/b along the path leaving t on color a.
                    path, node, on_dst, color = [], t, True, a
                    while True:
                        table = at_dst[node] if on_dst else at_src[node]
                        if color not in table:
                            break
                        other = table[color]
                        edge = (other, node) if on_dst else (node, other)
                        path.append((edge, color))
                        node, on_dst = other, not on_dst
                        color = b if color == a else a
                    for (u, v), c in path:
                        del at_src[u][c]
                        del at_dst[v][c]
                    for (u, v), c in path:
                        nc = b if c == a else a
                        at_src[u][nc] = v
                        at_dst[v][nc] = u
                at_src[s][a] = t
                at_dst[t][a] = s
    matchings = [[] for _ in range(width)]
    for s in range(n):
        for c, t in sorted(at_src[s].items()):
            matchings[c].append((s, t))
    return matchings


def schedule_from_matchings(matchings: Sequence[Sequence[tuple[int, int]]],
                            wavelengths: Sequence[int], d: np.ndarray,
                            rate: float) -> tuple[np.ndarray, tuple[ScheduleEntry, ...]]:
    """Fill wavelengths in order against residual demand; drop empty slots."""
    residual = np.array(d, dtype=float)
    carried = np.zeros_like(residual)
    entries = []
    for wl, matching in zip(wavelengths, matchings):
        for s, t in sorted(matching):
            gbps = min(rate, residual[s, t])
            if gbps <= 0:
                continue
            residual[s, t] -= gbps
            carried[s, t] += gbps
            entries.append(ScheduleEntry(wl, s, t, float(gbps)))
    return carried, tuple(entries)


def _greedy_matchings(d: np.ndarray, rate: float, width: int) -> list[list[tuple[int, int]]]:
    residual = np.array(d, dtype=float)
    out = []
    for _ in range(width):
        w = np.minimum(residual, rate)
        np.fill_diagonal(w, -1.0)
        rows, cols = linear_sum_assignment(w, maximize=True)
        matching = [(int(s), int(t)) for s, t in zip(rows, cols) if s != t and w[s, t] > 0]
        for s, t in matching:
            residual[s, t] -= min(rate, residual[s, t])
        out.append(matching)
    return out


def _require_plan(f: TargetedFabric) -> None:
    result = validate_plan(f)
    if not result.ok:
        raise PlanError(result)


def max_throughput_targeted(f: TargetedFabric, d, strategy: str = "exact") -> ThroughputReport:
    """Carried traffic of the targeted design.

    ``strategy="exact"`` solves the min-cost flow above for any size.
    ``strategy="greedy"`` runs one maximum-weight matching per wavelength
    against the residual demand and marks the report non-optimal.
    """
    _require_plan(f)
    d = as_demand(d)
    check_dimensions(f.n_nodes, d)
    width = f.n_wavelengths
    if strategy == "exact":
        m = optimal_multiplicities(d.values, f.rate_gbps, width)
        matchings = color_edges(m, width)
        optimal = True
    elif strategy == "greedy":
        matchings = _greedy_matchings(d.values, f.rate_gbps, width)
        optimal = False
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    carried, schedule = schedule_from_matchings(matchings, f.plan.wavelengths, d.values,
                                                f.rate_gbps)
    return ThroughputReport("targeted", carried, optimal, d.node_ids, schedule,
                            f.node_capacity_gbps, f.node_capacity_gbps)


def max_throughput_generic(f: GenericFabric, d) -> ThroughputReport:
    """Every ordered pair has its own link; carried = min(demand, link capacity)."""
    d = as_demand(d)
    check_dimensions(f.n_nodes, d)
    carried = np.minimum(d.values, f.link_capacity_gbps)
    np.fill_diagonal(carried, 0.0)
    per_node = f.link_capacity_gbps * (f.n_nodes - 1)
    return ThroughputReport("generic", carried, True, d.node_ids, (), per_node, per_node)
