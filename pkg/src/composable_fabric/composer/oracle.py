"""Brute-force placement, used to check the exact solver on small instances."""

from __future__ import annotations

from functools import lru_cache
from itertools import product

from ..topology import (
    KINDS,
    ConfigurationError,
    DataCenter,
    DisaggregationConfig,
    Scope,
    utilization_scope,
    validate_dc,
)
from ..workload import WorkloadSet
from .report import Allocation, Assignment, PlacementReport, RejectReason

ORACLE_MAX_COMPONENTS = 12
ORACLE_MAX_APPS = 7


class OracleBoundError(ValueError):
    """Instance too large for exhaustive enumeration."""


def _splits(units: int, slots: list[int], caps: list[int]):
    """Every way to spread ``units`` over ``slots`` within capacities."""
    if not slots:
        if units == 0:
            yield ()
        return
    head, rest = slots[0], slots[1:]
    for take in range(min(units, caps[head]), -1, -1):
        for tail in _splits(units - take, rest, caps):
            yield ((head, take),) + tail if take else tail


def _span(paths) -> Scope:
    for level in Scope:
        if len({p[: 3 - int(level)] for p in paths}) <= 1:
            return level
    return Scope.DC


def oracle_place(ws: WorkloadSet, dc: DataCenter, cfg: DisaggregationConfig) -> PlacementReport:
    """Enumerate every accept/reject choice and every unit assignment."""
    comps = list(dc.iter_components())
    if len(comps) > ORACLE_MAX_COMPONENTS or len(ws) > ORACLE_MAX_APPS:
        raise OracleBoundError(
            f"oracle limited to {ORACLE_MAX_COMPONENTS} components and {ORACLE_MAX_APPS} apps")
    if not validate_dc(dc, cfg).ok:
        raise ConfigurationError("data center does not validate")

    caps = [c.capacity for _, _, c in comps]
    paths = [ref.path for ref, _, _ in comps]
    scopes = [utilization_scope(node, cfg) for _, node, _ in comps]
    apps = list(ws.apps)

    candidates = []
    for app in apps:
        per_kind = []
        for kind in KINDS:
            slots = [i for i, (_, _, c) in enumerate(comps) if c.kind == kind]
            per_kind.append(list(_splits(app.demand(kind), slots, caps)))
        valid = []
        for combo in product(*per_kind):
            used = [pair for part in combo for pair in part]
            span = _span([paths[i] for i, _ in used])
            if span > app.latency_scope:
                continue
            if any(scopes[i] < span for i, _ in used):
                continue
            valid.append(tuple(sorted(used)))
        candidates.append(valid)

    @lru_cache(maxsize=None)
    def best(i: int, residual: tuple[int, ...]):
        if i == len(apps):
            active = sum(r < c for r, c in zip(residual, caps))
            return (0, -active), ()
        (acc, neg), plan = best(i + 1, residual)
        top = ((acc, neg), (None,) + plan)
        for alloc in candidates[i]:
            if any(residual[c] < u for c, u in alloc):
                continue
            nxt = list(residual)
            for c, u in alloc:
                nxt[c] -= u
            (acc, neg), plan = best(i + 1, tuple(nxt))
            if (acc + 1, neg) > top[0]:
                top = ((acc + 1, neg), (alloc,) + plan)
        return top

    (_, neg_active), plan = best(0, tuple(caps))
    best.cache_clear()

    totals = dc.total_capacity()
    accepted, rejected = [], []
    for i, (app, alloc) in enumerate(zip(apps, plan)):
        if alloc is not None:
            accepted.append(Allocation(app.name, tuple(
                Assignment(comps[c][0], comps[c][2].kind, u) for c, u in alloc)))
        elif candidates[i] or any(totals[k] < app.demand(k) for k in KINDS):
            rejected.append((app.name, RejectReason.CAPACITY))
        else:
            rejected.append((app.name, RejectReason.SCOPE))
    return PlacementReport(tuple(accepted), tuple(rejected), -neg_active)
