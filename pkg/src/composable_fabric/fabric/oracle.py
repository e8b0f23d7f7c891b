"""Exhaustive search over per-wavelength matchings for tiny targeted fabrics."""

from __future__ import annotations

from itertools import combinations_with_replacement

import numpy as np

from .models import TargetedFabric, ThroughputReport, as_demand, check_dimensions, validate_plan
from .solver import PlanError, schedule_from_matchings

ORACLE_MAX_NODES = 4
ORACLE_MAX_T = 2


class OracleBoundError(ValueError):
    """Fabric too large for exhaustive enumeration."""


def _matchings(pairs: list[tuple[int, int]]):
    """Every matching (no shared source, no shared destination) over ``pairs``."""
    def grow(i, used_src, used_dst, acc):
        if i == len(pairs):
            yield tuple(acc)
            return
        yield from grow(i + 1, used_src, used_dst, acc)
        s, t = pairs[i]
        if s not in used_src and t not in used_dst:
            acc.append((s, t))
            yield from grow(i + 1, used_src | {s}, used_dst | {t}, acc)
            acc.pop()
    yield from grow(0, frozenset(), frozenset(), [])


def _maximal(matchings, pairs):
    out = []
    for mt in matchings:
        srcs = {s for s, _ in mt}
        dsts = {t for _, t in mt}
        if not any(s not in srcs and t not in dsts for s, t in pairs):
            out.append(mt)
    return out


def oracle_throughput_targeted(f: TargetedFabric, d) -> ThroughputReport:
    """Best carried traffic over every assignment of matchings to wavelengths.

    Wavelengths are interchangeable, so assignments are enumerated as
    multisets.  Only pairs with positive demand are considered and only
    maximal matchings over them, since adding a pair to a wavelength never
    reduces carried traffic.
    """
    if f.n_nodes > ORACLE_MAX_NODES or f.t_per_interface > ORACLE_MAX_T:
        raise OracleBoundError(
            f"oracle limited to {ORACLE_MAX_NODES} nodes and t <= {ORACLE_MAX_T}")
    result = validate_plan(f)
    if not result.ok:
        raise PlanError(result)
    d = as_demand(d)
    check_dimensions(f.n_nodes, d)
    n, rate, width = f.n_nodes, f.rate_gbps, f.n_wavelengths

    pairs = [(s, t) for s in range(n) for t in range(n) if s != t and d.values[s, t] > 0]
    candidates = _maximal(list(_matchings(pairs)), pairs)

    best_total, best_combo = -1.0, None
    for combo in combinations_with_replacement(range(len(candidates)), width):
        count = np.zeros((n, n))
        for idx in combo:
            for s, t in candidates[idx]:
                count[s, t] += 1
        total = float(np.minimum(d.values, rate * count).sum())
        if total > best_total:
            best_total, best_combo = total, combo

    matchings = [candidates[i] for i in best_combo]
    carried, schedule = schedule_from_matchings(matchings, f.plan.wavelengths, d.values, rate)
    return ThroughputReport("targeted", carried, True, d.node_ids, schedule,
                            f.node_capacity_gbps, f.node_capacity_gbps)
