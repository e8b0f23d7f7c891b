"""Exact placement of applications onto disaggregated components.

The search works on *placement options*.  An option for an application is a
hierarchy entity (a node, rack, pod or the whole DC) at some level no wider
than the application's latency scope, together with the components inside it
whose utilization scope reaches that level.  Every valid allocation draws its
units from the eligible set of exactly one option, and vice versa.

Once each accepted application has an option, resource kinds decouple: for
one kind the question is a transportation problem between application demands
and component capacities, which is feasible iff Hall's condition holds
(demand of every subset of applications <= capacity reachable from it).
Branch-and-bound enumerates acceptance and options; leaves pick, per kind,
the smallest set of components that still satisfies Hall's condition.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

from ..topology import (
    KINDS,
    ComponentRef,
    ConfigurationError,
    DataCenter,
    DisaggregationConfig,
    ResourceKind,
    Scope,
    utilization_scope,
    validate_dc,
)
from ..workload import AppTemplate, WorkloadSet
from .report import Allocation, Assignment, Feasibility, PlacementReport, RejectReason

EXACT_MAX_COMPONENTS = 16
EXACT_MAX_APPS = 10

_KIND_INDEX = {k: i for i, k in enumerate(KINDS)}


@dataclass(frozen=True)
class _Comp:
    ref: ComponentRef
    kind: ResourceKind
    capacity: int
    scope: Scope


@dataclass(frozen=True)
class _Option:
    level: Scope
    entity: tuple[int, ...]
    masks: tuple[int, ...]  # eligible component bitmask per kind, 0 if not demanded


class _Instance:
    def __init__(self, dc: DataCenter, cfg: DisaggregationConfig):
        result = validate_dc(dc, cfg)
        if not result.ok:
            first = result.violations[0]
            raise ConfigurationError(
                f"data center does not validate: {first.entity}: {first.message}"
                f" ({len(result.violations)} violation(s))")
        self.comps = [
            _Comp(ref, comp.kind, comp.capacity, utilization_scope(node, cfg))
            for ref, node, comp in dc.iter_components()
        ]
        self.capacity = [c.capacity for c in self.comps]

    def residual_vector(self, residual: Mapping[ComponentRef, int] | None) -> list[int]:
        if residual is None:
            return list(self.capacity)
        return [int(residual.get(c.ref, c.capacity)) for c in self.comps]

    def options(self, app: AppTemplate, cap: Sequence[int]) -> list[_Option]:
        """All entity options that can hold ``app`` alone, in canonical order."""
        demands = [app.demand(k) for k in KINDS]
        out = []
        for level in Scope:
            if level > app.latency_scope:
                break
            groups: dict[tuple[int, ...], list[int]] = {}
            for i, c in enumerate(self.comps):
                if c.scope >= level:
                    groups.setdefault(c.ref.entity_key(level), []).append(i)
            for entity, members in groups.items():
                masks = [0, 0, 0]
                room = [0, 0, 0]
                for i in members:
                    k = _KIND_INDEX[self.comps[i].kind]
                    if demands[k]:
                        masks[k] |= 1 << i
                        room[k] += cap[i]
                if all(room[k] >= demands[k] for k in range(3)):
                    out.append(_Option(level, entity, tuple(masks)))
        return out

    def blocking_reason(self, app: AppTemplate, cap: Sequence[int]) -> RejectReason:
        totals = [0, 0, 0]
        for i, c in enumerate(self.comps):
            totals[_KIND_INDEX[c.kind]] += cap[i]
        if any(totals[_KIND_INDEX[k]] < app.demand(k) for k in KINDS):
            return RejectReason.CAPACITY
        return RejectReason.SCOPE


def _prune_dominated(options: list[_Option]) -> list[_Option]:
    """Drop options whose eligible sets are contained in another option's."""
    keep = []
    for i, o in enumerate(options):
        dominated = False
        for j, other in enumerate(options):
            if i == j:
                continue
            subset = all(m & ~om == 0 for m, om in zip(o.masks, other.masks))
            if subset and (o.masks != other.masks or j < i):
                dominated = True
                break
        if not dominated:
            keep.append(o)
    return keep


def _bits(mask: int) -> list[int]:
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _mask_capacity(mask: int, cap: Sequence[int]) -> int:
    return sum(cap[i] for i in _bits(mask))


def _hall_ok(items: Sequence[tuple[int, int]], cap: Sequence[int], last_only: bool = False) -> bool:
    """Supply-demand check for one resource kind.

    ``items`` are (demand, eligible mask) pairs.  With ``last_only`` only the
    subsets containing the final item are checked, which suffices when the
    other items were already known to be jointly feasible.
    """
    m = len(items)
    if m == 0:
        return True
    if last_only:
        top = 1 << (m - 1)
        subsets = (s | top for s in range(top))
    else:
        subsets = range(1, 1 << m)
    for s in subsets:
        demand = 0
        union = 0
        for j in range(m):
            if s >> j & 1:
                demand += items[j][0]
                union |= items[j][1]
        if demand > _mask_capacity(union, cap):
            return False
    return True


def _min_components(items: tuple[tuple[int, int], ...], cap: Sequence[int]) -> int:
    """Smallest component mask (canonically first) that keeps ``items`` feasible."""
    union = 0
    for _, mask in items:
        union |= mask
    candidates = [i for i in _bits(union) if cap[i] > 0]
    need = sum(d for d, _ in items)
    if need == 0:
        return 0
    ranked = sorted((cap[i] for i in candidates), reverse=True)
    lower, acc = len(ranked) + 1, 0
    for r, c in enumerate(ranked, start=1):
        acc += c
        if acc >= need:
            lower = r
            break
    for r in range(lower, len(candidates) + 1):
        for combo in combinations(candidates, r):
            if sum(cap[i] for i in combo) < need:
                continue
            active = 0
            for i in combo:
                active |= 1 << i
            if _hall_ok([(d, m & active) for d, m in items], cap):
                return active
    raise AssertionError("items are infeasible")  # pragma: no cover


def _top_r_bound(items: Sequence[tuple[int, int]], cap: Sequence[int]) -> int:
    need = sum(d for d, _ in items)
    if need == 0:
        return 0
    union = 0
    for _, mask in items:
        union |= mask
    acc = 0
    for r, c in enumerate(sorted((cap[i] for i in _bits(union)), reverse=True), start=1):
        acc += c
        if acc >= need:
            return r
    return len(_bits(union)) + 1


def _fill(items: Sequence[tuple[int, int]], cap: Sequence[int],
          order: Sequence[int] | None = None) -> list[list[tuple[int, int]]]:
    """Turn a Hall-feasible item list into per-item (component, units) lists.

    Components are filled in ``order`` (canonical index order by default);
    each item takes as much as it can from a component while leaving the rest
    of the problem feasible.
    """
    resid = list(cap)
    todo = [list(it) for it in items]
    out: list[list[tuple[int, int]]] = []
    for j in range(len(todo)):
        need, mask = todo[j]
        eligible = _bits(mask)
        if order is not None:
            rank = {c: r for r, c in enumerate(order)}
            eligible.sort(key=lambda c: rank.get(c, len(rank) + c))
        taken = []
        for c in eligible:
            if need == 0:
                break
            x = min(need, resid[c])
            while x > 0:
                resid[c] -= x
                rest = [(need - x, mask)] + [tuple(t) for t in todo[j + 1:]]
                if _hall_ok(rest, resid):
                    break
                resid[c] += x
                x -= 1
            if x > 0:
                taken.append((c, x))
                need -= x
        if need:
            raise AssertionError("fill failed on a feasible instance")  # pragma: no cover
        out.append(taken)
    return out


def _allocation(inst: _Instance, app: AppTemplate,
                per_kind: Mapping[int, list[tuple[int, int]]]) -> Allocation:
    parts = []
    for k in range(3):
        for c, units in per_kind.get(k, []):
            parts.append(Assignment(inst.comps[c].ref, KINDS[k], units))
    parts.sort(key=lambda a: a.component.key)
    return Allocation(app.name, tuple(parts))


def check_feasible(app: AppTemplate, dc: DataCenter, cfg: DisaggregationConfig,
                   residual: Mapping[ComponentRef, int] | None = None) -> Feasibility:
    """Can ``app`` be placed against the residual capacities?

    ``residual`` maps component references to remaining units; components
    missing from it are taken at full capacity.  The witness uses the
    narrowest entity that fits, filled in canonical component order.
    """
    inst = _Instance(dc, cfg)
    cap = inst.residual_vector(residual)
    return _check(inst, app, cap)


def _check(inst: _Instance, app: AppTemplate, cap: Sequence[int],
           order: Sequence[int] | None = None) -> Feasibility:
    options = inst.options(app, cap)
    if not options:
        return Feasibility(False, reason=inst.blocking_reason(app, cap))
    opt = options[0]
    per_kind = {}
    for k, kind in enumerate(KINDS):
        d = app.demand(kind)
        if d:
            per_kind[k] = _fill([(d, opt.masks[k])], cap, order)[0]
    return Feasibility(True, witness=_allocation(inst, app, per_kind))


def _greedy(inst: _Instance, apps: Sequence[AppTemplate]) -> dict[str, Allocation]:
    """First-fit decreasing by total units; already-active components first."""
    cap = list(inst.capacity)
    used: list[int] = []
    placed: dict[str, Allocation] = {}
    for app in sorted(apps, key=lambda a: (-a.total_units, a.name)):
        order = used + [i for i in range(len(cap)) if i not in used]
        result = _check(inst, app, cap, order)
        if not result.feasible:
            continue
        index = {c.ref: i for i, c in enumerate(inst.comps)}
        for a in result.witness.assignments:
            i = index[a.component]
            cap[i] -= a.units
            if i not in used:
                used.append(i)
        placed[app.name] = result.witness
    return placed


class _Search:
    def __init__(self, inst: _Instance, apps: Sequence[AppTemplate]):
        self.inst = inst
        self.apps = list(apps)
        self.cap = inst.capacity
        self.options = [_prune_dominated(inst.options(a, self.cap)) for a in self.apps]
        n = len(self.apps)
        self.placeable_after = [0] * (n + 1)
        for i in range(n - 1, -1, -1):
            self.placeable_after[i] = self.placeable_after[i + 1] + bool(self.options[i])
        self.items: list[list[tuple[int, int]]] = [[], [], []]
        self.owners: list[list[int]] = [[], [], []]
        self.chosen: list[_Option | None] = [None] * n
        self.best: tuple[int, int] | None = None
        self.best_plan: tuple | None = None
        self._memo: dict = {}

    def _lower_active(self) -> int:
        return sum(_top_r_bound(self.items[k], self.cap) for k in range(3))

    def _leaf(self, accepted: int):
        actives = []
        total = 0
        for k in range(3):
            key = (k, tuple(self.items[k]))
            if key not in self._memo:
                self._memo[key] = _min_components(tuple(self.items[k]), self.cap)
            mask = self._memo[key]
            actives.append(mask)
            total += bin(mask).count("1")
        if self.best is None or accepted > self.best[0] or (
                accepted == self.best[0] and total < self.best[1]):
            self.best = (accepted, total)
            self.best_plan = (list(self.chosen), actives,
                              [list(self.items[k]) for k in range(3)],
                              [list(self.owners[k]) for k in range(3)])

    def run(self, i: int = 0, accepted: int = 0):
        if self.best is not None:
            reach = accepted + self.placeable_after[i]
            if reach < self.best[0]:
                return
            if reach == self.best[0] and self._lower_active() >= self.best[1]:
                return
        if i == len(self.apps):
            self._leaf(accepted)
            return
        app = self.apps[i]
        for opt in self.options[i]:
            pushed = []
            ok = True
            for k, kind in enumerate(KINDS):
                d = app.demand(kind)
                if not d:
                    continue
                self.items[k].append((d, opt.masks[k]))
                self.owners[k].append(i)
                pushed.append(k)
                if not _hall_ok(self.items[k], self.cap, last_only=True):
                    ok = False
                    break
            if ok:
                self.chosen[i] = opt
                self.run(i + 1, accepted + 1)
                self.chosen[i] = None
            for k in pushed:
                self.items[k].pop()
                self.owners[k].pop()
        self.run(i + 1, accepted)

    def allocations(self) -> dict[str, Allocation]:
        chosen, actives, items, owners = self.best_plan
        per_app: dict[int, dict[int, list[tuple[int, int]]]] = {}
        for k in range(3):
            restricted = [(d, m & actives[k]) for d, m in items[k]]
            for owner, taken in zip(owners[k], _fill(restricted, self.cap)):
                per_app.setdefault(owner, {})[k] = taken
        return {self.apps[i].name: _allocation(self.inst, self.apps[i], per_app[i])
                for i, opt in enumerate(chosen) if opt is not None}


def _active_count(allocations: Mapping[str, Allocation]) -> int:
    return len({a.component for alloc in allocations.values() for a in alloc.assignments})


def place_all(ws: WorkloadSet, dc: DataCenter, cfg: DisaggregationConfig, *,
              max_exact_components: int = EXACT_MAX_COMPONENTS,
              max_exact_apps: int = EXACT_MAX_APPS) -> PlacementReport:
    """Place a workload set, maximizing accepted apps then minimizing active components.

    Instances above the exact-size bound are solved by first-fit decreasing
    and the report is flagged ``heuristic``.
    """
    inst = _Instance(dc, cfg)
    apps = list(ws.apps)
    heuristic = len(inst.comps) > max_exact_components or len(apps) > max_exact_apps
    if heuristic:
        placed = _greedy(inst, apps)
    else:
        search = _Search(inst, sorted(apps, key=lambda a: a.name))
        search.run()
        placed = search.allocations() if search.best_plan is not None else {}

    accepted = tuple(placed[a.name] for a in apps if a.name in placed)
    rejected = []
    for app in apps:
        if app.name in placed:
            continue
        if inst.options(app, inst.capacity):
            rejected.append((app.name, RejectReason.CAPACITY))
        else:
            rejected.append((app.name, inst.blocking_reason(app, inst.capacity)))
    return PlacementReport(accepted, tuple(rejected), _active_count(placed), heuristic)
