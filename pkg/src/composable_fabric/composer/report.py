from __future__ import annotations

import csv
import enum
import io
import json
from dataclasses import dataclass

from ..topology import ComponentRef, ResourceKind, Scope


class RejectReason(str, enum.Enum):
    SCOPE = "scope"
    CAPACITY = "capacity"


@dataclass(frozen=True)
class Assignment:
    component: ComponentRef
    kind: ResourceKind
    units: int


@dataclass(frozen=True)
class Allocation:
    app: str
    assignments: tuple[Assignment, ...]

    def units_by_kind(self) -> dict[ResourceKind, int]:
        out: dict[ResourceKind, int] = {}
        for a in self.assignments:
            out[a.kind] = out.get(a.kind, 0) + a.units
        return out

    @property
    def span(self) -> Scope:
        """Narrowest hierarchy level that contains every assigned component."""
        paths = [a.component.path for a in self.assignments]
        for level in Scope:
            if len({p[: 3 - int(level)] for p in paths}) <= 1:
                return level
        return Scope.DC  # pragma: no cover

    @property
    def entity_path(self) -> str:
        if not self.assignments:
            return ""
        span = self.span
        if span == Scope.DC:
            return "dc"
        return "/".join(self.assignments[0].component.path[: 3 - int(span)])

    def to_dict(self) -> dict:
        return {
            "app": self.app,
            "entity_path": self.entity_path,
            "span": self.span.label,
            "assignments": [
                {"component": a.component.label, "kind": a.kind.value, "units": a.units}
                for a in self.assignments
            ],
        }


@dataclass(frozen=True)
class Feasibility:
    feasible: bool
    witness: Allocation | None = None
    reason: RejectReason | None = None

    def __bool__(self) -> bool:
        return self.feasible


@dataclass(frozen=True)
class PlacementReport:
    accepted: tuple[Allocation, ...] = ()
    rejected: tuple[tuple[str, RejectReason], ...] = ()
    active_components: int = 0
    heuristic: bool = False

    @property
    def objective_value(self) -> tuple[int, int]:
        return (len(self.accepted), self.active_components)

    @property
    def accepted_names(self) -> list[str]:
        return [a.app for a in self.accepted]

    @property
    def rejected_names(self) -> list[str]:
        return [name for name, _ in self.rejected]

    def to_dict(self) -> dict:
        return {
            "accepted": [a.to_dict() for a in self.accepted],
            "rejected": [{"app": n, "reason": r.value} for n, r in self.rejected],
            "active_components": self.active_components,
            "objective_value": list(self.objective_value),
            "heuristic": self.heuristic,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self, order: list[str] | None = None) -> str:
        rows = {a.app: (a.app, "accepted", "", a.entity_path) for a in self.accepted}
        rows.update({n: (n, "rejected", r.value, "") for n, r in self.rejected})
        names = order if order is not None else list(rows)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("app", "status", "reason", "entity_path"))
        for name in names:
            w.writerow(rows[name])
        return buf.getvalue()


def report_from_dict(data: dict) -> PlacementReport:
    """Rebuild a report from its JSON form.

    Component references are restored from their labels.  Positional indices
    are not serialized and come back as zeros, so compare loaded references by
    ``path`` and ``index``.
    """
    accepted = []
    for item in data["accepted"]:
        assignments = []
        for a in item["assignments"]:
            label, idx = a["component"].rsplit("#", 1)
            path = tuple(label.split("/"))
            ref = ComponentRef(0, 0, 0, int(idx), path)
            assignments.append(Assignment(ref, ResourceKind.parse(a["kind"]), int(a["units"])))
        accepted.append(Allocation(item["app"], tuple(assignments)))
    rejected = tuple((r["app"], RejectReason(r["reason"])) for r in data["rejected"])
    return PlacementReport(tuple(accepted), rejected, int(data["active_components"]),
                           bool(data.get("heuristic", False)))
