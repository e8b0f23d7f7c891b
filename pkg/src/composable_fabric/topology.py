"""Resource hierarchy of a composable data center.

A data center is a strict tree: pods hold racks, racks hold nodes, nodes hold
resource components.  Each component is of exactly one kind and carries an
integer capacity in abstract units.  How far a component may be combined with
others into a logical server is governed by the disaggregation configuration.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence


class ConfigurationError(ValueError):
    """A node/configuration combination that the disaggregation mode forbids."""


class ResourceKind(str, enum.Enum):
    CPU = "cpu"
    RAM = "ram"
    STORAGE = "storage"

    @classmethod
    def parse(cls, value: "str | ResourceKind") -> "ResourceKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(f"unknown resource kind {value!r}") from None


KINDS: tuple[ResourceKind, ...] = tuple(ResourceKind)


class Scope(enum.IntEnum):
    """Hierarchy levels, ordered from the narrowest to the widest."""

    NODE = 0
    RACK = 1
    POD = 2
    DC = 3

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, value: "str | int | Scope") -> "Scope":
        if isinstance(value, cls):
            return value
        if isinstance(value, int):
            return cls(value)
        try:
            return cls[str(value).strip().upper()]
        except KeyError:
            raise ValueError(f"unknown scope {value!r}") from None


class DisaggregationMode(str, enum.Enum):
    PHYSICAL = "physical"
    LOGICAL = "logical"
    HYBRID = "hybrid"
    # Traditional servers: no disaggregation, every component is node-limited.
    NONE = "none"

    @classmethod
    def parse(cls, value: "str | DisaggregationMode") -> "DisaggregationMode":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(f"unknown disaggregation mode {value!r}") from None


@dataclass(frozen=True)
class ResourceComponent:
    kind: ResourceKind
    capacity: int

    def __post_init__(self):
        object.__setattr__(self, "kind", ResourceKind.parse(self.kind))


@dataclass(frozen=True)
class Node:
    id: str
    components: tuple[ResourceComponent, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))

    @property
    def homogeneous(self) -> bool:
        return len({c.kind for c in self.components}) <= 1


@dataclass(frozen=True)
class Rack:
    id: str
    nodes: tuple[Node, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))


@dataclass(frozen=True)
class Pod:
    id: str
    racks: tuple[Rack, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "racks", tuple(self.racks))


@dataclass(frozen=True)
class ComponentRef:
    """Location of one component inside a data center.

    Ordering follows (pod, rack, node, index) positions, which is the canonical
    order used for every deterministic tie-break.
    """

    pod: int
    rack: int
    node: int
    index: int
    path: tuple[str, str, str] = field(compare=False)

    @property
    def label(self) -> str:
        return "/".join(self.path) + f"#{self.index}"

    def __lt__(self, other: "ComponentRef") -> bool:
        return self.key < other.key

    @property
    def key(self) -> tuple[int, int, int, int]:
        return (self.pod, self.rack, self.node, self.index)

    def entity_key(self, level: Scope) -> tuple[int, ...]:
        """Positional key of the enclosing entity at ``level``."""
        return self.key[: 3 - int(level)]


@dataclass(frozen=True)
class DataCenter:
    pods: tuple[Pod, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "pods", tuple(self.pods))

    def iter_nodes(self) -> Iterator[tuple[tuple[str, str, str], Node]]:
        for pod in self.pods:
            for rack in pod.racks:
                for node in rack.nodes:
                    yield (pod.id, rack.id, node.id), node

    def iter_components(self) -> Iterator[tuple[ComponentRef, Node, ResourceComponent]]:
        for p, pod in enumerate(self.pods):
            for r, rack in enumerate(pod.racks):
                for n, node in enumerate(rack.nodes):
                    for i, comp in enumerate(node.components):
                        ref = ComponentRef(p, r, n, i, (pod.id, rack.id, node.id))
                        yield ref, node, comp

    @property
    def n_components(self) -> int:
        return sum(1 for _ in self.iter_components())

    def total_capacity(self) -> dict[ResourceKind, int]:
        totals = {k: 0 for k in KINDS}
        for _, _, comp in self.iter_components():
            totals[comp.kind] += comp.capacity
        return totals


@dataclass(frozen=True)
class DisaggregationConfig:
    mode: DisaggregationMode = DisaggregationMode.PHYSICAL
    physical_scale: Scope = Scope.RACK

    def __post_init__(self):
        object.__setattr__(self, "mode", DisaggregationMode.parse(self.mode))
        object.__setattr__(self, "physical_scale", Scope.parse(self.physical_scale))


@dataclass(frozen=True)
class Violation:
    entity: str
    code: str
    message: str

    def to_dict(self) -> dict:
        return {"entity": self.entity, "code": self.code, "message": self.message}


@dataclass(frozen=True)
class ValidationResult:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {"ok": self.ok, "violations": [v.to_dict() for v in self.violations]}


def _duplicates(ids: Sequence[str]) -> list[str]:
    seen, dups = set(), []
    for i in ids:
        if i in seen and i not in dups:
            dups.append(i)
        seen.add(i)
    return dups


def validate_dc(dc: DataCenter, cfg: DisaggregationConfig) -> ValidationResult:
    """Check structural invariants and mode/homogeneity consistency.

    Violations are returned as data in traversal order; nothing is raised.
    """
    out: list[Violation] = []
    if cfg.mode in (DisaggregationMode.PHYSICAL, DisaggregationMode.HYBRID):
        if cfg.physical_scale == Scope.NODE:
            out.append(Violation("config", "scale",
                                 "physical_scale must be rack, pod or dc"))

    for dup in _duplicates([p.id for p in dc.pods]):
        out.append(Violation(dup, "duplicate-id", f"pod id {dup!r} is not unique"))
    for pod in dc.pods:
        for dup in _duplicates([r.id for r in pod.racks]):
            out.append(Violation(f"{pod.id}/{dup}", "duplicate-id",
                                 f"rack id {dup!r} is not unique in pod {pod.id!r}"))
        for rack in pod.racks:
            for dup in _duplicates([n.id for n in rack.nodes]):
                out.append(Violation(f"{pod.id}/{rack.id}/{dup}", "duplicate-id",
                                     f"node id {dup!r} is not unique in rack {rack.id!r}"))
            for node in rack.nodes:
                path = f"{pod.id}/{rack.id}/{node.id}"
                for i, comp in enumerate(node.components):
                    if not isinstance(comp.capacity, int) or isinstance(comp.capacity, bool):
                        out.append(Violation(f"{path}#{i}", "capacity",
                                             "capacity must be an integer"))
                    elif comp.capacity < 0:
                        out.append(Violation(f"{path}#{i}", "capacity",
                                             f"negative capacity {comp.capacity}"))
                if cfg.mode == DisaggregationMode.PHYSICAL and not node.homogeneous:
                    out.append(Violation(path, "heterogeneous",
                                         "physical disaggregation requires homogeneous nodes"))
    return ValidationResult(tuple(out))


def utilization_scope(node: Node, cfg: DisaggregationConfig) -> Scope:
    """Widest entity within which the node's components may be combined."""
    mode = cfg.mode
    if mode == DisaggregationMode.LOGICAL:
        return Scope.DC
    if mode == DisaggregationMode.NONE:
        return Scope.NODE
    if cfg.physical_scale == Scope.NODE:
        raise ConfigurationError("physical_scale must be rack, pod or dc")
    if node.homogeneous:
        return cfg.physical_scale
    if mode == DisaggregationMode.HYBRID:
        return Scope.DC
    raise ConfigurationError(
        f"node {node.id!r} is heterogeneous, which physical disaggregation forbids")


# -- scenario files ---------------------------------------------------------

def dc_to_dict(dc: DataCenter) -> dict:
    return {"pods": [
        {"id": pod.id, "racks": [
            {"id": rack.id, "nodes": [
                {"id": node.id, "components": [
                    {"kind": c.kind.value, "capacity": c.capacity}
                    for c in node.components]}
                for node in rack.nodes]}
            for rack in pod.racks]}
        for pod in dc.pods]}


def dc_from_dict(data: dict) -> DataCenter:
    def req(obj, key, where):
        if not isinstance(obj, dict) or key not in obj:
            raise ValueError(f"{where}: missing field {key!r}")
        return obj[key]

    pods = []
    for p, pod in enumerate(req(data, "pods", "scenario")):
        racks = []
        for r, rack in enumerate(req(pod, "racks", f"pods[{p}]")):
            nodes = []
            for n, node in enumerate(req(rack, "nodes", f"pods[{p}].racks[{r}]")):
                where = f"pods[{p}].racks[{r}].nodes[{n}]"
                comps = []
                for i, c in enumerate(req(node, "components", where)):
                    cw = f"{where}.components[{i}]"
                    cap = req(c, "capacity", cw)
                    if not isinstance(cap, int) or isinstance(cap, bool):
                        raise ValueError(f"{cw}.capacity: expected integer, got {cap!r}")
                    try:
                        kind = ResourceKind.parse(req(c, "kind", cw))
                    except ValueError as exc:
                        raise ValueError(f"{cw}.kind: {exc}") from None
                    comps.append(ResourceComponent(kind, cap))
                nodes.append(Node(str(req(node, "id", where)), tuple(comps)))
            racks.append(Rack(str(req(rack, "id", f"pods[{p}].racks[{r}]")), tuple(nodes)))
        pods.append(Pod(str(req(pod, "id", f"pods[{p}]")), tuple(racks)))
    return DataCenter(tuple(pods))


def config_to_dict(cfg: DisaggregationConfig) -> dict:
    return {"mode": cfg.mode.value, "physical_scale": cfg.physical_scale.label}


def config_from_dict(data: dict) -> DisaggregationConfig:
    return DisaggregationConfig(
        mode=data.get("mode", DisaggregationMode.PHYSICAL.value),
        physical_scale=data.get("physical_scale", Scope.RACK.label),
    )


def dump_scenario(dc: DataCenter, cfg: DisaggregationConfig) -> str:
    payload = dc_to_dict(dc)
    payload["disaggregation"] = config_to_dict(cfg)
    return json.dumps(payload, indent=2) + "\n"


def loads_scenario(text: str) -> tuple[DataCenter, DisaggregationConfig]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ValueError("scenario must be a JSON object")
    return dc_from_dict(data), config_from_dict(data.get("disaggregation", {}))


def load_scenario(path: "str | Path") -> tuple[DataCenter, DisaggregationConfig]:
    return loads_scenario(Path(path).read_text())
