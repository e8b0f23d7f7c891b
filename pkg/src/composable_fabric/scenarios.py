"""Reference racks mirroring the disaggregation variants of a composable DC.

Homogeneous nodes hold 12 units of their kind, and the hybrid rack's
heterogeneous node holds 2 units of each kind, so that the latency scope, not
raw capacity, decides which of the reference applications can be placed.
"""

from __future__ import annotations

from pathlib import Path

from .topology import (
    DataCenter,
    DisaggregationConfig,
    DisaggregationMode,
    Node,
    Pod,
    Rack,
    ResourceComponent,
    ResourceKind,
    Scope,
    dump_scenario,
)

HOMOGENEOUS_UNITS = 12
HYBRID_MIXED_UNITS = 2
SERVER_UNITS = 4

CPU, RAM, STORAGE = ResourceKind.CPU, ResourceKind.RAM, ResourceKind.STORAGE


def _homogeneous(node_id: str, kind: ResourceKind, units: int = HOMOGENEOUS_UNITS) -> Node:
    return Node(node_id, (ResourceComponent(kind, units),))


def _server(node_id: str, units: int) -> Node:
    return Node(node_id, tuple(ResourceComponent(k, units) for k in (CPU, RAM, STORAGE)))


def _single_rack(rack_id: str, nodes) -> DataCenter:
    return DataCenter((Pod("pod1", (Rack(rack_id, tuple(nodes)),)),))


def traditional_rack() -> tuple[DataCenter, DisaggregationConfig]:
    """Rack 1: conventional servers, each a node-limited box."""
    nodes = [_server(f"server{i}", SERVER_UNITS) for i in range(1, 4)]
    return _single_rack("rack1", nodes), DisaggregationConfig(DisaggregationMode.NONE, Scope.RACK)


def physical_rack() -> tuple[DataCenter, DisaggregationConfig]:
    """Rack 2: homogeneous nodes pooled at rack scale."""
    nodes = [_homogeneous("cpu1", CPU), _homogeneous("ram1", RAM), _homogeneous("sto1", STORAGE)]
    return _single_rack("rack2", nodes), DisaggregationConfig(DisaggregationMode.PHYSICAL, Scope.RACK)


def logical_rack() -> tuple[DataCenter, DisaggregationConfig]:
    """Rack 3: server chassis reused, components pooled logically DC-wide."""
    nodes = [_server(f"server{i}", SERVER_UNITS) for i in range(1, 4)]
    return _single_rack("rack3", nodes), DisaggregationConfig(DisaggregationMode.LOGICAL, Scope.RACK)


def hybrid_rack() -> tuple[DataCenter, DisaggregationConfig]:
    """Rack 4: one heterogeneous node next to homogeneous ones."""
    nodes = [
        _server("mixed1", HYBRID_MIXED_UNITS),
        _homogeneous("cpu1", CPU),
        _homogeneous("ram1", RAM),
        _homogeneous("sto1", STORAGE),
    ]
    return _single_rack("rack4", nodes), DisaggregationConfig(DisaggregationMode.HYBRID, Scope.RACK)


def pod_scale() -> tuple[DataCenter, DisaggregationConfig]:
    """Racks 5-7: single-kind racks pooled at pod scale."""
    racks = []
    for rack_id, kind, prefix in (("rack5", CPU, "cpu"), ("rack6", RAM, "ram"),
                                  ("rack7", STORAGE, "sto")):
        racks.append(Rack(rack_id, (_homogeneous(f"{prefix}1", kind),
                                    _homogeneous(f"{prefix}2", kind))))
    dc = DataCenter((Pod("pod1", tuple(racks)),))
    return dc, DisaggregationConfig(DisaggregationMode.PHYSICAL, Scope.POD)


BUILTIN = {
    "rack_traditional": traditional_rack,
    "rack_physical": physical_rack,
    "rack_logical": logical_rack,
    "rack_hybrid": hybrid_rack,
    "pod_physical": pod_scale,
}


def emit_builtin_scenarios(directory: "str | Path") -> list[Path]:
    """Write every built-in scenario as ``<name>.json`` into ``directory``."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, build in BUILTIN.items():
        path = out / f"{name}.json"
        path.write_text(dump_scenario(*build()))
        written.append(path)
    return written
