"""Optical rack fabric models and throughput solvers."""

from .models import (
    DemandError,
    DemandMatrix,
    GenericFabric,
    ScheduleEntry,
    TargetedFabric,
    ThroughputReport,
    WavelengthPlan,
    load_demand,
    loads_demand,
    report_from_dict,
    validate_plan,
)
from .oracle import ORACLE_MAX_NODES, ORACLE_MAX_T, OracleBoundError, oracle_throughput_targeted
from .solver import (
    PlanError,
    color_edges,
    max_throughput_generic,
    max_throughput_targeted,
    optimal_multiplicities,
)

__all__ = [
    "DemandError",
    "DemandMatrix",
    "GenericFabric",
    "ORACLE_MAX_NODES",
    "ORACLE_MAX_T",
    "OracleBoundError",
    "PlanError",
    "ScheduleEntry",
    "TargetedFabric",
    "ThroughputReport",
    "WavelengthPlan",
    "color_edges",
    "load_demand",
    "loads_demand",
    "max_throughput_generic",
    "max_throughput_targeted",
    "optimal_multiplicities",
    "oracle_throughput_targeted",
    "report_from_dict",
    "validate_plan",
]
