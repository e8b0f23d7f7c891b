"""Input coercion shared by the estimators and the command line."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

import numpy as np

from .fabric.models import DemandMatrix, check_dimensions, load_demand
from .topology import (
    ConfigurationError,
    DataCenter,
    DisaggregationConfig,
    load_scenario,
    validate_dc,
)
from .workload import AppTemplate, WorkloadSet, load_workloads


def check_demand(d, n_nodes: int | None = None) -> DemandMatrix:
    """Accept a DemandMatrix, an array-like, or a CSV path."""
    if isinstance(d, (str, Path)):
        d = load_demand(d)
    elif not isinstance(d, DemandMatrix):
        d = DemandMatrix(np.asarray(d, dtype=float))
    if n_nodes is not None:
        check_dimensions(n_nodes, d)
    return d


def check_workloads(ws: "WorkloadSet | Iterable[AppTemplate] | str | Path") -> WorkloadSet:
    if isinstance(ws, WorkloadSet):
        return ws
    if isinstance(ws, (str, Path)):
        return load_workloads(ws)
    return WorkloadSet(tuple(ws))


def check_datacenter(dc: "DataCenter | str | Path",
                     cfg: DisaggregationConfig | None = None) -> tuple[DataCenter, DisaggregationConfig]:
    """Load if needed and raise ConfigurationError listing every violation."""
    if isinstance(dc, (str, Path)):
        dc, file_cfg = load_scenario(dc)
        cfg = cfg or file_cfg
    cfg = cfg or DisaggregationConfig()
    result = validate_dc(dc, cfg)
    if not result.ok:
        lines = "; ".join(f"{v.entity}: {v.message}" for v in result.violations)
        raise ConfigurationError(f"invalid data center: {lines}")
    return dc, cfg
