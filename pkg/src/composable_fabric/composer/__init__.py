"""Composition of logical servers from disaggregated components."""

from .oracle import ORACLE_MAX_APPS, ORACLE_MAX_COMPONENTS, OracleBoundError, oracle_place
from .report import (
    Allocation,
    Assignment,
    Feasibility,
    PlacementReport,
    RejectReason,
    report_from_dict,
)
from .solver import EXACT_MAX_APPS, EXACT_MAX_COMPONENTS, check_feasible, place_all

__all__ = [
    "Allocation",
    "Assignment",
    "EXACT_MAX_APPS",
    "EXACT_MAX_COMPONENTS",
    "Feasibility",
    "ORACLE_MAX_APPS",
    "ORACLE_MAX_COMPONENTS",
    "OracleBoundError",
    "PlacementReport",
    "RejectReason",
    "check_feasible",
    "oracle_place",
    "place_all",
    "report_from_dict",
]
