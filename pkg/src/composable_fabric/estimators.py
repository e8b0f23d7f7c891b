"""Estimator-style wrappers so the solvers compose with scikit-learn tooling.

Hyper-parameters live in ``__init__`` and are exposed through
``get_params``/``set_params``; fitted state carries a trailing underscore.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .composer import EXACT_MAX_APPS, EXACT_MAX_COMPONENTS, PlacementReport, place_all
from .fabric import (
    GenericFabric,
    TargetedFabric,
    ThroughputReport,
    WavelengthPlan,
    max_throughput_generic,
    max_throughput_targeted,
)
from .topology import DisaggregationConfig
from .validation import check_datacenter, check_demand, check_workloads


class SolverBoundError(RuntimeError):
    """Exact-solver size bound exceeded while heuristics are disallowed."""


class ComposablePlacer(BaseEstimator):
    """Place application templates on a composable data center.

    ``fit`` takes the data center (object or scenario path); ``predict`` takes
    a workload set and returns one acceptance flag per application.  The full
    placement is kept on ``report_``.
    """

    def __init__(self, mode="physical", physical_scale="rack",
                 max_exact_components=EXACT_MAX_COMPONENTS, max_exact_apps=EXACT_MAX_APPS,
                 allow_heuristic=True):
        self.mode = mode
        self.physical_scale = physical_scale
        self.max_exact_components = max_exact_components
        self.max_exact_apps = max_exact_apps
        self.allow_heuristic = allow_heuristic

    def fit(self, dc, y=None):
        cfg = DisaggregationConfig(self.mode, self.physical_scale)
        self.dc_, self.config_ = check_datacenter(dc, cfg)
        self.n_components_ = self.dc_.n_components
        return self

    def place(self, workloads) -> PlacementReport:
        if not hasattr(self, "dc_"):
            raise NotFittedError("ComposablePlacer is not fitted; call fit(dc) first")
        ws = check_workloads(workloads)
        too_big = (self.n_components_ > self.max_exact_components
                   or len(ws) > self.max_exact_apps)
        if too_big and not self.allow_heuristic:
            raise SolverBoundError(
                f"{self.n_components_} components / {len(ws)} apps exceeds the exact bound "
                f"({self.max_exact_components} / {self.max_exact_apps})")
        self.report_ = place_all(ws, self.dc_, self.config_,
                                 max_exact_components=self.max_exact_components,
                                 max_exact_apps=self.max_exact_apps)
        self.workloads_ = ws
        return self.report_

    def predict(self, workloads) -> np.ndarray:
        report = self.place(workloads)
        accepted = set(report.accepted_names)
        return np.array([app.name in accepted for app in self.workloads_], dtype=bool)

    def fit_predict(self, dc, workloads) -> np.ndarray:
        return self.fit(dc).predict(workloads)

    def score(self, workloads, y=None) -> float:
        """Fraction of applications accepted."""
        flags = self.predict(workloads)
        return float(flags.mean()) if flags.size else 1.0


class _ThroughputBase(BaseEstimator):
    def _solve(self, d) -> ThroughputReport:
        raise NotImplementedError

    def fit(self, d, y=None):
        self.report_ = self._solve(d)
        self.carried_ = self.report_.carried
        self.carried_gbps_total_ = self.report_.carried_gbps_total
        self.n_nodes_ = self.carried_.shape[0]
        return self

    def transform(self, d) -> np.ndarray:
        """Carried traffic matrix for demand ``d``."""
        return self._solve(d).carried

    def fit_transform(self, d, y=None) -> np.ndarray:
        return self.fit(d).carried_

    def score(self, d, y=None) -> float:
        """Total carried Gbps."""
        return self._solve(d).carried_gbps_total


class TargetedThroughput(_ThroughputBase):
    """Maximum carried traffic of the targeted (switched wavelength) design."""

    def __init__(self, t_per_interface=4, rate_gbps=100.0, lambda_a=None, lambda_b=None,
                 strategy="exact"):
        self.t_per_interface = t_per_interface
        self.rate_gbps = rate_gbps
        self.lambda_a = lambda_a
        self.lambda_b = lambda_b
        self.strategy = strategy

    def fabric(self, n_nodes: int) -> TargetedFabric:
        plan = None
        if self.lambda_a is not None or self.lambda_b is not None:
            default = WavelengthPlan.default(self.t_per_interface)
            plan = WavelengthPlan(
                default.lambda_a if self.lambda_a is None else frozenset(self.lambda_a),
                default.lambda_b if self.lambda_b is None else frozenset(self.lambda_b))
        return TargetedFabric(n_nodes, self.t_per_interface, self.rate_gbps, plan)

    def _solve(self, d) -> ThroughputReport:
        d = check_demand(d)
        return max_throughput_targeted(self.fabric(d.n_nodes), d, strategy=self.strategy)

    def fit(self, d, y=None):
        super().fit(d)
        self.schedule_ = self.report_.schedule
        return self


class GenericThroughput(_ThroughputBase):
    """Carried traffic of the full-mesh design with one transceiver per link end."""

    def __init__(self, link_capacity_gbps=800.0):
        self.link_capacity_gbps = link_capacity_gbps

    def _solve(self, d) -> ThroughputReport:
        d = check_demand(d)
        return max_throughput_generic(GenericFabric(d.n_nodes, self.link_capacity_gbps), d)
