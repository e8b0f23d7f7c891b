from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from ..topology import ValidationResult, Violation


class DemandError(ValueError):
    """Malformed demand matrix or a demand/fabric size mismatch."""


@dataclass(frozen=True)
class WavelengthPlan:
    """Transmit set of interface 1 (= receive set of interface 2) and vice versa."""

    lambda_a: frozenset[int]
    lambda_b: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "lambda_a", frozenset(self.lambda_a))
        object.__setattr__(self, "lambda_b", frozenset(self.lambda_b))

    @classmethod
    def default(cls, t_per_interface: int) -> "WavelengthPlan":
        return cls(frozenset(range(1, t_per_interface + 1)),
                   frozenset(range(t_per_interface + 1, 2 * t_per_interface + 1)))

    @property
    def wavelengths(self) -> tuple[int, ...]:
        return tuple(sorted(self.lambda_a)) + tuple(sorted(self.lambda_b))

    def transmit_interface(self, wavelength: int) -> int:
        if wavelength in self.lambda_a:
            return 1
        if wavelength in self.lambda_b:
            return 2
        raise KeyError(wavelength)


@dataclass(frozen=True)
class TargetedFabric:
    n_nodes: int
    t_per_interface: int = 4
    rate_gbps: float = 100.0
    plan: WavelengthPlan | None = None
    # Per-node plans, when nodes are described individually; must all equal ``plan``.
    node_plans: tuple[WavelengthPlan, ...] | None = None

    def __post_init__(self):
        if self.n_nodes < 2:
            raise ValueError("a rack fabric needs at least 2 nodes")
        if self.t_per_interface < 1:
            raise ValueError("t_per_interface must be >= 1")
        if not self.rate_gbps > 0:
            raise ValueError("rate_gbps must be positive")
        if self.plan is None:
            object.__setattr__(self, "plan", WavelengthPlan.default(self.t_per_interface))
        if self.node_plans is not None:
            object.__setattr__(self, "node_plans", tuple(self.node_plans))

    @property
    def n_wavelengths(self) -> int:
        return 2 * self.t_per_interface

    @property
    def node_capacity_gbps(self) -> float:
        return 2 * self.t_per_interface * self.rate_gbps

    egress_cap_gbps = node_capacity_gbps
    ingress_cap_gbps = node_capacity_gbps

    @property
    def transceiver_count(self) -> int:
        return self.n_nodes * 2 * self.t_per_interface


@dataclass(frozen=True)
class GenericFabric:
    n_nodes: int
    link_capacity_gbps: float = 800.0

    def __post_init__(self):
        if self.n_nodes < 2:
            raise ValueError("a rack fabric needs at least 2 nodes")
        if not self.link_capacity_gbps > 0:
            raise ValueError("link_capacity_gbps must be positive")

    @property
    def transceiver_count(self) -> int:
        return self.n_nodes * (self.n_nodes - 1)


def validate_plan(f: TargetedFabric) -> ValidationResult:
    """Check the wavelength plan of a targeted fabric."""
    out = []
    plan = f.plan
    t = f.t_per_interface
    if len(plan.lambda_a) != t:
        out.append(Violation("lambda_a", "size",
                             f"lambda_a has {len(plan.lambda_a)} wavelengths, expected {t}"))
    if len(plan.lambda_b) != t:
        out.append(Violation("lambda_b", "size",
                             f"lambda_b has {len(plan.lambda_b)} wavelengths, expected {t}"))
    overlap = plan.lambda_a & plan.lambda_b
    if overlap:
        out.append(Violation("plan", "overlap",
                             f"wavelengths {sorted(overlap)} are in both sets"))
    if f.node_plans is not None:
        if len(f.node_plans) != f.n_nodes:
            out.append(Violation("node_plans", "size",
                                 f"{len(f.node_plans)} node plans for {f.n_nodes} nodes"))
        for i, p in enumerate(f.node_plans):
            if p != plan:
                out.append(Violation(f"node{i}", "mismatch",
                                     "node plan differs from the rack plan"))
    return ValidationResult(tuple(out))


@dataclass(frozen=True, eq=False)
class DemandMatrix:
    """Ordered-pair traffic demands in Gbps; ``inf`` means saturating demand."""

    values: np.ndarray
    node_ids: tuple[str, ...] = ()

    def __post_init__(self):
        d = np.array(self.values, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise DemandError(f"demand matrix must be square, got shape {d.shape}")
        if np.isnan(d).any():
            raise DemandError("demand matrix contains NaN")
        if (d < 0).any():
            raise DemandError("demand matrix has negative entries")
        if np.diagonal(d).any():
            raise DemandError("demand matrix must have a zero diagonal")
        d.setflags(write=False)
        object.__setattr__(self, "values", d)
        ids = tuple(str(i) for i in self.node_ids) or tuple(str(i) for i in range(d.shape[0]))
        if len(ids) != d.shape[0]:
            raise DemandError(f"{len(ids)} node ids for a {d.shape[0]}-node matrix")
        object.__setattr__(self, "node_ids", ids)

    @property
    def n_nodes(self) -> int:
        return self.values.shape[0]

    def __getitem__(self, idx):
        return self.values[idx]

    @classmethod
    def zeros(cls, n: int) -> "DemandMatrix":
        return cls(np.zeros((n, n)))

    @classmethod
    def saturating(cls, n: int) -> "DemandMatrix":
        d = np.full((n, n), math.inf)
        np.fill_diagonal(d, 0.0)
        return cls(d)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.node_ids)
        for row in self.values:
            w.writerow([_fmt(v) for v in row])
        return buf.getvalue()


def _fmt(v: float) -> str:
    if math.isinf(v):
        return "inf"
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def loads_demand(text: str) -> DemandMatrix:
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not rows:
        raise DemandError("empty demand file")
    header = [c.strip() for c in rows[0]]
    n = len(header)
    values = []
    for lineno, row in enumerate(rows[1:], start=2):
        cells = [c.strip() for c in row]
        if len(cells) == n + 1:
            cells = cells[1:]  # tolerate a leading row label
        if len(cells) != n:
            raise DemandError(f"line {lineno}: expected {n} values, got {len(cells)}")
        try:
            values.append([float(c) for c in cells])
        except ValueError:
            raise DemandError(f"line {lineno}: non-numeric demand value") from None
    if len(values) != n:
        raise DemandError(f"expected {n} rows after the header, got {len(values)}")
    return DemandMatrix(np.array(values), tuple(header))


def load_demand(path: "str | Path") -> DemandMatrix:
    return loads_demand(Path(path).read_text())


@dataclass(frozen=True)
class ScheduleEntry:
    wavelength: int
    source: int
    dest: int
    gbps: float


@dataclass(frozen=True, eq=False)
class ThroughputReport:
    design: str
    carried: np.ndarray
    optimal: bool
    node_ids: tuple[str, ...]
    schedule: tuple[ScheduleEntry, ...] = ()
    egress_cap_gbps: float = math.inf
    ingress_cap_gbps: float = math.inf
    meta: dict = field(default_factory=dict)

    @property
    def carried_gbps_total(self) -> float:
        return float(self.carried.sum())

    @property
    def egress_gbps(self) -> np.ndarray:
        return self.carried.sum(axis=1)

    @property
    def ingress_gbps(self) -> np.ndarray:
        return self.carried.sum(axis=0)

    def to_dict(self) -> dict:
        return {
            "design": self.design,
            "optimal": self.optimal,
            "carried_gbps_total": self.carried_gbps_total,
            "egress_cap_gbps": _cap(self.egress_cap_gbps),
            "ingress_cap_gbps": _cap(self.ingress_cap_gbps),
            "node_ids": list(self.node_ids),
            "carried": self.carried.tolist(),
            "schedule": [
                {"wavelength": e.wavelength, "source": self.node_ids[e.source],
                 "dest": self.node_ids[e.dest], "gbps": e.gbps}
                for e in self.schedule
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def schedule_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("wavelength", "source", "dest", "gbps"))
        for e in self.schedule:
            w.writerow((e.wavelength, self.node_ids[e.source], self.node_ids[e.dest], _fmt(e.gbps)))
        return buf.getvalue()


def _cap(value: float) -> float | None:
    return None if math.isinf(value) else float(value)


def report_from_dict(data: dict) -> ThroughputReport:
    ids = tuple(data["node_ids"])
    index = {nid: i for i, nid in enumerate(ids)}
    schedule = tuple(
        ScheduleEntry(int(e["wavelength"]), index[e["source"]], index[e["dest"]], float(e["gbps"]))
        for e in data["schedule"])
    caps = [math.inf if data.get(k) is None else float(data[k])
            for k in ("egress_cap_gbps", "ingress_cap_gbps")]
    return ThroughputReport(data["design"], np.array(data["carried"], dtype=float),
                            bool(data["optimal"]), ids, schedule, *caps)


def check_dimensions(n_nodes: int, d: DemandMatrix) -> None:
    if d.n_nodes != n_nodes:
        raise DemandError(f"demand matrix is {d.n_nodes}x{d.n_nodes}, fabric has {n_nodes} nodes")


def as_demand(d: "DemandMatrix | Sequence[Sequence[float]] | np.ndarray") -> DemandMatrix:
    return d if isinstance(d, DemandMatrix) else DemandMatrix(np.asarray(d, dtype=float))
