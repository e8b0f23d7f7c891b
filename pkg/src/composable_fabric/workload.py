"""Application infrastructure templates and workload files."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from .topology import KINDS, ResourceKind, Scope

HEADER = ("name", "cpu_units", "ram_units", "storage_units", "latency_scope")


class WorkloadError(ValueError):
    """Malformed workload input or a template that breaks an invariant."""


@dataclass(frozen=True)
class AppTemplate:
    name: str
    cpu_units: int
    ram_units: int
    storage_units: int
    latency_scope: Scope

    def __post_init__(self):
        object.__setattr__(self, "latency_scope", Scope.parse(self.latency_scope))
        for attr in ("cpu_units", "ram_units", "storage_units"):
            v = getattr(self, attr)
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise WorkloadError(f"app {self.name!r}: {attr} must be a non-negative integer")
        if self.cpu_units == self.ram_units == self.storage_units == 0:
            raise WorkloadError(f"app {self.name!r}: all resource demands are zero")

    def demand(self, kind: ResourceKind) -> int:
        return {
            ResourceKind.CPU: self.cpu_units,
            ResourceKind.RAM: self.ram_units,
            ResourceKind.STORAGE: self.storage_units,
        }[kind]

    @property
    def demands(self) -> dict[ResourceKind, int]:
        return {k: self.demand(k) for k in KINDS}

    @property
    def total_units(self) -> int:
        return self.cpu_units + self.ram_units + self.storage_units


@dataclass(frozen=True)
class WorkloadSet:
    apps: tuple[AppTemplate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "apps", tuple(self.apps))
        seen = set()
        for app in self.apps:
            if app.name in seen:
                raise WorkloadError(f"app {app.name!r}: duplicate name")
            seen.add(app.name)

    def __iter__(self) -> Iterator[AppTemplate]:
        return iter(self.apps)

    def __len__(self) -> int:
        return len(self.apps)

    def __getitem__(self, name: str) -> AppTemplate:
        for app in self.apps:
            if app.name == name:
                return app
        raise KeyError(name)

    @property
    def names(self) -> list[str]:
        return [a.name for a in self.apps]


_TABLE1 = (
    ("A", 1, 2, 1, Scope.POD),
    ("B", 1, 1, 2, Scope.POD),
    ("C", 2, 1, 1, Scope.POD),
    ("D", 1, 2, 3, Scope.POD),
    ("E", 3, 1, 2, Scope.POD),
    ("F", 2, 3, 1, Scope.POD),
    ("G", 1, 2, 1, Scope.NODE),
)


def builtin_table1() -> WorkloadSet:
    """The seven reference applications A..G."""
    return WorkloadSet(tuple(AppTemplate(*row) for row in _TABLE1))


def _parse_int(raw: str, line: int, col: str) -> int:
    try:
        return int(raw.strip())
    except (ValueError, AttributeError):
        raise WorkloadError(f"line {line}, field {col!r}: expected integer, got {raw!r}") from None


def loads_workloads(text: str) -> WorkloadSet:
    rows = csv.reader(io.StringIO(text))
    apps: list[AppTemplate] = []
    header = None
    for lineno, row in enumerate(rows, start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        if header is None:
            header = tuple(cell.strip().lower() for cell in row)
            if header != HEADER:
                raise WorkloadError(f"line {lineno}: expected header {','.join(HEADER)}")
            continue
        if len(row) != len(HEADER):
            raise WorkloadError(f"line {lineno}: expected {len(HEADER)} fields, got {len(row)}")
        name = row[0].strip()
        if not name:
            raise WorkloadError(f"line {lineno}, field 'name': empty")
        units = [_parse_int(row[i], lineno, HEADER[i]) for i in (1, 2, 3)]
        try:
            scope = Scope.parse(row[4])
        except ValueError:
            raise WorkloadError(
                f"line {lineno}, field 'latency_scope': unknown scope {row[4]!r}") from None
        apps.append(AppTemplate(name, *units, scope))
    return WorkloadSet(tuple(apps))


def load_workloads(source: "str | Path") -> WorkloadSet:
    """Load a workload CSV file; ``"table1"`` selects the built-in set."""
    if str(source) == "table1":
        return builtin_table1()
    return loads_workloads(Path(source).read_text())


def dumps_workloads(ws: "WorkloadSet | Iterable[AppTemplate]") -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HEADER)
    for app in ws:
        writer.writerow([app.name, app.cpu_units, app.ram_units, app.storage_units,
                         app.latency_scope.label])
    return buf.getvalue()
