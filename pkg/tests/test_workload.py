import pytest
from hypothesis import given, strategies as st

from composable_fabric.topology import Scope
from composable_fabric.workload import (
    AppTemplate,
    WorkloadError,
    WorkloadSet,
    builtin_table1,
    dumps_workloads,
    load_workloads,
    loads_workloads,
)

# The reference table, typed in independently of the package copy.
TABLE = """\
name,cpu_units,ram_units,storage_units,latency_scope
A,1,2,1,pod
B,1,1,2,pod
C,2,1,1,pod
D,1,2,3,pod
E,3,1,2,pod
F,2,3,1,pod
G,1,2,1,node
"""


def test_table_file_loads_seven_apps():
    ws = loads_workloads(TABLE)
    assert ws.names == list("ABCDEFG")
    assert ws["G"].latency_scope == Scope.NODE


def test_builtin_matches_table_file():
    assert builtin_table1() == loads_workloads(TABLE)
    assert load_workloads("table1") == builtin_table1()


def test_builtin_rows():
    ws = builtin_table1()
    e = ws["E"]
    assert (e.cpu_units, e.ram_units, e.storage_units) == (3, 1, 2)
    a, g = ws["A"], ws["G"]
    assert a.demands == g.demands
    assert a.latency_scope != g.latency_scope


def test_total_cpu_demand():
    column = [int(line.split(",")[1]) for line in TABLE.splitlines()[1:]]
    assert sum(app.cpu_units for app in builtin_table1()) == sum(column) == 11


def test_empty_inputs():
    assert len(loads_workloads("")) == 0
    assert len(loads_workloads("name,cpu_units,ram_units,storage_units,latency_scope\n")) == 0


def test_all_zero_app_is_rejected_by_name():
    with pytest.raises(WorkloadError, match="'Z'.*zero"):
        loads_workloads(TABLE + "Z,0,0,0,rack\n")


def test_parse_errors_name_line_and_field():
    with pytest.raises(WorkloadError, match="line 3, field 'ram_units'"):
        loads_workloads(TABLE.splitlines()[0] + "\nA,1,1,1,pod\nB,1,x,1,pod\n")
    with pytest.raises(WorkloadError, match="line 2, field 'latency_scope'"):
        loads_workloads(TABLE.splitlines()[0] + "\nA,1,1,1,region\n")
    with pytest.raises(WorkloadError, match="line 1"):
        loads_workloads("a,b,c\n")
    with pytest.raises(WorkloadError, match="line 2: expected 5"):
        loads_workloads(TABLE.splitlines()[0] + "\nA,1,1\n")


def test_duplicate_and_negative():
    with pytest.raises(WorkloadError, match="duplicate"):
        loads_workloads(TABLE + "A,1,1,1,rack\n")
    with pytest.raises(WorkloadError, match="non-negative"):
        AppTemplate("X", -1, 1, 1, Scope.POD)


def test_builtin_passes_loader_validation():
    assert loads_workloads(dumps_workloads(builtin_table1())) == builtin_table1()


names = st.text(alphabet="abcdefghijklmnopqrstuvwxyz0123456789_-", min_size=1, max_size=8)
units = st.integers(0, 20)


@st.composite
def workload_sets(draw):
    picked = draw(st.lists(names, unique=True, max_size=8))
    apps = []
    for name in picked:
        demand = draw(st.tuples(units, units, units).filter(any))
        apps.append(AppTemplate(name, *demand, draw(st.sampled_from(list(Scope)))))
    return WorkloadSet(tuple(apps))


@given(workload_sets())
def test_round_trip(ws):
    assert loads_workloads(dumps_workloads(ws)) == ws
