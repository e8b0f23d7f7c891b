"""Exit criteria.  Each test reports one PASS/FAIL line in the terminal summary."""

import time
from fractions import Fraction

import numpy as np
import pytest

from composable_fabric import scenarios
from composable_fabric.composer import RejectReason, oracle_place, place_all
from composable_fabric.cost import CostParams, cost_ratio
from composable_fabric.fabric import (
    DemandMatrix,
    GenericFabric,
    TargetedFabric,
    max_throughput_generic,
    max_throughput_targeted,
    oracle_throughput_targeted,
)
from composable_fabric.instances import make_rng, random_dc, random_demand, random_workloads
from composable_fabric.topology import DisaggregationConfig, Scope
from composable_fabric.workload import builtin_table1

pytestmark = pytest.mark.acceptance


@pytest.fixture
def criterion(request):
    def tag(number, title):
        request.node.user_properties.append(("criterion", number))
        request.node.user_properties.append(("title", title))
    return tag


def test_cost_ratio_law(criterion):
    criterion(1, "cost ratio = (N-1)/Y exactly for N in 2..64, Y in 1..40, < 1 s")
    start = time.perf_counter()
    for n in range(2, 65):
        for y in range(1, 41):
            assert cost_ratio(CostParams(n, price_targeted_per_gbps=y)) == Fraction(n - 1, y)
    assert time.perf_counter() - start < 1.0


def test_headline_ratio(criterion):
    criterion(2, "cost ratio at N=35 is 34 (Y=1) and below 1 (Y=40)")
    assert cost_ratio(CostParams(35, price_targeted_per_gbps=1)) == 34
    assert cost_ratio(CostParams(35, price_targeted_per_gbps=40)) < 1


def test_node_capacity(criterion):
    criterion(3, "targeted node egress/ingress cap 800 Gbps; hot pair saturates at 800")
    f = TargetedFabric(35)
    assert f.egress_cap_gbps == 800 and f.ingress_cap_gbps == 800
    d = np.zeros((35, 35))
    d[0, 1] = 10000
    report = max_throughput_targeted(f, d)
    assert report.egress_cap_gbps == 800 and report.ingress_cap_gbps == 800
    assert report.carried_gbps_total == 800


def test_throughput_dominance(criterion):
    criterion(4, "generic >= targeted on 100+ random matrices; saturating ratio N-1, < 30 s")
    start = time.perf_counter()
    rng = make_rng(4)
    for _ in range(120):
        n = int(rng.integers(3, 9))
        d = random_demand(rng, n)
        targeted = max_throughput_targeted(TargetedFabric(n), d).carried_gbps_total
        generic = max_throughput_generic(GenericFabric(n), d).carried_gbps_total
        assert generic >= targeted
    for n in range(3, 9):
        d = DemandMatrix.saturating(n)
        targeted = max_throughput_targeted(TargetedFabric(n), d).carried_gbps_total
        generic = max_throughput_generic(GenericFabric(n), d).carried_gbps_total
        assert generic == n * (n - 1) * 800
        assert targeted == n * 800
        assert generic == (n - 1) * targeted
    assert time.perf_counter() - start < 30.0


def test_throughput_oracle_equivalence(criterion):
    criterion(5, "solver total == exhaustive oracle total on 60 instances N<=4, T<=2, < 60 s")
    start = time.perf_counter()
    rng = make_rng(5)
    for i in range(60):
        n = int(rng.integers(2, 5))
        t = int(rng.integers(1, 3))
        d = random_demand(rng, n, step=25.0, max_steps=16)
        f = TargetedFabric(n, t, 100.0)
        assert (max_throughput_targeted(f, d).carried_gbps_total
                == oracle_throughput_targeted(f, d).carried_gbps_total), i
    assert time.perf_counter() - start < 60.0


def test_placement_reproduction(criterion):
    criterion(6, "physical rack: A..F accepted, G rejected for scope; hybrid: all 7")
    ws = builtin_table1()
    dc, cfg = scenarios.physical_rack()
    report = place_all(ws, dc, cfg)
    assert set(report.accepted_names) == set("ABCDEF")
    assert report.rejected == (("G", RejectReason.SCOPE),)
    dc, cfg = scenarios.hybrid_rack()
    assert set(place_all(ws, dc, cfg).accepted_names) == set("ABCDEFG")


def test_placement_oracle_equivalence(criterion):
    criterion(7, "place_all objective == oracle objective on 60 random instances, < 60 s")
    start = time.perf_counter()
    rng = make_rng(7)
    modes = ["physical", "hybrid", "logical"]
    for i in range(60):
        homogeneous = i % 2 == 0
        dc = random_dc(rng, 4, homogeneous=homogeneous, n_pods=1 + i % 2)
        ws = random_workloads(rng, 4)
        mode = modes[i % 3] if homogeneous else modes[1 + i % 2]
        cfg = DisaggregationConfig(mode, [Scope.RACK, Scope.POD, Scope.DC][i % 3])
        assert place_all(ws, dc, cfg).objective_value == oracle_place(ws, dc, cfg).objective_value, i
    assert time.perf_counter() - start < 60.0


def test_mode_monotonicity(criterion):
    criterion(8, "accepted count LOGICAL >= HYBRID >= PHYSICAL on random instances")
    rng = make_rng(8)
    for i in range(40):
        dc = random_dc(rng, 5, homogeneous=True, n_pods=1 + i % 2)
        ws = random_workloads(rng, 5)
        scale = [Scope.RACK, Scope.POD, Scope.DC][i % 3]
        logical, hybrid, physical = (
            len(place_all(ws, dc, DisaggregationConfig(m, scale)).accepted)
            for m in ("logical", "hybrid", "physical"))
        assert logical >= hybrid >= physical
