import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from composable_fabric.fabric import (
    DemandError,
    DemandMatrix,
    GenericFabric,
    OracleBoundError,
    PlanError,
    TargetedFabric,
    WavelengthPlan,
    color_edges,
    loads_demand,
    max_throughput_generic,
    max_throughput_targeted,
    oracle_throughput_targeted,
    report_from_dict,
    validate_plan,
)
from composable_fabric.instances import random_demand


def brute_force_targeted(d, t, rate):
    """Try every subset of ordered pairs on every wavelength."""
    d = np.asarray(d, dtype=float)
    n = d.shape[0]
    pairs = [(s, u) for s in range(n) for u in range(n) if s != u]
    matchings = []
    for r in range(len(pairs) + 1):
        for subset in itertools.combinations(pairs, r):
            if len({s for s, _ in subset}) == r and len({u for _, u in subset}) == r:
                matchings.append(subset)
    best = 0.0
    for combo in itertools.product(matchings, repeat=2 * t):
        count = np.zeros((n, n))
        for mt in combo:
            for s, u in mt:
                count[s, u] += 1
        best = max(best, float(np.minimum(d, rate * count).sum()))
    return best


def assert_schedule_sound(report, f, d):
    seen_tx, seen_rx = set(), set()
    for e in report.schedule:
        assert e.source != e.dest
        assert (e.wavelength, e.source) not in seen_tx
        assert (e.wavelength, e.dest) not in seen_rx
        seen_tx.add((e.wavelength, e.source))
        seen_rx.add((e.wavelength, e.dest))
        assert e.wavelength in f.plan.lambda_a | f.plan.lambda_b
        assert 0 < e.gbps <= f.rate_gbps
    carried = np.zeros_like(report.carried)
    for e in report.schedule:
        carried[e.source, e.dest] += e.gbps
    np.testing.assert_array_equal(carried, report.carried)
    assert (report.carried <= np.asarray(d.values if hasattr(d, "values") else d)).all()
    cap = 2 * f.t_per_interface * f.rate_gbps
    assert (report.egress_gbps <= cap + 1e-9).all()
    assert (report.ingress_gbps <= cap + 1e-9).all()


def all_pairs(n, value):
    d = np.full((n, n), float(value))
    np.fill_diagonal(d, 0.0)
    return d


# -- plans -----------------------------------------------------------------

def test_default_plan_is_valid():
    f = TargetedFabric(4, 4, 100, WavelengthPlan({1, 2, 3, 4}, {5, 6, 7, 8}))
    assert validate_plan(f).ok
    assert TargetedFabric(4).plan == f.plan


def test_overlapping_plan():
    result = validate_plan(TargetedFabric(3, 1, 100, WavelengthPlan({1}, {1})))
    assert [v.code for v in result.violations] == ["overlap"]


def test_size_mismatch():
    plan = WavelengthPlan({1, 2, 3}, {5, 6, 7, 8})
    result = validate_plan(TargetedFabric(3, 4, 100, plan))
    expected = [len(plan.lambda_a) != 4, len(plan.lambda_b) != 4, bool(plan.lambda_a & plan.lambda_b)]
    assert expected == [True, False, False]
    assert [v.entity for v in result.violations] == ["lambda_a"]


def test_per_node_plans_must_match():
    good = WavelengthPlan.default(2)
    other = WavelengthPlan({3, 4}, {1, 2})
    assert validate_plan(TargetedFabric(2, 2, 100, good, (good, good))).ok
    result = validate_plan(TargetedFabric(2, 2, 100, good, (good, other)))
    assert [v.entity for v in result.violations] == ["node1"]


def test_solver_rejects_invalid_plan():
    with pytest.raises(PlanError):
        max_throughput_targeted(TargetedFabric(2, 1, 100, WavelengthPlan({1}, {1})), np.zeros((2, 2)))


def test_node_capacity_defaults():
    f = TargetedFabric(35)
    assert f.node_capacity_gbps == f.egress_cap_gbps == f.ingress_cap_gbps == 800
    assert f.n_wavelengths == 8


# -- targeted --------------------------------------------------------------

def test_zero_demand():
    report = max_throughput_targeted(TargetedFabric(5), DemandMatrix.zeros(5))
    assert report.carried_gbps_total == 0
    assert report.schedule == ()


def test_three_node_all_pairs():
    d = all_pairs(3, 100)
    expected = brute_force_targeted(d, 1, 100)
    assert expected == 600
    report = max_throughput_targeted(TargetedFabric(3, 1, 100), d)
    assert report.carried_gbps_total == expected
    # each wavelength carries a full 3-cycle
    for wl in (1, 2):
        assert len([e for e in report.schedule if e.wavelength == wl]) == 3


def test_hot_pair_saturates_node_capacity():
    d = np.zeros((35, 35))
    d[0, 1] = 10000
    report = max_throughput_targeted(TargetedFabric(35, 4, 100), d)
    assert report.carried_gbps_total == 800
    assert report.carried[0, 1] == 800
    assert len(report.schedule) == 8


def test_two_node_bidirectional():
    # Each wavelength carries 0->1 and 1->0 at once, so both directions get
    # the full 2*t*rate; brute force agrees.
    d = np.array([[0, 500], [500, 0]], dtype=float)
    expected = brute_force_targeted(d, 1, 100)
    assert expected == 400
    assert oracle_throughput_targeted(TargetedFabric(2, 1, 100), d).carried_gbps_total == expected
    assert max_throughput_targeted(TargetedFabric(2, 1, 100), d).carried_gbps_total == expected


def test_partial_wavelengths():
    d = np.array([[0, 130, 0], [0, 0, 0], [40, 0, 0]], dtype=float)
    expected = brute_force_targeted(d, 1, 100)
    assert expected == 170
    assert max_throughput_targeted(TargetedFabric(3, 1, 100), d).carried_gbps_total == 170


def test_dimension_mismatch():
    with pytest.raises(DemandError):
        max_throughput_targeted(TargetedFabric(3), np.zeros((4, 4)))
    with pytest.raises(DemandError):
        max_throughput_generic(GenericFabric(3), np.zeros((2, 2)))


@pytest.mark.parametrize("seed", range(25))
def test_small_instances_match_brute_force(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 4))
    d = random_demand(rng, n, step=30, max_steps=10)
    f = TargetedFabric(n, 1, 100)
    expected = brute_force_targeted(d, 1, 100)
    assert max_throughput_targeted(f, d).carried_gbps_total == expected
    assert oracle_throughput_targeted(f, d).carried_gbps_total == expected


def test_oracle_bounds():
    with pytest.raises(OracleBoundError):
        oracle_throughput_targeted(TargetedFabric(5, 1), np.zeros((5, 5)))
    with pytest.raises(OracleBoundError):
        oracle_throughput_targeted(TargetedFabric(3, 3), np.zeros((3, 3)))
    assert oracle_throughput_targeted(TargetedFabric(4, 2), np.zeros((4, 4))).carried_gbps_total == 0


def test_greedy_is_flagged_and_never_better():
    rng = np.random.default_rng(7)
    for _ in range(30):
        n = int(rng.integers(3, 8))
        d = random_demand(rng, n)
        f = TargetedFabric(n, 2, 100)
        greedy = max_throughput_targeted(f, d, strategy="greedy")
        exact = max_throughput_targeted(f, d)
        assert not greedy.optimal and exact.optimal
        assert greedy.carried_gbps_total <= exact.carried_gbps_total
        assert_schedule_sound(greedy, f, d)


demands = st.integers(2, 7).flatmap(lambda n: arrays(
    float, (n, n), elements=st.sampled_from([0.0, 25.0, 50.0, 100.0, 150.0, 400.0, 900.0, math.inf])))


@given(demands, st.integers(1, 4), st.sampled_from([50.0, 100.0]))
@settings(max_examples=150, deadline=None)
def test_targeted_invariants(raw, t, rate):
    np.fill_diagonal(raw, 0.0)
    n = raw.shape[0]
    f = TargetedFabric(n, t, rate)
    report = max_throughput_targeted(f, raw)
    assert_schedule_sound(report, f, raw)
    generic = max_throughput_generic(GenericFabric(n, 2 * t * rate), raw)
    assert generic.carried_gbps_total >= report.carried_gbps_total
    assert (generic.carried <= 2 * t * rate).all()


@pytest.mark.parametrize("n,t,rate", [(2, 1, 100), (3, 2, 100), (5, 4, 100), (9, 3, 25), (35, 4, 100)])
def test_saturating_demand(n, t, rate):
    report = max_throughput_targeted(TargetedFabric(n, t, rate), DemandMatrix.saturating(n))
    assert report.carried_gbps_total == n * 2 * t * rate
    for wl in TargetedFabric(n, t, rate).plan.wavelengths:
        assert len([e for e in report.schedule if e.wavelength == wl]) == n


@given(st.integers(2, 7).flatmap(
    lambda n: arrays(int, (n, n), elements=st.integers(0, 3))), st.integers(1, 6))
@settings(max_examples=150, deadline=None)
def test_edge_coloring_is_proper(m, width):
    np.fill_diagonal(m, 0)
    # shrink rows/columns until every degree fits in ``width``
    while m.sum(axis=1).max() > width or m.sum(axis=0).max() > width:
        s, t = np.unravel_index(np.argmax(m), m.shape)
        m[s, t] -= 1
    matchings = color_edges(m, width)
    count = np.zeros_like(m)
    for mt in matchings:
        assert len({s for s, _ in mt}) == len(mt)
        assert len({t for _, t in mt}) == len(mt)
        for s, t in mt:
            count[s, t] += 1
    np.testing.assert_array_equal(count, m)


# -- generic ---------------------------------------------------------------

def test_generic_examples():
    d = all_pairs(3, 100)
    assert max_throughput_generic(GenericFabric(3, 800), d).carried_gbps_total == \
        float(np.minimum(d, 800).sum()) == 600
    hot = np.zeros((3, 3))
    hot[0, 1] = 10000
    assert max_throughput_generic(GenericFabric(3), hot).carried_gbps_total == 800
    assert max_throughput_generic(GenericFabric(4), np.zeros((4, 4))).carried_gbps_total == 0
    assert max_throughput_generic(GenericFabric(4), np.zeros((4, 4))).optimal


def test_generic_transceivers():
    assert GenericFabric(35).transceiver_count == 35 * 34
    assert TargetedFabric(35).transceiver_count == 35 * 8


# -- files -----------------------------------------------------------------

def test_demand_validation():
    with pytest.raises(DemandError):
        DemandMatrix(np.ones((3, 3)))
    with pytest.raises(DemandError):
        DemandMatrix(-all_pairs(3, 1))
    with pytest.raises(DemandError):
        DemandMatrix(np.zeros((2, 3)))
    with pytest.raises(DemandError):
        DemandMatrix(np.full((2, 2), np.nan))


def test_demand_csv_round_trip():
    d = DemandMatrix(np.array([[0, 1.5, math.inf], [2, 0, 0], [0, 300, 0]]), ("a", "b", "c"))
    back = loads_demand(d.to_csv())
    assert back.node_ids == ("a", "b", "c")
    np.testing.assert_array_equal(back.values, d.values)
    labelled = loads_demand("a,b\na,0,5\nb,7,0\n")
    np.testing.assert_array_equal(labelled.values, [[0, 5], [7, 0]])
    with pytest.raises(DemandError, match="line 3"):
        loads_demand("a,b\n0,1\n1\n")


def test_report_json_and_schedule_csv():
    d = DemandMatrix(all_pairs(3, 100), ("x", "y", "z"))
    report = max_throughput_targeted(TargetedFabric(3, 1, 100), d)
    back = report_from_dict(json.loads(report.to_json()))
    assert back.to_json() == report.to_json()
    lines = report.schedule_csv().splitlines()
    assert lines[0] == "wavelength,source,dest,gbps"
    assert len(lines) == 7
    assert all(line.split(",")[1] in "xyz" for line in lines[1:])
