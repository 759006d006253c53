from __future__ import annotations

import random
from fractions import Fraction

import pytest
from randnets import random_flow_network
from hypothesis import given
from hypothesis import strategies as st

from tvgroute import (
    FlowNetwork,
    GraphError,
    InfeasibleError,
    NegativeCycleError,
    SatNode,
    build_tvg,
    expand_with_client_sinks,
    fractional_feasibility,
    max_flow,
    min_cost_flow,
)
from tvgroute.flow import check_flow_conservation
from tvgroute.oracle import min_cost_flow_brute_force


def net_of(arcs, supplies=None) -> FlowNetwork:
    net = FlowNetwork()
    for a in arcs:
        net.add_arc(*a)
    for v, s in (supplies or {}).items():
        net.add_supply(v, s)
    return net


def test_single_arc_cost():
    f = min_cost_flow(net_of([("s", "t", 1, 3)], {"s": 1, "t": -1}))
    assert f.flow == [1] and f.total_cost == 3


def test_cheaper_parallel_route():
    net = net_of([("s", "a", 1, 0), ("a", "t", 1, 0), ("s", "b", 1, 1), ("b", "t", 1, 0)], {"s": 1, "t": -1})
    assert min_cost_flow(net).total_cost == 0


def test_ladder_earliest_entry_cost():
    # server 1, client 2 reachable only in snapshot 2 of 3
    g = build_tvg(2, 3, [(1, 2, 2, 1, 0)], 1)
    net = expand_with_client_sinks(g, [(2, 1)]).flow_network(1)
    net.add_supply(SatNode(1, 1), 1)
    net.add_supply(expand_with_client_sinks(g, [(2, 1)]).sinks[0], -1)
    arcs = [(a.tail, a.head, a.capacity, a.cost) for a in net.arcs]
    assert min_cost_flow_brute_force(net.nodes, arcs, net.supplies) == 2  # frozen oracle value
    assert min_cost_flow(net).total_cost == 2


def test_unmet_demand_is_infeasible():
    with pytest.raises(InfeasibleError):
        min_cost_flow(net_of([("s", "t", 1, 0)], {"s": 2, "t": -2}))


def test_negative_cycle_is_detected():
    net = net_of([("a", "b", 1, -2), ("b", "a", 1, 1), ("s", "t", 1, 0)], {"s": 1, "t": -1})
    with pytest.raises(NegativeCycleError):
        min_cost_flow(net)


def test_fractional_capacity_rejected_when_integral():
    with pytest.raises(GraphError):
        min_cost_flow(net_of([("s", "t", Fraction(1, 2), 0)], {"s": 1, "t": -1}))


def test_max_flow_examples():
    disconnected = net_of([("s", "a", 1), ("b", "t", 1)])
    assert max_flow(disconnected, "s", "t")[0] == 0
    assert max_flow(net_of([("s", "a", 2), ("a", "t", 1)]), "s", "t")[0] == 1
    diamond = net_of([("s", "a", 1), ("s", "b", 1), ("a", "t", 1), ("b", "t", 1)])
    assert max_flow(diamond, "s", "t")[0] == 2


def test_fractional_examples():
    one = net_of([("s", "t", 1)])
    ok = fractional_feasibility(one, [{"s": 1, "t": -1}])
    assert ok.feasible and ok.min_slack == 0
    short = fractional_feasibility(one, [{"s": 2, "t": -2}])
    assert not short.feasible and short.min_slack == 1


@pytest.mark.parametrize("method", ["lp", "certified", "auto"])
def test_two_commodities_share_one_arc(method):
    net = net_of([("s1", "u", 1), ("s2", "u", 1), ("u", "v", 1), ("v", "t1", 1), ("v", "t2", 1)])
    res = fractional_feasibility(net, [{"s1": 1, "t1": -1}, {"s2": 1, "t2": -1}], method)
    assert not res.feasible
    if method == "lp":
        assert res.min_slack == 1


def test_unbalanced_commodity_rejected():
    with pytest.raises(GraphError):
        fractional_feasibility(net_of([("s", "t", 1)]), [{"s": 1, "t": -2}])


def test_conservation_checker_examples():
    net = net_of([("s", "t", 1)])
    assert check_flow_conservation(net, [0])
    assert not check_flow_conservation(net, [2], {"s": 2, "t": -2})


@given(st.integers(0, 10**9))
def test_min_cost_flow_matches_enumeration(seed):
    net, nodes, arcs, supplies = random_flow_network(random.Random(seed), max_nodes=6, max_arcs=6)
    best = min_cost_flow_brute_force(nodes, arcs, supplies)
    try:
        f = min_cost_flow(net)
    except InfeasibleError:
        assert best is None
        return
    assert all(isinstance(x, int) for x in f.flow)
    assert f.total_cost == best
    assert check_flow_conservation(net, f)


def random_capacitated(rng: random.Random, n: int, density: float, fractional: bool) -> FlowNetwork:
    net = FlowNetwork()
    for v in range(n):
        net.add_node(v)
    for u in range(n):
        for v in range(n):
            if u != v and rng.random() < density:
                cap = Fraction(rng.randint(0, 6), rng.randint(1, 3)) if fractional else rng.randint(0, 3)
                net.add_arc(u, v, cap)
    return net


@given(st.integers(0, 10**9))
def test_single_commodity_lp_matches_max_flow(seed):
    rng = random.Random(seed)
    net = random_capacitated(rng, rng.randint(2, 6), 0.4, True)
    s, t = rng.sample(range(len(net.nodes)), 2)
    d = Fraction(rng.randint(1, 6), rng.randint(1, 2))
    value, _ = max_flow(net, s, t)
    # slack raises existing arcs only, so an unreachable sink has no finite slack
    reach, todo = {s}, [s]
    while todo:
        u = todo.pop()
        for a in net.arcs:
            if a.tail == u and a.head not in reach:
                reach.add(a.head)
                todo.append(a.head)
    auto = fractional_feasibility(net, [{s: d, t: -d}], "auto")
    lp = fractional_feasibility(net, [{s: d, t: -d}], "lp")
    assert auto.feasible == lp.feasible == (value >= d)
    assert auto.min_slack == lp.min_slack
    if t not in reach:
        assert lp.min_slack is None
    else:
        # every missing unit crosses at least one raised arc
        assert lp.min_slack >= d - value and (lp.min_slack == 0) == (value >= d)


@given(st.integers(0, 10**9))
def test_certified_and_exact_simplex_agree(seed):
    rng = random.Random(seed)
    net = random_capacitated(rng, rng.randint(3, 6), 0.45, True)
    commodities = []
    for _ in range(rng.randint(2, 3)):
        s, t = rng.sample(range(len(net.nodes)), 2)
        d = Fraction(rng.randint(1, 4), rng.randint(1, 2))
        commodities.append({s: d, t: -d})
    exact = fractional_feasibility(net, commodities, "lp")
    fast = fractional_feasibility(net, commodities, "certified")
    assert fast.feasible == exact.feasible
    for res in (exact, fast):
        if res.feasible:
            assert all(check_flow_conservation(net, f, c) for f, c in zip(res.flow.commodities, commodities))
            assert all(x <= a.capacity for x, a in zip(res.flow.total(), net.arcs))


@given(st.integers(0, 10**9))
def test_max_flow_output_is_a_flow(seed):
    rng = random.Random(seed)
    net = random_capacitated(rng, rng.randint(2, 7), 0.4, True)
    s, t = rng.sample(range(len(net.nodes)), 2)
    value, flows = max_flow(net, s, t)
    assert check_flow_conservation(net, flows, {s: value, t: -value} if value else {})


def test_decompose_drops_cycles_through_the_source():
    from tvgroute.paths import decompose

    net = net_of([("s", "a", 2), ("a", "s", 1), ("a", "t", 1), ("s", "b", 1), ("b", "s", 1)])
    paths = decompose(net, [2, 1, 1, 1, 1], "s", lambda n: n == "t")
    assert paths == [(["s", "a", "t"], 1)]
