from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tvgroute import (
    AuxSink,
    GraphError,
    SatNode,
    build_tvg,
    expand_with_client_sinks,
    normalize_capacities,
    reachable_set,
    truncate,
)
from tvgroute.generators import generate_random_tvg

N = SatNode


def test_single_snapshot_has_no_cache_arcs():
    g = build_tvg(3, 1, [(1, 2, 1, 1, 1), (2, 3, 1, 1, 1)], 0)
    assert len(g.intra_arcs()) == 4
    assert g.cache_arcs() == []


def test_cache_arcs_take_declared_total():
    g = build_tvg(2, 2, [(1, 2, 1, 1, 1)], 5)
    assert len(g.intra_arcs()) == 2
    assert sorted((a.tail, a.head, a.capacity) for a in g.cache_arcs()) == [
        (N(1, 1), N(1, 2), 5), (N(2, 1), N(2, 2), 5)]


def test_full_chain_cache_arcs():
    links = [(1, 2, k, 1, 1) for k in (1, 2)] + [(2, 3, k, 1, 1) for k in (1, 2)]
    g = build_tvg(3, 2, links, Fraction(7, 2))
    assert {(a.tail, a.head): a.capacity for a in g.cache_arcs()} == {
        (N(i, 1), N(i, 2)): Fraction(7, 2) for i in (1, 2, 3)}


def test_asymmetric_link_and_zero_direction():
    g = build_tvg(2, 1, [(1, 2, 1, Fraction(3, 2), 0)], 0)
    assert g.capacity == {(N(1, 1), N(2, 1)): Fraction(3, 2)}


@pytest.mark.parametrize("links, why", [
    ([(1, 4, 1, 1, 1)], "outside"),
    ([(1, 2, 3, 1, 1)], "outside"),
    ([(1, 2, 1, -1, 1)], "negative"),
    ([(1, 2, 1, 1, 1), (2, 1, 1, 1, 1)], "duplicate"),
])
def test_build_rejects_bad_links(links, why):
    with pytest.raises(GraphError, match=why):
        build_tvg(3, 2, links, 1)


def test_float_capacities_are_rejected():
    with pytest.raises(GraphError):
        build_tvg(2, 1, [(1, 2, 1, 0.5, 1)], 1)


def test_entry_arc_cost_ladder():
    g = build_tvg(2, 3, [], 1)
    x = expand_with_client_sinks(g, [(2, 1)], 1)
    assert sorted(cost for *_, cost in x.entry_arcs) == [1, 2, 3]
    assert {a for _, a, _, _ in x.entry_arcs} == {AuxSink(2)}


def test_single_snapshot_entry_arc():
    x = expand_with_client_sinks(build_tvg(2, 1, [], 1), [(2, 5)])
    assert [(u, cost) for u, _, _, cost in x.entry_arcs] == [(N(2, 1), 5)]


def test_two_clients_entry_costs():
    x = expand_with_client_sinks(build_tvg(3, 2, [], 1), [(2, 1), (3, 2)])
    costs = {}
    for _, a, _, c in x.entry_arcs:
        costs.setdefault(a.client, []).append(c)
    assert costs == {2: [1, 2], 3: [2, 4]}


def test_expand_rejects_unknown_client():
    with pytest.raises(GraphError):
        expand_with_client_sinks(build_tvg(2, 1, [], 1), [(3, 1)])


def test_truncate_examples():
    g = build_tvg(3, 3, [(1, 2, k, 1, 1) for k in (1, 2, 3)], 2)
    assert truncate(g, 3) is g
    one = truncate(g, 1)
    assert one.cache_arcs() == []
    assert len(one.arcs) == len(g.intra_arcs(1))
    with pytest.raises(GraphError):
        truncate(g, 4)


def test_truncated_chain_keeps_snapshot_one_arcs():
    g = build_tvg(3, 2, [(1, 2, k, 1, 1) for k in (1, 2)] + [(2, 3, k, 1, 1) for k in (1, 2)], 2)
    assert len(truncate(g, 1).arcs) == len(g.intra_arcs(1)) == 4


def test_reachable_set_examples():
    g = build_tvg(3, 1, [(1, 2, 1, 1, 0), (2, 3, 1, Fraction(1, 2), 0)], 1)
    assert reachable_set(g, N(3, 1)) == {N(3, 1)}
    assert reachable_set(g, N(1, 1), 1) == {N(1, 1), N(2, 1)}


def test_reachable_only_through_cache():
    g = build_tvg(3, 2, [(1, 2, 1, 1, 0), (2, 3, 2, 1, 0)], 1)
    got = reachable_set(g, N(1, 1), 1)
    assert N(3, 2) in got and N(3, 1) not in got


def test_reachable_rejects_foreign_source():
    with pytest.raises(GraphError):
        reachable_set(build_tvg(2, 1, [], 0), N(3, 1))


@pytest.mark.parametrize("p, q, want", [
    (Fraction(5, 2), 1, 2),
    (1, 1, 1),
    (Fraction(3, 4), 1, 0),
])
def test_normalize_examples(p, q, want):
    net = normalize_capacities(build_tvg(2, 1, [(1, 2, 1, p, 0)], 0), q)
    assert [a.capacity for a in net.arcs] == [want]


def test_normalize_rejects_nonpositive_size():
    with pytest.raises(GraphError):
        normalize_capacities(build_tvg(2, 1, [], 0), 0)


tvgs = st.builds(
    generate_random_tvg,
    satellites=st.integers(1, 5),
    snapshots=st.integers(1, 4),
    density=st.floats(0, 1),
    capacities=st.just((0, Fraction(1, 2), 1, 2)),
    seed=st.integers(0, 10**6),
    model_demand_total=st.integers(0, 5),
)


@given(tvgs)
def test_cache_arc_count_and_shape(g):
    cache = g.cache_arcs()
    assert len(cache) == g.satellites * (g.snapshots - 1)
    assert all(a.tail.satellite == a.head.satellite and a.head.snapshot == a.tail.snapshot + 1 for a in cache)


@given(tvgs, st.integers(1, 3))
def test_expansion_adds_k_arcs_per_client(g, count):
    clients = [(c, 1) for c in range(1, min(count, g.satellites) + 1)]
    x = expand_with_client_sinks(g, clients)
    net = x.flow_network()
    assert len(net.arcs) == len(g.arcs) + len(clients) * g.snapshots
    assert len(net.nodes) == len(g.nodes) + len(clients)
    assert [(a.tail, a.head) for a in net.arcs[:len(g.arcs)]] == [(a.tail, a.head) for a in g.arcs]
    assert all(a.cost == 0 for a in net.arcs[:len(g.arcs)])


@given(tvgs)
def test_truncate_is_monotone(g):
    assert truncate(g, g.snapshots) == g
    for k in range(1, g.snapshots):
        small = {(a.tail, a.head) for a in truncate(g, k).arcs}
        big = {(a.tail, a.head) for a in truncate(g, k + 1).arcs}
        assert small <= big


@given(tvgs, st.sampled_from([0, Fraction(1, 2), 1, 2]), st.sampled_from([0, Fraction(1, 2), 1, 2]))
def test_reachability_shrinks_with_threshold(g, lo, hi):
    lo, hi = min(lo, hi), max(lo, hi)
    src = N(1, 1)
    assert reachable_set(g, src, hi) <= reachable_set(g, src, lo)


def test_random_tvg_examples():
    assert generate_random_tvg(3, 2, 0, seed=1).intra_arcs() == []
    full = generate_random_tvg(3, 2, 1, capacities=(1, 2), seed=1)
    assert all(len(full.intra_arcs(k)) == 6 for k in (1, 2))
    assert generate_random_tvg(4, 3, 0.5, seed=9) == generate_random_tvg(4, 3, 0.5, seed=9)
