from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import pytest
from conftest import make_instance
from hypothesis import given
from hypothesis import strategies as st

from tvgroute import (
    BudgetExceeded,
    Client,
    InvariantViolation,
    Limits,
    solve_1sfncs,
    solve_1ufcs,
    solve_1ufmm,
    solve_1ufncs,
    solve_2sfncs,
    solve_exact_upload,
    solve_upload,
)
from tvgroute.generators import random_instance
from tvgroute.graph import SatNode
from tvgroute.instance import Model, RoutingInstance
from tvgroute.oracle import brute_force_cs, brute_force_unicast
from tvgroute.validate import validate_upload


def up(satellites, snapshots, arcs, models, **flags):
    return make_instance("upload", satellites, snapshots, arcs, models, **flags)


# -- splittable, no selection -------------------------------------------


def test_sf_ncs_adjacent_client_starting_last():
    inst = up(2, 2, [((2, 2), (1, 2), 1)], [(1, 1, [Client(2, start=2)])], flow="SF")
    assert solve_1sfncs(inst).feasible


def test_sf_ncs_shared_bottleneck():
    arcs = [((2, 1), (3, 1), 1), ((4, 1), (3, 1), 1), ((3, 1), (1, 1), 1)]
    inst = up(4, 1, arcs, [(1, 1, [2, 4])], flow="SF")
    assert not solve_1sfncs(inst).feasible


def test_sf_ncs_staggered_starts_share_the_bottleneck_over_time():
    arcs = [((2, k), (1, k), 1) for k in (1, 2)] + [((3, k), (2, k), 1) for k in (1, 2)]
    inst = up(3, 2, arcs, [(1, 1, [Client(2, start=2), Client(3, start=1)])], flow="SF")
    assert brute_force_unicast(inst).feasible  # frozen oracle verdict
    sol = solve_1sfncs(inst)
    assert sol.feasible and not validate_upload(inst, sol)
    assert all(p.nodes[0].snapshot >= 1 for p in sol.paths)


def test_2sf_ncs_examples():
    arcs = [((2, 1), (1, 1), 1), ((3, 1), (1, 1), 1)]
    assert solve_2sfncs(up(3, 1, arcs, [(1, 1, [2]), (1, 1, [3])], flow="SF")).feasible
    over = up(2, 2, [((2, k), (1, k), Fraction(3, 4)) for k in (1, 2)], [(1, 1, [2]), (1, 1, [2])], flow="SF")
    assert not solve_2sfncs(over).feasible


@pytest.mark.parametrize("shared_cap, feasible", [(1, False), (2, True)])
def test_2sf_ncs_crossing_flows_through_one_arc(shared_cap, feasible):
    # client 3 uploads to server 1, client 4 to server 2; both cross arc 5 -> 6
    arcs = [((3, 1), (5, 1), 1), ((4, 1), (5, 1), 1), ((5, 1), (6, 1), shared_cap),
            ((6, 1), (1, 1), 1), ((6, 1), (2, 1), 1)]
    inst = up(6, 1, arcs, [(1, 1, [3]), (1, 2, [4])], flow="SF")
    assert inst.servers == "separate"
    assert brute_force_unicast(inst).feasible is feasible  # frozen oracle verdict
    assert solve_2sfncs(inst).feasible is feasible


# -- unsplittable, no selection -----------------------------------------


def test_uf_ncs_examples():
    assert solve_1ufncs(up(2, 1, [((2, 1), (1, 1), 1)], [(1, 1, [2])])).feasible
    tight = up(3, 1, [((2, 1), (1, 1), 1), ((3, 1), (2, 1), 1)], [(1, 1, [2, 3])])
    assert not solve_1ufncs(tight).feasible


def test_uf_ncs_cache_then_forward():
    inst = up(3, 2, [((2, 1), (3, 1), 1), ((3, 2), (1, 2), 1)], [(1, 1, [2])])
    assert brute_force_unicast(inst).feasible  # frozen oracle verdict
    sol = solve_1ufncs(inst)
    assert sol.feasible
    assert sol.paths[0].nodes == (SatNode(2, 1), SatNode(3, 1), SatNode(3, 2), SatNode(1, 2))


def test_upload_ignores_arcs_before_the_start_snapshot():
    inst = up(2, 2, [((2, 1), (1, 1), 1)], [(1, 1, [Client(2, start=2)])])
    assert not solve_1ufncs(inst).feasible


# -- client selection ---------------------------------------------------


def test_cs_all_clients_fit():
    arcs = [((2, 1), (1, 1), 1), ((3, 1), (1, 1), 1)]
    inst = up(3, 1, arcs, [(1, 1, [Client(2, utility=2), Client(3, utility=3)])], cs=True)
    sol = solve_1ufcs(inst)
    assert sol.utility == 5 and sorted(sol.selected) == [(0, 2), (0, 3)]


def test_cs_bottleneck_keeps_the_better_client():
    arcs = [((2, 1), (1, 1), 1), ((3, 1), (2, 1), 1)]
    inst = up(3, 1, arcs, [(1, 1, [Client(2, utility=3), Client(3, utility=5)])], cs=True)
    assert brute_force_cs(inst).value == 5  # frozen oracle value
    sol = solve_1ufcs(inst)
    assert sol.utility == 5 and sol.selected == [(0, 3)]


def test_cs_without_capacity_selects_nobody():
    inst = up(3, 1, [], [(1, 1, [Client(2, utility=3), Client(3, utility=5)])], cs=True)
    sol = solve_1ufcs(inst)
    assert sol.feasible and sol.utility == 0 and sol.selected == []


def test_exact_upload_refuses_oversized_instances():
    with pytest.raises(BudgetExceeded):
        solve_exact_upload(random_instance("2-UF-CS", 5, 3, 2, seed=3), Limits(max_nodes=5))


def test_upload_solvers_check_their_variant():
    with pytest.raises(InvariantViolation):
        solve_1ufcs(up(2, 1, [], [(1, 1, [2])]))


# -- properties ---------------------------------------------------------

VARIANTS = ["1-UF-NCS", "1-UF-CS", "1-SF-NCS", "1-SF-CS", "2-UF-NCS", "2-UF-CS", "2-SF-NCS", "2-SF-CS"]

instances = st.builds(
    lambda variant, seed, separate: random_instance(variant, 4, 3, 2, seed=seed, separate=separate and variant[0] == "2"),
    st.sampled_from(VARIANTS), st.integers(0, 10**6), st.booleans(),
)


@given(instances)
def test_upload_solvers_match_the_oracle(inst):
    sol, exact = solve_upload(inst), solve_exact_upload(inst)
    if inst.cs:
        truth = brute_force_cs(inst)
        assert sol.utility == exact.utility == truth.value
    else:
        truth = brute_force_unicast(inst)
        assert sol.feasible == exact.feasible == truth.feasible
    assert validate_upload(inst, sol) == [] and validate_upload(inst, exact) == []


def restrict(inst: RoutingInstance, keep) -> RoutingInstance:
    model = inst.models[0]
    return RoutingInstance(inst.phase, inst.tvg, (Model(model.size, model.server, tuple(keep)),), flow=inst.flow)


@given(st.integers(0, 10**6))
def test_selection_dominates_every_feasible_subset(seed):
    inst = random_instance("1-UF-CS", 5, 3, 4, seed=seed)
    best = solve_1ufcs(inst)
    clients = inst.models[0].clients
    for r in range(len(clients) + 1):
        for keep in combinations(clients, r):
            if solve_1ufncs(restrict(inst, keep)).feasible:
                assert best.utility >= sum((c.utility for c in keep), Fraction(0))
    if solve_1ufncs(restrict(inst, clients)).feasible:
        assert len(best.selected) == len(clients)


@given(st.integers(0, 10**6))
def test_upload_is_download_with_arcs_reversed(seed):
    inst = random_instance("1-UF-NCS", 4, 3, 2, seed=seed)
    K = inst.tvg.snapshots
    # only a common start keeps the mirror a single-source download
    model = inst.models[0]
    clients = tuple(Client(c.id) for c in model.clients)
    inst = RoutingInstance("upload", inst.tvg, (Model(model.size, model.server, clients),))
    mirrored_arcs = [((v.satellite, K + 1 - v.snapshot), (u.satellite, K + 1 - u.snapshot), cap)
                     for (u, v), cap in inst.tvg.intra.items()]
    down = make_instance("download", inst.tvg.satellites, K, mirrored_arcs,
                         [(model.size, model.server, list(clients))], objective="MM")
    mm = solve_1ufmm(down)
    assert solve_1ufncs(inst).feasible == mm.feasible
