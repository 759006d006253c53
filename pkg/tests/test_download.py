from __future__ import annotations

from dataclasses import replace
from fractions import Fraction

import pytest
from conftest import line3, make_instance
from hypothesis import given
from hypothesis import strategies as st

from tvgroute import (
    BudgetExceeded,
    Client,
    InvariantViolation,
    Limits,
    solve_1sfmm,
    solve_1ufmm,
    solve_1ufws,
    solve_2sfmm,
    solve_download,
    solve_exact_download,
    solve_mul1mm,
    solve_mul1ws,
)
from tvgroute.download import polynomial_solver
from tvgroute.generators import random_instance
from tvgroute.graph import from_arcs
from tvgroute.oracle import brute_force_multicast, brute_force_unicast
from tvgroute.reductions import CnfFormula, reduce_3sat_to_2ufmm
from tvgroute.validate import validate_download


def adjacent(weight=1, q=1, K=1, **flags):
    return make_instance("download", 2, K, [((1, k), (2, k), q) for k in range(1, K + 1)],
                         [(q, 1, [Client(2, Fraction(weight))])], **flags)


# -- 1-UF-WS ------------------------------------------------------------


def test_ws_adjacent_client():
    assert solve_1ufws(adjacent(weight=2)).objective == 2


def test_ws_line3():
    inst = line3()
    assert brute_force_unicast(inst).value == 3  # frozen oracle value
    sol = solve_1ufws(inst)
    assert sol.objective == 3 and sorted(sol.arrivals.values()) == [1, 2]


def test_ws_line3_heavy_far_client():
    inst = line3(weights=(1, 10))
    oracle = brute_force_unicast(inst)
    assert oracle.value == 12 and oracle.arrivals == {2: 2, 3: 1}  # frozen oracle values
    sol = solve_1ufws(inst)
    assert sol.objective == 12 and sol.arrivals == {2: 2, 3: 1}


def test_ws_unreachable_client_is_infeasible():
    inst = make_instance("download", 3, 2, [((1, 1), (2, 1), 1)], [(1, 1, [2, 3])])
    sol = solve_1ufws(inst)
    assert sol.status == "infeasible" and sol.objective is None and not sol.paths


def test_ws_needs_whole_model_per_arc():
    # two half-capacity routes cannot carry an unsplittable unit model
    arcs = [((1, 1), (2, 1), Fraction(1, 2)), ((1, 1), (3, 1), Fraction(1, 2)), ((3, 1), (2, 1), Fraction(1, 2))]
    assert not solve_1ufws(make_instance("download", 3, 1, arcs, [(1, 1, [2])])).feasible


# -- 1-UF-MM ------------------------------------------------------------


def test_mm_examples():
    assert solve_1ufmm(adjacent(objective="MM")).objective == 1
    assert brute_force_unicast(line3(objective="MM")).value == 2  # frozen oracle value
    assert solve_1ufmm(line3(objective="MM")).objective == 2
    dead = make_instance("download", 2, 2, [((1, k), (2, k), 0) for k in (1, 2)], [(1, 1, [2])], objective="MM")
    assert solve_1ufmm(dead).status == "infeasible"


def test_mm_bisection_matches_scan():
    for seed in range(15):
        inst = random_instance("1-UF-MM", 5, 4, 3, seed=seed)
        assert solve_1ufmm(inst).objective == solve_1ufmm(inst, bisection=True).objective


# -- SF-MM --------------------------------------------------------------


def test_sf_mm_forced_split_over_time():
    inst = make_instance("download", 2, 2, [((1, k), (2, k), Fraction(1, 2)) for k in (1, 2)], [(1, 1, [2])],
                         flow="SF", objective="MM")
    sol = solve_1sfmm(inst)
    assert sol.objective == 2
    assert sum(p.amount for p in sol.paths) == 1


def test_sf_mm_line3():
    inst = line3(flow="SF", objective="MM")
    assert brute_force_unicast(inst).value == 2  # frozen oracle value
    assert solve_1sfmm(inst).objective == 2


def test_sf_mm_split_across_paths():
    arcs = [((1, 1), (3, 1), Fraction(1, 2)), ((3, 1), (2, 1), Fraction(1, 2)),
            ((1, 1), (4, 1), Fraction(1, 2)), ((4, 1), (2, 1), Fraction(1, 2))]
    uf = make_instance("download", 4, 1, arcs, [(1, 1, [2])], objective="MM")
    assert not solve_1ufmm(uf).feasible
    sol = solve_1sfmm(uf.with_variant("1-SF-MM"))
    assert sol.objective == 1 and len(sol.paths) == 2


def test_2sf_mm_disjoint_clients():
    arcs = [((1, 1), (2, 1), 1), ((1, 1), (3, 1), 1)]
    inst = make_instance("download", 3, 1, arcs, [(1, 1, [2]), (1, 1, [3])], flow="SF", objective="MM")
    assert solve_2sfmm(inst).objective == 1


def test_2sf_mm_shared_client_needs_two_snapshots():
    arcs = [((1, k), (2, k), Fraction(3, 2)) for k in (1, 2)]
    inst = make_instance("download", 2, 2, arcs, [(1, 1, [2]), (1, 1, [2])], flow="SF", objective="MM")
    assert brute_force_unicast(inst).value == 2  # frozen oracle value
    assert solve_2sfmm(inst).objective == 2


def test_2sf_mm_separate_servers_serialize():
    # servers 1 and 2 both reach client 4 only through arc 3 -> 4 of capacity 1
    arcs = [((s, k), (3, k), 1) for s in (1, 2) for k in (1, 2, 3)] + [((3, k), (4, k), 1) for k in (1, 2, 3)]
    inst = make_instance("download", 4, 3, arcs, [(1, 1, [4]), (1, 2, [4])], flow="SF", objective="MM")
    assert inst.servers == "separate"
    assert brute_force_unicast(inst).value == 2  # frozen oracle value
    sol = solve_2sfmm(inst)
    assert sol.objective == 2 and not validate_download(inst, sol)


# -- multicast ----------------------------------------------------------


def chain(K=1, **flags):
    arcs = [((1, k), (2, k), 1) for k in range(1, K + 1)] + [((2, k), (3, k), 1) for k in range(1, K + 1)]
    return make_instance("download", 3, K, arcs, [(1, 1, [2, 3])], multicast=True, **flags)


def test_mul_mm_examples():
    assert solve_mul1mm(chain(objective="MM")).objective == 1
    late = make_instance("download", 3, 2, [((1, k), (2, k), 1) for k in (1, 2)] +
                         [((2, 1), (3, 1), Fraction(1, 2)), ((2, 2), (3, 2), 1)], [(1, 1, [2, 3])],
                         multicast=True, objective="MM")
    assert solve_mul1mm(late).objective == 2
    cut = make_instance("download", 3, 1, [((1, 1), (2, 1), 1)], [(1, 1, [2, 3])], multicast=True, objective="MM")
    assert solve_mul1mm(cut).status == "infeasible"


def test_mul_ws_chain():
    inst = chain()
    assert brute_force_multicast(inst).value == 2  # frozen oracle value
    sol = solve_mul1ws(inst)
    assert sol.objective == 2 and len(sol.trees[0]) == 2


def test_mul_ws_adjacent():
    assert solve_mul1ws(adjacent(weight=7, K=3, multicast=True)).objective == 7


def test_mul_ws_late_client_pays_twice_its_weight():
    arcs = [((1, 1), (2, 1), 1), ((1, 2), (3, 2), 1)]
    inst = make_instance("download", 3, 2, arcs, [(1, 1, [Client(2), Client(3, Fraction(3))])],
                         multicast=True, objective="WS")
    assert brute_force_multicast(inst).value == 7  # frozen oracle value: 1*1 + 2*3
    sol = solve_mul1ws(inst)
    assert sol.objective == 7 and sol.arrivals == {2: 1, 3: 2}


# -- exact search -------------------------------------------------------


def test_gadget_from_satisfiable_formula_finishes_in_one_snapshot():
    art = reduce_3sat_to_2ufmm(CnfFormula(3, ((1, 2, -3), (-1, -2, 3))))
    sol = solve_exact_download(art.instance)
    assert sol.objective == 1


def test_gadget_from_unsatisfiable_formula_is_infeasible():
    art = reduce_3sat_to_2ufmm(CnfFormula(1, ((1, 1, 1), (-1, -1, -1))))
    assert solve_exact_download(art.instance).status == "infeasible"


def test_exact_refuses_oversized_instances():
    inst = random_instance("2-UF-WS", 5, 3, 2, seed=1)
    with pytest.raises(BudgetExceeded):
        solve_exact_download(inst, Limits(max_nodes=10))
    with pytest.raises(BudgetExceeded):
        solve_exact_download(inst, Limits(max_clients=1))


def test_solvers_check_their_variant():
    with pytest.raises(InvariantViolation):
        solve_1ufws(line3(objective="MM"))
    with pytest.raises(InvariantViolation):
        solve_mul1ws(line3())


def test_dispatch():
    assert polynomial_solver(line3()) is solve_1ufws
    assert polynomial_solver(random_instance("2-UF-MM", seed=1)) is None
    assert solve_download(random_instance("2-UF-MM", seed=1)).solver == "exact-search"
    assert solve_download(line3()).solver == "polynomial"


# -- properties ---------------------------------------------------------

POLYNOMIAL = ["1-UF-WS", "1-UF-MM", "1-SF-MM", "2-SF-MM", "mul-1-MM", "mul-1-WS"]
HARD = ["1-SF-WS", "2-UF-WS", "2-UF-MM", "2-SF-WS", "mul-2-MM", "mul-2-WS"]


def oracle_for(inst):
    return brute_force_multicast(inst) if inst.multicast else brute_force_unicast(inst)


instances = st.builds(
    lambda variant, seed, separate, sizes: random_instance(
        variant, 4, 3, 2, seed=seed, separate=separate and variant.removeprefix("mul-").startswith("2"), sizes=sizes),
    st.sampled_from(POLYNOMIAL + HARD),
    st.integers(0, 10**6),
    st.booleans(),
    st.sampled_from([(1, 1), (1, 2), (2, 1)]),
)


@given(instances)
def test_solvers_match_the_oracle(inst):
    sol = solve_download(inst)
    exact = solve_exact_download(inst)
    truth = oracle_for(inst)
    assert sol.objective == exact.objective == truth.value
    assert sol.feasible == truth.feasible
    assert validate_download(inst, sol) == [] and validate_download(inst, exact) == []


@given(st.integers(0, 10**6), st.sampled_from(["UF", "SF"]))
def test_ws_and_mm_optima_bound_each_other(seed, flow):
    ws = solve_download(random_instance(f"1-{flow}-WS", 4, 3, 3, seed=seed))
    inst = random_instance(f"1-{flow}-MM", 4, 3, 3, seed=seed)
    mm = solve_download(inst)
    assert ws.feasible == mm.feasible
    if ws.feasible:
        assert mm.objective <= max(ws.arrivals.values())
        assert ws.objective <= sum(inst.weight(c) for c in inst.client_ids) * mm.objective


@given(st.integers(0, 10**6), st.sampled_from(["1-UF-WS", "1-UF-MM", "1-SF-MM", "mul-1-WS", "2-UF-MM"]))
def test_more_capacity_never_hurts(seed, variant):
    inst = random_instance(variant, 4, 3, 2, seed=seed)
    arcs = sorted(inst.tvg.intra)
    if not arcs:
        return
    key = arcs[seed % len(arcs)]
    bigger = dict(inst.tvg.intra)
    bigger[key] += 1
    richer = replace(inst, tvg=inst.tvg.with_intra(bigger))
    before, after = solve_download(inst), solve_download(richer)
    if before.feasible:
        assert after.feasible and after.objective <= before.objective


@given(st.integers(0, 10**6))
def test_one_multicast_copy_is_never_slower(seed):
    uni = random_instance("1-UF-MM", 4, 3, 3, seed=seed)
    multi = uni.with_variant("mul-1-MM")
    a, b = solve_download(uni), solve_download(multi)
    if a.feasible:
        assert b.feasible and b.objective <= a.objective


def test_zero_size_model_is_allowed_for_splittable_routing():
    tvg = from_arcs(2, 1, [], 0)
    inst = make_instance("download", 2, 1, [], [(0, 1, [2])], flow="SF", objective="MM")
    assert inst.tvg == tvg
    assert solve_1sfmm(inst).objective == 1
