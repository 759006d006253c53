"""Upload routing: carry each client's update to its model's server.

A client's update is ready at ``c@start`` and counts as delivered once it
reaches any copy of the server satellite.  Polynomial solvers cover
1-SF-NCS, 2-SF-NCS, 1-UF-NCS and 1-UF-CS; the rest use
:func:`solve_exact_upload`.
"""

from __future__ import annotations

from fractions import Fraction

from .budget import Limits, Meter
from .errors import BudgetExceeded, InvariantViolation
from .flow import FlowNetwork, fractional_feasibility, min_cost_flow
from .graph import SatNode, _raw_network, normalize_capacities
from .instance import PathFlow, RoutingInstance, UploadSolution
from .paths import decompose, simple_paths, trim_at
from .search import Demand, assign_paths

_SRC = ("upload-source",)


def _sink(m: int = 0) -> tuple:
    return ("server-sink", m)


def _require(inst: RoutingInstance, *, models: int | None = None, flow=None, cs=None):
    if inst.phase != "upload":
        raise InvariantViolation("phase", "expected an upload instance")
    if models is not None and len(inst.models) != models:
        raise InvariantViolation("models", f"expected {models} model(s)")
    if flow is not None and inst.flow != flow:
        raise InvariantViolation("variant.flow", f"expected {flow}")
    if cs is not None and inst.cs != cs:
        raise InvariantViolation("variant.cs", f"expected cs={cs}")


def _start(c) -> SatNode:
    return SatNode(c.id, c.start)


def _result(inst, feasible: bool, selected, paths, solver: str) -> UploadSolution:
    selected = sorted(selected)
    utility = None
    if inst.cs:
        utility = sum((inst.models[m].clients[i].utility for m, i in _positions(inst, selected)), Fraction(0))
    status = "optimal" if feasible else "infeasible"
    return UploadSolution(inst.variant.name, feasible, selected, utility, paths, solver, status)


def _positions(inst, selected):
    for m, cid in selected:
        yield m, inst.models[m].client_ids.index(cid)


# --------------------------------------------------------------------------
# unsplittable, one model


def _server_arcs(inst: RoutingInstance, net: FlowNetwork, m: int, cap) -> None:
    s = inst.models[m].server
    for k in range(1, inst.tvg.snapshots + 1):
        net.add_arc(SatNode(s, k), _sink(m), cap)


def _unit_upload_paths(inst, net, flows) -> tuple[list[PathFlow], list[tuple[int, int]]]:
    model = inst.models[0]
    by_start = {}
    for c in model.clients:
        by_start.setdefault(_start(c), []).append(c.id)
    paths, chosen = [], []
    for nodes, amount in decompose(net, flows, _SRC, lambda n: n == _sink(0)):
        if len(nodes) < 3:
            continue  # skipped a client (direct source -> sink arc)
        route = nodes[1:-1]
        for _ in range(int(amount)):
            cid = by_start[route[0]].pop(0)
            chosen.append((0, cid))
            paths.append(PathFlow(0, cid, trim_at(route, model.server), model.size))
    return paths, chosen


def solve_1ufncs(inst: RoutingInstance) -> UploadSolution:
    """Unsplittable, one model, every client must upload: zero-cost min-cost flow test."""
    _require(inst, models=1, flow="UF", cs=False)
    model = inst.models[0]
    n = len(model.clients)
    net = normalize_capacities(inst.tvg, model.size)
    _server_arcs(inst, net, 0, n)
    for c in model.clients:
        net.add_arc(_SRC, _start(c), 1, 0)
        net.add_arc(_start(c), _sink(0), 1, 1)  # bypass, priced so it is a last resort
    net.add_supply(_SRC, n)
    net.add_supply(_sink(0), -n)
    flow = min_cost_flow(net)
    if flow.total_cost != 0:
        return _result(inst, False, [], [], "polynomial")
    paths, chosen = _unit_upload_paths(inst, net, flow.flow)
    return _result(inst, True, chosen, paths, "polynomial")


def solve_1ufcs(inst: RoutingInstance) -> UploadSolution:
    """Unsplittable, one model, client selection: min-cost flow with negated utilities."""
    _require(inst, models=1, flow="UF", cs=True)
    model = inst.models[0]
    n = len(model.clients)
    net = normalize_capacities(inst.tvg, model.size)
    _server_arcs(inst, net, 0, n)
    for c in model.clients:
        net.add_arc(_SRC, _start(c), 1, -c.utility)
    net.add_arc(_SRC, _sink(0), n, 0)  # unselected clients
    net.add_supply(_SRC, n)
    net.add_supply(_sink(0), -n)
    flow = min_cost_flow(net)
    paths, chosen = _unit_upload_paths(inst, net, flow.flow)
    sol = _result(inst, True, chosen, paths, "polynomial")
    if sol.utility != -flow.total_cost:
        raise AssertionError("selected utility and flow cost disagree")
    return sol


# --------------------------------------------------------------------------
# splittable


def _sf_check(inst: RoutingInstance, selected: list[tuple[int, int]]):
    """Fractional feasibility of uploading exactly the ``selected`` (model, client) pairs."""
    net = _raw_network(inst.tvg)
    groups = [0] if inst.servers == "common" else list(range(len(inst.models)))
    commodities = []
    for g in groups:
        src, snk = (_SRC, g), _sink(g)
        members = [(m, cid) for m, cid in selected if inst.servers == "common" or m == g]
        total = Fraction(0)
        supply: dict[SatNode, Fraction] = {}
        for m, cid in members:
            c = inst.models[m].clients[inst.models[m].client_ids.index(cid)]
            supply[_start(c)] = supply.get(_start(c), Fraction(0)) + inst.models[m].size
            total += inst.models[m].size
        for node, amount in supply.items():
            net.add_arc(src, node, amount)
        _server_arcs(inst, net, g, total)
        net.add_node(src)
        net.add_node(snk)
        commodities.append({src: total, snk: -total})
    return fractional_feasibility(net, commodities), net, groups


def _sf_paths(inst, selected, result, net, groups) -> list[PathFlow]:
    owed = {}
    for m, cid in selected:
        c = inst.models[m].clients[inst.models[m].client_ids.index(cid)]
        owed.setdefault(_start(c), []).append([m, cid, inst.models[m].size])
    out = []
    for j, g in enumerate(groups):
        flows = result.flow.commodities[j]
        for nodes, amount in decompose(net, flows, (_SRC, g), lambda n: n == _sink(g)):
            route = nodes[1:-1]
            for entry in owed[route[0]]:
                m, cid, left = entry
                if (inst.servers == "separate" and m != g) or left <= 0 or amount <= 0:
                    continue
                take = min(left, amount)
                entry[2] -= take
                amount -= take
                out.append(PathFlow(m, cid, trim_at(route, inst.models[m].server), take))
    return out


def solve_sfncs(inst: RoutingInstance) -> UploadSolution:
    """Splittable, one or two models, every client uploads.

    One commodity when the server is shared (max flow), otherwise one per
    model (exact LP).
    """
    _require(inst, flow="SF", cs=False)
    everyone = [(m, c.id) for m, c in inst.demands]
    result, net, groups = _sf_check(inst, everyone)
    if not result.feasible:
        return _result(inst, False, [], [], "polynomial")
    return _result(inst, True, everyone, _sf_paths(inst, everyone, result, net, groups), "polynomial")


def solve_1sfncs(inst: RoutingInstance) -> UploadSolution:
    _require(inst, models=1, flow="SF", cs=False)
    return solve_sfncs(inst)


def solve_2sfncs(inst: RoutingInstance) -> UploadSolution:
    _require(inst, models=2, flow="SF", cs=False)
    return solve_sfncs(inst)


# --------------------------------------------------------------------------
# exhaustive search


def _uf_candidates(inst: RoutingInstance, meter: Meter) -> list[Demand]:
    demands = []
    budget = meter.limits.max_paths
    for m, c in inst.demands:
        model = inst.models[m]
        paths = simple_paths(inst.tvg, _start(c), model.server, model.size, budget)
        budget -= len(paths)
        demands.append(Demand(m, c.id, model.size, paths))
    return demands


def _feasible_subset(inst, meter, demands, subset: list[int]):
    """Paths realizing the demands at ``subset`` (indices into ``inst.demands``), or None."""
    selected = [(inst.demands[i][0], inst.demands[i][1].id) for i in subset]
    if inst.flow == "UF":
        chosen = [demands[i] for i in subset]
        if not chosen:
            return []
        found = assign_paths(chosen, inst.tvg.capacity, None, {}, meter)
        if found is None:
            return None
        return [PathFlow(d.model, d.client, p, d.size) for d, p in zip(chosen, found[1])]
    if not selected:
        return []
    result, net, groups = _sf_check(inst, selected)
    if not result.feasible:
        return None
    return _sf_paths(inst, selected, result, net, groups)


def solve_exact_upload(inst: RoutingInstance, limits: Limits | None = None) -> UploadSolution:
    """Optimal upload routing for any variant by budgeted exhaustive search.

    Raises:
        BudgetExceeded: the instance is larger than ``limits`` allow.
    """
    _require(inst)
    meter = Meter(limits)
    meter.check_instance(inst.tvg, len(inst.demands))
    demands = _uf_candidates(inst, meter) if inst.flow == "UF" else None
    n = len(inst.demands)
    if not inst.cs:
        paths = _feasible_subset(inst, meter, demands, list(range(n)))
        if paths is None:
            return _result(inst, False, [], [], "exact-search")
        return _result(inst, True, [(m, c.id) for m, c in inst.demands], paths, "exact-search")

    if (1 << n) > meter.limits.max_subsets:
        raise BudgetExceeded(f"2^{n} subsets exceed max_subsets={meter.limits.max_subsets}")
    utility = [c.utility for _, c in inst.demands]
    masks = sorted(
        range(1 << n),
        key=lambda s: (-sum((utility[i] for i in range(n) if s >> i & 1), Fraction(0)), bin(s).count("1"), s),
    )
    infeasible: list[int] = []
    for mask in masks:
        meter.tick()
        if any(mask & bad == bad for bad in infeasible):
            continue  # contains a subset that already failed
        subset = [i for i in range(n) if mask >> i & 1]
        paths = _feasible_subset(inst, meter, demands, subset)
        if paths is not None:
            selected = [(inst.demands[i][0], inst.demands[i][1].id) for i in subset]
            return _result(inst, True, selected, paths, "exact-search")
        infeasible.append(mask)
    raise AssertionError("the empty selection is always feasible")


def polynomial_solver(inst: RoutingInstance):
    """The polynomial solver for this variant, or ``None`` if it has none."""
    n = len(inst.models)
    if inst.flow == "SF" and not inst.cs:
        return solve_sfncs
    if inst.flow == "UF" and n == 1:
        return solve_1ufcs if inst.cs else solve_1ufncs
    return None


def solve_upload(inst: RoutingInstance, limits: Limits | None = None, exact: bool = False) -> UploadSolution:
    """Dispatch to the polynomial solver when one exists, else to exact search."""
    _require(inst)
    solver = None if exact else polynomial_solver(inst)
    if solver is not None:
        return solver(inst)
    return solve_exact_upload(inst, limits)
