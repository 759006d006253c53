"""Download routing: deliver each model from its server to its clients.

Polynomial solvers cover 1-UF-WS, 1-UF-MM, 1-SF-MM, 2-SF-MM, mul-1-MM and
mul-1-WS.  The remaining variants go to :func:`solve_exact_download`, a
budgeted exhaustive search.
"""

from __future__ import annotations

from collections.abc import Callable
from fractions import Fraction
from itertools import product

from .arborescence import min_cost_arborescence, prune_to_steiner
from .budget import Limits, Meter
from .errors import BudgetExceeded, InfeasibleError, InvariantViolation
from .flow import FlowNetwork, fractional_feasibility, min_cost_flow
from .graph import (
    AuxSink,
    SatNode,
    _raw_network,
    expand_with_client_sinks,
    normalize_capacities,
    reachable_set,
    truncate,
)
from .instance import DownloadSolution, PathFlow, RoutingInstance
from .paths import bfs_tree, decompose, earliest_copies, simple_paths, trim_at, tree_path
from .search import Demand, assign_paths, objective_value


def _require(inst: RoutingInstance, *, models: int | None = None, flow=None, objective=None, multicast=False):
    if inst.phase != "download":
        raise InvariantViolation("phase", "expected a download instance")
    if models is not None and len(inst.models) != models:
        raise InvariantViolation("models", f"expected {models} model(s)")
    if flow is not None and inst.flow != flow:
        raise InvariantViolation("variant.flow", f"expected {flow}")
    if objective is not None and inst.objective != objective:
        raise InvariantViolation("variant.objective", f"expected {objective}")
    if inst.multicast != multicast:
        raise InvariantViolation("variant.multicast", f"expected multicast={multicast}")


def _weights(inst: RoutingInstance) -> dict[int, Fraction]:
    return {c: inst.weight(c) for c in inst.client_ids}


def _infeasible(inst: RoutingInstance, solver: str = "polynomial") -> DownloadSolution:
    return DownloadSolution(inst.variant.name, "infeasible", None, solver=solver)


def _finish(inst: RoutingInstance, paths: list[PathFlow], solver: str, trees=None) -> DownloadSolution:
    arrivals: dict[int, int] = {}
    for p in paths:
        if p.amount > 0:
            arrivals[p.client] = max(arrivals.get(p.client, 0), p.end.snapshot)
    for c in inst.client_ids:
        arrivals.setdefault(c, 1)  # nothing to deliver (zero-size models)
    value = objective_value(inst.objective, arrivals, _weights(inst))
    return DownloadSolution(inst.variant.name, "optimal", value, dict(sorted(arrivals.items())), paths, trees or {}, solver)


def _first_feasible(K: int, test: Callable[[int], object], bisection: bool):
    """Smallest ``k`` in ``1..K`` with a truthy ``test(k)`` (monotone in ``k``)."""
    if not bisection:
        for k in range(1, K + 1):
            out = test(k)
            if out:
                return k, out
        return None, None
    top = test(K)
    if not top:
        return None, None
    lo, hi, best = 1, K, top
    while lo < hi:
        mid = (lo + hi) // 2
        out = test(mid)
        if out:
            hi, best = mid, out
        else:
            lo = mid + 1
    return lo, best


# --------------------------------------------------------------------------
# unsplittable unicast, one model


def _unit_paths(inst, net, flow_values, q) -> list[PathFlow]:
    out = []
    server = inst.server_node(0)
    for nodes, amount in decompose(net, flow_values, server, lambda n: isinstance(n, AuxSink)):
        sink = nodes[-1]
        for _ in range(int(amount)):
            out.append(PathFlow(0, sink.client, trim_at(nodes[:-1], sink.client), q))
    return out


def solve_1ufws(inst: RoutingInstance) -> DownloadSolution:
    """Unsplittable, one model, weighted sum of arrival snapshots (min-cost flow)."""
    _require(inst, models=1, flow="UF", objective="WS")
    model = inst.models[0]
    q = model.size
    exp = expand_with_client_sinks(inst.tvg, [(c.id, c.weight) for c in model.clients])
    net = exp.flow_network(q)
    net.add_supply(inst.server_node(0), len(model.clients))
    for c in model.clients:
        net.add_supply(AuxSink(c.id), -1)
    try:
        flow = min_cost_flow(net)
    except InfeasibleError:
        return _infeasible(inst)
    return _finish(inst, _unit_paths(inst, net, flow.flow, q), "polynomial")


def _uf_mm_test(inst: RoutingInstance, k: int):
    model = inst.models[0]
    q = model.size
    server = inst.server_node(0)
    net = normalize_capacities(truncate(inst.tvg, k), q)
    for c in model.clients:
        for kk in range(1, k + 1):
            net.add_arc(SatNode(c.id, kk), AuxSink(c.id), 1, 0)
        net.add_arc(server, AuxSink(c.id), 1, 1)  # bypass, used only when stuck
        net.add_supply(AuxSink(c.id), -1)
    net.add_supply(server, len(model.clients))
    flow = min_cost_flow(net)
    if flow.total_cost != 0:
        return None
    return net, flow


def solve_1ufmm(inst: RoutingInstance, bisection: bool = False) -> DownloadSolution:
    """Unsplittable, one model, latest arrival: smallest deadline with a zero-cost flow."""
    _require(inst, models=1, flow="UF", objective="MM")
    k, found = _first_feasible(inst.tvg.snapshots, lambda k: _uf_mm_test(inst, k), bisection)
    if k is None:
        return _infeasible(inst)
    net, flow = found
    return _finish(inst, _unit_paths(inst, net, flow.flow, inst.models[0].size), "polynomial")


# --------------------------------------------------------------------------
# splittable unicast


def _sf_check(inst: RoutingInstance, deadlines: dict[int, int]):
    """Fractional feasibility when client ``c`` must be served by snapshot ``deadlines[c]``.

    Clients missing from ``deadlines`` are ignored.  Returns the feasibility
    result, the network and per-commodity sources.
    """
    kmax = max(deadlines.values())
    net = _raw_network(truncate(inst.tvg, kmax))
    commodities, sources = [], []
    if inst.servers == "common":
        server = inst.server_node(0)
        commodity = {server: Fraction(0)}
        for c in deadlines:
            demand = sum((inst.models[m].size for m in inst.models_of(c)), Fraction(0))
            for kk in range(1, deadlines[c] + 1):
                net.add_arc(SatNode(c, kk), AuxSink(c), demand)
            commodity[server] += demand
            commodity[AuxSink(c)] = -demand
        commodities.append(commodity)
        sources.append(server)
    else:
        for m, model in enumerate(inst.models):
            server = inst.server_node(m)
            commodity = {server: Fraction(0)}
            for c in model.clients:
                if c.id not in deadlines:
                    continue
                sink = AuxSink(c.id, m + 1)
                for kk in range(1, deadlines[c.id] + 1):
                    net.add_arc(SatNode(c.id, kk), sink, model.size)
                commodity[server] += model.size
                commodity[sink] = -model.size
            commodities.append(commodity)
            sources.append(server)
    for commodity in commodities:
        for node in commodity:
            net.add_node(node)
    result = fractional_feasibility(net, commodities)
    return result, net, sources


def _split_paths(inst: RoutingInstance, net: FlowNetwork, result, sources) -> list[PathFlow]:
    out: list[PathFlow] = []
    owed = {(m, c.id): inst.models[m].size for m, c in inst.demands}
    for j, source in enumerate(sources):
        flows = result.flow.commodities[j]
        for nodes, amount in decompose(net, flows, source, lambda n: isinstance(n, AuxSink)):
            sink = nodes[-1]
            route = trim_at(nodes[:-1], sink.client)
            if sink.model:
                out.append(PathFlow(sink.model - 1, sink.client, route, amount))
                continue
            for m in inst.models_of(sink.client):  # shared sink: fill models in order
                take = min(amount, owed[(m, sink.client)])
                if take > 0:
                    owed[(m, sink.client)] -= take
                    amount -= take
                    out.append(PathFlow(m, sink.client, route, take))
    return out


def solve_sfmm(inst: RoutingInstance, bisection: bool = False) -> DownloadSolution:
    """Splittable, one or two models, latest arrival.

    A common server gives a single commodity (max flow); separate servers
    give two commodities (exact LP).
    """
    _require(inst, flow="SF", objective="MM")
    ids = inst.client_ids
    if not ids:
        return _finish(inst, [], "polynomial")

    def test(k):
        result, net, sources = _sf_check(inst, {c: k for c in ids})
        return (result, net, sources) if result.feasible else None

    k, found = _first_feasible(inst.tvg.snapshots, test, bisection)
    if k is None:
        return _infeasible(inst)
    result, net, sources = found
    return _finish(inst, _split_paths(inst, net, result, sources), "polynomial")


def solve_1sfmm(inst: RoutingInstance, bisection: bool = False) -> DownloadSolution:
    _require(inst, models=1, flow="SF", objective="MM")
    return solve_sfmm(inst, bisection)


def solve_2sfmm(inst: RoutingInstance, bisection: bool = False) -> DownloadSolution:
    _require(inst, models=2, flow="SF", objective="MM")
    return solve_sfmm(inst, bisection)


# --------------------------------------------------------------------------
# multicast, one model


def _multicast_witness(inst: RoutingInstance, k: int, m: int = 0):
    q = inst.models[m].size
    tvg = truncate(inst.tvg, k)
    parent = bfs_tree(tvg, inst.server_node(m), lambda a: a.kind == "cache" or a.capacity >= q)
    return parent


def _tree_solution(inst, parents: dict[int, dict], targets: dict[tuple[int, int], SatNode], solver: str):
    paths, trees = [], {}
    for (m, c), node in targets.items():
        route = tree_path(parents[m], node)
        paths.append(PathFlow(m, c, route, inst.models[m].size))
        arcs = trees.setdefault(m, [])
        for a in zip(route, route[1:]):
            if a not in arcs:
                arcs.append(a)
    for m in trees:
        trees[m].sort()
    return _finish(inst, paths, solver, trees)


def solve_mul1mm(inst: RoutingInstance, bisection: bool = False) -> DownloadSolution:
    """Multicast, one model, latest arrival: first snapshot whose filtered reachability covers every client."""
    _require(inst, models=1, flow="UF", objective="MM", multicast=True)
    model = inst.models[0]
    ids = set(model.client_ids)

    def test(k):
        reach = reachable_set(truncate(inst.tvg, k), inst.server_node(0), model.size)
        return ids <= {n.satellite for n in reach}

    k, _ = _first_feasible(inst.tvg.snapshots, test, bisection)
    if k is None:
        return _infeasible(inst)
    parent = _multicast_witness(inst, k)
    first = earliest_copies(parent, ids)
    return _tree_solution(inst, {0: parent}, {(0, c): first[c] for c in model.client_ids}, "polynomial")


def solve_mul1ws(inst: RoutingInstance) -> DownloadSolution:
    """Multicast, one model, weighted sum: min-cost arborescence pruned to the client sinks."""
    _require(inst, models=1, flow="UF", objective="WS", multicast=True)
    model = inst.models[0]
    q = model.size
    root = inst.server_node(0)
    reach = reachable_set(inst.tvg, root, q)
    arcs = [
        (a.tail, a.head, Fraction(0))
        for a in inst.tvg.arcs
        if a.tail in reach and a.head in reach and (a.kind == "cache" or a.capacity >= q)
    ]
    sinks = []
    for c in model.clients:
        copies = [n for n in reach if n.satellite == c.id]
        if not copies:
            return _infeasible(inst)
        sinks.append(AuxSink(c.id))
        arcs.extend((n, AuxSink(c.id), n.snapshot * c.weight) for n in copies)
    arb = min_cost_arborescence(reach | set(sinks), arcs, root)
    tree = prune_to_steiner(arb, sinks)
    parent: dict = {root: None}
    for h, (t, _) in tree.parent.items():
        parent[h] = t
    targets = {(0, s.client): parent[s] for s in sinks}
    sol = _tree_solution(inst, {0: {n: p for n, p in parent.items() if not isinstance(n, AuxSink)}}, targets, "polynomial")
    if sol.objective != tree.total_cost:
        raise AssertionError("arborescence cost and arrival objective disagree")
    return sol


# --------------------------------------------------------------------------
# exhaustive search for the hard variants


def _exact_uf(inst: RoutingInstance, meter: Meter) -> DownloadSolution:
    demands = []
    budget = meter.limits.max_paths
    for m, c in inst.demands:
        size = inst.models[m].size
        paths = simple_paths(inst.tvg, inst.server_node(m), c.id, size, budget)
        budget -= len(paths)
        demands.append(Demand(m, c.id, size, paths))
    found = assign_paths(demands, inst.tvg.capacity, inst.objective, _weights(inst), meter)
    if found is None:
        return _infeasible(inst, "exact-search")
    _, chosen = found
    paths = [PathFlow(d.model, d.client, p, d.size) for d, p in zip(demands, chosen)]
    return _finish(inst, paths, "exact-search")


def _exact_sf(inst: RoutingInstance, meter: Meter) -> DownloadSolution:
    ids = inst.client_ids
    K = inst.tvg.snapshots
    if not ids:
        return _finish(inst, [], "exact-search")
    full = _sf_check(inst, {c: K for c in ids})
    if not full[0].feasible:
        return _infeasible(inst, "exact-search")
    lower = {}
    for c in ids:
        lower[c] = next(k for k in range(1, K + 1) if _sf_check(inst, {c: k})[0].feasible)
    ranges = [range(lower[c], K + 1) for c in ids]
    total = 1
    for r in ranges:
        total *= len(r)
    if total > meter.limits.max_states:
        raise BudgetExceeded(f"{total} deadline vectors exceed max_states={meter.limits.max_states}")
    weights = _weights(inst)

    def score(vec):
        return objective_value(inst.objective, dict(zip(ids, vec)), weights)

    infeasible: list[tuple[int, ...]] = []
    for vec in sorted(product(*ranges), key=lambda v: (score(v), v)):
        meter.tick()
        if any(all(a <= b for a, b in zip(vec, bad)) for bad in infeasible):
            continue
        result, net, sources = _sf_check(inst, dict(zip(ids, vec)))
        if result.feasible:
            return _finish(inst, _split_paths(inst, net, result, sources), "exact-search")
        infeasible.append(vec)
    raise AssertionError("the all-K deadline vector was feasible but never reached")


def _earliest(inst: RoutingInstance, m: int, intra_ok: set):
    parent = bfs_tree(inst.tvg, inst.server_node(m), lambda a: a.kind == "cache" or (a.tail, a.head) in intra_ok)
    return parent, earliest_copies(parent, set(inst.models[m].client_ids))


def _exact_multicast(inst: RoutingInstance, meter: Meter) -> DownloadSolution:
    sizes = [model.size for model in inst.models]
    allowed: list[set] = [set() for _ in inst.models]
    contested = []
    for a in inst.tvg.intra_arcs():
        fits = [m for m, q in enumerate(sizes) if a.capacity >= q]
        key = (a.tail, a.head)
        if sum(sizes[m] for m in fits) <= a.capacity:
            for m in fits:
                allowed[m].add(key)
        else:
            contested.append(key)
    # a contested arc matters only if both models can reach its tail
    reach = [set(_earliest(inst, m, allowed[m] | set(contested))[0]) for m in range(len(sizes))]
    live = []
    for key in contested:
        users = [m for m in range(len(sizes)) if key[0] in reach[m]]
        if len(users) == 2:
            live.append(key)
        else:
            for m in users or [0]:
                allowed[m].add(key)
    if len(live) > 62 or (1 << len(live)) > meter.limits.max_states:
        raise BudgetExceeded(f"{len(live)} contested arcs exceed the labeling budget")
    weights = _weights(inst)

    def evaluate(extra: list[set]):
        parents, targets, arrivals = {}, {}, {}
        for m, model in enumerate(inst.models):
            parent, first = _earliest(inst, m, allowed[m] | extra[m])
            for c in model.client_ids:
                if c not in first:
                    return None
                targets[(m, c)] = first[c]
                arrivals[c] = max(arrivals.get(c, 0), first[c].snapshot)
            parents[m] = parent
        return objective_value(inst.objective, arrivals, weights), parents, targets

    optimistic = evaluate([set(live)] * len(sizes))
    if optimistic is None:
        return _infeasible(inst, "exact-search")
    best = None
    for mask in range(1 << len(live)):
        meter.tick()
        extra = [set(), set()]
        for b, key in enumerate(live):
            extra[(mask >> b) & 1].add(key)
        out = evaluate(extra[: len(sizes)])
        if out is not None and (best is None or out[0] < best[0]):
            best = out
            if best[0] == optimistic[0]:
                break
    if best is None:
        return _infeasible(inst, "exact-search")
    return _tree_solution(inst, best[1], best[2], "exact-search")


def solve_exact_download(inst: RoutingInstance, limits: Limits | None = None) -> DownloadSolution:
    """Optimal download routing for any variant by budgeted exhaustive search.

    Raises:
        BudgetExceeded: the instance is larger than ``limits`` allow.
    """
    _require(inst, multicast=inst.multicast)
    meter = Meter(limits)
    meter.check_instance(inst.tvg, len(inst.demands))
    if inst.multicast:
        return _exact_multicast(inst, meter)
    if inst.flow == "UF":
        return _exact_uf(inst, meter)
    return _exact_sf(inst, meter)


def polynomial_solver(inst: RoutingInstance):
    """The polynomial solver for this variant, or ``None`` if it has none."""
    n = len(inst.models)
    if inst.multicast:
        if n == 1:
            return solve_mul1mm if inst.objective == "MM" else solve_mul1ws
        return None
    if inst.flow == "UF" and n == 1:
        return solve_1ufmm if inst.objective == "MM" else solve_1ufws
    if inst.flow == "SF" and inst.objective == "MM":
        return solve_sfmm
    return None


def solve_download(inst: RoutingInstance, limits: Limits | None = None, exact: bool = False) -> DownloadSolution:
    """Dispatch to the polynomial solver when one exists, else to exact search."""
    _require(inst, multicast=inst.multicast)
    solver = None if exact else polynomial_solver(inst)
    if solver is not None:
        return solver(inst)
    return solve_exact_download(inst, limits)
