"""Brute-force reference answers for small instances.

Everything here is deliberately naive and shares no routing code with the
solvers: paths are enumerated by plain recursion, joint choices by full
enumeration with capacity pruning only, and splittable feasibility by a
path-based LP handed to SciPy's HiGHS.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

import numpy as np
from scipy.optimize import linprog

from .budget import Limits, Meter
from .errors import BudgetExceeded
from .graph import SatNode, TimeVaryingGraph
from .instance import RoutingInstance

LP_TOL = 1e-9


@dataclass
class OracleResult:
    feasible: bool
    value: Fraction | None = None  # objective, utility, or None for pure feasibility
    arrivals: dict[int, int] = field(default_factory=dict)
    witness: list = field(default_factory=list)


def _paths(tvg: TimeVaryingGraph, start: SatNode, target: int, ok, meter: Meter) -> list[tuple]:
    """All simple paths from ``start`` to the first copy of ``target`` over arcs passing ``ok``."""
    out: list[tuple] = []

    def walk(path):
        node = path[-1]
        if node.satellite == target:
            out.append(tuple(path))
            if len(out) > meter.limits.max_paths:
                raise BudgetExceeded("oracle path enumeration over budget")
            return
        for arc in tvg.arcs:
            if arc.tail == node and arc.head not in path and ok(arc):
                walk(path + [arc.head])

    walk([start])
    return out


def _score(inst: RoutingInstance, arrivals: dict[int, int]) -> Fraction:
    if inst.objective == "WS":
        return sum((inst.weight(c) * k for c, k in arrivals.items()), Fraction(0))
    return Fraction(max(arrivals.values()))


def _origin(inst: RoutingInstance, m: int, c) -> tuple[SatNode, int]:
    if inst.phase == "download":
        return SatNode(inst.models[m].server, 1), c.id
    return SatNode(c.id, c.start), inst.models[m].server


def _unsplittable(inst: RoutingInstance, demands, meter: Meter, first_only: bool):
    """Every capacity-respecting joint path choice; best by objective (or the first)."""
    cap = dict(inst.tvg.capacity)
    options = []
    for m, c in demands:
        q = inst.models[m].size
        start, target = _origin(inst, m, c)
        options.append(_paths(inst.tvg, start, target, lambda a, q=q: a.capacity >= q, meter))
    best: list = [None, None]
    chosen: list = []

    def rec(i):
        meter.tick()
        if i == len(demands):
            if first_only or inst.phase == "upload":
                best[0], best[1] = Fraction(0), list(chosen)
                return True
            arrivals: dict[int, int] = {}
            for (m, c), p in zip(demands, chosen):
                arrivals[c.id] = max(arrivals.get(c.id, 0), p[-1].snapshot)
            value = _score(inst, arrivals)
            if best[0] is None or value < best[0]:
                best[0], best[1] = value, list(chosen)
            return False
        q = inst.models[demands[i][0]].size
        for p in options[i]:
            arcs = list(zip(p, p[1:]))
            if all(cap[a] >= q for a in arcs):
                for a in arcs:
                    cap[a] -= q
                chosen.append(p)
                done = rec(i + 1)
                chosen.pop()
                for a in arcs:
                    cap[a] += q
                if done:
                    return True
        return False

    rec(0)
    return best


def _path_lp(inst: RoutingInstance, demands, deadlines: dict[int, int] | None, meter: Meter) -> bool:
    """Splittable feasibility: path flows per demand, minimizing total unmet demand."""
    columns = []  # (demand index, path)
    for d, (m, c) in enumerate(demands):
        start, target = _origin(inst, m, c)
        for p in _paths(inst.tvg, start, target, lambda a: a.capacity > 0, meter):
            if deadlines is None or p[-1].snapshot <= deadlines[c.id]:
                columns.append((d, p))
    arcs = sorted(inst.tvg.capacity)
    arc_row = {a: i for i, a in enumerate(arcs)}
    nx, nd = len(columns), len(demands)
    a_ub = np.zeros((len(arcs), nx + nd))
    for j, (_, p) in enumerate(columns):
        for a in zip(p, p[1:]):
            a_ub[arc_row[a], j] += 1
    b_ub = np.array([float(inst.tvg.capacity[a]) for a in arcs])
    a_eq = np.zeros((nd, nx + nd))
    for j, (d, _) in enumerate(columns):
        a_eq[d, j] = 1
    for d in range(nd):
        a_eq[d, nx + d] = 1
    b_eq = np.array([float(inst.models[m].size) for m, _ in demands])
    cost = np.concatenate([np.zeros(nx), np.ones(nd)])
    res = linprog(cost, A_ub=a_ub if len(arcs) else None, b_ub=b_ub if len(arcs) else None,
                  A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if res.status != 0:
        raise RuntimeError(f"oracle LP failed: {res.message}")
    return res.fun <= LP_TOL * max(1.0, float(b_eq.sum()))


def brute_force_unicast(inst: RoutingInstance, budget: Limits | None = None) -> OracleResult:
    """Reference answer for unicast downloads (optimal objective) and uploads
    without selection (feasibility)."""
    meter = Meter(budget)
    meter.check_instance(inst.tvg, len(inst.demands))
    demands = inst.demands
    if inst.phase == "upload":
        if inst.flow == "UF":
            value, chosen = _unsplittable(inst, demands, meter, True)
            return OracleResult(value is not None, witness=chosen or [])
        return OracleResult(_path_lp(inst, demands, None, meter))
    if inst.flow == "UF":
        value, chosen = _unsplittable(inst, demands, meter, False)
        if value is None:
            return OracleResult(False)
        arrivals: dict[int, int] = {}
        for (m, c), p in zip(demands, chosen):
            arrivals[c.id] = max(arrivals.get(c.id, 0), p[-1].snapshot)
        return OracleResult(True, value, arrivals, chosen)
    ids = inst.client_ids
    best = None
    for vec in product(range(1, inst.tvg.snapshots + 1), repeat=len(ids)):
        meter.tick()
        deadlines = dict(zip(ids, vec))
        if _path_lp(inst, demands, deadlines, meter):
            value = _score(inst, deadlines)
            if best is None or value < best[0]:
                best = (value, deadlines)
    if best is None:
        return OracleResult(False)
    return OracleResult(True, best[0], best[1])


def brute_force_multicast(inst: RoutingInstance, budget: Limits | None = None) -> OracleResult:
    """Reference optimum for multicast downloads.

    Each (model, client) picks a path over arcs that can hold the model
    (cache arcs always can); a model's tree is the union of its paths, and an
    intra arc used by several models must hold their sizes together.
    """
    meter = Meter(budget)
    meter.check_instance(inst.tvg, len(inst.demands))
    demands = inst.demands
    options = []
    for m, c in demands:
        q = inst.models[m].size
        options.append(_paths(inst.tvg, SatNode(inst.models[m].server, 1), c.id,
                              lambda a, q=q: a.kind == "cache" or a.capacity >= q, meter))
    best = None
    for combo in product(*options):
        meter.tick()
        used: dict = {}
        for (m, _), p in zip(demands, combo):
            for a in zip(p, p[1:]):
                if a[0].satellite != a[1].satellite:
                    used.setdefault(a, set()).add(m)
        if any(sum(inst.models[m].size for m in ms) > inst.tvg.capacity[a] for a, ms in used.items()):
            continue
        arrivals: dict[int, int] = {}
        for (m, c), p in zip(demands, combo):
            arrivals[c.id] = max(arrivals.get(c.id, 0), p[-1].snapshot)
        value = _score(inst, arrivals)
        if best is None or value < best[0]:
            best = (value, arrivals, list(combo))
    if best is None:
        return OracleResult(False)
    return OracleResult(True, *best)


def brute_force_cs(inst: RoutingInstance, budget: Limits | None = None) -> OracleResult:
    """Maximum total utility over all client subsets that can upload jointly."""
    meter = Meter(budget)
    meter.check_instance(inst.tvg, len(inst.demands))
    demands = inst.demands
    best = (Fraction(0), [])
    for r in range(1, len(demands) + 1):
        for subset in combinations(demands, r):
            meter.tick()
            if inst.flow == "UF":
                ok = _unsplittable(inst, list(subset), meter, True)[0] is not None
            else:
                ok = _path_lp(inst, list(subset), None, meter)
            if ok:
                util = sum((c.utility for _, c in subset), Fraction(0))
                if util > best[0]:
                    best = (util, [(m, c.id) for m, c in subset])
    return OracleResult(True, best[0], witness=best[1])


# --------------------------------------------------------------------------
# combinatorial source problems


@dataclass
class SatAnswer:
    satisfiable: bool
    max_satisfied: int
    assignment: tuple[bool, ...]  # a best assignment, variable 1 first


def sat_brute_force(formula) -> SatAnswer:
    """Try all assignments; ``formula`` has ``num_vars`` and ``clauses`` of signed ints."""
    best, best_assign = -1, ()
    for bits in product((False, True), repeat=formula.num_vars):
        sat = sum(any((lit > 0) == bits[abs(lit) - 1] for lit in clause) for clause in formula.clauses)
        if sat > best:
            best, best_assign = sat, bits
    return SatAnswer(best == len(formula.clauses), best, best_assign)


def mvc_brute_force(graph) -> tuple[int, tuple[int, ...]]:
    """Smallest vertex cover of an undirected graph with ``vertices`` and ``edges``."""
    verts = list(range(1, graph.vertices + 1))
    for size in range(len(verts) + 1):
        for cover in combinations(verts, size):
            s = set(cover)
            if all(u in s or v in s for u, v in graph.edges):
                return size, cover
    raise AssertionError("the full vertex set is a cover")


def edp_brute_force(n: int, arcs, pairs) -> bool:
    """Whether a digraph on ``1..n`` has arc-disjoint paths joining both ``pairs``."""
    def all_paths(s, t):
        out = []

        def walk(path):
            if path[-1] == t:
                out.append(path)
                return
            for u, v in arcs:
                if u == path[-1] and v not in path:
                    walk(path + [v])

        walk([s])
        return out

    (s1, t1), (s2, t2) = pairs
    for p in all_paths(s1, t1):
        used = set(zip(p, p[1:]))
        for r in all_paths(s2, t2):
            if used.isdisjoint(zip(r, r[1:])):
                return True
    return False


def min_cost_flow_brute_force(nodes, arcs, supplies) -> Fraction | None:
    """Cheapest integral flow by trying every per-arc amount; ``arcs`` are (tail, head, cap, cost)."""
    best = None
    for amounts in product(*[range(int(cap) + 1) for _, _, cap, _ in arcs]):
        bal = {n: 0 for n in nodes}
        for (t, h, _, _), f in zip(arcs, amounts):
            bal[t] += f
            bal[h] -= f
        if all(bal[n] == supplies.get(n, 0) for n in nodes):
            cost = sum((Fraction(c) * f for (_, _, _, c), f in zip(arcs, amounts)), Fraction(0))
            if best is None or cost < best:
                best = cost
    return best


def steiner_arborescence_brute_force(nodes, arcs, root, terminals) -> Fraction | None:
    """Cheapest arborescence from ``root`` containing all ``terminals``."""
    others = [n for n in nodes if n != root and n not in terminals]
    best = None
    for r in range(len(others) + 1):
        for extra in combinations(others, r):
            members = [*terminals, *extra]
            choices = [[(t, c) for t, h, c in arcs if h == v and (t == root or t in members)] for v in members]
            for pick in product(*choices):
                parent = {v: t for v, (t, _) in zip(members, pick)}
                ok = True
                for v in members:
                    seen, x = set(), v
                    while x != root:
                        if x in seen:
                            ok = False
                            break
                        seen.add(x)
                        x = parent[x]
                    if not ok:
                        break
                if ok:
                    cost = sum((Fraction(c) for _, c in pick), Fraction(0))
                    if best is None or cost < best:
                        best = cost
    return best
