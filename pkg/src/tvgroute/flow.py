"""Exact network-flow algorithms on small capacitated digraphs.

* :func:`min_cost_flow`: successive shortest augmenting paths with node
  potentials; negative arc costs are allowed (Bellman-Ford seeds the potentials).
* :func:`max_flow`: Dinic's algorithm.
* :func:`fractional_feasibility`: min total capacity slack, via max flow plus
  a slack min-cost flow for one commodity, via the exact simplex for several.

Capacities, supplies and costs may be ints or Fractions; nothing is rounded.
"""

from __future__ import annotations

import heapq
from collections import deque
from collections.abc import Hashable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count

from . import lp
from .errors import GraphError, InfeasibleError, NegativeCycleError


@dataclass(frozen=True)
class FlowArc:
    tail: Hashable
    head: Hashable
    capacity: Fraction | int
    cost: Fraction | int = 0


class FlowNetwork:
    """Capacitated digraph with per-arc costs and node supplies.

    Parallel arcs are allowed and identified by insertion index.
    Positive supply is a source, negative a demand.
    """

    def __init__(self):
        self.nodes: list[Hashable] = []
        self.index: dict[Hashable, int] = {}
        self.arcs: list[FlowArc] = []
        self.supplies: dict[Hashable, Fraction | int] = {}

    def add_node(self, node: Hashable) -> int:
        idx = self.index.get(node)
        if idx is None:
            idx = self.index[node] = len(self.nodes)
            self.nodes.append(node)
        return idx

    def add_arc(self, tail, head, capacity, cost=0) -> int:
        if capacity < 0:
            raise GraphError(f"negative capacity on {tail!r}->{head!r}")
        self.add_node(tail)
        self.add_node(head)
        self.arcs.append(FlowArc(tail, head, capacity, cost))
        return len(self.arcs) - 1

    def add_supply(self, node, amount) -> None:
        self.add_node(node)
        self.supplies[node] = self.supplies.get(node, 0) + amount

    def copy(self) -> FlowNetwork:
        other = FlowNetwork()
        for n in self.nodes:
            other.add_node(n)
        other.arcs = list(self.arcs)
        other.supplies = dict(self.supplies)
        return other

    def __repr__(self) -> str:
        return f"FlowNetwork({len(self.nodes)} nodes, {len(self.arcs)} arcs)"


@dataclass
class IntegralFlow:
    flow: list[int]
    total_cost: Fraction

    def __getitem__(self, arc_index: int) -> int:
        return self.flow[arc_index]


@dataclass
class FractionalFlow:
    commodities: list[list[Fraction]]  # per commodity, per arc
    slack: list[Fraction]  # per arc

    def total(self) -> list[Fraction]:
        return [sum(col, Fraction(0)) for col in zip(*self.commodities)]


@dataclass
class FeasibilityResult:
    feasible: bool
    min_slack: Fraction | None  # None: no amount of extra capacity helps
    flow: FractionalFlow | None = None

    def __bool__(self) -> bool:
        return self.feasible


# --------------------------------------------------------------------------
# residual graph machinery


class _Residual:
    """Paired-edge residual graph; edge ``e ^ 1`` is the reverse of ``e``."""

    def __init__(self, n: int):
        self.n = n
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.head: list[int] = []
        self.cap: list = []
        self.cost: list = []

    def add(self, u: int, v: int, cap, cost=0) -> int:
        e = len(self.head)
        self.head += [v, u]
        self.cap += [cap, 0]
        self.cost += [cost, -cost]
        self.adj[u].append(e)
        self.adj[v].append(e + 1)
        return e


def _bellman_ford_potentials(res: _Residual) -> list:
    """Potentials making every residual reduced cost non-negative.

    Starts all labels at 0 (a virtual source joined to every node), so a
    negative cycle anywhere in the graph is detected.
    """
    n = res.n
    dist = [0] * n
    in_queue = [True] * n
    relax_count = [0] * n
    queue = deque(range(n))
    while queue:
        u = queue.popleft()
        in_queue[u] = False
        du = dist[u]
        for e in res.adj[u]:
            if res.cap[e] <= 0:
                continue
            v = res.head[e]
            nd = du + res.cost[e]
            if nd < dist[v]:
                dist[v] = nd
                relax_count[v] += 1
                if relax_count[v] > n:
                    raise NegativeCycleError("negative-cost cycle in flow network")
                if not in_queue[v]:
                    in_queue[v] = True
                    queue.append(v)
    return dist


def _ssp(net: FlowNetwork, supplies: Mapping) -> tuple[list, Fraction | int, object]:
    """Successive shortest paths. Returns (arc flows, total cost, amount left unsent)."""
    n = len(net.nodes)
    S, T = n, n + 1
    res = _Residual(n + 2)
    arc_edges = [res.add(net.index[a.tail], net.index[a.head], a.capacity, a.cost) for a in net.arcs]
    total = 0
    balance = 0
    for node, s in supplies.items():
        if s > 0:
            res.add(S, net.index[node], s, 0)
            total += s
        elif s < 0:
            res.add(net.index[node], T, -s, 0)
        balance += s
    if balance != 0:
        raise GraphError(f"supplies are unbalanced (net {balance})")

    if any(c < 0 for c in res.cost[0::2]):
        pot = _bellman_ford_potentials(res)
    else:
        pot = [0] * (n + 2)

    sent = 0
    tie = count()
    while sent < total:
        dist: list = [None] * (n + 2)
        prev = [-1] * (n + 2)
        dist[S] = 0
        heap = [(0, next(tie), S)]
        done = [False] * (n + 2)
        while heap:
            d, _, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = True
            pu = pot[u]
            for e in res.adj[u]:
                if res.cap[e] <= 0:
                    continue
                v = res.head[e]
                if done[v]:
                    continue
                nd = d + res.cost[e] + pu - pot[v]
                if dist[v] is None or nd < dist[v]:
                    dist[v] = nd
                    prev[v] = e
                    heapq.heappush(heap, (nd, next(tie), v))
        if dist[T] is None:
            break
        reach_max = max(d for d, ok in zip(dist, done) if ok)
        for v in range(n + 2):
            pot[v] += dist[v] if done[v] else reach_max
        # bottleneck along the path
        push = total - sent
        v = T
        while v != S:
            e = prev[v]
            if res.cap[e] < push:
                push = res.cap[e]
            v = res.head[e ^ 1]
        v = T
        while v != S:
            e = prev[v]
            res.cap[e] -= push
            res.cap[e ^ 1] += push
            v = res.head[e ^ 1]
        sent += push

    flows = [res.cap[e ^ 1] for e in arc_edges]
    cost = sum((f * a.cost for f, a in zip(flows, net.arcs)), Fraction(0))
    return flows, cost, total - sent


def min_cost_flow(net: FlowNetwork, integral: bool = True) -> IntegralFlow:
    """Minimum-cost flow meeting ``net.supplies`` exactly.

    With ``integral=True`` (the default) capacities and supplies must be
    integers and every returned arc flow is an ``int``.

    Raises:
        InfeasibleError: the demands cannot be met.
        NegativeCycleError: some cycle of positive-capacity arcs has negative cost.
    """
    if integral:
        for a in net.arcs:
            if Fraction(a.capacity).denominator != 1:
                raise GraphError(f"non-integer capacity {a.capacity} on {a.tail!r}->{a.head!r}")
        for node, s in net.supplies.items():
            if Fraction(s).denominator != 1:
                raise GraphError(f"non-integer supply {s} at {node!r}")
    flows, cost, unsent = _ssp(net, net.supplies)
    if unsent:
        raise InfeasibleError(f"demand cannot be met ({unsent} units unrouted)")
    if integral:
        flows = [int(f) for f in flows]
    return IntegralFlow(flows, Fraction(cost))


# --------------------------------------------------------------------------
# max flow


def _dinic(res: _Residual, s: int, t: int, limit=None):
    value = 0
    while limit is None or value < limit:
        level = [-1] * res.n
        level[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in res.adj[u]:
                if res.cap[e] > 0 and level[res.head[e]] < 0:
                    level[res.head[e]] = level[u] + 1
                    queue.append(res.head[e])
        if level[t] < 0:
            break
        it = [0] * res.n
        while True:
            room = None if limit is None else limit - value
            got = _iterative_push(res, s, t, level, it, room)
            if not got:
                break
            value += got
    return value


def _iterative_push(res: _Residual, s: int, t: int, level, it, room):
    """One blocking-flow augmentation along level-graph arcs (no recursion)."""
    path: list[int] = []
    u = s
    while True:
        if u == t:
            f = room
            for e in path:
                if f is None or res.cap[e] < f:
                    f = res.cap[e]
            for e in path:
                res.cap[e] -= f
                res.cap[e ^ 1] += f
            return f
        adj = res.adj[u]
        advanced = False
        while it[u] < len(adj):
            e = adj[it[u]]
            v = res.head[e]
            if res.cap[e] > 0 and level[v] == level[u] + 1:
                path.append(e)
                u = v
                advanced = True
                break
            it[u] += 1
        if advanced:
            continue
        if not path:
            return 0
        level[u] = -1  # dead end
        e = path.pop()
        u = res.head[e ^ 1]
        it[u] += 1


def max_flow(net: FlowNetwork, source, sink, limit=None) -> tuple[Fraction, list]:
    """Maximum ``source -> sink`` flow value and per-arc flows.

    ``limit`` stops early once that value is reached.
    """
    if source not in net.index or sink not in net.index:
        return Fraction(0), [0] * len(net.arcs)
    res = _Residual(len(net.nodes))
    edges = [res.add(net.index[a.tail], net.index[a.head], a.capacity) for a in net.arcs]
    if source == sink:
        return Fraction(0), [0] * len(net.arcs)
    value = _dinic(res, net.index[source], net.index[sink], limit)
    return Fraction(value), [res.cap[e ^ 1] for e in edges]


# --------------------------------------------------------------------------
# fractional (multi)commodity feasibility


def _check_commodity(c: Mapping) -> Fraction:
    bal = sum(c.values(), Fraction(0))
    if bal != 0:
        raise GraphError(f"commodity is unbalanced (net supply {bal})")
    return sum((v for v in c.values() if v > 0), Fraction(0))


def _with_super_terminals(net: FlowNetwork, commodity: Mapping):
    aug = net.copy()
    src, snk = ("__src__",), ("__snk__",)
    aug.add_node(src)
    aug.add_node(snk)
    for node, s in commodity.items():
        if s > 0:
            aug.add_arc(src, node, s)
        elif s < 0:
            aug.add_arc(node, snk, -s)
    return aug, src, snk


def _single_commodity(net: FlowNetwork, commodity: Mapping) -> FeasibilityResult:
    total = _check_commodity(commodity)
    m = len(net.arcs)
    if total == 0:
        zero = [Fraction(0)] * m
        return FeasibilityResult(True, Fraction(0), FractionalFlow([zero], list(zero)))
    aug, src, snk = _with_super_terminals(net, commodity)
    value, flows = max_flow(aug, src, snk, limit=total)
    if value >= total:
        f = [Fraction(x) for x in flows[:m]]
        return FeasibilityResult(True, Fraction(0), FractionalFlow([f], [Fraction(0)] * m))
    # capacity is short: find the cheapest set of capacity increases
    slacked = net.copy()
    slacked.arcs = [FlowArc(a.tail, a.head, a.capacity, 0) for a in net.arcs]
    for a in net.arcs:
        slacked.add_arc(a.tail, a.head, total, 1)
    flows, cost, unsent = _ssp(slacked, commodity)
    if unsent:
        return FeasibilityResult(False, None)
    f = [Fraction(flows[i] + flows[m + i]) for i in range(m)]
    return FeasibilityResult(False, Fraction(cost), FractionalFlow([f], [Fraction(flows[m + i]) for i in range(m)]))


def _reach(n_nodes: int, arcs, starts, forward: bool) -> set[int]:
    adj: list[list[int]] = [[] for _ in range(n_nodes)]
    for t, h in arcs:
        if forward:
            adj[t].append(h)
        else:
            adj[h].append(t)
    seen = set(starts)
    queue = deque(starts)
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def _lp_feasibility(net: FlowNetwork, commodities: Sequence[Mapping]) -> FeasibilityResult:
    n, m = len(net.nodes), len(net.arcs)
    ends = [(net.index[a.tail], net.index[a.head]) for a in net.arcs]
    var = 0
    flow_vars: list[dict[int, int]] = []  # per commodity: arc -> var
    rows: list[dict[int, Fraction]] = []
    rhs: list[Fraction] = []
    for c in commodities:
        srcs = [net.index[v] for v, s in c.items() if s > 0]
        snks = [net.index[v] for v, s in c.items() if s < 0]
        fwd = _reach(n, ends, srcs, True)
        bwd = _reach(n, ends, snks, False)
        if any(s not in bwd for s in srcs) or any(t not in fwd for t in snks):
            if _check_commodity(c) > 0:
                return FeasibilityResult(False, None)
        usable = {i: None for i, (t, h) in enumerate(ends) if t in fwd and h in bwd}
        fv = {}
        for i in usable:
            fv[i] = var
            var += 1
        flow_vars.append(fv)
        node_rows: dict[int, dict[int, Fraction]] = {}
        for i, j in fv.items():
            t, h = ends[i]
            node_rows.setdefault(t, {})[j] = Fraction(1)
            node_rows.setdefault(h, {})[j] = Fraction(-1)
        for v, s in c.items():
            node_rows.setdefault(net.index[v], {})
        for node_idx in sorted(node_rows):
            rows.append(node_rows[node_idx])
            rhs.append(Fraction(c.get(net.nodes[node_idx], 0)))
    used_arcs = sorted({i for fv in flow_vars for i in fv})
    slack_var = {}
    cost = {}
    for i in used_arcs:
        rho, spare = var, var + 1
        var += 2
        slack_var[i] = rho
        cost[rho] = Fraction(1)
        row = {fv[i]: Fraction(1) for fv in flow_vars if i in fv}
        row[rho] = Fraction(-1)
        row[spare] = Fraction(1)
        rows.append(row)
        rhs.append(Fraction(net.arcs[i].capacity))
    result = lp.solve(var, cost, rows, rhs)
    if result.status != "optimal":
        return FeasibilityResult(False, None)
    x = result.x
    per = [[x.get(fv[i], Fraction(0)) if i in fv else Fraction(0) for i in range(m)] for fv in flow_vars]
    slack = [x.get(slack_var[i], Fraction(0)) if i in slack_var else Fraction(0) for i in range(m)]
    flow = FractionalFlow(per, slack)
    return FeasibilityResult(result.objective == 0, result.objective, flow)


CERTIFY_THRESHOLD = 400  # LP columns above which "auto" tries the certified path first


def _single_source(c: Mapping):
    srcs = [v for v, s in c.items() if s > 0]
    return srcs[0] if len(srcs) == 1 else None


def _exact_distances(net: FlowNetwork, length: list, source) -> dict:
    """Dijkstra with exact non-negative arc lengths."""
    out: dict = {}
    for i, a in enumerate(net.arcs):
        out.setdefault(a.tail, []).append(i)
    dist = {source: Fraction(0)}
    tie = count()
    heap = [(Fraction(0), next(tie), source)]
    done = set()
    while heap:
        d, _, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for i in out.get(u, ()):
            v = net.arcs[i].head
            nd = d + length[i]
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, next(tie), v))
    return dist


def _is_flow(net: FlowNetwork, commodities: Sequence[Mapping], flows: list) -> bool:
    """Exact check that ``flows`` meets every commodity within capacity."""
    for j, c in enumerate(commodities):
        excess = {v: Fraction(0) for v in net.nodes}
        for i, a in enumerate(net.arcs):
            excess[a.tail] += flows[j][i]
            excess[a.head] -= flows[j][i]
        if any(excess[v] != c.get(v, 0) for v in net.nodes):
            return False
    return all(sum(f[i] for f in flows) <= a.capacity for i, a in enumerate(net.arcs))


def _certified_feasibility(net: FlowNetwork, commodities: Sequence[Mapping]) -> FeasibilityResult | None:
    """Float LP (HiGHS) for guidance, answer checked in exact arithmetic.

    A feasible verdict is certified by exact max flows routed commodity by
    commodity inside the float allocation; an infeasible verdict by a
    length function (from the LP duals) whose exact shortest-path bound
    exceeds the total length-weighted capacity.  Returns ``None`` when
    neither check goes through.
    """
    import numpy as np
    from scipy.optimize import linprog
    from scipy.sparse import coo_matrix

    sources = [_single_source(c) for c in commodities]
    if any(s is None for s in sources):
        return None
    for s, c in zip(sources, commodities):
        dist = _exact_distances(net, [Fraction(0)] * len(net.arcs), s)
        if any(v not in dist for v, x in c.items() if x < 0):
            return FeasibilityResult(False, None)
    n, m = len(net.nodes), len(net.arcs)
    ends = [(net.index[a.tail], net.index[a.head]) for a in net.arcs]
    cols: list[tuple[int, int]] = []  # (commodity, arc)
    for j, c in enumerate(commodities):
        fwd = _reach(n, ends, [net.index[sources[j]]], True)
        bwd = _reach(n, ends, [net.index[v] for v, s in c.items() if s < 0], False)
        cols += [(j, i) for i, (t, h) in enumerate(ends) if t in fwd and h in bwd]
    nx = len(cols)
    rows, vals, idx = [], [], []
    for col, (j, i) in enumerate(cols):
        t, h = ends[i]
        rows += [j * n + t, j * n + h]
        idx += [col, col]
        vals += [1.0, -1.0]
    a_eq = coo_matrix((vals, (rows, idx)), shape=(len(commodities) * n, nx + m)).tocsr()
    b_eq = np.zeros(len(commodities) * n)
    for j, c in enumerate(commodities):
        for v, s in c.items():
            b_eq[j * n + net.index[v]] = float(s)
    urows = [i for _, i in cols] + list(range(m))
    ucols = list(range(nx)) + [nx + i for i in range(m)]
    uvals = [1.0] * nx + [-1.0] * m
    a_ub = coo_matrix((uvals, (urows, ucols)), shape=(m, nx + m)).tocsr()
    b_ub = np.array([float(a.capacity) for a in net.arcs])
    cost = np.concatenate([np.zeros(nx), np.ones(m)])
    res = linprog(cost, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs-ds")
    if res.status != 0:
        return None
    scale = max(1.0, float(sum(_check_commodity(c) for c in commodities)))
    if res.fun <= 1e-9 * scale:
        # a simplex vertex of rational data is rational: recover it exactly
        alloc = [[Fraction(0)] * m for _ in commodities]
        for col, (j, i) in enumerate(cols):
            if res.x[col] > 0:
                alloc[j][i] = Fraction(float(res.x[col])).limit_denominator(10**6)
        if _is_flow(net, commodities, alloc):
            return FeasibilityResult(True, Fraction(0), FractionalFlow(alloc, [Fraction(0)] * m))
        # otherwise route exactly inside the rounded allocation, one commodity at a time
        for order in (list(range(len(commodities))), list(reversed(range(len(commodities))))):
            left = [Fraction(a.capacity) for a in net.arcs]
            flows: list = [None] * len(commodities)
            ok = True
            for j in order:
                # the last commodity may use everything the others left over
                last = j == order[-1]
                sub = net.copy()
                sub.arcs = [
                    FlowArc(a.tail, a.head, left[i] if last else min(left[i], alloc[j][i]), a.cost)
                    for i, a in enumerate(net.arcs)
                ]
                total = _check_commodity(commodities[j])
                aug, src, snk = _with_super_terminals(sub, commodities[j])
                value, f = max_flow(aug, src, snk, limit=total)
                if value < total:
                    ok = False
                    break
                flows[j] = [Fraction(x) for x in f[:m]]
                left = [x - f for x, f in zip(left, flows[j])]
            if ok:
                return FeasibilityResult(True, Fraction(0), FractionalFlow(flows, [Fraction(0)] * m))
        return None
    marg = res.ineqlin.marginals
    length = [Fraction(max(0.0, -float(marg[i]))).limit_denominator(10**9) for i in range(m)]
    bound = Fraction(0)
    for j, c in enumerate(commodities):
        dist = _exact_distances(net, length, sources[j])
        for v, s in c.items():
            if s < 0:
                if v not in dist:
                    return FeasibilityResult(False, None)
                bound += -s * dist[v]
    used = sum((length[i] * Fraction(a.capacity) for i, a in enumerate(net.arcs)), Fraction(0))
    if bound > used:
        return FeasibilityResult(False, None)
    return None


def fractional_feasibility(
    net: FlowNetwork,
    commodities: Sequence[Mapping],
    method: str = "auto",
) -> FeasibilityResult:
    """Decide whether all commodities fit jointly, minimizing total slack otherwise.

    Each commodity maps nodes to supply (+) or demand (-) and must balance.
    ``net.supplies`` is ignored.  Arc capacities bound the sum over
    commodities; slack ``rho`` on an arc is extra capacity bought at unit cost.
    The result is feasible iff the minimum total slack is 0.

    ``method``:

    * ``"auto"``: flow algorithms for one commodity; for several, the exact
      simplex, or on large networks the certified float path first;
    * ``"lp"``: always the exact simplex;
    * ``"certified"``: certified float path, exact simplex if inconclusive.

    A verdict from the certified path is exact, but an infeasible one does
    not report the minimum slack (``min_slack`` is ``None``).
    """
    for c in commodities:
        _check_commodity(c)
        for node in c:
            if node not in net.index:
                raise GraphError(f"commodity node {node!r} not in network")
    if method not in ("auto", "lp", "certified"):
        raise ValueError(f"unknown method {method!r}")
    if method == "auto" and len(commodities) == 1:
        return _single_commodity(net, commodities[0])
    if method == "certified" or (method == "auto" and len(net.arcs) * len(commodities) > CERTIFY_THRESHOLD):
        found = _certified_feasibility(net, commodities)
        if found is not None:
            return found
    return _lp_feasibility(net, commodities)


def check_flow_conservation(net: FlowNetwork, flow, supplies: Mapping | None = None) -> bool:
    """True iff ``0 <= flow <= capacity`` on every arc and each node's net
    outflow equals its supply (``net.supplies`` unless given)."""
    values = flow.flow if isinstance(flow, IntegralFlow) else flow
    if isinstance(values, Mapping):
        values = [values.get(i, 0) for i in range(len(net.arcs))]
    if len(values) != len(net.arcs):
        return False
    supplies = net.supplies if supplies is None else supplies
    excess = {n: 0 for n in net.nodes}
    for f, a in zip(values, net.arcs):
        if f < 0 or f > a.capacity:
            return False
        excess[a.tail] += f
        excess[a.head] -= f
    return all(excess[n] == supplies.get(n, 0) for n in net.nodes) and all(
        n in excess for n in supplies if supplies[n]
    )
