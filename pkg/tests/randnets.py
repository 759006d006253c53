"""Seeded random networks shared by the unit tests and the acceptance suite."""

from __future__ import annotations

import random

from tvgroute import FlowNetwork


def random_flow_network(rng: random.Random, max_nodes: int = 12, max_arcs: int = 7, max_cap: int = 2):
    """Small integer network with one source and one sink.

    Arc costs are ``pi[v] - pi[u] + r`` with ``r >= 0``, so costs may be
    negative but no cycle is.  Returns ``(net, nodes, arcs, supplies)`` where
    ``arcs`` are ``(tail, head, cap, cost)`` tuples for the brute-force oracle.
    """
    n = rng.randint(2, max_nodes)
    nodes = list(range(n))
    pi = [rng.randint(-3, 3) for _ in nodes]
    s, t = rng.sample(nodes, 2)
    arcs = []
    # a random s-t route makes feasible instances common
    route = [s] + rng.sample([v for v in nodes if v not in (s, t)], rng.randint(0, min(3, n - 2))) + [t]
    for u, v in zip(route, route[1:]):
        arcs.append((u, v))
    while len(arcs) < rng.randint(len(arcs), max_arcs):
        u, v = rng.sample(nodes, 2)
        arcs.append((u, v))
    arcs = arcs[:max_arcs]
    full = []
    net = FlowNetwork()
    for v in nodes:
        net.add_node(v)
    for u, v in arcs:
        cap = rng.randint(0, max_cap)
        cost = pi[v] - pi[u] + rng.randint(0, 3)
        net.add_arc(u, v, cap, cost)
        full.append((u, v, cap, cost))
    d = rng.randint(0, max_cap)
    supplies = {s: d, t: -d} if d else {}
    for v, x in supplies.items():
        net.add_supply(v, x)
    return net, nodes, full, supplies


def random_gm_graph(rng: random.Random, max_nodes: int = 9):
    """A small multicast graph shaped like G^M.

    Satellite copies and cache arcs cost 0; each client sink is entered from
    every copy of its satellite at cost ``k * w``.  Nodes unreachable from
    the root are dropped.  Returns ``(nodes, arcs, root, terminals)`` with
    arcs as ``(tail, head, cost)``, or ``None`` if some terminal is
    unreachable.
    """
    from tvgroute import AuxSink, SatNode
    from tvgroute.generators import generate_random_tvg

    while True:
        sats, snaps = rng.randint(2, 4), rng.randint(1, 3)
        n_clients = rng.randint(1, min(3, sats - 1))
        if sats * snaps + n_clients <= max_nodes:
            break
    g = generate_random_tvg(sats, snaps, 0.5, (0, 1), rng.randrange(1 << 30), 1)
    root = SatNode(1, 1)
    clients = rng.sample(range(2, sats + 1), n_clients)
    arcs = [(a.tail, a.head, 0) for a in g.arcs]
    for c in clients:
        w = rng.randint(1, 3)
        arcs += [(SatNode(c, k), AuxSink(c), k * w) for k in range(1, snaps + 1)]
    reach, todo = {root}, [root]
    while todo:
        u = todo.pop()
        for t, h, _ in arcs:
            if t == u and h not in reach:
                reach.add(h)
                todo.append(h)
    terminals = [AuxSink(c) for c in clients]
    if not all(t in reach for t in terminals):
        return None
    arcs = [a for a in arcs if a[0] in reach and a[1] in reach]
    return sorted(reach, key=repr), arcs, root, terminals
