"""Path helpers: flow decomposition, simple-path enumeration, BFS trees."""

from __future__ import annotations

from collections import deque
from collections.abc import Callable, Hashable
from fractions import Fraction

from .errors import BudgetExceeded, GraphError
from .flow import FlowNetwork
from .graph import SatNode, TimeVaryingGraph


def decompose(
    net: FlowNetwork,
    flows: list,
    source: Hashable,
    is_sink: Callable[[Hashable], bool],
) -> list[tuple[list, Fraction]]:
    """Split an arc flow leaving ``source`` into ``(node list, amount)`` paths.

    Flow cycles met along the way are cancelled.  Arcs are followed in
    insertion order, so the result is deterministic.
    """
    remaining = [Fraction(f) for f in flows]
    out: dict = {}
    for i, a in enumerate(net.arcs):
        out.setdefault(a.tail, []).append(i)
    ptr: dict = {}

    def next_arc(node):
        lst = out.get(node, ())
        p = ptr.get(node, 0)
        while p < len(lst) and remaining[lst[p]] <= 0:
            p += 1
        ptr[node] = p
        return lst[p] if p < len(lst) else None

    paths = []
    while next_arc(source) is not None:
        walk, arcs = [source], []
        pos = {source: 0}
        x = source
        while True:
            if x != source and is_sink(x):
                break
            e = next_arc(x)
            if e is None:
                if x == source:  # what was left at the source only fed cycles
                    break
                raise GraphError(f"flow does not conserve at {x!r}")
            y = net.arcs[e].head
            if y in pos:
                cut = pos[y]
                cyc = arcs[cut:] + [e]
                delta = min(remaining[i] for i in cyc)
                for i in cyc:
                    remaining[i] -= delta
                for n in walk[cut + 1:]:
                    del pos[n]
                walk, arcs = walk[: cut + 1], arcs[:cut]
                x = y
                continue
            arcs.append(e)
            walk.append(y)
            pos[y] = len(walk) - 1
            x = y
        if not arcs:
            continue
        delta = min(remaining[i] for i in arcs)
        for i in arcs:
            remaining[i] -= delta
        paths.append((walk, delta))
    return paths


def trim_at(nodes, satellite: int) -> tuple:
    """Prefix of ``nodes`` ending at the first visit of ``satellite``."""
    for i, n in enumerate(nodes):
        if isinstance(n, SatNode) and n.satellite == satellite:
            return tuple(nodes[: i + 1])
    raise GraphError(f"path never visits satellite {satellite}")


def usable(arc, min_capacity) -> bool:
    return arc.capacity >= min_capacity and arc.capacity > 0


def simple_paths(
    tvg: TimeVaryingGraph,
    start: SatNode,
    target: int,
    min_capacity,
    limit: int,
) -> list[tuple[SatNode, ...]]:
    """Simple paths from ``start`` ending at the first visit of satellite ``target``.

    Only arcs of capacity at least ``min_capacity`` are used.  Sorted by
    (arrival snapshot, length, nodes).
    """
    found: list[tuple[SatNode, ...]] = []
    if start.satellite == target:
        return [(start,)]
    path = [start]
    on_path = {start}
    stack = [iter(tvg.out_arcs[start])]
    while stack:
        arc = next(stack[-1], None)
        if arc is None:
            stack.pop()
            on_path.discard(path.pop())
            continue
        v = arc.head
        if v in on_path or not usable(arc, min_capacity):
            continue
        if v.satellite == target:
            found.append((*path, v))
            if len(found) > limit:
                raise BudgetExceeded(f"more than {limit} candidate paths")
            continue
        path.append(v)
        on_path.add(v)
        stack.append(iter(tvg.out_arcs[v]))
    found.sort(key=lambda p: (p[-1].snapshot, len(p), p))
    return found


def bfs_tree(tvg: TimeVaryingGraph, root: SatNode, allowed: Callable) -> dict[SatNode, SatNode | None]:
    """BFS parents from ``root`` over arcs accepted by ``allowed(arc)``."""
    parent: dict[SatNode, SatNode | None] = {root: None}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for arc in tvg.out_arcs[u]:
            if arc.head not in parent and allowed(arc):
                parent[arc.head] = u
                queue.append(arc.head)
    return parent


def tree_path(parent: dict, node) -> tuple:
    out = [node]
    while parent[out[-1]] is not None:
        out.append(parent[out[-1]])
    return tuple(reversed(out))


def earliest_copies(parent: dict, satellites) -> dict[int, SatNode]:
    """Earliest reached copy of each satellite in a BFS tree."""
    best: dict[int, SatNode] = {}
    for n in parent:
        if n.satellite in satellites:
            cur = best.get(n.satellite)
            if cur is None or n.snapshot < cur.snapshot:
                best[n.satellite] = n
    return best
