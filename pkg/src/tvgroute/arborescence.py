"""Minimum-cost spanning arborescence (Chu-Liu/Edmonds) and Steiner pruning."""

from __future__ import annotations

from collections import deque
from collections.abc import Callable, Hashable, Iterable
from dataclasses import dataclass
from fractions import Fraction

from .errors import UnreachableNodeError
from .graph import node_key


@dataclass(frozen=True)
class Arborescence:
    root: Hashable
    parent: dict  # node -> (tail, cost) of its unique incoming arc
    total_cost: Fraction

    @property
    def nodes(self) -> set:
        return {self.root, *self.parent}

    @property
    def arcs(self) -> list[tuple]:
        return [(t, h, c) for h, (t, c) in self.parent.items()]

    def children(self) -> dict:
        out: dict = {n: [] for n in self.nodes}
        for h, (t, _) in self.parent.items():
            out[t].append(h)
        return out

    def leaves(self) -> set:
        kids = self.children()
        return {n for n, ch in kids.items() if not ch and n != self.root}


def min_cost_arborescence(
    nodes: Iterable[Hashable],
    arcs: Iterable[tuple],
    root: Hashable,
    key: Callable[[Hashable], object] = node_key,
) -> Arborescence:
    """Spanning arborescence of minimum total cost rooted at ``root``.

    ``arcs`` are ``(tail, head, cost)``.  Among equal-cost incoming arcs the
    one whose tail sorts first under ``key`` wins (contracted cycles sort by
    their smallest member).  Cycles are contracted level by level, all at
    once, and expanded from an explicit list of levels, so there is no
    recursion.

    Raises:
        UnreachableNodeError: some node cannot be reached from ``root``.
    """
    names = sorted(set(nodes) | {root}, key=key)
    idx = {n: i for i, n in enumerate(names)}  # rank doubles as tie-break key
    orig = [(idx[t], idx[h], Fraction(c)) for t, h, c in arcs]
    r = idx[root]

    adj: list[list[int]] = [[] for _ in names]
    for t, h, _ in orig:
        adj[t].append(h)
    seen = {r}
    queue = deque([r])
    while queue:
        for v in adj[queue.popleft()]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    if len(seen) != len(names):
        missing = [names[i] for i in range(len(names)) if i not in seen]
        raise UnreachableNodeError(f"not reachable from {root!r}: {missing[:5]}")

    # level arcs: (tail, head, cost, ref) with ref indexing the previous level
    level_arcs = [[(t, h, c, i) for i, (t, h, c) in enumerate(orig)]]
    level_best: list[dict[int, int]] = []
    level_cycles: list[list[list[int]]] = []
    tie = list(range(len(names)))
    current = list(range(len(names)))
    next_id = len(names)

    while True:
        arcs_l = level_arcs[-1]
        best: dict[int, int] = {}
        for i, (t, h, c, _) in enumerate(arcs_l):
            if t == h or h == r:
                continue
            b = best.get(h)
            if b is None:
                best[h] = i
                continue
            bt, _, bc, _ = arcs_l[b]
            if (c, tie[t], i) < (bc, tie[bt], b):
                best[h] = i
        for v in current:
            if v != r and v not in best:
                raise UnreachableNodeError(f"contracted node {v} has no incoming arc")

        state: dict[int, int] = {}
        cycles: list[list[int]] = []
        for v in current:
            walk = []
            x = v
            while x != r and x not in state:
                state[x] = v
                walk.append(x)
                x = arcs_l[best[x]][0]
            if x != r and state[x] == v:
                cycles.append(walk[walk.index(x):])
        level_best.append(best)
        level_cycles.append(cycles)
        if not cycles:
            break

        comp = {v: v for v in current}
        for cyc in cycles:
            sid = next_id
            next_id += 1
            tie.append(min(tie[v] for v in cyc))
            for v in cyc:
                comp[v] = sid
        in_cycle = {v for cyc in cycles for v in cyc}
        new_arcs = []
        for i, (t, h, c, _) in enumerate(arcs_l):
            ct, ch = comp[t], comp[h]
            if ct == ch:
                continue
            if h in in_cycle:
                c = c - arcs_l[best[h]][2]
            new_arcs.append((ct, ch, c, i))
        level_arcs.append(new_arcs)
        current = sorted(set(comp.values()))

    # expand from the top level down
    chosen = set(level_best[-1].values())
    for lv in range(len(level_arcs) - 1, 0, -1):
        upper, lower = level_arcs[lv], level_arcs[lv - 1]
        mapped = {upper[i][3] for i in chosen}
        best = level_best[lv - 1]
        entered = {lower[i][1] for i in mapped}
        for cyc in level_cycles[lv - 1]:
            entry = next(v for v in cyc if v in entered)
            mapped.update(best[v] for v in cyc if v != entry)
        chosen = mapped

    parent = {}
    total = Fraction(0)
    for i in sorted(chosen):
        t, h, c = orig[i]
        parent[names[h]] = (names[t], c)
        total += c
    return Arborescence(root, parent, total)


def prune_to_steiner(arb: Arborescence, terminals: Iterable[Hashable]) -> Arborescence:
    """Peel non-terminal leaves until every leaf is a terminal."""
    terminals = set(terminals)
    missing = terminals - arb.nodes
    if missing:
        raise UnreachableNodeError(f"terminals not in arborescence: {sorted(missing, key=node_key)[:5]}")
    parent = dict(arb.parent)
    kids: dict = {}
    for h, (t, _) in parent.items():
        kids[t] = kids.get(t, 0) + 1
    stack = [n for n in parent if n not in kids and n not in terminals]
    while stack:
        leaf = stack.pop()
        t, _ = parent.pop(leaf)
        kids[t] -= 1
        if kids[t] == 0 and t != arb.root and t not in terminals:
            stack.append(t)
    total = sum((c for _, c in parent.values()), Fraction(0))
    return Arborescence(arb.root, parent, total)
