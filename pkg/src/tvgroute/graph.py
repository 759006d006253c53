"""Time-varying graphs (TVGs) over satellite snapshots.

A node ``SatNode(i, k)`` is satellite ``i`` during snapshot ``k`` (both
1-based).  Intra-snapshot arcs are user supplied and directed; cache arcs
``i@k -> i@k+1`` are always derived, one per satellite and consecutive
snapshot pair.  All capacities are :class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
from collections import deque
from collections.abc import Hashable, Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple

from .errors import GraphError
from .flow import FlowNetwork


@dataclass(frozen=True, order=True)
class SatNode:
    satellite: int
    snapshot: int

    def __repr__(self) -> str:
        return f"{self.satellite}@{self.snapshot}"


@dataclass(frozen=True, order=True)
class AuxSink:
    """Auxiliary per-client sink; never tied to a snapshot."""

    client: int
    model: int = 0

    def __repr__(self) -> str:
        return f"a{self.client}" if self.model == 0 else f"a{self.client}/m{self.model}"


def node_key(node: Hashable) -> tuple:
    """Total order over mixed node kinds (satellite nodes first)."""
    if isinstance(node, SatNode):
        return (0, node.satellite, node.snapshot)
    if isinstance(node, AuxSink):
        return (1, node.client, node.model)
    return (2, repr(node))


class Arc(NamedTuple):
    tail: SatNode
    head: SatNode
    capacity: Fraction
    kind: str  # "intra" | "cache"


def as_fraction(value, name: str = "value") -> Fraction:
    if isinstance(value, float):
        raise GraphError(f"{name}: floats are not accepted, use int/Fraction/'p/q' ({value!r})")
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise GraphError(f"{name}: not a rational number ({value!r})") from exc


@dataclass(frozen=True)
class TimeVaryingGraph:
    satellites: int
    snapshots: int
    intra: Mapping[tuple[SatNode, SatNode], Fraction]
    cache: Mapping[int, Fraction] = field(default_factory=dict)

    @cached_property
    def nodes(self) -> list[SatNode]:
        return [
            SatNode(i, k)
            for k in range(1, self.snapshots + 1)
            for i in range(1, self.satellites + 1)
        ]

    @cached_property
    def arcs(self) -> list[Arc]:
        out = [Arc(u, v, c, "intra") for (u, v), c in sorted(self.intra.items())]
        for k in range(1, self.snapshots):
            for i in range(1, self.satellites + 1):
                out.append(Arc(SatNode(i, k), SatNode(i, k + 1), self.cache[i], "cache"))
        return out

    @cached_property
    def out_arcs(self) -> dict[SatNode, list[Arc]]:
        adj: dict[SatNode, list[Arc]] = {n: [] for n in self.nodes}
        for arc in self.arcs:
            adj[arc.tail].append(arc)
        return adj

    @cached_property
    def capacity(self) -> dict[tuple[SatNode, SatNode], Fraction]:
        return {(a.tail, a.head): a.capacity for a in self.arcs}

    def has_node(self, node: Hashable) -> bool:
        return (
            isinstance(node, SatNode)
            and 1 <= node.satellite <= self.satellites
            and 1 <= node.snapshot <= self.snapshots
        )

    def intra_arcs(self, snapshot: int | None = None) -> list[Arc]:
        return [
            a for a in self.arcs
            if a.kind == "intra" and (snapshot is None or a.tail.snapshot == snapshot)
        ]

    def cache_arcs(self) -> list[Arc]:
        return [a for a in self.arcs if a.kind == "cache"]

    def with_intra(self, intra: Mapping[tuple[SatNode, SatNode], Fraction]) -> TimeVaryingGraph:
        return TimeVaryingGraph(self.satellites, self.snapshots, dict(intra), dict(self.cache))

    def reversed_in_time(self) -> TimeVaryingGraph:
        """Flip every arc and mirror snapshots (``k -> K+1-k``).

        Maps collection problems onto distribution problems and back.
        """
        K = self.snapshots
        mirror = lambda n: SatNode(n.satellite, K + 1 - n.snapshot)  # noqa: E731
        intra = {(mirror(v), mirror(u)): c for (u, v), c in self.intra.items()}
        return TimeVaryingGraph(self.satellites, K, intra, dict(self.cache))


def _check_counts(I: int, K: int) -> None:
    if not isinstance(I, int) or not isinstance(K, int) or I < 1 or K < 1:
        raise GraphError(f"satellite and snapshot counts must be positive integers (I={I!r}, K={K!r})")


def _cache_map(I: int, total: Fraction, cache_capacity) -> dict[int, Fraction]:
    if cache_capacity is None:
        cache = {i: total for i in range(1, I + 1)}
    elif isinstance(cache_capacity, Mapping):
        cache = {i: total for i in range(1, I + 1)}
        for i, c in cache_capacity.items():
            if not 1 <= int(i) <= I:
                raise GraphError(f"cache override for unknown satellite {i}")
            cache[int(i)] = as_fraction(c, "cache capacity")
    else:
        c = as_fraction(cache_capacity, "cache capacity")
        cache = {i: c for i in range(1, I + 1)}
    if any(c < 0 for c in cache.values()):
        raise GraphError("cache capacities must be non-negative")
    return cache


def from_arcs(
    I: int,
    K: int,
    arcs: Iterable[tuple],
    model_demand_total=0,
    cache_capacity=None,
) -> TimeVaryingGraph:
    """Build a TVG from directed arcs ``((i, k), (j, k), cap)``.

    Zero-capacity arcs are dropped; repeated directed arcs are rejected.
    """
    _check_counts(I, K)
    intra: dict[tuple[SatNode, SatNode], Fraction] = {}
    for u, v, cap in arcs:
        u, v = SatNode(*u), SatNode(*v)
        for n in (u, v):
            if not (1 <= n.satellite <= I and 1 <= n.snapshot <= K):
                raise GraphError(f"node {n!r} outside I={I}, K={K}")
        if u.snapshot != v.snapshot:
            raise GraphError(f"intra arc {u!r}->{v!r} crosses snapshots")
        if u.satellite == v.satellite:
            raise GraphError(f"self loop at {u!r}")
        cap = as_fraction(cap, "capacity")
        if cap < 0:
            raise GraphError(f"negative capacity on {u!r}->{v!r}")
        if (u, v) in intra:
            raise GraphError(f"duplicate arc {u!r}->{v!r}")
        intra[(u, v)] = cap
    intra = {key: c for key, c in intra.items() if c > 0}
    total = as_fraction(model_demand_total, "model_demand_total")
    return TimeVaryingGraph(I, K, intra, _cache_map(I, total, cache_capacity))


def build_tvg(
    I: int,
    K: int,
    intra_links: Iterable[tuple],
    model_demand_total,
    cache_capacity=None,
) -> TimeVaryingGraph:
    """Build a TVG from bidirectional links ``(i, j, k, cap_ij, cap_ji)``.

    Each link yields up to two directed arcs (zero-capacity directions are
    not materialized).  Cache arcs get capacity ``model_demand_total`` unless
    ``cache_capacity`` overrides it (a scalar or a per-satellite mapping).
    """
    _check_counts(I, K)
    seen: set[tuple[int, int, int]] = set()
    arcs = []
    for link in intra_links:
        i, j, k, cap_ij, cap_ji = link
        key = (min(i, j), max(i, j), k)
        if key in seen:
            raise GraphError(f"duplicate link {i}-{j} in snapshot {k}")
        seen.add(key)
        arcs.append(((i, k), (j, k), cap_ij))
        arcs.append(((j, k), (i, k), cap_ji))
    return from_arcs(I, K, arcs, model_demand_total, cache_capacity)


@dataclass(frozen=True)
class ExpandedGraph:
    """TVG plus one auxiliary sink per client, entered from every snapshot copy."""

    base: TimeVaryingGraph
    clients: tuple[tuple[int, Fraction], ...]
    entry_arcs: tuple[tuple[SatNode, AuxSink, Fraction, Fraction], ...]

    @property
    def sinks(self) -> list[AuxSink]:
        return [AuxSink(c) for c, _ in self.clients]

    def flow_network(self, q: Fraction | None = None) -> FlowNetwork:
        """Flow view: base arcs cost 0 (normalized by ``q`` if given), entry arcs as built."""
        net = normalize_capacities(self.base, q) if q is not None else _raw_network(self.base)
        for u, a, cap, cost in self.entry_arcs:
            net.add_arc(u, a, cap, cost)
        return net


def expand_with_client_sinks(
    tvg: TimeVaryingGraph,
    clients: Iterable[tuple[int, object]],
    entry_capacity=1,
) -> ExpandedGraph:
    clients = tuple((int(c), as_fraction(w, "weight")) for c, w in clients)
    cap = as_fraction(entry_capacity, "entry_capacity")
    entries = []
    for c, w in clients:
        if not 1 <= c <= tvg.satellites:
            raise GraphError(f"client {c} is not a satellite of the graph")
        for k in range(1, tvg.snapshots + 1):
            entries.append((SatNode(c, k), AuxSink(c), cap, k * w))
    return ExpandedGraph(tvg, clients, tuple(entries))


def truncate(tvg: TimeVaryingGraph, k: int) -> TimeVaryingGraph:
    if not 1 <= k <= tvg.snapshots:
        raise GraphError(f"truncate: snapshot {k} outside 1..{tvg.snapshots}")
    if k == tvg.snapshots:
        return tvg
    intra = {(u, v): c for (u, v), c in tvg.intra.items() if u.snapshot <= k}
    return TimeVaryingGraph(tvg.satellites, k, intra, dict(tvg.cache))


def reachable_set(tvg: TimeVaryingGraph, source: SatNode, min_capacity=0) -> set[SatNode]:
    """Nodes reachable from ``source`` over intra arcs with capacity >= ``min_capacity``.

    Cache arcs are always traversable.
    """
    if not tvg.has_node(source):
        raise GraphError(f"source {source!r} not in graph")
    threshold = as_fraction(min_capacity, "min_capacity")
    seen = {source}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for arc in tvg.out_arcs[u]:
            if arc.head in seen:
                continue
            if arc.kind == "cache" or arc.capacity >= threshold:
                seen.add(arc.head)
                queue.append(arc.head)
    return seen


def _raw_network(tvg: TimeVaryingGraph) -> FlowNetwork:
    net = FlowNetwork()
    for n in tvg.nodes:
        net.add_node(n)
    for arc in tvg.arcs:
        net.add_arc(arc.tail, arc.head, arc.capacity, 0)
    return net


def normalize_capacities(tvg: TimeVaryingGraph, q) -> FlowNetwork:
    """Integer flow view: each arc holds ``floor(p / q)`` whole models."""
    q = as_fraction(q, "q")
    if q <= 0:
        raise GraphError(f"model size must be positive for normalization (q={q})")
    net = FlowNetwork()
    for n in tvg.nodes:
        net.add_node(n)
    for arc in tvg.arcs:
        net.add_arc(arc.tail, arc.head, math.floor(arc.capacity / q), 0)
    return net
