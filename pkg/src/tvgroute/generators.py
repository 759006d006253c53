"""Random and structured instance generators (seeded, deterministic)."""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import GraphError
from .graph import TimeVaryingGraph, build_tvg
from .instance import Client, Model, RoutingInstance, parse_variant_name


def generate_random_tvg(
    satellites: int,
    snapshots: int,
    density: float = 0.4,
    capacities=(0, 1, 2),
    seed: int = 0,
    model_demand_total=0,
    cache_capacity=None,
) -> TimeVaryingGraph:
    """Each unordered pair is linked in each snapshot with probability ``density``;
    each direction draws its capacity from ``capacities``."""
    rng = random.Random(seed)
    caps = [Fraction(c) for c in capacities]
    links = []
    for k in range(1, snapshots + 1):
        for i in range(1, satellites + 1):
            for j in range(i + 1, satellites + 1):
                if rng.random() < density:
                    links.append((i, j, k, rng.choice(caps), rng.choice(caps)))
    return build_tvg(satellites, snapshots, links, model_demand_total, cache_capacity)


def ring_links(planes: int, per_plane: int, snapshots: int, intra_cap=1, cross_cap=1, cross_shift: int = 1) -> list[tuple]:
    """Links of a ring constellation, as ``(i, j, k, cap_ij, cap_ji)``.

    Satellite ``p * per_plane + j + 1`` is slot ``j`` of plane ``p``.  Slots
    of one plane form a ring in every snapshot.  Slot ``j`` of plane ``p``
    links to slot ``(j + cross_shift * (k - 1)) mod per_plane`` of the next
    plane, so the cross-plane pairing rotates by ``cross_shift`` each
    snapshot.  With three or more planes the last plane links back to the
    first.
    """
    if planes < 1 or per_plane < 1 or snapshots < 1:
        raise GraphError(f"ring constellation needs positive counts (got {planes}, {per_plane}, {snapshots})")
    icap, ccap = Fraction(intra_cap), Fraction(cross_cap)
    if icap < 0 or ccap < 0:
        raise GraphError("ring capacities must be non-negative")

    def sat(p: int, j: int) -> int:
        return p * per_plane + j + 1

    links = []
    for k in range(1, snapshots + 1):
        seen: set[tuple[int, int]] = set()

        def add(i: int, j: int, cap: Fraction) -> None:
            key = (min(i, j), max(i, j))
            if i != j and key not in seen:
                seen.add(key)
                links.append((i, j, k, cap, cap))

        for p in range(planes):
            for j in range(per_plane):
                add(sat(p, j), sat(p, (j + 1) % per_plane), icap)
        pairs = planes if planes >= 3 else planes - 1
        for p in range(pairs):
            for j in range(per_plane):
                add(sat(p, j), sat((p + 1) % planes, (j + cross_shift * (k - 1)) % per_plane), ccap)
    return links


def generate_ring_constellation(
    planes: int,
    per_plane: int,
    snapshots: int,
    intra_cap=1,
    cross_cap=1,
    cross_shift: int = 1,
    model_demand_total=0,
) -> TimeVaryingGraph:
    """Deterministic multi-plane ring topology (see :func:`ring_links`)."""
    links = ring_links(planes, per_plane, snapshots, intra_cap, cross_cap, cross_shift)
    return build_tvg(planes * per_plane, snapshots, links, model_demand_total)


def random_instance(
    variant: str,
    satellites: int = 4,
    snapshots: int = 3,
    clients: int = 2,
    density: float = 0.45,
    seed: int = 0,
    capacities=(0, 1, 2),
    sizes=(1, 1),
    separate: bool = False,
) -> RoutingInstance:
    """Small random instance of the named variant (for testing and the CLI)."""
    flags = parse_variant_name(variant)
    rng = random.Random(seed)
    n_models = flags.pop("model_count")
    phase = flags.pop("phase")
    servers = [rng.randint(1, satellites)]
    if n_models == 2:
        servers.append(rng.choice([s for s in range(1, satellites + 1) if s != servers[0]]) if separate else servers[0])
    models = []
    pool = list(range(1, satellites + 1))
    weights = {i: Fraction(rng.randint(1, 3)) for i in pool}
    for m in range(n_models):
        ids = sorted(rng.sample(pool, min(clients, satellites)))
        members = tuple(
            Client(i, weights[i], Fraction(rng.randint(1, 4)), rng.randint(1, snapshots) if phase == "upload" else 1)
            for i in ids
        )
        models.append(Model(Fraction(sizes[m]), servers[m], members))
    total = sum((mm.size * len(mm.clients) for mm in models), Fraction(0))
    tvg = generate_random_tvg(satellites, snapshots, density, capacities, rng.randrange(1 << 30), total)
    return RoutingInstance(phase, tvg, tuple(models), **flags)


def ring_instance(
    variant: str,
    planes: int = 2,
    per_plane: int = 4,
    snapshots: int = 3,
    clients: int = 2,
    intra_cap=1,
    cross_cap=None,
    cross_shift: int = 1,
    sizes=(1, 1),
    separate: bool = False,
    seed: int = 0,
) -> RoutingInstance:
    """Instance of the named variant on a ring constellation.

    Clients are spread evenly over the satellites; the server of model 1 is
    satellite 1 and, with ``separate``, model 2 is served from the satellite
    half way round.  Weights, utilities and start snapshots are drawn from
    ``seed``.
    """
    flags = parse_variant_name(variant)
    n_models = flags.pop("model_count")
    phase = flags.pop("phase")
    total_sats = planes * per_plane
    rng = random.Random(seed)
    servers = [1, total_sats // 2 + 1 if separate and n_models == 2 else 1][:n_models]
    models = []
    for m in range(n_models):
        others = [i for i in range(1, total_sats + 1) if i != servers[m]]
        count = min(clients, len(others))
        stride = len(others) / count if count else 1
        ids = sorted({others[(int(t * stride) + m) % len(others)] for t in range(count)})
        members = tuple(
            Client(i, Fraction(1 + i % 3), Fraction(rng.randint(1, 4)),
                   rng.randint(1, max(1, snapshots // 2)) if phase == "upload" else 1)
            for i in ids
        )
        models.append(Model(Fraction(sizes[m]), servers[m], members))
    total = sum((mm.size * len(mm.clients) for mm in models), Fraction(0))
    tvg = generate_ring_constellation(planes, per_plane, snapshots, intra_cap,
                                      intra_cap if cross_cap is None else cross_cap, cross_shift, total)
    return RoutingInstance(phase, tvg, tuple(models), **flags)
