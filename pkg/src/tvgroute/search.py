"""Branch and bound over unsplittable path assignments."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .budget import Meter


@dataclass
class Demand:
    model: int
    client: int
    size: Fraction
    paths: list[tuple]  # candidate node tuples, best arrival first


def objective_value(kind: str | None, arrivals: dict[int, int], weights: dict[int, Fraction]) -> Fraction:
    if kind is None:
        return Fraction(0)
    if kind == "WS":
        return sum((weights[c] * k for c, k in arrivals.items()), Fraction(0))
    return Fraction(max(arrivals.values(), default=0))


def client_arrivals(demands: list[Demand], arrival: list) -> dict[int, int]:
    out: dict[int, int] = {}
    for d, a in zip(demands, arrival):
        if a is not None:
            out[d.client] = max(out.get(d.client, 0), a)
    return out


def assign_paths(
    demands: list[Demand],
    capacity: dict,
    kind: str | None,
    weights: dict[int, Fraction],
    meter: Meter,
) -> tuple[Fraction, list[tuple]] | None:
    """Cheapest joint choice of one path per demand within arc capacities.

    Each chosen path consumes its demand's size on every arc.  ``kind`` is
    ``"WS"``, ``"MM"`` or ``None`` (any feasible assignment).  Returns
    ``(value, chosen paths)`` or ``None`` if nothing fits.
    """
    n = len(demands)
    order = sorted(range(n), key=lambda d: (len(demands[d].paths), d))
    residual = dict(capacity)
    arrival: list = [None] * n
    choice: list = [None] * n
    floor = [d.paths[0][-1].snapshot if d.paths else None for d in demands]
    if any(f is None for f in floor):
        return None
    best: list = [None, None]

    def bound() -> Fraction:
        merged = [a if a is not None else f for a, f in zip(arrival, floor)]
        return objective_value(kind, client_arrivals(demands, merged), weights)

    def rec(pos: int) -> bool:
        meter.tick()
        if pos == n:
            value = objective_value(kind, client_arrivals(demands, arrival), weights)
            if best[0] is None or value < best[0]:
                best[0], best[1] = value, list(choice)
            return kind is None
        d = order[pos]
        dem = demands[d]
        for p in dem.paths:
            arrival[d] = p[-1].snapshot
            if best[0] is not None and bound() >= best[0]:
                break  # later paths arrive no earlier
            arcs = list(zip(p, p[1:]))
            if any(residual[a] < dem.size for a in arcs):
                continue
            for a in arcs:
                residual[a] -= dem.size
            choice[d] = p
            stop = rec(pos + 1)
            for a in arcs:
                residual[a] += dem.size
            if stop:
                return True
        arrival[d] = None
        choice[d] = None
        return False

    rec(0)
    if best[0] is None:
        return None
    return best[0], best[1]
