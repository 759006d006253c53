"""Replay a solution against its instance and report every violated rule."""

from __future__ import annotations

from fractions import Fraction

from .graph import SatNode
from .instance import DownloadSolution, RoutingInstance, UploadSolution
from .search import objective_value


def _walk_problems(inst: RoutingInstance, p, start: SatNode, target: int) -> list[str]:
    errs = []
    if p.nodes[0] != start:
        errs.append(f"path for client {p.client} starts at {p.nodes[0]!r}, expected {start!r}")
    if p.nodes[-1].satellite != target:
        errs.append(f"path for client {p.client} ends at {p.nodes[-1]!r}, not satellite {target}")
    for a in p.arcs:
        if a not in inst.tvg.capacity:
            errs.append(f"path for client {p.client} uses missing arc {a[0]!r}->{a[1]!r}")
    if p.amount <= 0:
        errs.append(f"path for client {p.client} carries {p.amount}")
    return errs


def _load_problems(inst: RoutingInstance, load: dict) -> list[str]:
    return [
        f"arc {a[0]!r}->{a[1]!r} carries {v} > capacity {inst.tvg.capacity[a]}"
        for a, v in sorted(load.items())
        if a in inst.tvg.capacity and v > inst.tvg.capacity[a]
    ]


def validate_download(inst: RoutingInstance, sol: DownloadSolution) -> list[str]:
    """Empty list iff ``sol`` is a valid routing with the stated arrivals and objective."""
    if not sol.feasible:
        return [] if not sol.paths else ["infeasible solution lists paths"]
    errs: list[str] = []
    delivered: dict[tuple[int, int], Fraction] = {}
    load: dict = {}
    users: dict = {}
    for p in sol.paths:
        errs += _walk_problems(inst, p, inst.server_node(p.model, 1), p.client)
        delivered[(p.model, p.client)] = delivered.get((p.model, p.client), Fraction(0)) + p.amount
        if inst.flow == "UF" and p.amount != inst.models[p.model].size:
            errs.append(f"unsplittable path for client {p.client} carries {p.amount}")
        for a in p.arcs:
            if inst.multicast:
                users.setdefault(a, set()).add(p.model)
            else:
                load[a] = load.get(a, Fraction(0)) + p.amount
    if inst.multicast:
        counts: dict = {}
        for p in sol.paths:
            counts[(p.model, p.client)] = counts.get((p.model, p.client), 0) + 1
        errs += [f"client {c} of model {m} has {n} paths" for (m, c), n in counts.items() if n != 1]
        for a, ms in users.items():
            if a[0].satellite == a[1].satellite:
                continue  # storing a copy is not limited for multicast
            load[a] = sum((inst.models[m].size for m in ms), Fraction(0))
        for m, arcs in sol.trees.items():
            used = {a for a, ms in users.items() if m in ms}
            if not used <= set(arcs):
                errs.append(f"model {m} paths leave its tree")
    errs += _load_problems(inst, load)
    for m, c in inst.demands:
        got = delivered.get((m, c.id), Fraction(0))
        if got != inst.models[m].size:
            errs.append(f"client {c.id} of model {m} receives {got}, needs {inst.models[m].size}")
    arrivals: dict[int, int] = {}
    for p in sol.paths:
        arrivals[p.client] = max(arrivals.get(p.client, 0), p.end.snapshot)
    for c in inst.client_ids:
        arrivals.setdefault(c, 1)
    if arrivals != sol.arrivals:
        errs.append(f"stated arrivals {sol.arrivals} differ from replayed {arrivals}")
    weights = {c: inst.weight(c) for c in inst.client_ids}
    value = objective_value(inst.objective, arrivals, weights)
    if value != sol.objective:
        errs.append(f"stated objective {sol.objective} differs from replayed {value}")
    return errs


def validate_upload(inst: RoutingInstance, sol: UploadSolution) -> list[str]:
    """Empty list iff ``sol`` uploads exactly its selected clients within capacity."""
    if not sol.feasible:
        return [] if not sol.paths else ["infeasible solution lists paths"]
    errs: list[str] = []
    clients = {(m, c.id): c for m, c in inst.demands}
    selected = set(sol.selected)
    if not inst.cs and selected != set(clients):
        errs.append("without client selection every client must upload")
    delivered: dict = {}
    load: dict = {}
    for p in sol.paths:
        c = clients.get((p.model, p.client))
        if c is None or (p.model, p.client) not in selected:
            errs.append(f"path for unselected or unknown client {p.client} of model {p.model}")
            continue
        errs += _walk_problems(inst, p, SatNode(c.id, c.start), inst.models[p.model].server)
        if inst.flow == "UF" and p.amount != inst.models[p.model].size:
            errs.append(f"unsplittable path for client {p.client} carries {p.amount}")
        delivered[(p.model, p.client)] = delivered.get((p.model, p.client), Fraction(0)) + p.amount
        for a in p.arcs:
            load[a] = load.get(a, Fraction(0)) + p.amount
    errs += _load_problems(inst, load)
    for key in selected:
        size = inst.models[key[0]].size
        if delivered.get(key, Fraction(0)) != size and size > 0:
            errs.append(f"client {key[1]} of model {key[0]} uploads {delivered.get(key, 0)}, needs {size}")
    if inst.cs:
        util = sum((clients[k].utility for k in selected if k in clients), Fraction(0))
        if util != sol.utility:
            errs.append(f"stated utility {sol.utility} differs from replayed {util}")
    return errs
