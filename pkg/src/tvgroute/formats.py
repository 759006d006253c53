"""JSON wire format for instances, solutions, reduction sources and artifacts.

Rationals travel as ``"p/q"`` strings (integers may also be plain JSON
ints); nodes as ``[satellite, snapshot]``.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .errors import SchemaError
from .graph import SatNode, TimeVaryingGraph, from_arcs
from .instance import (
    Client,
    DownloadSolution,
    Model,
    PathFlow,
    RoutingInstance,
    UploadSolution,
    parse_variant_name,
)

_RATIONAL = re.compile(r"^\s*-?\d+(\s*/\s*\d+)?\s*$")


def fraction_to_str(x) -> str:
    return str(Fraction(x))


def parse_fraction(value, where: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise SchemaError(where, f"expected an integer or 'p/q' string, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str) and _RATIONAL.match(value):
        try:
            return Fraction(value.replace(" ", ""))
        except ZeroDivisionError:
            raise SchemaError(where, "zero denominator") from None
    raise SchemaError(where, f"expected an integer or 'p/q' string, got {value!r}")


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(where, f"expected an integer, got {value!r}")
    return value


def _get(d: dict, key: str, where: str):
    if not isinstance(d, dict):
        raise SchemaError(where, "expected an object")
    if key not in d:
        raise SchemaError(f"{where}.{key}" if where else key, "missing")
    return d[key]


def _node(value, where: str) -> SatNode:
    if not isinstance(value, list) or len(value) != 2:
        raise SchemaError(where, f"expected [satellite, snapshot], got {value!r}")
    return SatNode(_int(value[0], where), _int(value[1], where))


def _node_out(n: SatNode) -> list[int]:
    return [n.satellite, n.snapshot]


# --------------------------------------------------------------------------
# instances


def instance_to_dict(inst: RoutingInstance) -> dict:
    tvg = inst.tvg
    caches = set(tvg.cache.values())
    cache = fraction_to_str(next(iter(caches))) if len(caches) == 1 else {
        str(i): fraction_to_str(c) for i, c in sorted(tvg.cache.items())
    }
    return {
        "phase": inst.phase,
        "satellites": tvg.satellites,
        "snapshots": tvg.snapshots,
        "arcs": [
            {"from": _node_out(a.tail), "to": _node_out(a.head), "cap": fraction_to_str(a.capacity)}
            for a in tvg.intra_arcs()
        ],
        "cache": cache,
        "models": [
            {
                "size": fraction_to_str(m.size),
                "server": m.server,
                "clients": [
                    {"id": c.id, "weight": fraction_to_str(c.weight), "utility": fraction_to_str(c.utility), "start": c.start}
                    for c in m.clients
                ],
            }
            for m in inst.models
        ],
        "variant": {"flow": inst.flow, "objective": inst.objective, "multicast": inst.multicast, "cs": inst.cs},
    }


def _detect_variant(phase: str, models: list[Model]) -> dict:
    if phase == "download":
        return {"flow": "UF", "objective": "WS", "multicast": False, "cs": False}
    cs = any(c.utility > 0 for m in models for c in m.clients)
    return {"flow": "UF", "objective": None, "multicast": False, "cs": cs}


def instance_from_dict(d: dict, variant: str | None = None) -> RoutingInstance:
    """Build and validate an instance; ``variant`` (a name) overrides the file."""
    phase = _get(d, "phase", "")
    if phase not in ("download", "upload"):
        raise SchemaError("phase", "must be 'download' or 'upload'")
    I = _int(_get(d, "satellites", ""), "satellites")
    K = _int(_get(d, "snapshots", ""), "snapshots")
    raw_models = _get(d, "models", "")
    if not isinstance(raw_models, list):
        raise SchemaError("models", "expected a list")
    models = []
    for mi, rm in enumerate(raw_models):
        where = f"models[{mi}]"
        clients = []
        raw_clients = _get(rm, "clients", where)
        if not isinstance(raw_clients, list):
            raise SchemaError(f"{where}.clients", "expected a list")
        for ci, rc in enumerate(raw_clients):
            cw = f"{where}.clients[{ci}]"
            clients.append(Client(
                _int(_get(rc, "id", cw), f"{cw}.id"),
                parse_fraction(rc.get("weight", 1), f"{cw}.weight"),
                parse_fraction(rc.get("utility", 0), f"{cw}.utility"),
                _int(rc.get("start", 1), f"{cw}.start"),
            ))
        models.append(Model(parse_fraction(_get(rm, "size", where), f"{where}.size"),
                            _int(_get(rm, "server", where), f"{where}.server"), tuple(clients)))
    arcs = []
    raw_arcs = _get(d, "arcs", "")
    if not isinstance(raw_arcs, list):
        raise SchemaError("arcs", "expected a list")
    for ai, ra in enumerate(raw_arcs):
        where = f"arcs[{ai}]"
        u = _node(_get(ra, "from", where), f"{where}.from")
        v = _node(_get(ra, "to", where), f"{where}.to")
        arcs.append(((u.satellite, u.snapshot), (v.satellite, v.snapshot), parse_fraction(_get(ra, "cap", where), f"{where}.cap")))
    total = sum((m.size * len(m.clients) for m in models), Fraction(0))
    cache = d.get("cache")
    if cache is None:
        cache_cap = None
    elif isinstance(cache, dict):
        cache_cap = {int(k): parse_fraction(v, f"cache.{k}") for k, v in cache.items()}
    else:
        cache_cap = parse_fraction(cache, "cache")
    tvg: TimeVaryingGraph = from_arcs(I, K, arcs, total, cache_cap)
    flags = d.get("variant")
    if isinstance(flags, str):
        flags = _flags_from_name(flags, phase, len(models))
    elif flags is None:
        flags = _detect_variant(phase, models)
    elif not isinstance(flags, dict):
        raise SchemaError("variant", "expected an object or a variant name")
    if variant and variant != "auto":
        flags = _flags_from_name(variant, phase, len(models))
    objective = flags.get("objective", "WS" if phase == "download" else None)
    return RoutingInstance(
        phase, tvg, tuple(models),
        flow=flags.get("flow", "UF"),
        objective=objective,
        multicast=bool(flags.get("multicast", False)),
        cs=bool(flags.get("cs", False)),
    )


def _flags_from_name(name: str, phase: str, n_models: int) -> dict:
    flags = parse_variant_name(name)
    if flags.pop("phase") != phase:
        raise SchemaError("variant", f"{name} is not a {phase} variant")
    if flags.pop("model_count") != n_models:
        raise SchemaError("variant", f"{name} needs a different number of models than the instance has ({n_models})")
    return flags


def serialize_instance(inst: RoutingInstance) -> str:
    return json.dumps(instance_to_dict(inst), indent=2) + "\n"


def parse_instance(text: str, variant: str | None = None) -> RoutingInstance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("", f"invalid JSON: {exc}") from None
    return instance_from_dict(data, variant)


# --------------------------------------------------------------------------
# solutions


def _path_out(p: PathFlow) -> dict:
    return {"model": p.model, "client": p.client, "nodes": [_node_out(n) for n in p.nodes], "amount": fraction_to_str(p.amount)}


def _path_in(d: dict, where: str) -> PathFlow:
    nodes = _get(d, "nodes", where)
    if not isinstance(nodes, list) or not nodes:
        raise SchemaError(f"{where}.nodes", "expected a non-empty list")
    return PathFlow(
        _int(_get(d, "model", where), f"{where}.model"),
        _int(_get(d, "client", where), f"{where}.client"),
        tuple(_node(n, f"{where}.nodes[{i}]") for i, n in enumerate(nodes)),
        parse_fraction(_get(d, "amount", where), f"{where}.amount"),
    )


def solution_to_dict(sol) -> dict:
    if isinstance(sol, DownloadSolution):
        return {
            "phase": "download",
            "variant": sol.variant,
            "status": sol.status,
            "objective": None if sol.objective is None else fraction_to_str(sol.objective),
            "arrivals": {str(c): k for c, k in sol.arrivals.items()},
            "paths": [_path_out(p) for p in sol.paths],
            "trees": {str(m): [[_node_out(u), _node_out(v)] for u, v in arcs] for m, arcs in sol.trees.items()},
            "solver": sol.solver,
        }
    return {
        "phase": "upload",
        "variant": sol.variant,
        "status": sol.status,
        "feasible": sol.feasible,
        "selected": [list(s) for s in sol.selected],
        "utility": None if sol.utility is None else fraction_to_str(sol.utility),
        "paths": [_path_out(p) for p in sol.paths],
        "solver": sol.solver,
    }


def solution_from_dict(d: dict):
    phase = _get(d, "phase", "")
    paths = [_path_in(p, f"paths[{i}]") for i, p in enumerate(d.get("paths", []))]
    if phase == "download":
        obj = d.get("objective")
        trees = {
            int(m): [(_node(u, f"trees.{m}"), _node(v, f"trees.{m}")) for u, v in arcs]
            for m, arcs in d.get("trees", {}).items()
        }
        return DownloadSolution(
            _get(d, "variant", ""), _get(d, "status", ""),
            None if obj is None else parse_fraction(obj, "objective"),
            {int(c): _int(k, f"arrivals.{c}") for c, k in d.get("arrivals", {}).items()},
            paths, trees, d.get("solver", "polynomial"),
        )
    if phase == "upload":
        util = d.get("utility")
        return UploadSolution(
            _get(d, "variant", ""), bool(_get(d, "feasible", "")),
            [tuple(s) for s in d.get("selected", [])],
            None if util is None else parse_fraction(util, "utility"),
            paths, d.get("solver", "polynomial"), d.get("status", "optimal"),
        )
    raise SchemaError("phase", "must be 'download' or 'upload'")


def serialize_solution(sol) -> str:
    return json.dumps(solution_to_dict(sol), indent=2) + "\n"


def parse_solution(text: str):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("", f"invalid JSON: {exc}") from None
    return solution_from_dict(data)


# --------------------------------------------------------------------------
# reduction sources and artifacts


def parse_source(family: str, text: str):
    """Source problem for a reduction family: DIMACS or JSON for formulas,
    JSON for graphs."""
    from .reductions import CnfFormula, PathPairProblem, UndirectedGraph

    stripped = text.lstrip()
    if family in ("3sat-1sfws", "3sat-2ufmm", "3sat-2ufncs", "max3sat-2ufcs"):
        if not stripped.startswith("{"):
            return CnfFormula.from_dimacs(text)
        d = json.loads(text)
        return CnfFormula(_int(_get(d, "num_vars", ""), "num_vars"), tuple(tuple(c) for c in _get(d, "clauses", "")))
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("", f"invalid JSON: {exc}") from None
    if family == "mvc-1sfcs":
        graph = UndirectedGraph(_int(_get(d, "vertices", ""), "vertices"), tuple(tuple(e) for e in _get(d, "edges", "")))
        return graph, _int(_get(d, "n_mvc", ""), "n_mvc")
    if family == "2edp-mul2mm":
        pairs = _get(d, "pairs", "")
        return PathPairProblem(_int(_get(d, "nodes", ""), "nodes"), tuple(tuple(a) for a in _get(d, "arcs", "")),
                               (tuple(pairs[0]), tuple(pairs[1])))
    raise SchemaError("family", f"unknown reduction family {family!r}")


def artifact_to_dict(art) -> dict:
    return {
        "family": art.family,
        "decision": art.decision,
        "rule": art.rule,
        "threshold": None if art.threshold is None else fraction_to_str(art.threshold),
        "labels": {str(k): v for k, v in sorted(art.labels.items())},
        "notes": list(art.notes),
        "instance": instance_to_dict(art.instance),
    }
