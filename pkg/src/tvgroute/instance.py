"""Routing instances, problem variants and solution records."""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .errors import InvariantViolation, SchemaError
from .graph import SatNode, TimeVaryingGraph

FLOWS = ("UF", "SF")
OBJECTIVES = ("WS", "MM")


@dataclass(frozen=True)
class Client:
    id: int
    weight: Fraction = Fraction(1)
    utility: Fraction = Fraction(0)
    start: int = 1  # earliest upload snapshot


@dataclass(frozen=True)
class Model:
    size: Fraction
    server: int
    clients: tuple[Client, ...]

    @property
    def client_ids(self) -> list[int]:
        return [c.id for c in self.clients]


@dataclass(frozen=True)
class DownloadVariant:
    model_count: int
    flow: str
    objective: str
    multicast: bool = False
    servers: str = "common"

    def __post_init__(self):
        if self.model_count not in (1, 2):
            raise InvariantViolation("variant.model_count", "must be 1 or 2")
        if self.flow not in FLOWS:
            raise InvariantViolation("variant.flow", f"must be one of {FLOWS}")
        if self.objective not in OBJECTIVES:
            raise InvariantViolation("variant.objective", f"must be one of {OBJECTIVES}")
        if self.multicast and self.flow != "UF":
            raise InvariantViolation("variant.flow", "multicast routing is unsplittable only")
        if self.model_count == 1 and self.servers != "common":
            raise InvariantViolation("variant.servers", "a single model has a single server")

    @property
    def name(self) -> str:
        if self.multicast:
            return f"mul-{self.model_count}-{self.objective}"
        return f"{self.model_count}-{self.flow}-{self.objective}"


@dataclass(frozen=True)
class UploadVariant:
    model_count: int
    flow: str
    cs: bool
    servers: str = "common"

    def __post_init__(self):
        if self.model_count not in (1, 2):
            raise InvariantViolation("variant.model_count", "must be 1 or 2")
        if self.flow not in FLOWS:
            raise InvariantViolation("variant.flow", f"must be one of {FLOWS}")
        if self.model_count == 1 and self.servers != "common":
            raise InvariantViolation("variant.servers", "a single model has a single server")

    @property
    def name(self) -> str:
        return f"{self.model_count}-{self.flow}-{'CS' if self.cs else 'NCS'}"


_NAME = re.compile(r"^(?:(mul)-)?([12])-(?:(UF|SF)-)?(WS|MM|CS|NCS)$", re.IGNORECASE)


def parse_variant_name(name: str) -> dict:
    """Flags encoded by a variant name such as ``1-UF-WS``, ``mul-2-MM`` or ``2-SF-NCS``."""
    m = _NAME.match(name.strip())
    if not m:
        raise SchemaError("variant", f"unrecognized variant name {name!r}")
    mul, count, flow, tail = m.groups()
    tail = tail.upper()
    if mul:
        if flow and flow.upper() != "UF":
            raise SchemaError("variant", "multicast variants are unsplittable")
        if tail not in OBJECTIVES:
            raise SchemaError("variant", "multicast variants are download variants")
        return dict(phase="download", model_count=int(count), flow="UF", objective=tail, multicast=True, cs=False)
    if not flow:
        raise SchemaError("variant", f"missing UF/SF in {name!r}")
    if tail in OBJECTIVES:
        return dict(phase="download", model_count=int(count), flow=flow.upper(), objective=tail, multicast=False, cs=False)
    return dict(phase="upload", model_count=int(count), flow=flow.upper(), objective=None, multicast=False, cs=tail == "CS")


@dataclass(frozen=True)
class RoutingInstance:
    phase: str  # "download" | "upload"
    tvg: TimeVaryingGraph
    models: tuple[Model, ...]
    flow: str = "UF"
    objective: str | None = "WS"
    multicast: bool = False
    cs: bool = False

    def __post_init__(self):
        self.validate()

    # -- derived views -------------------------------------------------
    @property
    def servers(self) -> str:
        if len(self.models) == 2 and self.models[0].server != self.models[1].server:
            return "separate"
        return "common"

    @property
    def variant(self) -> DownloadVariant | UploadVariant:
        if self.phase == "download":
            return DownloadVariant(len(self.models), self.flow, self.objective, self.multicast, self.servers)
        return UploadVariant(len(self.models), self.flow, self.cs, self.servers)

    @property
    def demands(self) -> list[tuple[int, Client]]:
        """All (model index, client) pairs in model order."""
        return [(m, c) for m, model in enumerate(self.models) for c in model.clients]

    @property
    def client_ids(self) -> list[int]:
        """Union of client satellites across models, in first-seen order."""
        out: list[int] = []
        for _, c in self.demands:
            if c.id not in out:
                out.append(c.id)
        return out

    def weight(self, client_id: int) -> Fraction:
        for _, c in self.demands:
            if c.id == client_id:
                return c.weight
        raise KeyError(client_id)

    def models_of(self, client_id: int) -> list[int]:
        return [m for m, c in self.demands if c.id == client_id]

    @property
    def total_demand(self) -> Fraction:
        return sum((m.size * len(m.clients) for m in self.models), Fraction(0))

    def server_node(self, m: int, snapshot: int | None = None) -> SatNode:
        if snapshot is None:
            snapshot = 1 if self.phase == "download" else self.tvg.snapshots
        return SatNode(self.models[m].server, snapshot)

    def with_variant(self, name: str) -> RoutingInstance:
        flags = parse_variant_name(name)
        if flags.pop("model_count") != len(self.models):
            raise InvariantViolation("variant", f"{name} does not match {len(self.models)} model(s)")
        if flags.pop("phase") != self.phase:
            raise InvariantViolation("variant", f"{name} is not a {self.phase} variant")
        return replace(self, **flags)

    # -- validation ----------------------------------------------------
    def validate(self) -> None:
        I, K = self.tvg.satellites, self.tvg.snapshots
        if self.phase not in ("download", "upload"):
            raise SchemaError("phase", "must be 'download' or 'upload'")
        if self.flow not in FLOWS:
            raise SchemaError("variant.flow", f"must be one of {FLOWS}")
        if not 1 <= len(self.models) <= 2:
            raise InvariantViolation("models", "one or two models are supported")
        if self.phase == "download":
            if self.objective not in OBJECTIVES:
                raise SchemaError("variant.objective", f"must be one of {OBJECTIVES}")
            if self.cs:
                raise InvariantViolation("variant.cs", "client selection applies to uploads only")
            if self.multicast and self.flow != "UF":
                raise InvariantViolation("variant.multicast", "multicast routing is unsplittable only")
        else:
            if self.multicast:
                raise InvariantViolation("variant.multicast", "uploads cannot be multicast")
        for mi, model in enumerate(self.models):
            where = f"models[{mi}]"
            if model.size < 0:
                raise InvariantViolation(f"{where}.size", "must be non-negative")
            if model.size == 0 and self.flow == "UF":
                raise InvariantViolation(f"{where}.size", "unsplittable routing needs a positive model size")
            if not 1 <= model.server <= I:
                raise InvariantViolation(f"{where}.server", f"{model.server} is not a satellite in 1..{I}")
            ids = model.client_ids
            if len(set(ids)) != len(ids):
                raise InvariantViolation(f"{where}.clients", "client ids must be distinct within a model")
            for ci, c in enumerate(model.clients):
                cw = f"{where}.clients[{ci}]"
                if not 1 <= c.id <= I:
                    raise InvariantViolation(f"{cw}.id", f"{c.id} is not a satellite in 1..{I}")
                if c.weight < 0 or c.utility < 0:
                    raise InvariantViolation(cw, "weights and utilities must be non-negative")
                if not 1 <= c.start <= K:
                    raise InvariantViolation(f"{cw}.start", f"{c.start} outside 1..{K}")
        if self.phase == "download" and len(self.models) == 2:
            for c in self.models[0].clients:
                for d in self.models[1].clients:
                    if c.id == d.id and c.weight != d.weight:
                        raise InvariantViolation("models", f"client {c.id} has different weights per model")


# -- solutions ----------------------------------------------------------


@dataclass(frozen=True)
class PathFlow:
    model: int
    client: int
    nodes: tuple[SatNode, ...]
    amount: Fraction

    @property
    def end(self) -> SatNode:
        return self.nodes[-1]

    @property
    def arcs(self) -> list[tuple[SatNode, SatNode]]:
        return list(zip(self.nodes, self.nodes[1:]))


@dataclass
class DownloadSolution:
    variant: str
    status: str  # "optimal" | "infeasible"
    objective: Fraction | None
    arrivals: dict[int, int] = field(default_factory=dict)  # client -> k_c
    paths: list[PathFlow] = field(default_factory=list)
    trees: dict[int, list[tuple[SatNode, SatNode]]] = field(default_factory=dict)
    solver: str = "polynomial"  # or "exact-search"

    @property
    def feasible(self) -> bool:
        return self.status == "optimal"


@dataclass
class UploadSolution:
    variant: str
    feasible: bool
    selected: list[tuple[int, int]] = field(default_factory=list)  # (model, client)
    utility: Fraction | None = None  # set for client selection variants
    paths: list[PathFlow] = field(default_factory=list)
    solver: str = "polynomial"
    status: str = "optimal"
