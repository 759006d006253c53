"""Limits for exhaustive searches and oracles.

Defaults can be overridden through ``TVGROUTE_BUDGET``, e.g.
``TVGROUTE_BUDGET="max_nodes=60,time_limit=5"``.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, fields, replace

from .errors import BudgetExceeded

ENV_VAR = "TVGROUTE_BUDGET"


@dataclass(frozen=True)
class Limits:
    max_nodes: int = 400  # TVG nodes, I * K
    max_clients: int = 16  # (model, client) demands
    max_snapshots: int = 12
    max_paths: int = 50_000  # candidate paths over all demands
    max_states: int = 2_000_000  # search-tree nodes / labelings / vectors
    max_subsets: int = 1 << 16
    time_limit: float = 300.0  # seconds

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise ValueError(f"budget field {f.name} must be positive")

    @classmethod
    def from_env(cls, **overrides) -> Limits:
        base = cls()
        raw = os.environ.get(ENV_VAR, "").strip()
        if raw:
            kinds = {f.name: f.type for f in fields(cls)}
            values = {}
            for part in raw.split(","):
                name, _, value = part.partition("=")
                name = name.strip()
                if name not in kinds:
                    raise ValueError(f"{ENV_VAR}: unknown field {name!r}")
                values[name] = float(value) if name == "time_limit" else int(value)
            base = replace(base, **values)
        return replace(base, **overrides) if overrides else base


OracleBudget = Limits


class Meter:
    """Counts work against a :class:`Limits` and raises when it runs out."""

    def __init__(self, limits: Limits | None = None):
        self.limits = limits or Limits.from_env()
        self.started = time.monotonic()
        self.states = 0

    def check_instance(self, tvg, n_demands: int) -> None:
        lim = self.limits
        if tvg.satellites * tvg.snapshots > lim.max_nodes:
            raise BudgetExceeded(f"{tvg.satellites * tvg.snapshots} TVG nodes > max_nodes={lim.max_nodes}")
        if tvg.snapshots > lim.max_snapshots:
            raise BudgetExceeded(f"{tvg.snapshots} snapshots > max_snapshots={lim.max_snapshots}")
        if n_demands > lim.max_clients:
            raise BudgetExceeded(f"{n_demands} demands > max_clients={lim.max_clients}")

    def tick(self, n: int = 1) -> None:
        self.states += n
        if self.states > self.limits.max_states:
            raise BudgetExceeded(f"search exceeded max_states={self.limits.max_states}")
        if self.states % 1024 == 0:
            self.check_time()

    def check_time(self) -> None:
        if time.monotonic() - self.started > self.limits.time_limit:
            raise BudgetExceeded(f"time limit of {self.limits.time_limit}s exceeded")
