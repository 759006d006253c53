"""Optimal routing of federated-learning model traffic over time-varying satellite graphs."""

from __future__ import annotations

from .arborescence import Arborescence, min_cost_arborescence, prune_to_steiner
from .budget import Limits, OracleBudget
from .download import (
    solve_1sfmm,
    solve_1ufmm,
    solve_1ufws,
    solve_2sfmm,
    solve_download,
    solve_exact_download,
    solve_mul1mm,
    solve_mul1ws,
)
from .errors import (
    BudgetExceeded,
    FormulaError,
    GraphError,
    InfeasibleError,
    InvariantViolation,
    NegativeCycleError,
    RoutingError,
    SchemaError,
    UnreachableNodeError,
)
from .flow import FlowNetwork, fractional_feasibility, max_flow, min_cost_flow
from .graph import (
    AuxSink,
    SatNode,
    TimeVaryingGraph,
    build_tvg,
    expand_with_client_sinks,
    from_arcs,
    normalize_capacities,
    reachable_set,
    truncate,
)
from .instance import Client, DownloadSolution, Model, PathFlow, RoutingInstance, UploadSolution
from .upload import solve_1sfncs, solve_1ufcs, solve_1ufncs, solve_2sfncs, solve_exact_upload, solve_upload

__version__ = "0.1.0"
