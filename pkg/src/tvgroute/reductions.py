"""Hardness gadgets: routing instances built from 3SAT, MAX-3SAT, vertex
cover and two edge-disjoint paths, plus a harness that checks that solving
the gadget answers the source problem.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .budget import Limits
from .download import solve_download
from .errors import FormulaError, InvariantViolation
from .graph import from_arcs
from .instance import Client, Model, RoutingInstance
from .oracle import edp_brute_force, mvc_brute_force, sat_brute_force
from .upload import solve_upload

FAMILIES = ("3sat-1sfws", "3sat-2ufmm", "3sat-2ufncs", "max3sat-2ufcs", "mvc-1sfcs", "2edp-mul2mm")


# --------------------------------------------------------------------------
# source problems


@dataclass(frozen=True)
class CnfFormula:
    """3-CNF over variables ``1..num_vars``; literal ``-v`` is the negation of ``v``.

    A clause may repeat a literal (so one- and two-variable formulas exist).
    """

    num_vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if self.num_vars < 1:
            raise FormulaError("a formula needs at least one variable")
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        for clause in self.clauses:
            if len(clause) != 3:
                raise FormulaError(f"clause {clause} does not have exactly 3 literals")
            for lit in clause:
                if not isinstance(lit, int) or lit == 0 or abs(lit) > self.num_vars:
                    raise FormulaError(f"literal {lit!r} outside +-1..{self.num_vars}")

    @property
    def m(self) -> int:
        return self.num_vars

    @property
    def n(self) -> int:
        return len(self.clauses)

    def is_irreducible(self) -> bool:
        """Each variable occurs positively in one clause and negatively in a different one."""
        for v in range(1, self.num_vars + 1):
            pos = {h for h, c in enumerate(self.clauses) if v in c}
            neg = {h for h, c in enumerate(self.clauses) if -v in c}
            if not any(a != b for a in pos for b in neg):
                return False
        return True

    def satisfied(self, assignment) -> int:
        return sum(any((lit > 0) == bool(assignment[abs(lit) - 1]) for lit in c) for c in self.clauses)

    def canonical(self) -> tuple:
        """Smallest clause list over all variable renamings and polarity flips."""
        best = None
        for perm in itertools.permutations(range(1, self.num_vars + 1)):
            for flips in itertools.product((1, -1), repeat=self.num_vars):
                def mapped(lit):
                    v = abs(lit)
                    return perm[v - 1] * flips[v - 1] * (1 if lit > 0 else -1)

                form = tuple(sorted(tuple(sorted((mapped(l) for l in c), key=lambda x: (abs(x), x))) for c in self.clauses))
                if best is None or form < best:
                    best = form
        return best

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {self.n}"]
        lines += [" ".join(map(str, c)) + " 0" for c in self.clauses]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_dimacs(cls, text: str) -> CnfFormula:
        num_vars = None
        lits: list[int] = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("c") or line.startswith("%"):
                continue
            if line.startswith("p"):
                parts = line.split()
                if len(parts) != 4 or parts[1] != "cnf":
                    raise FormulaError(f"bad problem line {line!r}")
                num_vars = int(parts[2])
                continue
            lits.extend(int(tok) for tok in line.split())
        if num_vars is None:
            raise FormulaError("missing 'p cnf' line")
        clauses, cur = [], []
        for lit in lits:
            if lit == 0:
                clauses.append(tuple(cur))
                cur = []
            else:
                cur.append(lit)
        if cur:
            raise FormulaError("last clause is not terminated by 0")
        return cls(num_vars, tuple(clauses))


@dataclass(frozen=True)
class UndirectedGraph:
    vertices: int  # labelled 1..vertices
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        norm = []
        for u, v in self.edges:
            if u == v:
                raise InvariantViolation("edges", f"self loop at {u}")
            if not (1 <= u <= self.vertices and 1 <= v <= self.vertices):
                raise InvariantViolation("edges", f"edge {u}-{v} outside 1..{self.vertices}")
            norm.append((min(u, v), max(u, v)))
        if len(set(norm)) != len(norm):
            raise InvariantViolation("edges", "duplicate edge")
        object.__setattr__(self, "edges", tuple(sorted(norm)))


@dataclass(frozen=True)
class PathPairProblem:
    """Directed graph on ``1..nodes`` with two terminal pairs."""

    nodes: int
    arcs: tuple[tuple[int, int], ...]
    pairs: tuple[tuple[int, int], tuple[int, int]]

    def __post_init__(self):
        ends = [x for p in self.pairs for x in p]
        if len(set(ends)) != 4:
            raise InvariantViolation("pairs", "the four endpoints must be distinct")
        if any(not 1 <= x <= self.nodes for x in ends):
            raise InvariantViolation("pairs", "endpoint not in graph")
        for u, v in self.arcs:
            if u == v or not (1 <= u <= self.nodes and 1 <= v <= self.nodes):
                raise InvariantViolation("arcs", f"bad arc {u}->{v}")
        if len(set(self.arcs)) != len(self.arcs):
            raise InvariantViolation("arcs", "duplicate arc")


# --------------------------------------------------------------------------
# artifacts


@dataclass
class ReductionArtifact:
    family: str
    instance: RoutingInstance
    decision: str  # plain-language mapping from solver output to the source answer
    rule: str  # "objective_at_most" | "feasible" | "utility_at_least"
    threshold: Fraction | None
    labels: dict[int, str] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def answer(self, solution) -> bool:
        """Source-problem answer implied by a solver result (total: infeasible means no)."""
        if not solution.feasible:
            return False
        if self.rule == "feasible":
            return True
        if self.rule == "objective_at_most":
            return solution.objective <= self.threshold
        if self.rule == "utility_at_least":
            return solution.utility >= self.threshold
        raise ValueError(self.rule)


def _require_irreducible(formula: CnfFormula, check: bool) -> None:
    if check and not formula.is_irreducible():
        raise FormulaError("formula is not irreducible (some variable lacks a polarity in a distinct clause)")


def _lit_sat(lit: int, base: int) -> int:
    """Satellite of a literal node: x_v at base+2(v-1), its negation right after."""
    return base + 2 * (abs(lit) - 1) + (0 if lit > 0 else 1)


def _lit_name(lit: int) -> str:
    return f"x{lit}" if lit > 0 else f"~x{-lit}"


def hub_capacity(setting, n: int) -> Fraction:
    if isinstance(setting, Fraction):
        return setting
    if setting in (None, "1+n/(n+1)"):
        return 1 + Fraction(n, n + 1)
    if setting == "1+1/n":
        return 1 + Fraction(1, n)
    return Fraction(setting)


def reduce_3sat_to_1sfws(formula: CnfFormula, hub="1+n/(n+1)", check: bool = True) -> ReductionArtifact:
    """Two-snapshot splittable gadget with one unit-size model.

    Satellite 1 is the server; variable v owns hub 3v-1 and literal nodes
    3v (x_v) and 3v+1 (~x_v); clause h is satellite 3m+1+h.
    """
    _require_irreducible(formula, check)
    m, n = formula.m, formula.n
    hub_cap = hub_capacity(hub, n)
    lit = lambda l: 3 * abs(l) + (0 if l > 0 else 1)  # noqa: E731
    clause = lambda h: 3 * m + 2 + h  # noqa: E731, 0-based h
    labels = {1: "s"}
    arcs, notes = [], []
    for k in (1, 2):
        for v in range(1, m + 1):
            hubv = 3 * v - 1
            labels[hubv] = f"h{v}"
            labels[lit(v)], labels[lit(-v)] = _lit_name(v), _lit_name(-v)
            arcs.append(((1, k), (hubv, k), hub_cap))
            arcs.append(((hubv, k), (lit(v), k), 1))
            arcs.append(((hubv, k), (lit(-v), k), 1))
        if k == 1:
            for h, c in enumerate(formula.clauses):
                labels[clause(h)] = f"e{h + 1}"
                arcs.append(((1, 1), (clause(h), 1), Fraction(n, n + 1)))
                for l in sorted(set(c), key=lambda x: (abs(x), x)):
                    arcs.append(((lit(-l), 1), (clause(h), 1), Fraction(1, n + 1)))
                    notes.append(f"{_lit_name(-l)} -> e{h + 1}: clause e{h + 1} contains {_lit_name(l)}")
    notes.append(f"hub arcs s -> h_v carry {hub_cap}; clause arcs exist in snapshot 1 only")
    clients = [Client(lit(s * v)) for v in range(1, m + 1) for s in (1, -1)]
    clients += [Client(clause(h)) for h in range(n)]
    total = Fraction(len(clients))
    tvg = from_arcs(3 * m + n + 1, 2, arcs, total)
    inst = RoutingInstance("download", tvg, (Model(Fraction(1), 1, tuple(clients)),), flow="SF", objective="WS")
    threshold = Fraction(3 * m + n)
    return ReductionArtifact(
        "3sat-1sfws", inst,
        f"satisfiable iff the optimal weighted arrival sum is at most {threshold} "
        "(one literal per variable and every clause served in snapshot 1)",
        "objective_at_most", threshold, labels, notes,
    )


def _literal_gadget(formula: CnfFormula):
    """Shared one-snapshot topology: s=1, literals x_v=2v / ~x_v=2v+1,
    big clients v_v=2m+1+v, clause clients 3m+1+h."""
    m, n = formula.m, formula.n
    big = lambda v: 2 * m + 1 + v  # noqa: E731
    clause = lambda h: 3 * m + 2 + h  # noqa: E731
    labels = {1: "s"}
    arcs, notes = [], []
    for v in range(1, m + 1):
        for l in (v, -v):
            ls = _lit_sat(l, 2)
            labels[ls] = _lit_name(l)
            arcs.append(((1, 1), (ls, 1), n))
            arcs.append(((ls, 1), (big(v), 1), n))
        labels[big(v)] = f"v{v}"
    for h, c in enumerate(formula.clauses):
        labels[clause(h)] = f"e{h + 1}"
        for l in sorted(set(c), key=lambda x: (abs(x), x)):
            arcs.append(((_lit_sat(l, 2), 1), (clause(h), 1), 1))
            notes.append(f"{_lit_name(l)} -> e{h + 1}: literal occurs in the clause")
    bigs = tuple(Client(big(v), utility=Fraction(n + 1)) for v in range(1, m + 1))
    smalls = tuple(Client(clause(h), utility=Fraction(1)) for h in range(n))
    return 3 * m + n + 1, arcs, bigs, smalls, labels, notes


def reduce_3sat_to_2ufmm(formula: CnfFormula, check: bool = True) -> ReductionArtifact:
    """One-snapshot gadget; big model (size n) to v-clients, small (size 1) to clause clients."""
    _require_irreducible(formula, check)
    I, arcs, bigs, smalls, labels, notes = _literal_gadget(formula)
    n = formula.n
    tvg = from_arcs(I, 1, arcs, n * len(bigs) + len(smalls))
    models = (Model(Fraction(n), 1, bigs), Model(Fraction(1), 1, smalls))
    inst = RoutingInstance("download", tvg, models, flow="UF", objective="MM")
    return ReductionArtifact("3sat-2ufmm", inst, "satisfiable iff both models reach all clients in snapshot 1",
                             "objective_at_most", Fraction(1), labels, notes)


def _upload_gadget(formula: CnfFormula, cs: bool):
    I, arcs, bigs, smalls, labels, notes = _literal_gadget(formula)
    rev = [(v, u, c) for u, v, c in arcs]
    n = formula.n
    tvg = from_arcs(I, 1, rev, n * len(bigs) + len(smalls))
    models = (Model(Fraction(n), 1, bigs), Model(Fraction(1), 1, smalls))
    inst = RoutingInstance("upload", tvg, models, flow="UF", objective=None, cs=cs)
    notes = [note.replace("->", "<-") for note in notes] + ["every arc reversed relative to the download gadget"]
    return inst, labels, notes


def reduce_3sat_to_2ufncs(formula: CnfFormula, check: bool = True) -> ReductionArtifact:
    """The 2-UF-MM gadget with every arc reversed, as an upload without selection."""
    _require_irreducible(formula, check)
    inst, labels, notes = _upload_gadget(formula, cs=False)
    return ReductionArtifact("3sat-2ufncs", inst, "satisfiable iff every client can upload in snapshot 1",
                             "feasible", None, labels, notes)


def reduce_max3sat_to_2ufcs(formula: CnfFormula, target: int | None = None, check: bool = True) -> ReductionArtifact:
    """Reversed gadget with selection; big clients are worth n+1, clause clients 1.

    At least ``target`` clauses (default: all) are satisfiable iff the best
    utility is at least m(n+1) + target.
    """
    _require_irreducible(formula, check)
    m, n = formula.m, formula.n
    target = n if target is None else target
    inst, labels, notes = _upload_gadget(formula, cs=True)
    threshold = Fraction(m * (n + 1) + target)
    return ReductionArtifact("max3sat-2ufcs", inst,
                             f"at least {target} clauses satisfiable iff max utility >= {threshold}; "
                             f"max satisfiable clauses = max utility - {m * (n + 1)}",
                             "utility_at_least", threshold, labels, notes)


def reduce_mvc_to_1sfcs(graph: UndirectedGraph, n_mvc: int) -> ReductionArtifact:
    """One-snapshot upload gadget: a cover of size n_mvc exists iff n_mvc clients can upload.

    Satellite 1 is the server, 2 the auxiliary node, 3.. the vertex
    (N-)nodes, then one E-node per edge.
    """
    V, E = graph.vertices, len(graph.edges)
    if not 1 <= n_mvc <= max(V, 1) or V < 1:
        raise InvariantViolation("n_mvc", f"must lie in 1..{V}")
    nsat = lambda i: 2 + i  # noqa: E731
    esat = lambda e: 3 + V + e  # noqa: E731
    labels = {1: "s", 2: "a"}
    arcs, notes = [], []
    for i in range(1, V + 1):
        labels[nsat(i)] = f"N{i}"
        arcs.append(((nsat(i), 1), (2, 1), E))
    for e, (u, v) in enumerate(graph.edges):
        labels[esat(e)] = f"E{u}{v}"
        arcs.append(((nsat(u), 1), (esat(e), 1), E))
        arcs.append(((nsat(v), 1), (esat(e), 1), E))
        arcs.append(((esat(e), 1), (1, 1), 1))
        notes.append(f"N{u}, N{v} -> E{u}{v} -> s: edge {u}-{v} is covered by either end")
    arcs.append(((2, 1), (1, 1), (n_mvc - 1) * E))
    notes.append(f"a -> s holds {(n_mvc - 1) * E}, so {E} units must cross the edge nodes")
    clients = tuple(Client(nsat(i), utility=Fraction(1)) for i in range(1, V + 1))
    tvg = from_arcs(2 + V + E, 1, arcs, E * V)
    inst = RoutingInstance("upload", tvg, (Model(Fraction(E), 1, clients),), flow="SF", objective=None, cs=True)
    return ReductionArtifact("mvc-1sfcs", inst, f"a vertex cover of size {n_mvc} exists iff {n_mvc} clients can upload",
                             "utility_at_least", Fraction(n_mvc), labels, notes)


def reduce_2edp_to_mul2mm(problem: PathPairProblem) -> ReductionArtifact:
    """Unit capacities and sizes; model 1 goes o1 -> d1, model 2 goes o2 -> d2."""
    (o1, d1), (o2, d2) = problem.pairs
    arcs = [((u, 1), (v, 1), 1) for u, v in problem.arcs]
    tvg = from_arcs(problem.nodes, 1, arcs, 2)
    models = (Model(Fraction(1), o1, (Client(d1),)), Model(Fraction(1), o2, (Client(d2),)))
    inst = RoutingInstance("download", tvg, models, flow="UF", objective="MM", multicast=True)
    labels = {i: str(i) for i in range(1, problem.nodes + 1)}
    return ReductionArtifact("2edp-mul2mm", inst, "arc-disjoint paths exist iff both models arrive in snapshot 1",
                             "objective_at_most", Fraction(1), labels,
                             ["every arc has capacity 1, so the two unit models cannot share one"])


def build(family: str, source, **options) -> ReductionArtifact:
    if family == "3sat-1sfws":
        return reduce_3sat_to_1sfws(source, **options)
    if family == "3sat-2ufmm":
        return reduce_3sat_to_2ufmm(source, **options)
    if family == "3sat-2ufncs":
        return reduce_3sat_to_2ufncs(source, **options)
    if family == "max3sat-2ufcs":
        return reduce_max3sat_to_2ufcs(source, **options)
    if family == "mvc-1sfcs":
        graph, n_mvc = source
        return reduce_mvc_to_1sfcs(graph, n_mvc)
    if family == "2edp-mul2mm":
        return reduce_2edp_to_mul2mm(source)
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


# --------------------------------------------------------------------------
# source enumeration and sampling


def all_irreducible_formulas(max_vars: int, max_clauses: int) -> list[CnfFormula]:
    """Irreducible formulas with distinct clauses, one per relabeling class."""
    out, seen = [], set()
    for m in range(1, max_vars + 1):
        literals = [l for v in range(1, m + 1) for l in (v, -v)]
        clauses = list(itertools.combinations_with_replacement(literals, 3))
        for n in range(2, max_clauses + 1):
            for combo in itertools.combinations(clauses, n):
                f = CnfFormula(m, combo)
                if not f.is_irreducible():
                    continue
                key = (m, f.canonical())
                if key not in seen:
                    seen.add(key)
                    out.append(CnfFormula(m, key[1]))
    return out


def random_irreducible_formula(rng: random.Random, max_vars: int, max_clauses: int) -> CnfFormula:
    while True:
        m = rng.randint(1, max_vars)
        n = rng.randint(2, max_clauses)
        clauses = tuple(tuple(rng.choice((1, -1)) * rng.randint(1, m) for _ in range(3)) for _ in range(n))
        f = CnfFormula(m, clauses)
        if f.is_irreducible():
            return f


def all_graphs(max_vertices: int) -> list[UndirectedGraph]:
    """Simple graphs with 1..max_vertices vertices, one per isomorphism class."""
    out = []
    for V in range(1, max_vertices + 1):
        pairs = list(itertools.combinations(range(1, V + 1), 2))
        perms = list(itertools.permutations(range(1, V + 1)))
        seen = set()
        for mask in range(1 << len(pairs)):
            edges = [p for b, p in enumerate(pairs) if mask >> b & 1]
            key = min(tuple(sorted(tuple(sorted((perm[u - 1], perm[v - 1]))) for u, v in edges)) for perm in perms)
            if key not in seen:
                seen.add(key)
                out.append(UndirectedGraph(V, key))
    return out


def random_graph(rng: random.Random, max_vertices: int, density: float = 0.5) -> UndirectedGraph:
    V = rng.randint(1, max_vertices)
    edges = tuple(p for p in itertools.combinations(range(1, V + 1), 2) if rng.random() < density)
    return UndirectedGraph(V, edges)


def random_path_pair_problem(rng: random.Random, nodes: int, density: float = 0.35) -> PathPairProblem:
    nodes = max(nodes, 4)
    arcs = tuple((u, v) for u in range(1, nodes + 1) for v in range(1, nodes + 1) if u != v and rng.random() < density)
    o1, d1, o2, d2 = rng.sample(range(1, nodes + 1), 4)
    return PathPairProblem(nodes, arcs, ((o1, d1), (o2, d2)))


# --------------------------------------------------------------------------
# equivalence harness


@dataclass
class EquivalenceCase:
    source: dict
    expected: object
    observed: object
    agree: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0


@dataclass
class EquivalenceReport:
    family: str
    params: dict
    seed: int
    cases: list[EquivalenceCase] = field(default_factory=list)

    @property
    def agreements(self) -> int:
        return sum(c.agree for c in self.cases)

    @property
    def disagreements(self) -> list[EquivalenceCase]:
        return [c for c in self.cases if not c.agree]

    @property
    def agreement_rate(self) -> float:
        return self.agreements / len(self.cases) if self.cases else 1.0

    def to_dict(self, include_timing: bool = True) -> dict:
        cases = []
        for c in self.cases:
            d = asdict(c)
            if not include_timing:
                d.pop("seconds")
            cases.append(d)
        return {
            "family": self.family,
            "params": self.params,
            "seed": self.seed,
            "total": len(self.cases),
            "agreements": self.agreements,
            "agreement_rate": self.agreement_rate,
            "cases": cases,
        }

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_dict(include_timing), indent=2, sort_keys=True, default=str)


def _solve(inst: RoutingInstance, limits):
    if inst.phase == "download":
        return solve_download(inst, limits)
    return solve_upload(inst, limits)


def _formula_cases(family: str, params: dict, trials: int, rng: random.Random) -> list[CnfFormula]:
    formulas = []
    exhaustive = params.get("exhaustive")
    if exhaustive:
        formulas += all_irreducible_formulas(*exhaustive)
    for _ in range(trials):
        formulas.append(random_irreducible_formula(rng, params.get("max_vars", 3), params.get("max_clauses", 4)))
    return formulas


def _sat_case(family: str, formula: CnfFormula, params: dict, limits) -> EquivalenceCase:
    start = time.perf_counter()
    truth = sat_brute_force(formula)
    source = {"num_vars": formula.num_vars, "clauses": [list(c) for c in formula.clauses]}
    if family == "max3sat-2ufcs":
        art = reduce_max3sat_to_2ufcs(formula)
        sol = _solve(art.instance, limits)
        base = formula.m * (formula.n + 1)
        expected = base + truth.max_satisfied
        observed = sol.utility
        detail = {"max_satisfied": truth.max_satisfied, "selected": [list(s) for s in sol.selected]}
        agree = observed == expected and art.answer(sol) == truth.satisfiable
        return EquivalenceCase(source, str(expected), str(observed), agree, detail, time.perf_counter() - start)
    if family == "3sat-1sfws":
        art = reduce_3sat_to_1sfws(formula, hub=params.get("hub", "1+n/(n+1)"))
    elif family == "3sat-2ufmm":
        art = reduce_3sat_to_2ufmm(formula)
    else:
        art = reduce_3sat_to_2ufncs(formula)
    sol = _solve(art.instance, limits)
    observed = art.answer(sol)
    detail = {"status": sol.status}
    if family == "3sat-1sfws":
        detail["optimal_ws"] = str(sol.objective)
        detail["threshold"] = str(art.threshold)
    if not truth.satisfiable:
        detail["max_satisfied"] = truth.max_satisfied
    return EquivalenceCase(source, truth.satisfiable, observed, observed == truth.satisfiable, detail,
                           time.perf_counter() - start)


def verify_reduction_equivalence(
    family: str,
    size_params: dict | None = None,
    trials: int = 100,
    seed: int = 0,
    limits: Limits | None = None,
) -> EquivalenceReport:
    """Compare each gadget's mapped solver answer with a brute-force answer
    to the source problem.

    ``size_params`` by family:

    * formula families: ``max_vars``, ``max_clauses`` for random draws,
      ``exhaustive=(vars, clauses)`` to also include every irreducible
      formula up to those sizes, and ``hub`` for ``3sat-1sfws``;
    * ``mvc-1sfcs``: ``max_vertices``, ``density``, ``exhaustive`` (bool:
      every graph up to ``max_vertices`` instead of random draws);
    * ``2edp-mul2mm``: ``nodes``, ``density``.

    Disagreements are recorded in the report, never raised.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    params = dict(size_params or {})
    rng = random.Random(seed)
    report = EquivalenceReport(family, {k: (list(v) if isinstance(v, tuple) else v) for k, v in params.items()}, seed)
    if family in ("3sat-1sfws", "3sat-2ufmm", "3sat-2ufncs", "max3sat-2ufcs"):
        for formula in _formula_cases(family, params, trials, rng):
            report.cases.append(_sat_case(family, formula, params, limits))
        return report
    if family == "mvc-1sfcs":
        maxv = params.get("max_vertices", 4)
        if params.get("exhaustive"):
            graphs = all_graphs(maxv)
        else:
            graphs = [random_graph(rng, maxv, params.get("density", 0.5)) for _ in range(trials)]
        for graph in graphs:
            cover, _ = mvc_brute_force(graph)
            for n_mvc in range(1, graph.vertices + 1):
                start = time.perf_counter()
                art = reduce_mvc_to_1sfcs(graph, n_mvc)
                sol = _solve(art.instance, limits)
                observed = art.answer(sol)
                expected = cover <= n_mvc
                report.cases.append(EquivalenceCase(
                    {"vertices": graph.vertices, "edges": [list(e) for e in graph.edges], "n_mvc": n_mvc},
                    expected, observed, observed == expected,
                    {"min_cover": cover, "max_selectable": str(sol.utility)}, time.perf_counter() - start))
        return report
    for _ in range(trials):
        problem = random_path_pair_problem(rng, params.get("nodes", 6), params.get("density", 0.35))
        start = time.perf_counter()
        expected = edp_brute_force(problem.nodes, problem.arcs, problem.pairs)
        art = reduce_2edp_to_mul2mm(problem)
        sol = _solve(art.instance, limits)
        observed = art.answer(sol)
        report.cases.append(EquivalenceCase(
            {"nodes": problem.nodes, "arcs": [list(a) for a in problem.arcs], "pairs": [list(p) for p in problem.pairs]},
            expected, observed, observed == expected, {"status": sol.status}, time.perf_counter() - start))
    return report


HUB_SETTINGS = ("1+1/n", "1+n/(n+1)")


def probe_hub_settings(
    max_vars: int = 3,
    max_clauses: int = 3,
    trials: int = 0,
    seed: int = 0,
    settings=HUB_SETTINGS,
    limits: Limits | None = None,
) -> dict:
    """Run the 3sat-1sfws harness once per hub capacity and summarize agreement.

    Every irreducible formula up to the given sizes is included, plus
    ``trials`` random ones.  For each setting the summary counts false
    positives (gadget says yes, formula unsatisfiable) and false negatives
    separately and lists the disagreeing formulas.  Runtimes are left out so
    the output depends only on the arguments.
    """
    out = {"family": "3sat-1sfws", "max_vars": max_vars, "max_clauses": max_clauses,
           "trials": trials, "seed": seed, "settings": []}
    for setting in settings:
        params = {"exhaustive": (max_vars, max_clauses), "max_vars": max_vars,
                  "max_clauses": max_clauses, "hub": setting}
        report = verify_reduction_equivalence("3sat-1sfws", params, trials, seed, limits)
        wrong = report.disagreements
        out["settings"].append({
            "hub": setting,
            "total": len(report.cases),
            "agreements": report.agreements,
            "agreement_rate": report.agreement_rate,
            "false_positives": sum(1 for c in wrong if c.observed and not c.expected),
            "false_negatives": sum(1 for c in wrong if c.expected and not c.observed),
            "disagreements": [{"formula": c.source, "satisfiable": c.expected, **c.detail} for c in wrong],
        })
    return out
