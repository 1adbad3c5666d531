"""Minimum positive Plücker trees as a 0/1 program.

Variables are ``x_u`` for nodes and ``x_e`` for edges; the objective is the
number of selected nodes.  Constraint families:

``ggc``      two selected endpoints per selected edge: ``2 Σ_c x_(u,v,c) <= x_u + x_v``
``connect``  at most one edge per node pair
``tree``     ``1 + Σ x_e = Σ x_u``
``unknown``  for each unknown ``π`` of ``u``: ``Σ_{edges colored π at u} x_e = x_u``
``positive`` ``x_u = 0`` for nodes that are not sign-consistent
``cut``      lazily added: ``Σ_{e in C} x_e <= |C| - 1`` for a cycle ``C``

The tree equation together with the others still admits a tree plus
disjoint cyclic components; :func:`cycle_repair` cuts those off.

Two exact solvers are provided.  :func:`solve` uses the combinatorial tree
search in :mod:`treesearch` by default.  ``method="bnb"`` materializes the
rows above and runs a propagation-based branch and bound, which is only
practical for small graphs but follows the program literally; the test
suite checks both against exhaustive enumeration.
"""

from __future__ import annotations

import time
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations

from .gpgraph import GPGraph, SyntheticGraph, excluded_pair, tree_problems
from .treesearch import TreeSearch


class Status(str, Enum):
    OPTIMAL = "optimal"
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    TIMEDOUT = "timeout"


@dataclass
class SearchLimits:
    max_nodes: int = 8
    time_limit: float | None = None
    prove_optimal: bool = True
    seed: int = 0
    max_explored: int | None = None
    tie_cap: int = 2000  # optimal trees compared for the tie-break

    def __post_init__(self):
        if self.max_nodes < 1:
            raise ValueError("max_nodes must be positive")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time_limit must be positive")


@dataclass(frozen=True)
class Selection:
    nodes: tuple
    edges: tuple  # (color, u, v) with u < v

    @property
    def size(self) -> int:
        return len(self.nodes)


@dataclass
class SearchResult:
    status: Status
    selection: Selection | None = None
    lower_bound: int = 0
    stats: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.selection is not None


@dataclass
class Row:
    family: str
    coeffs: dict  # var -> int
    sense: str  # "<=", "=="
    rhs: int


@dataclass
class IPModel:
    graph: object
    method: str = "tree"
    node_vars: list = field(default_factory=list)
    edge_vars: list = field(default_factory=list)  # (color, u, v)
    rows: list = field(default_factory=list)
    cuts: list = field(default_factory=list)
    flags: list = field(default_factory=list)

    @property
    def empty(self) -> bool:
        return self.graph.num_nodes == 0

    def var_name(self, var):
        return var


def _unknowns(graph, u):
    return [k for k, _ in graph.unknowns(u)]


def build_ip(graph, materialize: bool | None = None, max_edges: int = 20000) -> IPModel:
    """Model for ``graph``; rows are built only for small graphs.

    ``materialize=None`` builds the rows when the consistent edge count is
    at most ``max_edges``.
    """
    model = IPModel(graph)
    if graph.num_nodes == 0:
        model.flags.append("empty graph: infeasible")
        return model
    if materialize is False:
        return model
    edges = graph.edges(consistent_only=False)
    if materialize is None and len(edges) > max_edges:
        model.flags.append("rows not materialized")
        return model
    if len(edges) > max_edges and materialize:
        raise ValueError(f"{len(edges)} edges exceed max_edges={max_edges}")
    model.method = "bnb" if materialize else "tree"
    model.node_vars = [("n", u) for u in range(graph.num_nodes)]
    model.edge_vars = [("e",) + e for e in edges]
    by_pair = defaultdict(list)
    by_node_color = defaultdict(list)
    for ev in model.edge_vars:
        _, c, u, v = ev
        by_pair[(u, v)].append(ev)
        by_node_color[(u, c)].append(ev)
        by_node_color[(v, c)].append(ev)
    for (u, v), evs in sorted(by_pair.items()):
        co = {ev: 2 for ev in evs}
        co[("n", u)] = -1
        co[("n", v)] = -1
        model.rows.append(Row("ggc", co, "<=", 0))
        if len(evs) > 1:
            model.rows.append(Row("connect", {ev: 1 for ev in evs}, "<=", 1))
    co = {ev: 1 for ev in model.edge_vars}
    for nv in model.node_vars:
        co[nv] = co.get(nv, 0) - 1
    model.rows.append(Row("tree", co, "==", -1))
    for u in range(graph.num_nodes):
        for k in _unknowns(graph, u):
            co = {ev: 1 for ev in by_node_color.get((u, k), ())}
            co[("n", u)] = -1
            model.rows.append(Row("unknown", co, "==", 0))
        if not graph.is_consistent(u):
            model.rows.append(Row("positive", {("n", u): 1}, "==", 0))
    return model


def check_selection(model: IPModel, sel: Selection) -> list[str]:
    """Violated constraint families (printed families, then tree structure)."""
    graph = model.graph
    xs = {("n", u): 1 for u in sel.nodes}
    for c, u, v in sel.edges:
        xs[("e", c, u, v)] = 1
    bad = []
    if model.rows:
        for row in model.rows + model.cuts:
            act = sum(c * xs.get(v, 0) for v, c in row.coeffs.items())
            ok = act <= row.rhs if row.sense == "<=" else act == row.rhs
            if not ok:
                bad.append(row.family)
    else:
        # same families evaluated directly on the graph
        nodes = set(sel.nodes)
        pairs = defaultdict(int)
        for c, u, v in sel.edges:
            if u not in nodes or v not in nodes:
                bad.append("ggc")
            pairs[(u, v)] += 1
            if isinstance(graph, GPGraph) and c not in graph.edges_between(u, v):
                bad.append("edge")
        if any(m > 1 for m in pairs.values()):
            bad.append("connect")
        if 1 + len(sel.edges) != len(nodes):
            bad.append("tree")
        for u in nodes:
            for k in _unknowns(graph, u):
                if sum(1 for c, a, b in sel.edges if c == k and u in (a, b)) != 1:
                    bad.append("unknown")
            if not graph.is_consistent(u):
                bad.append("positive")
    bad.extend(tree_problems(sel.nodes, sel.edges, lambda u: _unknowns(graph, u)))
    return sorted(set(bad))


def _components(nodes, edges):
    adj = defaultdict(list)
    for e in edges:
        _, u, v = e
        adj[u].append((v, e))
        adj[v].append((u, e))
    seen = set()
    comps = []
    for s in sorted(nodes):
        if s in seen:
            continue
        comp_nodes, comp_edges, stack = [], set(), [s]
        seen.add(s)
        while stack:
            x = stack.pop()
            comp_nodes.append(x)
            for y, e in adj[x]:
                comp_edges.add(e)
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps.append((sorted(comp_nodes), sorted(comp_edges)))
    return comps


def _find_cycle(nodes, edges):
    """Edges of one cycle in the multigraph, or ``None``."""
    adj = defaultdict(list)
    for e in edges:
        _, u, v = e
        adj[u].append((v, e))
        adj[v].append((u, e))
    # iterative DFS keeping the edge used to reach each node
    visited = {}
    for s in sorted(nodes):
        if s in visited:
            continue
        visited[s] = None
        stack = [(s, iter(adj[s]))]
        while stack:
            x, it = stack[-1]
            advanced = False
            for y, e in it:
                if e == visited[x]:
                    continue
                if y in visited:
                    if y in {z for z, _ in stack}:
                        # walk back from x to y
                        cyc = [e]
                        z = x
                        while z != y:
                            pe = visited[z]
                            cyc.append(pe)
                            z = pe[1] if pe[2] == z else pe[2]
                        return sorted(cyc)
                    continue
                visited[y] = e
                stack.append((y, iter(adj[y])))
                advanced = True
                break
            if not advanced:
                stack.pop()
    return None


def cycle_repair(sel: Selection, model: IPModel) -> list[Row]:
    """Cuts for every component of ``sel`` that is not a tree.

    The component containing the most nodes is assumed to be the intended
    tree only if it is acyclic; every cyclic component contributes one cut
    on one of its cycles.  Returns the new cuts (also added to the model).
    """
    comps = _components(sel.nodes, sel.edges)
    new = []
    if len(comps) <= 1 and len(sel.edges) == len(sel.nodes) - 1:
        return new
    for nodes, edges in comps:
        cyc = _find_cycle(nodes, edges)
        if cyc is None:
            continue
        row = Row("cut", {("e",) + e: 1 for e in cyc}, "<=", len(cyc) - 1)
        model.cuts.append(row)
        new.append(row)
    return new


# branch and bound over the explicit rows -----------------------------------

class _BnB:
    def __init__(self, model: IPModel, deadline, max_explored):
        self.model = model
        self.vars = model.node_vars + model.edge_vars
        self.idx = {v: i for i, v in enumerate(self.vars)}
        self.deadline = deadline
        self.max_explored = max_explored
        self.explored = 0
        self.load_rows()

    def load_rows(self):
        self.rows = []
        for r in self.model.rows + self.model.cuts:
            co = [(self.idx[v], c) for v, c in r.coeffs.items()]
            if r.sense == "==":
                self.rows.append((co, r.rhs))
                self.rows.append(([(i, -c) for i, c in co], -r.rhs))
            else:
                self.rows.append((co, r.rhs))
        self.var_rows = defaultdict(list)
        for ri, (co, _) in enumerate(self.rows):
            for i, _ in co:
                self.var_rows[i].append(ri)

    def propagate(self, val, changed):
        """Fix variables forced by ``<=`` rows; False on conflict."""
        queue = list(changed)
        while queue:
            i = queue.pop()
            for ri in self.var_rows[i]:
                co, rhs = self.rows[ri]
                lo = 0
                for j, c in co:
                    x = val[j]
                    if x is None:
                        if c < 0:
                            lo += c
                    else:
                        lo += c * x
                if lo > rhs:
                    return False
                for j, c in co:
                    if val[j] is None and abs(c) > rhs - lo:
                        val[j] = 0 if c > 0 else 1
                        queue.append(j)
        return True

    def solve(self, bound, first=False):
        """Solutions with objective ``<= bound`` (only the first if ``first``)."""
        self.first = first
        n_nodes = len(self.model.node_vars)
        obj = ([(i, 1) for i in range(n_nodes)], bound)
        self.rows.append(obj)
        ri = len(self.rows) - 1
        for i, _ in obj[0]:
            self.var_rows[i].append(ri)
        val = [None] * len(self.vars)
        sols = []
        try:
            if self.propagate(val, range(len(self.vars))):
                self._branch(val, sols)
        except StopIteration:
            pass
        self.rows.pop()
        for i, _ in obj[0]:
            self.var_rows[i].pop()
        return sols

    def _branch(self, val, sols):
        self.explored += 1
        if self.deadline is not None and self.explored % 256 == 0 and time.monotonic() > self.deadline:
            raise TimeoutError
        if self.max_explored is not None and self.explored > self.max_explored:
            raise TimeoutError
        try:
            i = val.index(None)
        except ValueError:
            sols.append(list(val))
            if self.first:
                raise StopIteration
            return
        for x in (1, 0):
            v2 = list(val)
            v2[i] = x
            if self.propagate(v2, [i]):
                self._branch(v2, sols)


def _selection_from(model, vals) -> Selection:
    nodes = tuple(sorted(v[1] for v, x in zip(model.node_vars + model.edge_vars, vals) if x and v[0] == "n"))
    edges = tuple(sorted((v[1:] for v, x in zip(model.node_vars + model.edge_vars, vals) if x and v[0] == "e"),
                         key=lambda e: (e[1], e[2], e[0])))
    return Selection(nodes, edges)


def _tie_key(graph, sel: Selection):
    sign = getattr(graph, "sign", None)
    if sign is None:
        return (0, list(sel.nodes), sel.nodes)
    return (sum(sign(u) < 0 for u in sel.nodes), sorted(u >> 1 for u in sel.nodes), sel.nodes)


def solve_bnb(model: IPModel, limits: SearchLimits) -> SearchResult:
    """Incumbent-improving branch and bound with lazy cycle cuts.

    Each round looks for any selection of at most ``bound`` nodes (nodes
    and edges set to 1 first).  A selection with a cyclic component only
    adds cuts; a tree becomes the incumbent and the bound drops below it.
    Once no smaller tree exists, all trees of the optimal size are listed
    for the deterministic tie-break.
    """
    start = time.monotonic()
    deadline = None if limits.time_limit is None else start + limits.time_limit
    if model.empty:
        return SearchResult(Status.INFEASIBLE, stats={"flags": list(model.flags)})
    if not model.rows:
        model = build_ip(model.graph, materialize=True)
    stats = {"cut_rounds": 0, "explored": 0}

    def run(bound, first):
        bnb = _BnB(model, deadline, limits.max_explored)
        sols = bnb.solve(bound, first=first)
        stats["explored"] += bnb.explored
        return [_selection_from(model, s) for s in sols]

    incumbent = None
    bound = limits.max_nodes
    try:
        while bound >= 1:
            sols = run(bound, first=True)
            if not sols:
                break
            if cycle_repair(sols[0], model):
                stats["cut_rounds"] += 1
                continue
            incumbent = sols[0]
            if not limits.prove_optimal:
                stats["elapsed"] = time.monotonic() - start
                return SearchResult(Status.FEASIBLE, incumbent, 1, stats)
            bound = incumbent.size - 1
        if incumbent is None:
            stats["elapsed"] = time.monotonic() - start
            return SearchResult(Status.INFEASIBLE, None, limits.max_nodes + 1, stats)
        k = incumbent.size
        while True:
            sols = run(k, first=False)
            cut = False
            for sel in sols:
                if cycle_repair(sel, model):
                    cut = True
            if not cut:
                break
            stats["cut_rounds"] += 1
        best = min(sols, key=lambda s: _tie_key(model.graph, s))
    except TimeoutError:
        stats["elapsed"] = time.monotonic() - start
        if incumbent is not None:
            return SearchResult(Status.FEASIBLE, incumbent, 1, stats)
        return SearchResult(Status.TIMEDOUT, None, 0, stats)
    stats["cuts"] = len(model.cuts)
    stats["elapsed"] = time.monotonic() - start
    return SearchResult(Status.OPTIMAL, best, k, stats)


def solve_tree(model: IPModel, limits: SearchLimits) -> SearchResult:
    graph = model.graph
    if model.empty:
        return SearchResult(Status.INFEASIBLE, stats={"flags": list(model.flags)})
    ts = TreeSearch(graph, excluded=lambda u, v: excluded_pair(graph, u, v))
    res = ts.run(limits.max_nodes, time_limit=limits.time_limit, max_explored=limits.max_explored,
                 enumerate_cap=limits.tie_cap, prove_optimal=limits.prove_optimal)
    stats = dict(res.stats, explored=res.explored)
    if res.status in ("optimal", "feasible"):
        sel = Selection(res.nodes, res.edges)
        bad = check_selection(model, sel)
        if bad:  # never hand out a selection that breaks the model
            raise AssertionError(f"search produced an invalid selection: {bad}")
        return SearchResult(Status(res.status), sel, res.lower_bound, stats)
    return SearchResult(Status(res.status), None, res.lower_bound, stats)


def solve(model: IPModel, limits: SearchLimits | None = None, method: str | None = None) -> SearchResult:
    """Solve ``model``; ``method`` is ``"tree"`` (default) or ``"bnb"``."""
    limits = limits or SearchLimits()
    method = method or model.method
    if method == "bnb":
        return solve_bnb(model, limits)
    if method == "tree":
        return solve_tree(model, limits)
    raise ValueError(f"unknown method {method!r}")


# exhaustive oracle -----------------------------------------------------------

def exhaustive_optimum(graph, max_nodes: int | None = None) -> tuple[int | None, list[Selection]]:
    """Smallest tree size by brute force, with all trees of that size.

    Only for tiny graphs: every node subset is tried in order of size and
    every choice of ``|V| - 1`` induced edges is checked.
    """
    n = graph.num_nodes
    edges = graph.edges(consistent_only=False)
    limit = n if max_nodes is None else min(n, max_nodes)
    for size in range(1, limit + 1):
        found = []
        for nodes in combinations(range(n), size):
            if not all(graph.is_consistent(u) for u in nodes):
                continue
            ns = set(nodes)
            ind = [e for e in edges if e[1] in ns and e[2] in ns]
            for es in combinations(ind, size - 1):
                if not tree_problems(nodes, es, lambda u: _unknowns(graph, u)):
                    found.append(Selection(tuple(nodes), tuple(sorted(es, key=lambda e: (e[1], e[2], e[0])))))
        if found:
            return size, found
    return None, []


# pipeline -------------------------------------------------------------------

@dataclass
class CertificateRun:
    result: SearchResult
    certificate: object = None  # certificate.Certificate
    report: object = None  # certificate.VerificationReport
    graph_size: tuple = (0, 0)  # (relations, sign-consistent nodes)


def selection_tree(graph: GPGraph, sel: Selection, meta: dict | None = None):
    """Turn a selection of graph nodes into a :class:`certificate.PluckerTree`."""
    from .certificate import build_tree
    pos = {u: i for i, u in enumerate(sel.nodes)}
    nodes = [graph.relation(u).ident for u in sel.nodes]
    edges = [(c, pos[u], pos[v]) for c, u, v in sel.edges]
    return build_tree(graph.table, nodes, edges, meta)


def find_certificate(cx, forbidden=(), limits: SearchLimits | None = None, name: str = "",
                     method: str | None = None, configs: int = 10) -> CertificateRun:
    """Build the GP graph, solve, and verify the tree before handing it out."""
    from . import gpgraph
    from .certificate import make_certificate, verify
    limits = limits or SearchLimits()
    forbidden = [tuple(sorted(f)) for f in forbidden]
    graph = gpgraph.build(cx, forbidden)
    size = (graph.num_relations, int(graph.consistent.sum()))
    res = solve(build_ip(graph), limits, method)
    if not res.found:
        return CertificateRun(res, graph_size=size)
    meta = {"status": res.status.value, "size": res.selection.size, "lower_bound": res.lower_bound,
            "seed": limits.seed, "max_nodes": limits.max_nodes}
    tree = selection_tree(graph, res.selection, meta)
    cert = make_certificate(tree, name, forbidden or None, meta)
    rep = verify(cert, cx, forbidden or None, configs=configs, seed=limits.seed)
    return CertificateRun(res, cert, rep, size)
