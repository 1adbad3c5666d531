"""Combinatorial search for minimum positive Plücker trees.

A tree is grown from its smallest node id (the root).  Every unknown solid
``π`` of a selected node with coefficient ``e`` raises a *demand*
``(π, -e)``: some other node holding ``π`` with coefficient ``-e`` must be
attached by an edge of color ``π``.  A tree is complete when no demand is
open.

Lower bounds come from the AND/OR relaxation that forgets node identity:
``h(π, s)`` is the least number of nodes in a subtree that can satisfy the
demand ``(π, s)``, computed exactly for the relaxation by a
Dijkstra-style fixpoint (Knuth's superior-context-free grammar algorithm).
The search is an iterative-deepening depth-first branch and bound on the
tree size ``k``; it prunes when ``|T| + Σ h(open demands) > k``.
"""

from __future__ import annotations

import heapq
import time
from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

INF = float("inf")


class _Timeout(Exception):
    pass


class _Cap(Exception):
    pass


def demand_bounds(graph, allowed=None) -> tuple[dict, dict]:
    """Relaxed demand costs ``h`` and per-node root costs.

    ``allowed(u)`` (default: sign-consistent) limits the nodes used.
    """
    if allowed is None:
        allowed = graph.is_consistent
    rules_by_body = {}  # demand -> list of rule ids whose body contains it
    rule_head = []
    rule_need = []
    rule_val = []
    best = {}
    heap = []
    for u in range(graph.num_nodes):
        if not allowed(u):
            continue
        unk = graph.unknowns(u)
        for i, (k, e) in enumerate(unk):
            rid = len(rule_head)
            rule_head.append((k, e))
            body = [(k2, -e2) for j, (k2, e2) in enumerate(unk) if j != i]
            rule_need.append(len(body))
            rule_val.append(1)
            for dem in body:
                rules_by_body.setdefault(dem, []).append(rid)
            if not body:
                if best.get((k, e), INF) > 1:
                    best[(k, e)] = 1
                    heapq.heappush(heap, (1, (k, e)))
    h = {}
    while heap:
        val, dem = heapq.heappop(heap)
        if dem in h:
            continue
        h[dem] = val
        for rid in rules_by_body.get(dem, ()):
            rule_need[rid] -= 1
            rule_val[rid] += val
            if rule_need[rid] == 0:
                head = rule_head[rid]
                if head not in h and rule_val[rid] < best.get(head, INF):
                    best[head] = rule_val[rid]
                    heapq.heappush(heap, (rule_val[rid], head))
    root = {}
    for u in range(graph.num_nodes):
        if not allowed(u):
            continue
        root[u] = 1 + sum(h.get((k, -e), INF) for k, e in graph.unknowns(u))
    return h, root


@dataclass
class TreeSearchResult:
    status: str  # "optimal", "feasible", "infeasible", "timeout"
    nodes: tuple = ()
    edges: tuple = ()
    lower_bound: int = 0
    explored: int = 0
    stats: dict = field(default_factory=dict)


class TreeSearch:
    """Iterative deepening over the tree size with exact bounds."""

    def __init__(self, graph, allowed=None, excluded=None):
        self.graph = graph
        self.allowed = allowed if allowed is not None else graph.is_consistent
        # pairs of nodes that may not be joined (Γ and -Γ)
        self.excluded = excluded if excluded is not None else (lambda u, v: (u ^ v) == 1)
        self.h, self.root_cost = demand_bounds(graph, self.allowed)
        self._cands = {}
        self.explored = 0

    def candidates(self, dem):
        """Nodes satisfying ``dem`` as (ids, rest) arrays sorted by id.

        ``rest[i]`` is the relaxed cost of the demands the node would raise.
        """
        got = self._cands.get(dem)
        if got is None:
            ids, rest = [], []
            k0 = dem[0]
            for u in self.graph.buckets.get(dem, ()):
                if not self.allowed(u):
                    continue
                r = 0
                for k, e in self.graph.unknowns(u):
                    if k != k0:
                        r += self.h.get((k, -e), INF)
                if r == INF:
                    continue
                ids.append(u)
                rest.append(r)
            got = (np.array(ids, dtype=np.int64), np.array(rest, dtype=np.float64))
            self._cands[dem] = got
        return got

    def run(self, max_size: int, time_limit: float | None = None, max_explored: int | None = None,
            enumerate_cap: int = 2000, min_size: int = 1, prove_optimal: bool = True) -> TreeSearchResult:
        start = time.monotonic()
        deadline = None if time_limit is None else start + time_limit
        self._deadline = deadline
        self._max_explored = max_explored
        roots = sorted(self.root_cost.items(), key=lambda kv: kv[0])
        lb = min((c for _, c in roots), default=INF)
        if lb == INF:
            return TreeSearchResult("infeasible", lower_bound=0, explored=0)
        lb = max(int(lb), min_size)
        k = lb
        if not prove_optimal:
            return self._dive(roots, lb, max_size, start)
        try:
            while k <= max_size:
                for root, c in roots:
                    if c > k:
                        continue
                    found = self._first(root, k)
                    if found is not None:
                        trees = self.enumerate(k, cap=enumerate_cap, deadline=deadline)
                        nodes, edges = min(trees, key=self.tie_key) if trees else found
                        return TreeSearchResult("optimal", nodes, edges, k, self.explored,
                                                {"elapsed": time.monotonic() - start,
                                                 "optimal_trees_seen": len(trees),
                                                 "tie_break_complete": self.enum_complete})
                k += 1
        except _Timeout:
            return TreeSearchResult("timeout", lower_bound=k, explored=self.explored,
                                    stats={"elapsed": time.monotonic() - start})
        return TreeSearchResult("infeasible", lower_bound=k, explored=self.explored,
                                stats={"elapsed": time.monotonic() - start})

    def _dive(self, roots, lb, max_size, start):
        """First tree of size at most ``max_size`` in root order; no optimality proof."""
        try:
            for root, c in roots:
                if c > max_size:
                    continue
                found = self._first(root, max_size)
                if found is not None:
                    nodes, edges = found
                    status = "optimal" if len(nodes) == lb else "feasible"
                    return TreeSearchResult(status, nodes, edges, lb, self.explored,
                                            {"elapsed": time.monotonic() - start})
        except _Timeout:
            return TreeSearchResult("timeout", lower_bound=lb, explored=self.explored,
                                    stats={"elapsed": time.monotonic() - start})
        return TreeSearchResult("infeasible", lower_bound=max_size + 1, explored=self.explored,
                                stats={"elapsed": time.monotonic() - start})

    # depth-first search for one root and size bound ----------------------

    def _tick(self):
        self.explored += 1
        if self.explored & 1023 == 0:
            if self._deadline is not None and time.monotonic() > self._deadline:
                raise _Timeout
        if self._max_explored is not None and self.explored > self._max_explored:
            raise _Timeout

    def _start(self, root):
        g = self.graph
        open_ = [((k, -e), root) for k, e in g.unknowns(root)]
        return [root], {root}, [], open_

    def _first(self, root, k):
        out = []

        def visit(nodes, edges):
            out.append((tuple(sorted(nodes)), tuple(sorted(edges, key=lambda e: (e[1], e[2], e[0])))))
            raise _Cap

        nodes, sel, edges, open_ = self._start(root)
        try:
            self._dfs(root, k, nodes, sel, edges, open_, visit)
        except _Cap:
            return out[0]
        return None

    def tie_key(self, tree):
        """Prefer fewer negated relations, then the smallest sorted node list."""
        nodes, _ = tree
        sign = getattr(self.graph, "sign", None)
        if sign is None:
            return (0, list(nodes), nodes)
        return (sum(sign(u) < 0 for u in nodes), sorted(u >> 1 for u in nodes), nodes)

    def enumerate(self, size, root=None, cap=10000, deadline=None):
        """All trees with exactly ``size`` nodes (optionally with a given root)."""
        found = []

        def visit(nodes, edges):
            if len(nodes) == size:
                found.append((tuple(sorted(nodes)), tuple(sorted(edges, key=lambda e: (e[1], e[2], e[0])))))
            if len(found) >= cap:
                raise _Cap

        self._deadline = deadline
        self._max_explored = None
        roots = [root] if root is not None else sorted(u for u, c in self.root_cost.items() if c <= size)
        try:
            for r in roots:
                if self.root_cost.get(r, INF) > size:
                    continue
                nodes, sel, edges, open_ = self._start(r)
                self._dfs(r, size, nodes, sel, edges, open_, visit, exact=True)
            self.enum_complete = True
        except _Cap:
            self.enum_complete = False
        except _Timeout:
            self.enum_complete = False
        return sorted(found)

    def _dfs(self, root, k, nodes, sel, edges, open_, visit, exact=False):
        self._tick()
        if not open_:
            if not exact or len(nodes) == k:
                visit(nodes, edges)
            return
        h = self.h
        total = len(nodes)
        for dem, _ in open_:
            total += h.get(dem, INF)
        if total > k:
            return
        # branch on the most constrained open demand
        best_i, best_list = -1, None
        for i, (dem, src) in enumerate(open_):
            ids, rest = self.candidates(dem)
            budget = k - total + h[dem] - 1  # what the new node's own demands may cost
            lo = bisect_right(ids, root) if len(ids) else 0
            sub_ids = ids[lo:]
            sub_rest = rest[lo:]
            mask = sub_rest <= budget
            cand = [int(w) for w in sub_ids[mask] if w not in sel and not self.excluded(int(w), src)]
            if best_list is None or len(cand) < len(best_list):
                best_i, best_list = i, cand
                if not cand:
                    return
        dem, src = open_[best_i]
        rest_open = open_[:best_i] + open_[best_i + 1:]
        key = dem[0]
        g = self.graph
        for w in best_list:
            new_dems = [((k2, -e2), w) for k2, e2 in g.unknowns(w) if k2 != key]
            nodes.append(w)
            sel.add(w)
            edges.append((key, min(w, src), max(w, src)))
            self._dfs(root, k, nodes, sel, edges, rest_open + new_dems, visit, exact)
            edges.pop()
            sel.discard(w)
            nodes.pop()
