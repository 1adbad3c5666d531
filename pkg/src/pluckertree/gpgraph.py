"""The colored multigraph of admissible signed Plücker relations.

Each admissible relation ``Γ(S|ijkl)`` is stored once (a row of the table
produced by :func:`kernels.admissible_relations`); node ``2r`` is ``+Γ_r``
and node ``2r+1`` is ``-Γ_r``.  Two nodes are joined by an edge of color
``π`` when ``π`` occurs in both with opposite exact coefficients.  For a
known color the partner solids must be known as well, so the condition is
the canonical-sign condition ``σ = -σ'``; for an unknown color both signs
are ``?`` and the exact coefficients decide.  ``Γ`` and ``-Γ`` are never
joined: eliminating along such an edge gives the zero polynomial.

Edges are not stored.  They are enumerated on demand from per-color
buckets ``(π, coefficient) -> nodes``.

A node is *sign-consistent* when every term whose two solids are known has
canonical sign ``+``.  Only those nodes can occur in a positive tree.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .complex import OrientedComplex
from .plucker import PluckerRelation, Term
from .solids import SolidTable, support_of

DENSE_LIMIT = 26  # largest vertex count for dense mask-indexed tables


def solid_arrays(table: SolidTable, verts: Sequence[int]):
    """``eps`` and ``known`` indexed by solid bitmask, for solids inside ``verts``."""
    n = table.n
    if n <= DENSE_LIMIT:
        eps = np.zeros(1 << n, dtype=np.int8)
        known = np.zeros(1 << n, dtype=np.uint8)
    else:
        eps, known = {}, {}
    for sup in combinations(sorted(verts), table.d + 1):
        key = 0
        for v in sup:
            key |= 1 << v
        ns = table.solid(key)
        eps[key] = ns.eps
        known[key] = 1 if ns.known else 0
    return eps, known


@dataclass
class GPGraph:
    table: SolidTable
    rows: np.ndarray  # one admissible +relation per row, columns kernels.COLS
    # (key, coeff) -> ascending node ids holding unknown ``key`` with that coefficient
    buckets: dict = field(default_factory=dict)
    consistent: np.ndarray = None
    _unknowns: list = None
    _known_buckets: dict = None

    @property
    def num_relations(self) -> int:
        return len(self.rows)

    @property
    def num_nodes(self) -> int:
        return 2 * len(self.rows)

    def __len__(self) -> int:
        return self.num_nodes

    # node data ---------------------------------------------------------

    def sign(self, u: int) -> int:
        return -1 if u & 1 else 1

    def relation(self, u: int) -> PluckerRelation:
        row = self.rows[u >> 1]
        sgn = self.sign(u)
        kb = int(row[14])
        terms = tuple(
            Term(sgn * int(row[5 + t]), int(row[8 + 2 * t]), int(row[9 + 2 * t]),
                 bool(kb >> (2 * t) & 1), bool(kb >> (2 * t + 1) & 1))
            for t in range(3))
        S = support_of(int(row[0]))
        return PluckerRelation(S, tuple(int(x) for x in row[1:5]), sgn, terms)

    def unknowns(self, u: int) -> tuple[tuple[int, int], ...]:
        """``(key, coeff)`` of the unknown solids of node ``u``."""
        base = self._unknowns[u >> 1]
        if u & 1:
            return tuple((k, -c) for k, c in base)
        return base

    def is_consistent(self, u: int) -> bool:
        return bool(self.consistent[u])

    def find(self, S: Sequence[int], quad: Sequence[int], sign: int = 1) -> int | None:
        """Node id of ``sign * Γ(S|quad)``, or ``None`` if not admissible."""
        from .complex import signature
        smask = 0
        for v in S:
            smask |= 1 << v
        q = sorted(quad)
        sign *= signature(quad)
        hit = np.nonzero((self.rows[:, 0] == smask) & (self.rows[:, 1] == q[0]) & (self.rows[:, 2] == q[1])
                         & (self.rows[:, 3] == q[2]) & (self.rows[:, 4] == q[3]))[0]
        if len(hit) == 0:
            return None
        return 2 * int(hit[0]) + (0 if sign > 0 else 1)

    # edges -------------------------------------------------------------

    def _build_known_buckets(self):
        kb = defaultdict(list)
        for r, row in enumerate(self.rows):
            bits = int(row[14])
            for t in range(3):
                if bits >> (2 * t) & 3 == 3:
                    c = int(row[5 + t])
                    kb[(int(row[8 + 2 * t]), c)].append(2 * r)
                    kb[(int(row[9 + 2 * t]), c)].append(2 * r)
                    kb[(int(row[8 + 2 * t]), -c)].append(2 * r + 1)
                    kb[(int(row[9 + 2 * t]), -c)].append(2 * r + 1)
        self._known_buckets = {k: sorted(v) for k, v in kb.items()}

    def colors(self) -> list[int]:
        if self._known_buckets is None:
            self._build_known_buckets()
        keys = {k for k, _ in self.buckets} | {k for k, _ in self._known_buckets}
        return sorted(keys)

    def edges_of_color(self, key: int, consistent_only: bool = False) -> Iterator[tuple[int, int, int]]:
        """Edges ``(key, u, v)`` with ``u < v``."""
        src = self.buckets
        if not self.table.known(key):
            pos, neg = src.get((key, 1), ()), src.get((key, -1), ())
        else:
            if self._known_buckets is None:
                self._build_known_buckets()
            pos = self._known_buckets.get((key, 1), ())
            neg = self._known_buckets.get((key, -1), ())
        for u in pos:
            if consistent_only and not self.consistent[u]:
                continue
            for v in neg:
                if (u ^ v) == 1:
                    continue
                if consistent_only and not self.consistent[v]:
                    continue
                yield (key, u, v) if u < v else (key, v, u)

    def edges(self, consistent_only: bool = False) -> list[tuple[int, int, int]]:
        out = []
        for key in self.colors():
            out.extend(self.edges_of_color(key, consistent_only))
        out.sort(key=lambda e: (e[1], e[2], e[0]))
        return out

    def num_edges(self) -> int:
        total = 0
        for key in self.colors():
            if self.table.known(key):
                b = self._known_buckets
            else:
                b = self.buckets
            pos, neg = b.get((key, 1), ()), b.get((key, -1), ())
            pairs = len(pos) * len(neg)
            negset = set(neg)
            pairs -= sum(1 for u in pos if (u ^ 1) in negset)
            total += pairs
        return total

    def edges_between(self, u: int, v: int) -> list[int]:
        """Colors of the edges joining ``u`` and ``v``."""
        if (u ^ v) == 1 or u == v:
            return []
        ru, rv = self.relation(u), self.relation(v)
        out = []
        for tu in ru.terms:
            for key in tu.solids:
                tv = rv.term_of(key)
                if tv is None or tv.coeff != -tu.coeff:
                    continue
                if self.table.known(key):
                    if tu.sigma is None or tv.sigma is None:
                        continue
                out.append(key)
        return sorted(out)

    def dump_edges(self, fh, consistent_only: bool = False) -> int:
        """Write ``colorKey nodeIdA nodeIdB`` lines; returns the edge count."""
        count = 0
        for key, u, v in self.edges(consistent_only):
            fh.write(f"{key} {u} {v}\n")
            count += 1
        return count

    def render(self, u: int) -> str:
        return self.relation(u).render(self.table.complex.vertices.labels)


def _index(rows: np.ndarray):
    """Per-relation unknown lists, buckets and consistency flags."""
    unknowns = []
    buckets = defaultdict(list)
    consistent = np.zeros(2 * len(rows), dtype=bool)
    for r in range(len(rows)):
        row = rows[r]
        bits = int(row[14])
        unk = []
        pos_ok = neg_ok = True
        for t in range(3):
            c = int(row[5 + t])
            ka, kb = bits >> (2 * t) & 1, bits >> (2 * t + 1) & 1
            if ka and kb:
                if c > 0:
                    neg_ok = False
                else:
                    pos_ok = False
            elif not ka:
                unk.append((int(row[8 + 2 * t]), c))
            else:
                unk.append((int(row[9 + 2 * t]), c))
        unk = tuple(unk)
        unknowns.append(unk)
        consistent[2 * r] = pos_ok
        consistent[2 * r + 1] = neg_ok
        for k, c in unk:
            buckets[(k, c)].append(2 * r)
            buckets[(k, -c)].append(2 * r + 1)
    # nodes are appended in increasing id order already
    return unknowns, dict(buckets), consistent


def build(cx: OrientedComplex | SolidTable, forbidden: Iterable[Sequence[int]] = (),
          vertex_subset: Sequence[int] | None = None, s_filter=None) -> GPGraph:
    """Build the GP graph.

    ``vertex_subset`` restricts every index of every relation; ``s_filter``
    is called with each ``S`` (a tuple of vertex indices) and may veto it.
    """
    table = cx if isinstance(cx, SolidTable) else SolidTable(cx, forbidden)
    verts = sorted(vertex_subset) if vertex_subset is not None else list(range(table.n))
    if len(verts) < table.d + 3:
        rows = np.zeros((0, len(kernels.COLS)), dtype=np.int64)
    else:
        eps, known = solid_arrays(table, verts)
        if isinstance(eps, dict):
            from . import _kernels_py
            rows = _kernels_py.admissible_relations(table.n, table.d, eps, known, verts)
        else:
            rows = kernels.admissible_relations(table.n, table.d, eps, known, verts)
    if s_filter is not None and len(rows):
        keep = [i for i in range(len(rows)) if s_filter(support_of(int(rows[i, 0])))]
        rows = rows[keep]
    unknowns, buckets, consistent = _index(rows)
    return GPGraph(table, rows, buckets, consistent, unknowns)


def relation_rows(graph: GPGraph) -> Iterator[PluckerRelation]:
    """All nodes as relations, ``+Γ`` then ``-Γ``, lexicographic order."""
    for u in range(graph.num_nodes):
        yield graph.relation(u)


# subgraph checks --------------------------------------------------------

def tree_candidate_check(nodes: Sequence[int], edges: Sequence[tuple[int, int, int]], unknowns_of) -> bool:
    """Connected, acyclic, ``|V| = |E| + 1`` and every unknown covered once.

    ``edges`` are ``(color, u, v)``; ``unknowns_of(u)`` lists the unknown
    solid keys of ``u`` (a GPGraph's ``unknowns`` or any callable).
    """
    return not tree_problems(nodes, edges, unknowns_of)


def tree_problems(nodes, edges, unknowns_of) -> list[str]:
    nodes = list(nodes)
    nodeset = set(nodes)
    probs = []
    if not nodes:
        return ["empty tree"]
    if len(nodeset) != len(nodes):
        probs.append("repeated node")
    if len(edges) != len(nodeset) - 1:
        probs.append(f"|E| = {len(edges)} but |V| = {len(nodeset)}")
    pairs = set()
    for c, u, v in edges:
        if u not in nodeset or v not in nodeset:
            probs.append(f"edge {(c, u, v)} leaves the node set")
            continue
        if u == v:
            probs.append(f"self-loop at {u}")
        p = (min(u, v), max(u, v))
        if p in pairs:
            probs.append(f"two edges between {p}")
        pairs.add(p)
    # connectivity and acyclicity via union-find
    parent = {u: u for u in nodeset}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c, u, v in edges:
        if u in nodeset and v in nodeset:
            a, b = find(u), find(v)
            if a == b:
                probs.append("cycle")
            parent[a] = b
    if len({find(u) for u in nodeset}) > 1:
        probs.append("not connected")
    cover = defaultdict(int)
    for c, u, v in edges:
        cover[(u, c)] += 1
        cover[(v, c)] += 1
    for u in nodeset:
        unk = [k if isinstance(k, int) else k[0] for k in unknowns_of(u)]
        for k in unk:
            if cover[(u, k)] != 1:
                probs.append(f"unknown {k} of node {u} covered {cover[(u, k)]} times")
        for (w, c), m in cover.items():
            if w == u and c not in unk:
                probs.append(f"edge color {c} at node {u} is not one of its unknowns")
    return sorted(set(probs))


# synthetic graphs -------------------------------------------------------

@dataclass
class SyntheticGraph:
    """Abstract GP graph: node ``u`` has unknown ``(color, coeff)`` pairs.

    Mirrors the parts of :class:`GPGraph` the search needs; used to test
    the solver on hand-made instances.
    """

    specs: list  # per node: tuple of (color, coeff)
    consistent: np.ndarray = None
    buckets: dict = field(default_factory=dict)
    partner: list | None = None  # optional: node id that must not be joined (like Γ / -Γ)

    def __post_init__(self):
        self.specs = [tuple(s) for s in self.specs]
        if self.consistent is None:
            self.consistent = np.ones(len(self.specs), dtype=bool)
        else:
            self.consistent = np.asarray(self.consistent, dtype=bool)
        b = defaultdict(list)
        for u, s in enumerate(self.specs):
            for k, c in s:
                b[(k, c)].append(u)
        self.buckets = dict(b)

    @property
    def num_nodes(self) -> int:
        return len(self.specs)

    def unknowns(self, u: int):
        return self.specs[u]

    def is_consistent(self, u: int) -> bool:
        return bool(self.consistent[u])

    def excluded_pair(self, u: int, v: int) -> bool:
        return self.partner is not None and self.partner[u] == v

    def edges(self, consistent_only: bool = False):
        out = []
        for (k, c), us in self.buckets.items():
            if c != 1:
                continue
            for u in us:
                for v in self.buckets.get((k, -1), ()):
                    if u == v or self.excluded_pair(u, v):
                        continue
                    if consistent_only and not (self.consistent[u] and self.consistent[v]):
                        continue
                    out.append((k, min(u, v), max(u, v)))
        out.sort(key=lambda e: (e[1], e[2], e[0]))
        return out


def excluded_pair(graph, u: int, v: int) -> bool:
    if isinstance(graph, SyntheticGraph):
        return graph.excluded_pair(u, v)
    return (u ^ v) == 1
