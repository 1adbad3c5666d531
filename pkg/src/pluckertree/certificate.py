"""Plücker trees, their elimination, and certificate verification.

Eliminating an edge of color ``x`` between the parts ``A`` and ``B`` of a
partially eliminated tree writes the contribution of ``x`` in each part as
``a·x`` (the multiplier of the endpoint times its term) and combines
``m_A·P_A + m_B·P_B`` with ``(m_A, m_B) = (-a_B, a_A)`` when ``a_A`` is the
positive side.  Every node ``m`` carries its accumulated multiplier
``κ_m``, so the final polynomial is ``Z(T) = Σ κ_m Γ_m``.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .complex import OrientedComplex, check_cycle, signature
from .gpgraph import tree_problems
from .plucker import PluckerRelation, RelationError, make_relation
from .poly import CertPolynomial, PointConfiguration, coefficient_of, evaluate
from .solids import SolidTable, mask_of, support_of

FORMAT = "pluckertree-certificate"
VERSION = 1


class EliminationError(ValueError):
    pass


class CertificateError(ValueError):
    pass


def _sign_of(p: CertPolynomial) -> int:
    """+1 / -1 when all coefficients share that sign, else 0."""
    signs = {1 if c > 0 else -1 for c in p.terms.values()}
    return signs.pop() if len(signs) == 1 else 0


def _multipliers(a1: CertPolynomial, a2: CertPolynomial) -> tuple[CertPolynomial, CertPolynomial]:
    s1, s2 = _sign_of(a1), _sign_of(a2)
    if s1 > 0 and s2 < 0:
        return -a2, a1
    if s1 < 0 and s2 > 0:
        return a2, -a1
    raise EliminationError("color terms do not have opposite signs")


def eliminate_edge(p1: CertPolynomial, p2: CertPolynomial, color: int) -> CertPolynomial:
    """Cancel the linear occurrences of ``color`` between ``p1`` and ``p2``."""
    a1, _ = coefficient_of(p1, color)
    a2, _ = coefficient_of(p2, color)
    if not a1 or not a2:
        raise EliminationError("color variable absent from one side")
    m1, m2 = _multipliers(a1, a2)
    out = m1 * p1 + m2 * p2
    if color in out.variables():
        raise EliminationError("color variable survived the elimination")
    return out


@dataclass
class PluckerTree:
    table: SolidTable
    nodes: list  # PluckerRelation
    edges: list  # (color key, i, j) with node indices i < j
    meta: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.nodes)

    def unknowns_of(self, i: int) -> list[int]:
        return [k for k, _ in self.nodes[i].unknowns()]

    def problems(self) -> list[str]:
        probs = tree_problems(range(len(self.nodes)), self.edges, self.unknowns_of)
        for c, i, j in self.edges:
            ti, tj = self.nodes[i].term_of(c), self.nodes[j].term_of(c)
            if ti is None or tj is None:
                probs.append(f"edge color {self.table.label(c)} missing from an endpoint")
            elif ti.coeff != -tj.coeff:
                probs.append(f"edge color {self.table.label(c)} has equal signs at both endpoints")
        if not all(n.admissible for n in self.nodes):
            probs.append("inadmissible node")
        return probs

    def is_valid(self) -> bool:
        return not self.problems()

    def leaf_order(self) -> list[tuple[int, int, int]]:
        """Edges ordered by repeatedly removing the smallest leaf."""
        deg = {i: 0 for i in range(len(self.nodes))}
        inc = {i: [] for i in range(len(self.nodes))}
        for e in self.edges:
            deg[e[1]] += 1
            deg[e[2]] += 1
            inc[e[1]].append(e)
            inc[e[2]].append(e)
        used, order = set(), []
        while len(order) < len(self.edges):
            leaf = min(i for i in deg if deg[i] == 1)
            e = next(e for e in inc[leaf] if e not in used)
            used.add(e)
            order.append(e)
            deg[e[1]] -= 1
            deg[e[2]] -= 1
        return order

    def render(self) -> list[str]:
        labels = self.table.complex.vertices.labels
        return [n.render(labels) for n in self.nodes]


@dataclass
class Elimination:
    final: CertPolynomial
    multipliers: list  # κ_m per node
    order: list  # edges in elimination order


def evaluate_tree(tree: PluckerTree, order: Sequence[tuple[int, int, int]] | None = None) -> Elimination:
    """Eliminate all edges (leaf-first unless ``order`` is given)."""
    if order is None:
        order = tree.leaf_order()
    n = len(tree.nodes)
    if sorted(order) != sorted(tree.edges):
        raise EliminationError("order must list every tree edge once")
    part = list(range(n))  # part representative per node
    members = {i: [i] for i in range(n)}
    poly = {i: tree.nodes[i].polynomial() for i in range(n)}
    kappa = [CertPolynomial.monomial(()) for _ in range(n)]
    for c, i, j in order:
        A, B = part[i], part[j]
        if A == B:
            raise EliminationError("edge closes a cycle")
        ti, tj = tree.nodes[i].term_of(c), tree.nodes[j].term_of(c)
        if ti is None or tj is None:
            raise EliminationError(f"color {tree.table.label(c)} missing from an endpoint")
        a1 = kappa[i] * CertPolynomial.monomial((ti.partner(c),), ti.coeff)
        a2 = kappa[j] * CertPolynomial.monomial((tj.partner(c),), tj.coeff)
        mA, mB = _multipliers(a1, a2)
        poly[A] = mA * poly[A] + mB * poly.pop(B)
        for m in members[A]:
            kappa[m] = mA * kappa[m]
        for m in members[B]:
            kappa[m] = mB * kappa[m]
            part[m] = A
        members[A].extend(members.pop(B))
    (root,) = members.keys()
    return Elimination(poly[root], kappa, list(order))


def expand_trace(tree: PluckerTree, multipliers: Sequence[CertPolynomial]) -> CertPolynomial:
    """``Σ κ_m Γ_m`` by direct multiplication."""
    out = CertPolynomial()
    for rel, k in zip(tree.nodes, multipliers):
        out = out + k * rel.polynomial()
    return out


# positivity ------------------------------------------------------------------

@dataclass
class PositivityResult:
    positive: bool
    failing: tuple | None = None  # (monomial, coeff, reason)
    witness: list = field(default_factory=list)  # per monomial: determining facets
    relaxed: bool = False  # an unknown solid was accepted as an even power

    def __bool__(self):
        return self.positive


def positivity_check(p: CertPolynomial, table: SolidTable) -> PositivityResult:
    if not p:
        return PositivityResult(False, ((), 0, "zero polynomial"))
    witness = []
    relaxed = False
    for m, c in p:
        if c <= 0:
            return PositivityResult(False, (m, c, "non-positive coefficient"))
        facets = []
        for v in sorted(set(m)):
            ns = table.solid(v)
            if ns.known:
                facets.append(ns.det_facet)
            elif m.count(v) % 2 == 0:
                relaxed = True
                facets.append(None)
            else:
                return PositivityResult(False, (m, c, f"unknown solid {table.label(v)} to an odd power"))
        witness.append((m, facets))
    return PositivityResult(True, None, witness, relaxed)


# certificates ------------------------------------------------------------------

@dataclass
class Certificate:
    tree: PluckerTree
    final: CertPolynomial
    multipliers: list | None = None
    complex_name: str = ""
    forbidden: list | None = None  # facets as index tuples
    meta: dict = field(default_factory=dict)
    stored_hash: str | None = None
    stored_orientation: dict | None = None

    @property
    def table(self) -> SolidTable:
        return self.tree.table


def complex_hash(cx: OrientedComplex) -> str:
    """Hash of the unsigned facet list in canonical label form."""
    lines = sorted(" ".join(cx.vertices.decode(f)) for f in cx.facets)
    return hashlib.sha256("\n".join(lines).encode()).hexdigest()


def build_tree(table: SolidTable, nodes: Iterable[tuple], edges: Iterable[tuple] | None = None,
               meta: dict | None = None) -> PluckerTree:
    """Tree from ``(S, quad, sign)`` index tuples.

    ``edges`` are ``(i, j)`` or ``(color, i, j)``.  Missing colors are the
    unknown solid shared by both endpoints with opposite coefficients;
    missing edges are inferred from unknowns that occur in exactly two
    nodes.
    """
    rels = [make_relation(S, q, s, table) for S, q, s in nodes]
    out = []
    if edges is None:
        occ = {}
        for i, r in enumerate(rels):
            for k, _ in r.unknowns():
                occ.setdefault(k, []).append(i)
        for k, idx in sorted(occ.items()):
            if len(idx) == 2:
                out.append((k, idx[0], idx[1]))
            else:
                raise CertificateError(f"unknown {table.label(k)} occurs in {len(idx)} nodes; give the edges")
    else:
        for e in edges:
            if len(e) == 3:
                c, i, j = e
            else:
                i, j = e
                ui = dict(rels[i].unknowns())
                uj = dict(rels[j].unknowns())
                shared = [k for k in ui if k in uj and ui[k] == -uj[k]]
                if len(shared) != 1:
                    raise CertificateError(f"nodes {i} and {j} share {len(shared)} eliminable unknowns")
                c = shared[0]
            out.append((c, min(i, j), max(i, j)))
    out.sort(key=lambda e: (e[1], e[2], e[0]))
    return PluckerTree(table, rels, out, dict(meta or {}))


def infer_signs(table: SolidTable, nodes: Sequence[tuple], edges: Sequence[tuple[int, int]]) -> list[int]:
    """Signs making every fully known term positive and every edge cancel.

    ``nodes`` are ``(S, quad)``; returns one sign per node.  Raises when
    the constraints conflict or leave a component undetermined.
    """
    rels = [make_relation(S, q, 1, table) for S, q in nodes]
    sign: dict[int, int] = {}
    for i, r in enumerate(rels):
        forced = {t.coeff for t in r.terms if t.known_a and t.known_b}
        if len(forced) > 1:
            raise CertificateError(f"node {i} has fully known terms of both signs")
        if forced:
            sign[i] = forced.pop()
    adj = {i: [] for i in range(len(rels))}
    for i, j in edges:
        ui, uj = dict(rels[i].unknowns()), dict(rels[j].unknowns())
        shared = [k for k in ui if k in uj]
        if not shared:
            raise CertificateError(f"nodes {i} and {j} share no unknown solid")
        k = shared[0]
        # s_i * ui[k] = -(s_j * uj[k])
        rel = -ui[k] * uj[k]
        adj[i].append((j, rel))
        adj[j].append((i, rel))
    stack = list(sign)
    while stack:
        i = stack.pop()
        for j, rel in adj[i]:
            want = sign[i] * rel
            if j in sign:
                if sign[j] != want:
                    raise CertificateError(f"sign conflict between nodes {i} and {j}")
            else:
                sign[j] = want
                stack.append(j)
    if len(sign) != len(rels):
        raise CertificateError("some node signs are not determined")
    return [sign[i] for i in range(len(rels))]


def make_certificate(tree: PluckerTree, name: str = "", forbidden=None, meta: dict | None = None) -> Certificate:
    elim = evaluate_tree(tree)
    return Certificate(tree, elim.final, elim.multipliers, name,
                       [tuple(f) for f in forbidden] if forbidden else None, dict(meta or {}))


# JSON ---------------------------------------------------------------------------

def _poly_json(p: CertPolynomial, table: SolidTable) -> list:
    labels = table.complex.vertices
    return [{"coeff": c, "monomial": [labels.decode(table.solid(v).verts) for v in m]} for m, c in p]


def _poly_from_json(items, table: SolidTable) -> CertPolynomial:
    vt = table.complex.vertices
    acc = CertPolynomial()
    for it in items:
        coeff = int(it["coeff"])
        keys = []
        for seq in it["monomial"]:
            idx = vt.encode(seq)
            if len(idx) != table.d + 1:
                raise CertificateError(f"solid {seq} has the wrong size")
            coeff *= table.exact_sign(idx)
            keys.append(mask_of(idx))
        acc = acc + CertPolynomial.monomial(keys, coeff)
    return acc


def to_json(cert: Certificate) -> dict:
    t = cert.tree
    table = t.table
    cx = table.complex
    vt = cx.vertices
    return {
        "format": FORMAT,
        "version": VERSION,
        "complex": {"name": cert.complex_name, "sha256": complex_hash(cx)},
        "orientation": [{"facet": vt.decode(f), "sign": cx.omega[f]} for f in cx.facets],
        "nodes": [{"S": vt.decode(n.S), "quad": vt.decode(n.quad), "sign": n.sign} for n in t.nodes],
        "edges": [{"color": vt.decode(support_of(c)), "nodes": [i, j]} for c, i, j in t.edges],
        "final": _poly_json(cert.final, table),
        "multipliers": None if cert.multipliers is None else [_poly_json(k, table) for k in cert.multipliers],
        "forbidden": None if not cert.forbidden else [vt.decode(f) for f in cert.forbidden],
        "meta": dict(cert.meta),
    }


def dumps(cert: Certificate) -> str:
    return json.dumps(to_json(cert), indent=1, ensure_ascii=False, sort_keys=False) + "\n"


def from_json(data: dict, cx: OrientedComplex, forbidden=None) -> Certificate:
    """Rebuild a certificate against ``cx``.

    The stored orientation replaces the complex's own when it is a valid
    cycle on the same facets.  ``forbidden`` (index tuples) overrides the
    stored list.  Raises :class:`CertificateError` on any mismatch.
    """
    if data.get("format") != FORMAT:
        raise CertificateError("not a certificate file")
    vt = cx.vertices
    try:
        omega = None
        if data.get("orientation"):
            omega = {}
            for item in data["orientation"]:
                idx = vt.encode(item["facet"])
                f = tuple(sorted(idx))
                if f not in cx.facet_set:
                    raise CertificateError(f"oriented facet {item['facet']} is not a facet of the complex")
                omega[f] = int(item["sign"]) * signature(idx)
            if set(omega) != set(cx.facets) or not check_cycle(cx, omega):
                raise CertificateError("stored orientation is not an orientation of the complex")
            cx = OrientedComplex(cx.vertices, cx.facets, omega)
        if forbidden is None and data.get("forbidden"):
            forbidden = [tuple(sorted(vt.encode(f))) for f in data["forbidden"]]
        table = SolidTable(cx, forbidden or ())
        nodes = [(vt.encode(n["S"]), vt.encode(n["quad"]), int(n["sign"])) for n in data["nodes"]]
        edges = []
        for e in data["edges"]:
            i, j = e["nodes"]
            edges.append((mask_of(vt.encode(e["color"])), int(i), int(j)))
        for c, i, j in edges:
            if not (0 <= i < len(nodes) and 0 <= j < len(nodes)):
                raise CertificateError("edge endpoint out of range")
        tree = build_tree(table, nodes, edges, data.get("meta"))
        final = _poly_from_json(data["final"], table)
        mult = None
        if data.get("multipliers") is not None:
            mult = [_poly_from_json(k, table) for k in data["multipliers"]]
            if len(mult) != len(nodes):
                raise CertificateError("one multiplier per node expected")
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, CertificateError):
            raise
        raise CertificateError(str(exc)) from exc
    cert = Certificate(tree, final, mult, data.get("complex", {}).get("name", ""),
                       forbidden, dict(data.get("meta") or {}))
    cert.stored_hash = data.get("complex", {}).get("sha256")
    return cert


def loads(text: str, cx: OrientedComplex, forbidden=None) -> Certificate:
    return from_json(json.loads(text), cx, forbidden)


# verification -----------------------------------------------------------------

CHECKS = {
    "a": "tree validity",
    "b": "re-elimination reproduces the final polynomial",
    "c": "positivity",
    "d": "final polynomial equals the expanded trace",
    "e": "numeric vanishing",
    "f": "no solid determined only by a forbidden facet",
}


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class VerificationReport:
    checks: dict = field(default_factory=dict)  # letter -> CheckResult
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks.values())

    def failed(self) -> list[str]:
        return [k for k, c in sorted(self.checks.items()) if not c.passed]

    def lines(self) -> list[str]:
        out = []
        for k in sorted(self.checks):
            c = self.checks[k]
            out.append(f"({k}) {c.name}: {'ok' if c.passed else 'FAIL'}" + (f" - {c.detail}" if c.detail else ""))
        out.extend(self.notes)
        return out


def verify(cert: Certificate, cx: OrientedComplex | None = None, forbidden=None,
           configs: int = 10, seed: int = 0) -> VerificationReport:
    """Run checks (a)-(f); never raises on a bad certificate."""
    rep = VerificationReport()

    def put(k, ok, detail=""):
        rep.checks[k] = CheckResult(CHECKS[k], bool(ok), detail)

    tree = cert.tree
    table = tree.table
    if cx is not None and cert.stored_hash is not None and cert.stored_hash != complex_hash(cx):
        rep.notes.append("complex hash differs from the one stored in the certificate")
    # (a)
    try:
        probs = tree.problems()
        if cx is not None and cert.stored_hash is not None and cert.stored_hash != complex_hash(cx):
            probs.append("certificate was made for a different complex")
        put("a", not probs, "; ".join(probs))
    except Exception as exc:  # noqa: BLE001 - report, never crash
        put("a", False, f"error: {exc}")
    # (b)
    elim = None
    try:
        elim = evaluate_tree(tree)
        same = elim.final == cert.final
        put("b", same, "" if same else f"recomputed {len(elim.final)} monomials, stored {len(cert.final)}")
    except Exception as exc:  # noqa: BLE001
        put("b", False, f"elimination failed: {exc}")
    # (c)
    try:
        pos = positivity_check(cert.final, table)
        if pos.positive:
            put("c", True, "even powers of unknown solids accepted" if pos.relaxed else "")
            if pos.relaxed:
                rep.notes.append("positivity used the even-power rule for unknown solids")
        else:
            m, c, why = pos.failing
            put("c", False, f"{why}: {c:+d} " + " ".join(table.label(v) for v in m))
    except Exception as exc:  # noqa: BLE001
        put("c", False, f"error: {exc}")
    # (d)
    try:
        mult = cert.multipliers if cert.multipliers is not None else (elim.multipliers if elim else None)
        if mult is None:
            put("d", False, "no multipliers available")
        else:
            ok = expand_trace(tree, mult) == cert.final
            put("d", ok, "" if ok else "Σ κ_m Γ_m differs from the stored final polynomial")
    except Exception as exc:  # noqa: BLE001
        put("d", False, f"error: {exc}")
    # (e)
    try:
        rng = random.Random(seed)
        bad = 0
        for _ in range(configs):
            X = PointConfiguration.random(table.n, table.d, rng)
            if evaluate(cert.final, X, table) != 0:
                bad += 1
        put("e", bad == 0, f"{configs} exact configurations" + (f", {bad} nonzero" if bad else ""))
    except Exception as exc:  # noqa: BLE001
        put("e", False, f"error: {exc}")
    # (f)
    try:
        fb = set(cert.forbidden or ()) | set(tuple(sorted(f)) for f in (forbidden or ()))
        if not fb:
            put("f", True, "no forbidden facets")
        else:
            clean = SolidTable(table.complex, fb) if table.forbidden != frozenset(fb) else table
            offenders = sorted({v for m, _ in cert.final for v in m if not clean.known(v)})
            full = SolidTable(table.complex)
            shown = []
            for v in offenders:
                ns = full.solid(v)
                via = " ".join(table.complex.vertices.decode(ns.det_facet)) if ns.known else "none"
                shown.append(f"{full.label(v)} (facet [{via}])")
            put("f", not offenders, "" if not offenders else
                "determined only via forbidden facets: " + ", ".join(shown))
    except Exception as exc:  # noqa: BLE001
        put("f", False, f"error: {exc}")
    return rep


# rendering --------------------------------------------------------------------

def render_polynomial(p: CertPolynomial, table: SolidTable) -> str:
    parts = []
    for m, c in p:
        mono = " ".join(table.label(v) for v in m)
        if abs(c) != 1:
            mono = f"{abs(c)} {mono}"
        parts.append(("+ " if c > 0 else "- ") + mono)
    if not parts:
        return "0"
    s = "\n".join(parts)
    return s[2:] if s.startswith("+ ") else s
