"""Three-term Plücker relations written in normal-form solid variables."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence

from .complex import signature
from .poly import CertPolynomial
from .solids import SolidTable, mask_of

# term t of Γ(S|ijkl) pairs quad positions PAIRS[t] with alternating sign ALT[t]
PAIRS = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))
ALT = (1, -1, 1)


class RelationError(ValueError):
    pass


@dataclass(frozen=True)
class Term:
    coeff: int  # exact ring coefficient, +-1
    a: int
    b: int
    known_a: bool
    known_b: bool

    @property
    def sigma(self) -> int | None:
        """Canonical sign; ``None`` stands for ``?``."""
        return self.coeff if self.known_a and self.known_b else None

    @property
    def solids(self) -> tuple[int, int]:
        return self.a, self.b

    def partner(self, key: int) -> int:
        return self.b if key == self.a else self.a

    def known(self, key: int) -> bool:
        return self.known_a if key == self.a else self.known_b


@dataclass(frozen=True)
class PluckerRelation:
    S: tuple[int, ...]
    quad: tuple[int, int, int, int]
    sign: int
    terms: tuple[Term, Term, Term]

    @property
    def canonical_signs(self) -> tuple[int | None, ...]:
        return tuple(t.sigma for t in self.terms)

    @property
    def admissible(self) -> bool:
        return all(t.known_a or t.known_b for t in self.terms)

    @property
    def sign_consistent(self) -> bool:
        """Every term whose solids are both known has canonical sign ``+``."""
        return all(t.coeff > 0 for t in self.terms if t.known_a and t.known_b)

    def unknowns(self) -> list[tuple[int, int]]:
        """``(solid key, exact coefficient)`` for each unknown solid."""
        out = []
        for t in self.terms:
            if not t.known_a:
                out.append((t.a, t.coeff))
            if not t.known_b:
                out.append((t.b, t.coeff))
        return out

    def term_of(self, key: int) -> Term | None:
        for t in self.terms:
            if key == t.a or key == t.b:
                return t
        return None

    def solids(self) -> list[int]:
        return [k for t in self.terms for k in (t.a, t.b)]

    def negated(self) -> "PluckerRelation":
        return PluckerRelation(self.S, self.quad, -self.sign,
                               tuple(Term(-t.coeff, t.a, t.b, t.known_a, t.known_b) for t in self.terms))

    def polynomial(self) -> CertPolynomial:
        p = CertPolynomial()
        p.terms = {tuple(sorted((t.a, t.b))): t.coeff for t in self.terms}
        return p

    @property
    def ident(self) -> tuple:
        return (self.S, self.quad, self.sign)

    def render(self, labels: Sequence[str]) -> str:
        s = " ".join(labels[v] for v in self.S)
        q = " ".join(labels[v] for v in self.quad)
        return ("" if self.sign > 0 else "-") + f"Γ({s} | {q})"


def make_relation(S: Sequence[int], quad: Sequence[int], sign: int, table: SolidTable) -> PluckerRelation:
    """``sign * Γ(S|quad)``; an unsorted quadruple contributes its signature."""
    S = tuple(sorted(S))
    if len(S) != table.d - 1:
        raise RelationError(f"|S| must be {table.d - 1}, got {len(S)}")
    if len(quad) != 4:
        raise RelationError("need exactly four indices after the bar")
    idx = S + tuple(quad)
    if len(set(idx)) != len(idx):
        raise RelationError("indices of S and the quadruple must be distinct")
    if max(idx) >= table.n or min(idx) < 0:
        raise RelationError("vertex index out of range")
    if sign not in (1, -1):
        raise RelationError("sign must be +1 or -1")
    sign *= signature(quad)
    q = tuple(sorted(quad))
    terms = []
    for t, ((p1, p2), (p3, p4)) in enumerate(PAIRS):
        s1 = S + (q[p1], q[p2])
        s2 = S + (q[p3], q[p4])
        n1, n2 = table.solid(mask_of(s1)), table.solid(mask_of(s2))
        c = sign * ALT[t] * signature(s1) * n1.eps * signature(s2) * n2.eps
        terms.append(Term(c, n1.key, n2.key, n1.known, n2.known))
    return PluckerRelation(S, q, sign, tuple(terms))


def admissible(rel: PluckerRelation) -> bool:
    return rel.admissible


def enumerate_relations(table: SolidTable, s_filter=None, vertex_subset=None) -> Iterator[PluckerRelation]:
    """Admissible ``+Γ`` and ``-Γ`` in lexicographic ``(S, quad)`` order.

    ``vertex_subset`` restricts all indices; ``s_filter(S)`` can veto an
    ``S`` before its quadruples are built.
    """
    verts = sorted(vertex_subset) if vertex_subset is not None else list(range(table.n))
    for S in combinations(verts, table.d - 1):
        if s_filter is not None and not s_filter(S):
            continue
        rest = [v for v in verts if v not in S]
        for quad in combinations(rest, 4):
            rel = make_relation(S, quad, 1, table)
            if rel.admissible:
                yield rel
                yield rel.negated()


def count_admissible(table: SolidTable) -> int:
    return sum(1 for _ in enumerate_relations(table)) // 2
