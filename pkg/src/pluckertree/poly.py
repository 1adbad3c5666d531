"""Sparse integer polynomials in solid variables and exact evaluation."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

Monomial = tuple  # ascending tuple of solid keys, repeated for powers


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(sorted(a + b))


class CertPolynomial:
    """Element of the certificate ring: monomial -> nonzero int."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        acc: dict[Monomial, int] = {}
        for m, c in (terms or {}).items():
            m = tuple(sorted(m))
            acc[m] = acc.get(m, 0) + c
        self.terms: dict[Monomial, int] = {m: c for m, c in acc.items() if c}

    @classmethod
    def monomial(cls, m: Iterable[int], c: int = 1) -> "CertPolynomial":
        p = cls()
        if c:
            p.terms[tuple(sorted(m))] = c
        return p

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[Monomial, int]]:
        return iter(sorted(self.terms.items()))

    def __eq__(self, other) -> bool:
        return isinstance(other, CertPolynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        return f"CertPolynomial({len(self.terms)} terms)"

    def __add__(self, other: "CertPolynomial") -> "CertPolynomial":
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        p = CertPolynomial()
        p.terms = out
        return p

    def __neg__(self) -> "CertPolynomial":
        p = CertPolynomial()
        p.terms = {m: -c for m, c in self.terms.items()}
        return p

    def __sub__(self, other: "CertPolynomial") -> "CertPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "CertPolynomial":
        if isinstance(other, int):
            p = CertPolynomial()
            if other:
                p.terms = {m: c * other for m, c in self.terms.items()}
            return p
        out: dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        p = CertPolynomial()
        p.terms = {m: c for m, c in out.items() if c}
        return p

    __rmul__ = __mul__

    def variables(self) -> set[int]:
        return {v for m in self.terms for v in m}

    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        return len({len(m) for m in self.terms}) <= 1


def add(p: CertPolynomial, q: CertPolynomial) -> CertPolynomial:
    return p + q


def scale_monomial(p: CertPolynomial, m: Iterable[int], c: int = 1) -> CertPolynomial:
    m = tuple(m)
    out = CertPolynomial()
    if c:
        out.terms = {mono_mul(k, m): v * c for k, v in p.terms.items()}
    return out


def coefficient_of(p: CertPolynomial, key: int) -> tuple[CertPolynomial, CertPolynomial]:
    """Split ``p = q * x_key + rest`` with ``rest`` free of ``x_key``.

    Only linear occurrences are supported; a squared ``x_key`` raises.
    """
    q, rest = {}, {}
    for m, c in p.terms.items():
        k = m.count(key)
        if k == 0:
            rest[m] = c
        elif k == 1:
            i = m.index(key)
            q[m[:i] + m[i + 1:]] = c
        else:
            raise ValueError("variable occurs with multiplicity > 1")
    a, b = CertPolynomial(), CertPolynomial()
    a.terms, b.terms = q, rest
    return a, b


# exact evaluation -------------------------------------------------------

def det_exact(rows: Sequence[Sequence]) -> Fraction:
    """Determinant by Gaussian elimination over the rationals."""
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("matrix must be square")
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        pv = m[c][c]
        det *= pv
        for r in range(c + 1, n):
            f = m[r][c] / pv
            if f:
                row_r, row_c = m[r], m[c]
                for k in range(c + 1, n):
                    row_r[k] -= f * row_c[k]
    return det


class PointConfiguration:
    """``(d+1) x n`` matrix of exact rationals (homogeneous coordinates)."""

    def __init__(self, columns: Sequence[Sequence]):
        self.columns = [tuple(Fraction(x) for x in col) for col in columns]
        if len({len(c) for c in self.columns}) > 1:
            raise ValueError("ragged configuration")
        self.rank = len(self.columns[0]) if self.columns else 0

    @property
    def n(self) -> int:
        return len(self.columns)

    @classmethod
    def random(cls, n: int, d: int, rng: random.Random, homogeneous: bool = True,
               span: int = 9, max_den: int = 5) -> "PointConfiguration":
        cols = []
        for _ in range(n):
            coords = [Fraction(rng.randint(-span, span), rng.randint(1, max_den)) for _ in range(d)]
            if homogeneous:
                coords = [Fraction(1)] + coords
            else:
                coords.append(Fraction(rng.randint(-span, span), rng.randint(1, max_den)))
            cols.append(coords)
        return cls(cols)

    def det(self, seq: Sequence[int]) -> Fraction:
        if len(seq) != self.rank:
            raise ValueError(f"need {self.rank} columns, got {len(seq)}")
        cols = [self.columns[i] for i in seq]
        return det_exact(list(zip(*cols)))


def evaluate(p: CertPolynomial, X: PointConfiguration, sign_table) -> Fraction:
    """Value of ``p`` when each variable is the determinant of its normal form.

    ``sign_table`` is anything with ``solid(key).verts`` (a SolidTable).
    """
    cache: dict[int, Fraction] = {}
    total = Fraction(0)
    for m, c in p.terms.items():
        val = Fraction(c)
        for v in m:
            x = cache.get(v)
            if x is None:
                verts = sign_table.solid(v).verts
                if len(verts) != X.rank:
                    raise ValueError("configuration dimension does not match solids")
                if max(verts) >= X.n:
                    raise ValueError("configuration has too few points")
                x = cache[v] = X.det(verts)
            val *= x
            if not val:
                break
        total += val
    return total
