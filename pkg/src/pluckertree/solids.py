"""Normal forms of oriented solids.

A solid is a ``(d+1)``-subset of vertices.  Internally a solid is keyed by
the bitmask of its support; the oriented normal form, knownness and
determining facet are memoized per key in a :class:`SolidTable`.

``chi`` of an oriented solid is ``+1``/``-1`` when the solid is known and
``None`` (printed ``?``) otherwise.  The *exact* sign
``eps(pi) * eps(normal_form(pi))`` is always defined and is what the
polynomial ring needs; only its interpretation as a sign of a value
requires knownness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .complex import OrientedComplex, signature

permutation_signature = signature


def mask_of(seq: Iterable[int]) -> int:
    m = 0
    for v in seq:
        m |= 1 << v
    return m


def support_of(mask: int) -> tuple[int, ...]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


@dataclass(frozen=True)
class NormalSolid:
    verts: tuple[int, ...]
    known: bool
    det_facet: tuple[int, ...] | None
    assoc_vertex: int | None
    key: int
    eps: int  # signature of ``verts``

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self.verts))


class SolidTable:
    """Memoized normal forms for one oriented complex and forbidden set.

    Forbidden facets are dropped from the determining-facet candidates, so
    solids known only through them become unknown.
    """

    def __init__(self, cx: OrientedComplex, forbidden: Iterable[Sequence[int]] = ()):
        self.complex = cx
        self.d = cx.d
        self.n = cx.n
        self.forbidden = frozenset(tuple(sorted(f)) for f in forbidden)
        self._facet_omega = {mask_of(f): cx.omega[f] for f in cx.facets
                             if f not in self.forbidden}
        self._cache: dict[int, NormalSolid] = {}

    def __len__(self) -> int:
        return len(self._cache)

    def determining_facets(self, key: int) -> list[tuple[int, ...]]:
        sup = support_of(key)
        out = []
        for v in sup:
            fm = key ^ (1 << v)
            if fm in self._facet_omega:
                out.append(support_of(fm))
        return sorted(out)

    def solid(self, key: int) -> NormalSolid:
        ns = self._cache.get(key)
        if ns is None:
            ns = self._cache[key] = self._compute(key)
        return ns

    def _compute(self, key: int) -> NormalSolid:
        sup = support_of(key)
        if len(sup) != self.d + 1:
            raise ValueError(f"solid must have {self.d + 1} vertices, got {len(sup)}")
        # removing the largest possible vertex gives the lexicographically smallest facet
        for alpha in reversed(sup):
            w = self._facet_omega.get(key ^ (1 << alpha))
            if w is not None:
                f = [v for v in sup if v != alpha]
                if w < 0:
                    f[-1], f[-2] = f[-2], f[-1]
                verts = tuple(f) + (alpha,)
                return NormalSolid(verts, True, tuple(sorted(f)), alpha, key, signature(verts))
        return NormalSolid(sup, False, None, None, key, 1)

    def normal_form(self, seq: Sequence[int]) -> tuple[NormalSolid, int | None]:
        """Normal form of the oriented solid ``seq`` and its chi sign."""
        if len(set(seq)) != len(seq):
            raise ValueError(f"repeated vertex in solid {tuple(seq)}")
        ns = self.solid(mask_of(seq))
        if not ns.known:
            return ns, None
        return ns, signature(seq) * ns.eps

    def exact_sign(self, seq: Sequence[int]) -> int:
        """``seq = exact_sign(seq) * normal_form(seq)`` as ring elements."""
        return signature(seq) * self.solid(mask_of(seq)).eps

    def known(self, key: int) -> bool:
        return self.solid(key).known

    def well_defined(self, key: int) -> bool:
        """All determining facets give normal forms with the same signature."""
        sup = support_of(key)
        sigs = set()
        for f in self.determining_facets(key):
            alpha = next(v for v in sup if v not in f)
            g = list(f)
            if self._facet_omega[mask_of(f)] < 0:
                g[-1], g[-2] = g[-2], g[-1]
            sigs.add(signature(tuple(g) + (alpha,)))
        return len(sigs) <= 1

    def label(self, key: int) -> str:
        """Bracket rendering, ``[F | a]`` for known and ``[...]?`` for unknown."""
        ns = self.solid(key)
        toks = self.complex.vertices.decode(ns.verts)
        if ns.known:
            return "[" + " ".join(toks[:-1]) + " | " + toks[-1] + "]"
        return "[" + " ".join(toks) + "]?"


def normal_form(seq: Sequence[int], cx: OrientedComplex, forbidden=()) -> tuple[NormalSolid, int | None]:
    return SolidTable(cx, forbidden).normal_form(seq)


def well_definedness_check(key: int, cx: OrientedComplex, forbidden=()) -> bool:
    return SolidTable(cx, forbidden).well_defined(key)
