"""Facet lists, pseudomanifold checks and orientations.

Vertices are referred to by index into a :class:`VertexTable`; facets are
stored as ascending index tuples.  The table order is the order used for
every "ascending" / "lexicographic" convention downstream (normal forms,
relation enumeration), so it matters: tokens that look like numbers or
hex digits, optionally barred with a leading ``~``, are sorted naturally
with ``x`` directly before ``~x``.  Anything else keeps first-appearance
order.
"""

from __future__ import annotations

import re
from collections import defaultdict, deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

BAR = "~"
_TOKEN_OK = re.compile(r"^[^\s\[\]()|]+$")
_NATURAL = re.compile(r"^~?[0-9A-Za-z]+$")


class ComplexError(ValueError):
    pass


class FacetParseError(ComplexError):
    pass


class NotPseudomanifold(ComplexError):
    pass


class NotOrientable(ComplexError):
    pass


def natural_key(token: str):
    base = token[1:] if token.startswith(BAR) else token
    return (int(base, 36), base, token.startswith(BAR))


@dataclass(frozen=True)
class VertexTable:
    labels: tuple[str, ...]
    index: dict = field(compare=False, repr=False, hash=False, default=None)

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ComplexError("vertex labels must be distinct")
        for tok in self.labels:
            if not _TOKEN_OK.match(tok):
                raise ComplexError(f"bad vertex token {tok!r}")
        object.__setattr__(self, "index", {t: i for i, t in enumerate(self.labels)})

    @classmethod
    def from_tokens(cls, tokens: Iterable[str], order: str = "natural") -> "VertexTable":
        seen = list(dict.fromkeys(tokens))
        if order == "natural" and all(_NATURAL.match(t) for t in seen):
            seen.sort(key=natural_key)
        elif order not in ("natural", "appearance"):
            raise ValueError(f"unknown vertex order {order!r}")
        return cls(tuple(seen))

    def __len__(self) -> int:
        return len(self.labels)

    def encode(self, tokens: Sequence[str]) -> tuple[int, ...]:
        try:
            return tuple(self.index[t] for t in tokens)
        except KeyError as exc:
            raise ComplexError(f"unknown vertex {exc.args[0]!r}") from None

    def decode(self, seq: Iterable[int]) -> list[str]:
        return [self.labels[i] for i in seq]

    def extended(self, new_labels: Sequence[str]) -> "VertexTable":
        return VertexTable(self.labels + tuple(new_labels))


@dataclass
class ParsedFacets:
    vertices: VertexTable
    facets: list[tuple[int, ...]]
    signs: list[int] | None


def _split_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_facets(text: str, order: str = "natural") -> ParsedFacets:
    """Parse facet-file content.

    Each non-empty line is an optional ``+``/``-`` followed by vertex
    tokens.  Either every line is signed or none is.  Facets are returned
    as ascending index tuples; a sign refers to the facet *as written*, so
    it is converted to the sign of the ascending ordering.
    """
    rows = []
    for lineno, line in _split_lines(text):
        sign = None
        if line[0] in "+-":
            sign = 1 if line[0] == "+" else -1
            line = line[1:]
        toks = line.replace("[", " ").replace("]", " ").split()
        if not toks:
            raise FacetParseError(f"line {lineno}: empty facet")
        if len(set(toks)) != len(toks):
            raise FacetParseError(f"line {lineno}: duplicate vertex in facet")
        rows.append((lineno, sign, toks))
    if not rows:
        raise FacetParseError("no facets")
    signed = [r[1] is not None for r in rows]
    if any(signed) and not all(signed):
        raise FacetParseError("mixed signed and unsigned facet lines")
    sizes = {len(r[2]) for r in rows}
    if len(sizes) != 1:
        raise FacetParseError(f"facets of different cardinalities {sorted(sizes)}")

    vt = VertexTable.from_tokens((t for r in rows for t in r[2]), order=order)
    facets, signs, seen = [], [], set()
    for lineno, sign, toks in rows:
        seq = vt.encode(toks)
        key = tuple(sorted(seq))
        if key in seen:
            raise FacetParseError(f"line {lineno}: duplicate facet")
        seen.add(key)
        facets.append(key)
        if sign is not None:
            signs.append(sign * signature(seq))
    return ParsedFacets(vt, facets, signs if all(signed) else None)


def signature(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq`` ascending."""
    inv = 0
    n = len(seq)
    for a in range(n):
        x = seq[a]
        for b in range(a + 1, n):
            if seq[b] < x:
                inv += 1
            elif seq[b] == x:
                raise ValueError(f"repeated entry {x} in {tuple(seq)}")
    return -1 if inv & 1 else 1


def format_facets(vertices: VertexTable, facets, signs=None) -> str:
    out = []
    for i, f in enumerate(facets):
        toks = " ".join(vertices.decode(f))
        if signs is None:
            out.append(toks)
        else:
            out.append(("+ " if signs[i] > 0 else "- ") + toks)
    return "\n".join(out) + "\n"


@dataclass
class PureComplex:
    vertices: VertexTable
    facets: list[tuple[int, ...]]

    def __post_init__(self):
        self.facets = [tuple(sorted(f)) for f in self.facets]
        sizes = {len(f) for f in self.facets}
        if len(sizes) != 1:
            raise ComplexError("complex is not pure")
        if len(set(self.facets)) != len(self.facets):
            raise ComplexError("duplicate facet")
        self.d = sizes.pop()
        self.facet_set = frozenset(self.facets)
        self._ridges = None

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def ridge_incidence(self) -> dict[tuple[int, ...], list[int]]:
        if self._ridges is None:
            inc = defaultdict(list)
            for fi, f in enumerate(self.facets):
                for r in combinations(f, self.d - 1):
                    inc[r].append(fi)
            self._ridges = dict(inc)
        return self._ridges

    @property
    def boundary_ridges(self) -> list[tuple[int, ...]]:
        return sorted(r for r, fs in self.ridge_incidence.items() if len(fs) == 1)

    @property
    def is_closed(self) -> bool:
        return all(len(fs) == 2 for fs in self.ridge_incidence.values())

    def f_vector(self) -> tuple[int, ...]:
        faces = [set() for _ in range(self.d)]
        for f in self.facets:
            for k in range(1, self.d + 1):
                faces[k - 1].update(combinations(f, k))
        return tuple(len(s) for s in faces)

    def link(self, face: Sequence[int]) -> "PureComplex":
        face = set(face)
        facets = [tuple(v for v in f if v not in face) for f in self.facets if face <= set(f)]
        return PureComplex(self.vertices, facets)

    def relabeled(self, perm: Sequence[int]) -> "PureComplex":
        """Complex with vertex ``i`` renamed to ``perm[i]`` (labels permuted alike)."""
        labels = [None] * self.n
        for i, p in enumerate(perm):
            labels[p] = self.vertices.labels[i]
        return PureComplex(VertexTable(tuple(labels)), [tuple(perm[v] for v in f) for f in self.facets])


@dataclass
class OrientedComplex(PureComplex):
    omega: dict[tuple[int, ...], int] = field(default_factory=dict)

    def __post_init__(self):
        super().__post_init__()
        missing = [f for f in self.facets if f not in self.omega]
        if missing:
            raise ComplexError(f"orientation missing for {len(missing)} facets")

    def signs(self) -> list[int]:
        return [self.omega[f] for f in self.facets]

    def to_text(self) -> str:
        return format_facets(self.vertices, self.facets, self.signs())


@dataclass
class PseudomanifoldClass:
    closed: bool
    components: list[list[tuple[int, ...]]]

    def __str__(self) -> str:
        if self.closed:
            return "closed"
        return f"with boundary ({len(self.components)} components)"


def pseudomanifold_check(cx: PureComplex) -> PseudomanifoldClass:
    bad = [r for r, fs in cx.ridge_incidence.items() if len(fs) > 2]
    if bad:
        r = min(bad)
        raise NotPseudomanifold(
            f"ridge {cx.vertices.decode(r)} in {len(cx.ridge_incidence[r])} facets")
    bnd = cx.boundary_ridges
    if not bnd:
        return PseudomanifoldClass(True, [])
    # boundary ridges are adjacent when they share a codimension-2 face
    by_face = defaultdict(list)
    for i, r in enumerate(bnd):
        for g in combinations(r, len(r) - 1):
            by_face[g].append(i)
    comp = list(range(len(bnd)))

    def find(x):
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    for members in by_face.values():
        for m in members[1:]:
            a, b = find(members[0]), find(m)
            if a != b:
                comp[max(a, b)] = min(a, b)
    groups = defaultdict(list)
    for i, r in enumerate(bnd):
        groups[find(i)].append(r)
    return PseudomanifoldClass(False, sorted(groups.values()))


@dataclass
class ConeResult:
    complex: PureComplex
    apexes: list[int]
    was_closed: bool


def cone_boundary(cx: PureComplex, apex_prefix: str = "*y") -> ConeResult:
    cls = pseudomanifold_check(cx)
    if cls.closed:
        return ConeResult(cx, [], True)
    names = []
    k = 1
    while len(names) < len(cls.components):
        name = f"{apex_prefix}{k}"
        if name not in cx.vertices.index:
            names.append(name)
        k += 1
    vt = cx.vertices.extended(names)
    facets = list(cx.facets)
    apexes = []
    for j, comp in enumerate(cls.components):
        y = cx.n + j
        apexes.append(y)
        facets.extend(tuple(r) + (y,) for r in comp)
    return ConeResult(PureComplex(vt, facets), apexes, False)


def _induced_sign(facet: tuple[int, ...], ridge: tuple[int, ...]) -> int:
    # coefficient of the ascending ridge in the boundary of the ascending facet
    for pos, v in enumerate(facet):
        if v not in ridge:
            return -1 if pos & 1 else 1
    raise AssertionError("ridge not in facet")


@dataclass
class Orientation:
    omega: dict[tuple[int, ...], int]
    components: int
    coned: bool

    @property
    def connected(self) -> bool:
        return self.components == 1


def _propagate(cx: PureComplex) -> tuple[dict, int]:
    adj = defaultdict(list)
    for r, fs in cx.ridge_incidence.items():
        if len(fs) == 2:
            a, b = fs
            adj[a].append((b, r))
            adj[b].append((a, r))
    omega: dict[int, int] = {}
    order = sorted(range(len(cx.facets)), key=lambda i: cx.facets[i])
    ncomp = 0
    for start in order:
        if start in omega:
            continue
        ncomp += 1
        omega[start] = 1
        queue = deque([start])
        while queue:
            a = queue.popleft()
            fa = cx.facets[a]
            for b, r in adj[a]:
                want = -omega[a] * _induced_sign(fa, r) * _induced_sign(cx.facets[b], r)
                if b not in omega:
                    omega[b] = want
                    queue.append(b)
                elif omega[b] != want:
                    raise NotOrientable(
                        f"orientation conflict across ridge {cx.vertices.decode(r)}")
    return {cx.facets[i]: s for i, s in omega.items()}, ncomp


def orient(cx: PureComplex) -> Orientation:
    """Orientation making the signed facet sum a cycle.

    Bounded pseudomanifolds are oriented through the boundary cone and the
    result restricted.  Each connected piece is normalized so that its
    lexicographically smallest facet is positive on its ascending ordering.
    """
    cone = cone_boundary(cx)
    omega, ncomp = _propagate(cone.complex)
    omega = {f: omega[f] for f in cx.facets}
    if ncomp == 1:
        if omega[min(cx.facets)] < 0:
            omega = {f: -s for f, s in omega.items()}
    return Orientation(omega, ncomp, not cone.was_closed)


def check_cycle(cx: PureComplex, omega: dict[tuple[int, ...], int]) -> bool:
    acc = defaultdict(int)
    for f in cx.facets:
        for r in combinations(f, cx.d - 1):
            acc[r] += omega[f] * _induced_sign(f, r)
    for r, fs in cx.ridge_incidence.items():
        if len(fs) == 2 and acc[r] != 0:
            return False
    return True


def load_complex(text: str, order: str = "natural", require_signs: bool = False) -> OrientedComplex:
    """Parse, validate and orient.

    Printed signs are kept when present (after checking they form a
    cycle); otherwise the orientation is computed.
    """
    parsed = parse_facets(text, order=order)
    cx = PureComplex(parsed.vertices, parsed.facets)
    pseudomanifold_check(cx)
    if parsed.signs is not None:
        omega = dict(zip(parsed.facets, parsed.signs))
        if not check_cycle(cx, omega):
            raise NotOrientable("printed signs do not form a cycle")
    elif require_signs:
        raise ComplexError("facet signs required")
    else:
        omega = orient(cx).omega
    return OrientedComplex(parsed.vertices, parsed.facets, omega)
