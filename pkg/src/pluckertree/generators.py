"""Embedded datasets, the Δ⁴ₙ family and realizable control spheres."""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import combinations, product
from pathlib import Path

from .complex import BAR, OrientedComplex, format_facets, load_complex, parse_facets, VertexTable

DATA_ENV = "PLUCKERTREE_DATA"


def data_dir() -> Path:
    """Directory with the facet files; ``$PLUCKERTREE_DATA`` overrides."""
    env = os.environ.get(DATA_ENV)
    if env:
        return Path(env)
    return Path(str(resources.files("pluckertree") / "data"))


@dataclass(frozen=True)
class Entry:
    filename: str
    note: str
    expected: dict = field(default_factory=dict)
    forbidden: str | None = None  # name of the matching forbidden-facet dataset


CATALOG = {
    "intro-example": Entry("intro-example.facets", "minimal single-relation example",
                         {"f_vector": (8, 27, 38, 19), "closed": True, "realizable": False}),
    "jockusch-d3-6": Entry("jockusch-d3-6.facets", "Jockusch's cs 3-sphere on 12 vertices",
                           {"f_vector": (12, 60, 96, 48), "closed": True, "realizable": False},
                           forbidden="forbidden-B3-6"),
    "jockusch-d3-5": Entry("jockusch-d3-5.facets", "Jockusch's cs 3-sphere on 10 vertices",
                           {"f_vector": (10, 40, 60, 30), "closed": True, "realizable": False}),
    "zheng-Z": Entry("zheng-Z.facets", "Zheng's 3-sphere with f-vector (16,96,160,80)",
                     {"f_vector": (16, 96, 160, 80), "closed": True, "realizable": False}),
    "prismatoid-1039": Entry("prismatoid-1039.facets", "prismatoid boundary #1039",
                             {"closed": False, "realizable": False}),
    "prismatoid-1963": Entry("prismatoid-1963.facets", "prismatoid boundary #1963",
                             {"closed": False, "realizable": False}),
    "prismatoid-2669": Entry("prismatoid-2669.facets", "prismatoid boundary #2669",
                             {"closed": False, "realizable": False}),
    "prismatoid-3513": Entry("prismatoid-3513.facets", "prismatoid boundary #3513",
                             {"closed": False, "realizable": False}),
    "control-P": Entry("control-P.facets", "boundary of conv(cross-polytope ∪ {±(1,1,1,1)})",
                       {"f_vector": (10, 40, 60, 30), "closed": True, "realizable": True}),
    "forbidden-B3-6": Entry("forbidden-B3-6.facets", "ball ±B whose facets a Δ³₆ certificate must avoid",
                            {"ball": True}),
    "forbidden-B41-7": Entry("forbidden-B41-7.facets", "ball ±B⁴¹₇ (printed list)", {"ball": True}),
}


@dataclass
class Dataset:
    name: str
    text: str
    note: str
    expected: dict
    forbidden_name: str | None = None

    @property
    def sha256(self) -> str:
        return hashlib.sha256(self.text.encode()).hexdigest()

    def complex(self, order: str = "natural") -> OrientedComplex:
        return load_complex(self.text, order=order)

    def forbidden_for(self, cx: OrientedComplex) -> list[tuple[int, ...]]:
        """Facets of the matching forbidden set as index tuples of ``cx``."""
        if self.forbidden_name is None:
            return []
        return forbidden_facets(dataset(self.forbidden_name).text, cx)


def names() -> list[str]:
    return sorted(CATALOG) + ["novik-zheng-d4-6", "novik-zheng-d4-7", "cross-polytope-4", "cyclic-4-8"]


def dataset(name: str) -> Dataset:
    if name in CATALOG:
        e = CATALOG[name]
        text = (data_dir() / e.filename).read_text()
        return Dataset(name, text, e.note, dict(e.expected), e.forbidden)
    if name.startswith("novik-zheng-d4-"):
        n = int(name.rsplit("-", 1)[1])
        facets, ball = novik_zheng_d4(n)
        return Dataset(name, facet_text(facets), f"Novik-Zheng Δ⁴ on {2 * n} vertices",
                       {"closed": True, "realizable": None}, f"novik-zheng-ball-{n}")
    if name.startswith("novik-zheng-ball-"):
        n = int(name.rsplit("-", 1)[1])
        _, ball = novik_zheng_d4(n)
        return Dataset(name, facet_text(ball), f"ball ±B⁴¹ for n={n}", {"ball": True})
    for c in controls():
        if c.name == name:
            return c.dataset
    raise KeyError(f"unknown dataset {name!r}; known: {', '.join(names())}")


def certificate_names() -> list[str]:
    """Names of the shipped certificates."""
    return sorted(p.stem for p in (data_dir() / "certificates").glob("*.json"))


def certificate_text(name: str) -> str:
    path = data_dir() / "certificates" / f"{name}.json"
    if not path.is_file():
        raise KeyError(f"no shipped certificate {name!r}; known: {', '.join(certificate_names())}")
    return path.read_text()


def forbidden_facets(text: str, cx: OrientedComplex) -> list[tuple[int, ...]]:
    parsed = parse_facets(text)
    out = []
    for f in parsed.facets:
        idx = tuple(sorted(cx.vertices.encode(parsed.vertices.decode(f))))
        if idx not in cx.facet_set:
            raise ValueError(f"forbidden facet {parsed.vertices.decode(f)} is not a facet")
        out.append(idx)
    return out


def facet_text(facets, header: str | None = None) -> str:
    lines = [f"# {header}"] if header else []
    lines += [" ".join(f) for f in facets]
    return "\n".join(lines) + "\n"


# Δ⁴ₙ ---------------------------------------------------------------------------

def _lab(i: int) -> str:
    return str(i) if i > 0 else BAR + str(-i)


def _canon(f) -> tuple[int, ...]:
    return tuple(sorted(f, key=lambda v: (abs(v), v < 0)))


def novik_zheng_d4(n: int) -> tuple[list[tuple[str, ...]], list[tuple[str, ...]]]:
    """Facets of Δ⁴ₙ and of the ball ±B⁴¹ₙ as label tuples (``~k`` is -k).

    Δ⁴ₙ consists of the three item families below and their antipodes;
    B⁴¹ₙ is the first family.
    """
    if n < 6:
        raise ValueError("n must be at least 6")
    item1 = []
    for i in range(1, n - 3):
        item1.append({i, i + 1, n - 2, n - 1, n})
        item1.append({-i, -i - 1, n - 2, n - 1, n})
    item1 += [
        {1, -n + 3, n - 2, n - 1, n},
        {1, -n + 3, -n + 2, n - 1, n},
        {1, -n + 3, -n + 2, -n + 1, n},
        {1, -n + 3, -n + 2, -n + 1, -n},
    ]
    item2 = []
    for ell in range(6, n + 1):
        for i in range(1, ell - 4):
            item2 += [
                {i, i + 1, ell - 3, ell - 2, ell},
                {i, i + 1, ell - 3, ell - 1, ell},
                {-i, -i - 1, ell - 3, ell - 2, ell},
                {-i, -i - 1, ell - 3, ell - 1, ell},
            ]
        item2 += [
            {1, -ell + 4, ell - 3, ell - 2, ell},
            {1, -ell + 4, ell - 3, ell - 1, ell},
            {1, -ell + 4, -ell + 3, ell - 2, ell},
            {1, -ell + 4, -ell + 2, ell - 1, ell},
            {1, -ell + 4, -ell + 2, -ell + 1, ell},
            {1, -ell + 4, -ell + 3, -ell + 1, ell},
            {-ell + 4, -ell + 3, -ell + 2, ell - 1, ell},
            {-ell + 4, -ell + 3, -ell + 2, -ell + 1, ell},
        ]
    item3 = [{-1, 2, -3, 4, -5}, {1, 2, -3, 4, -5}, {1, 2, 3, 4, -5}, {1, 2, 3, -4, -5},
             {1, -2, -3, 4, -5}, {1, -2, 3, 4, -5}, {1, -2, 3, -4, -5}, {-1, -2, -3, 4, -5},
             {-1, -2, 3, 4, -5}, {-1, -2, 3, -4, -5}]
    half = {_canon(f) for f in item1 + item2 + item3}
    full = half | {_canon({-v for v in f}) for f in half}
    ball = {_canon(f) for f in item1} | {_canon({-v for v in f}) for f in item1}
    order = lambda f: [(abs(v), v < 0) for v in f]  # noqa: E731
    to_labels = lambda fs: [tuple(_lab(v) for v in f) for f in sorted(fs, key=order)]  # noqa: E731
    return to_labels(full), to_labels(ball)


# controls ----------------------------------------------------------------------

@dataclass
class Control:
    name: str
    dataset: Dataset
    coordinates: dict  # label -> tuple of Fractions (affine)

    def complex(self) -> OrientedComplex:
        return self.dataset.complex()


def _det(rows):
    from .poly import det_exact
    return det_exact(rows)


def hull_facets(coords: dict) -> list[tuple[str, ...]]:
    """Facets of a simplicial polytope in general position by brute force."""
    labels = list(coords)
    d = len(next(iter(coords.values())))
    out = []
    for F in combinations(labels, d):
        sides = set()
        for o in labels:
            if o in F:
                continue
            v = _det([[1, *coords[x]] for x in F] + [[1, *coords[o]]])
            sides.add((v > 0) - (v < 0))
            if len(sides) > 1:
                break
        if len(sides) == 1 and 0 not in sides:
            out.append(F)
    return out


def gale_evenness(n: int, d: int) -> list[tuple[int, ...]]:
    """Facets of the cyclic polytope C(d, n) on vertices 0..n-1."""
    out = []
    for F in combinations(range(n), d):
        fs = set(F)
        ok = True
        for i in range(n):
            for j in range(i + 1, n):
                if i in fs or j in fs:
                    continue
                between = sum(1 for k in range(i + 1, j) if k in fs)
                if between % 2:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(F)
    return out


def controls() -> list[Control]:
    e = [tuple(Fraction(int(i == j)) for j in range(4)) for i in range(4)]
    neg = lambda v: tuple(-x for x in v)  # noqa: E731
    p_coords = {}
    for i in range(4):
        p_coords[str(i + 1)] = e[i]
        p_coords[BAR + str(i + 1)] = neg(e[i])
    p_coords["5"] = (Fraction(1),) * 4
    p_coords[BAR + "5"] = (Fraction(-1),) * 4
    ctrl_p = Control("control-P", dataset("control-P"), p_coords)

    x_coords = {}
    for i in range(4):
        x_coords[str(i + 1)] = e[i]
        x_coords[BAR + str(i + 1)] = neg(e[i])
    x_facets = [tuple(str(i + 1) if s > 0 else BAR + str(i + 1) for i, s in enumerate(sg))
                for sg in product((1, -1), repeat=4)]
    cross = Control("cross-polytope-4",
                    Dataset("cross-polytope-4", facet_text(x_facets), "boundary of the 4-dimensional cross-polytope",
                            {"f_vector": (8, 24, 32, 16), "closed": True, "realizable": True}),
                    x_coords)

    c_coords = {str(t): tuple(Fraction(t ** k) for k in range(1, 5)) for t in range(8)}
    c_facets = [tuple(str(v) for v in F) for F in gale_evenness(8, 4)]
    cyc = Control("cyclic-4-8",
                  Dataset("cyclic-4-8", facet_text(c_facets), "boundary of the cyclic polytope C(4,8)",
                          {"closed": True, "realizable": True}),
                  c_coords)
    return [ctrl_p, cross, cyc]


def write_dataset(name: str, directory: Path) -> Path:
    ds = dataset(name)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{name}.facets"
    path.write_text(ds.text)
    return path


__all__ = ["CATALOG", "Control", "Dataset", "certificate_names", "certificate_text", "controls", "data_dir", "dataset", "facet_text",
           "forbidden_facets", "gale_evenness", "hull_facets", "names", "novik_zheng_d4", "write_dataset",
           "format_facets", "VertexTable"]
