import numpy as np
import pytest

from pluckertree import _kernels_py, kernels
from pluckertree.generators import dataset
from pluckertree.gpgraph import solid_arrays
from pluckertree.solids import SolidTable

from conftest import DATASETS, load

compiled = pytest.importorskip("pluckertree._kernels")


def test_backend_selected():
    assert kernels.BACKEND == "cython"
    assert kernels.COLS == _kernels_py.COLS


@pytest.mark.parametrize("name", DATASETS)
def test_compiled_and_python_kernels_agree(name):
    cx = load(name)
    table = SolidTable(cx)
    verts = list(range(table.n))
    eps, known = solid_arrays(table, verts)
    a = _kernels_py.admissible_relations(table.n, table.d, eps, known, verts)
    b = compiled.admissible_relations(table.n, table.d, eps, known, verts)
    assert a.dtype == b.dtype == np.int64
    assert np.array_equal(a, b)


def test_kernels_agree_with_forbidden_facets_and_subsets():
    cx = load("jockusch-d3-6")
    table = SolidTable(cx, dataset("jockusch-d3-6").forbidden_for(cx))
    verts = [0, 1, 2, 4, 5, 7, 8, 9, 11]
    eps, known = solid_arrays(table, verts)
    a = _kernels_py.admissible_relations(table.n, table.d, eps, known, verts)
    b = compiled.admissible_relations(table.n, table.d, eps, known, verts)
    assert len(a) > 0 and np.array_equal(a, b)


def test_pure_fallback_is_selected_by_environment(monkeypatch):
    import importlib
    monkeypatch.setenv("PLUCKERTREE_PURE", "1")
    mod = importlib.reload(kernels)
    try:
        assert mod.BACKEND == "python"
        assert mod.admissible_relations is _kernels_py.admissible_relations
    finally:
        monkeypatch.delenv("PLUCKERTREE_PURE")
        importlib.reload(kernels)
