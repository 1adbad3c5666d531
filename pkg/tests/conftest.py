import json
from functools import lru_cache
from pathlib import Path

import pytest

from pluckertree.certificate import _poly_from_json, build_tree, loads
from pluckertree.generators import certificate_text, dataset, forbidden_facets
from pluckertree.solids import SolidTable

DATA = Path(__file__).parent / "data"

DATASETS = ["intro-example", "jockusch-d3-5", "jockusch-d3-6", "zheng-Z", "prismatoid-1039",
            "prismatoid-1963", "prismatoid-2669", "prismatoid-3513", "control-P",
            "cross-polytope-4", "cyclic-4-8"]
PRISMATOIDS = ["prismatoid-1039", "prismatoid-1963", "prismatoid-2669", "prismatoid-3513"]
SHIPPED = ["intro-example", "jockusch-d3-6", "zheng-Z"] + PRISMATOIDS


@lru_cache(maxsize=None)
def load(name):
    return dataset(name).complex()


@lru_cache(maxsize=None)
def reference_trees():
    return json.loads((DATA / "reference_trees.json").read_text())


@lru_cache(maxsize=None)
def reference_finals():
    return json.loads((DATA / "reference_finals.json").read_text())


def tree_context(name):
    """(complex, forbidden, table) for a reference tree."""
    entry = reference_trees()[name]
    cx = load(entry.get("dataset", name))
    forb = forbidden_facets(dataset(entry["forbidden"]).text, cx) if entry.get("forbidden") else []
    return cx, forb, SolidTable(cx, forb)


def reference_tree(name):
    entry = reference_trees()[name]
    cx, forb, table = tree_context(name)
    vt = cx.vertices
    nodes = [(vt.encode(S.split()), vt.encode(q.split()), s) for S, q, s in entry["nodes"]]
    edges = None if entry["edges"] is None else [tuple(e) for e in entry["edges"]]
    return build_tree(table, nodes, edges)


def reference_final(name, table):
    items = [{"coeff": 1, "monomial": [s.split() for s in m]} for m in reference_finals()[name]]
    return _poly_from_json(items, table)


def shipped(name):
    entry = reference_trees()[name]
    cx, forb, _ = tree_context(name)
    return cx, forb, loads(certificate_text(name), cx, forb or None)


@pytest.fixture(scope="session")
def complexes():
    return load


# acceptance reporting ------------------------------------------------------------

ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        ACCEPTANCE[n] = (title, rep.outcome, rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, outcome, dur = ACCEPTANCE[n]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {verdict}  {title}  ({dur:.1f} s)")
