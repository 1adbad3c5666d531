
import pytest

from pluckertree.complex import BAR, check_cycle, load_complex, orient, parse_facets
from pluckertree.generators import (CATALOG, controls, data_dir, dataset, facet_text, gale_evenness,
                                    hull_facets, names, novik_zheng_d4, write_dataset)

from conftest import load


def neg(label):
    return label[1:] if label.startswith(BAR) else BAR + label


def test_catalog_files_exist_and_load():
    for name, entry in CATALOG.items():
        assert (data_dir() / entry.filename).is_file()
        parse_facets(dataset(name).text)


def test_every_listed_name_resolves():
    for name in names():
        assert dataset(name).name == name


def test_unknown_name():
    with pytest.raises(KeyError):
        dataset("no-such-thing")


@pytest.mark.parametrize("name", [n for n in CATALOG if not CATALOG[n].expected.get("ball")])
def test_expected_properties(name):
    ds = dataset(name)
    cx = ds.complex()
    exp = ds.expected
    if "f_vector" in exp:
        assert cx.f_vector() == exp["f_vector"]
    assert cx.is_closed == exp["closed"]
    assert check_cycle(cx, cx.omega)


def test_sha_pins_content():
    a = dataset("zheng-Z")
    assert a.sha256 == dataset("zheng-Z").sha256 and len(a.sha256) == 64


def test_data_dir_override(tmp_path, monkeypatch):
    write_dataset("intro-example", tmp_path)
    monkeypatch.setenv("PLUCKERTREE_DATA", str(tmp_path))
    assert data_dir() == tmp_path
    assert dataset("intro-example").complex().f_vector() == (8, 27, 38, 19)


@pytest.mark.parametrize("n, facets", [(6, 60), (7, 96), (8, 140)])
def test_delta4_facet_counts(n, facets):
    full, ball = novik_zheng_d4(n)
    assert len(full) == facets
    assert len(ball) == 4 * (n - 4) + 8


@pytest.mark.parametrize("n", [6, 7, 8])
def test_delta4_is_a_cs_neighborly_sphere(n):
    full, ball = novik_zheng_d4(n)
    cx = load_complex(facet_text(full))
    assert cx.is_closed and check_cycle(cx, orient(cx).omega)
    f = cx.f_vector()
    assert sum((-1) ** i * x for i, x in enumerate(f)) == 2
    # every pair of non-antipodal vertices spans an edge
    assert f[1] == (2 * n) * (2 * n - 1) // 2 - n
    as_sets = {frozenset(F) for F in full}
    assert {frozenset(neg(v) for v in F) for F in full} == as_sets
    assert {frozenset(F) for F in ball} <= as_sets
    assert {frozenset(neg(v) for v in F) for F in ball} == {frozenset(F) for F in ball}


@pytest.mark.parametrize("n", [6, 7])
def test_delta4_vertex_links_are_closed_orientable_3_manifolds(n):
    cx = dataset(f"novik-zheng-d4-{n}").complex()
    for v in range(cx.n):
        lk = cx.link([v])
        assert lk.is_closed and lk.d == 4
        f = lk.f_vector()
        assert f[0] - f[1] + f[2] - f[3] == 0
        assert check_cycle(lk, orient(lk).omega)


def test_ball_for_seven_equals_the_listed_facets():
    _, ball = novik_zheng_d4(7)
    listed = parse_facets(dataset("forbidden-B41-7").text)
    got = {frozenset(F) for F in ball}
    want = {frozenset(listed.vertices.decode(f)) for f in listed.facets}
    assert got == want and len(got) == 20


def test_small_n_rejected():
    with pytest.raises(ValueError):
        novik_zheng_d4(5)


def test_forbidden_ball_for_jockusch_is_inside_the_sphere():
    cx = load("jockusch-d3-6")
    forb = dataset("jockusch-d3-6").forbidden_for(cx)
    assert len(forb) == 18 and all(f in cx.facet_set for f in forb)


@pytest.mark.parametrize("ctrl", controls(), ids=lambda c: c.name)
def test_controls_are_realized_by_their_coordinates(ctrl):
    cx = ctrl.complex()
    hull = {frozenset(F) for F in hull_facets(ctrl.coordinates)}
    assert hull == {frozenset(cx.vertices.decode(f)) for f in cx.facets}
    assert cx.is_closed


def test_control_sizes():
    sizes = {c.name: len(c.complex().facets) for c in controls()}
    assert sizes == {"control-P": 30, "cross-polytope-4": 16, "cyclic-4-8": 20}


@pytest.mark.parametrize("n, d", [(6, 2), (7, 4), (8, 4), (7, 3)])
def test_gale_evenness_is_the_moment_curve_hull(n, d):
    from fractions import Fraction
    coords = {str(t): tuple(Fraction(t ** k) for k in range(1, d + 1)) for t in range(n)}
    hull = {tuple(int(x) for x in F) for F in hull_facets(coords)}
    assert hull == set(gale_evenness(n, d))


def test_gale_evenness_count_matches_formula():
    # C(4, n) has n(n-3)/2 facets
    for n in range(5, 10):
        assert len(gale_evenness(n, 4)) == n * (n - 3) // 2


def test_write_dataset_round_trip(tmp_path):
    path = write_dataset("novik-zheng-d4-6", tmp_path)
    assert load_complex(path.read_text()).f_vector()[-1] == 60
