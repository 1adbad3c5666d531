import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pluckertree.complex import signature
from pluckertree.poly import CertPolynomial, PointConfiguration, coefficient_of, det_exact, evaluate

monos = st.lists(st.integers(0, 5), max_size=3).map(lambda m: tuple(sorted(m)))
polys = st.dictionaries(monos, st.integers(-5, 5), max_size=5).map(CertPolynomial)


def leibniz(m):
    n = len(m)
    total = Fraction(0)
    for p in itertools.permutations(range(n)):
        term = Fraction(signature(p))
        for i in range(n):
            term *= m[i][p[i]]
        total += term
    return total


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == CertPolynomial()
    assert a * CertPolynomial.monomial(()) == a


@given(polys)
def test_zero_coefficients_are_dropped(a):
    assert all(c != 0 for _, c in a)
    assert not (a + (-a))


@given(polys, st.integers(0, 5))
def test_coefficient_of_splits(p, key):
    if any(m.count(key) > 1 for m, _ in p):
        with pytest.raises(ValueError):
            coefficient_of(p, key)
        return
    q, rest = coefficient_of(p, key)
    assert q * CertPolynomial.monomial((key,)) + rest == p
    assert key not in rest.variables()


@settings(max_examples=60)
@given(st.integers(1, 5), st.randoms(use_true_random=False))
def test_det_matches_leibniz(n, rnd):
    m = [[Fraction(rnd.randint(-6, 6), rnd.randint(1, 4)) for _ in range(n)] for _ in range(n)]
    assert det_exact(m) == leibniz(m)


def test_det_singular_and_ragged():
    assert det_exact([[1, 2], [2, 4]]) == 0
    with pytest.raises(ValueError):
        det_exact([[1, 2], [3]])


class _Table:
    """Minimal stand-in: variable k is the solid with the given vertices."""

    def __init__(self, solids):
        self.solids = solids

    def solid(self, k):
        class S:
            verts = self.solids[k]
        return S


def test_evaluate_three_term_identity():
    # [a b][c d] - [a c][b d] + [a d][b c] = 0 in rank 2
    table = _Table({0: (0, 1), 1: (2, 3), 2: (0, 2), 3: (1, 3), 4: (0, 3), 5: (1, 2)})
    p = CertPolynomial({(0, 1): 1, (2, 3): -1, (4, 5): 1})
    rng = random.Random(3)
    for _ in range(5):
        X = PointConfiguration.random(4, 1, rng)
        assert evaluate(p, X, table) == 0
    q = CertPolynomial({(0, 1): 1})
    assert evaluate(q, X, table) == X.det((0, 1)) * X.det((2, 3))


def test_configuration_shape_checks():
    X = PointConfiguration.random(5, 3, random.Random(0))
    assert X.n == 5 and X.rank == 4
    with pytest.raises(ValueError):
        X.det((0, 1, 2))
    with pytest.raises(ValueError):
        PointConfiguration([(1, 2), (1, 2, 3)])
