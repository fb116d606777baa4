from fractions import Fraction
from itertools import product

import pytest
from hypothesis import assume, given, strategies as st

from perfcone import data
from perfcone.forms import SymForm, evaluate, reduce_primitive
from perfcone.minvec import (
    NotPositiveDefinite,
    is_positive_definite,
    nonpositive_direction,
    shortest_vectors,
    vectors_below,
)

I2 = SymForm.of([[1, 0], [0, 1]])
A2 = SymForm.of([[2, 1], [1, 2]])


def brute(q, box, bound=None):
    """Minimum and minimal pairs (or pairs below ``bound``) over a coordinate box."""
    vals = {}
    for x in product(range(-box, box + 1), repeat=q.g):
        if any(x):
            v = reduce_primitive(x)
            vals[v] = min(vals.get(v, evaluate(q, x)), evaluate(q, x))
    if bound is not None:
        return {v for v, val in vals.items() if val <= bound}
    m = min(vals.values())
    return m, {v for v, val in vals.items() if val == m}


def test_is_positive_definite_examples():
    assert is_positive_definite(SymForm.of([[1, 0, 0], [0, 1, 0], [0, 0, 1]]))
    assert is_positive_definite(A2)
    assert not is_positive_definite(SymForm.of([[1, 2], [2, 1]]))
    assert not is_positive_definite(SymForm.of([[1, 1], [1, 1]]))


def test_shortest_vectors_identity():
    r = shortest_vectors(SymForm.of([[1, 0, 0], [0, 1, 0], [0, 0, 1]]))
    assert r.minimum == 1
    assert r.pairs.pair_set() == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}


def test_shortest_vectors_a2():
    r = shortest_vectors(A2)
    assert r.minimum == 2
    assert r.pairs.pair_set() == {(1, 0), (0, 1), (1, -1)}


def test_shortest_vectors_d4_against_box():
    q = SymForm.of(data.D4)
    r = shortest_vectors(q)
    m, pairs = brute(q, 3)
    assert r.minimum == m == 2
    assert len(r.pairs) == 12
    assert r.pairs.pair_set() == pairs


@pytest.mark.parametrize("name, minimum, count", [
    ("A2", 2, 3), ("A3", 2, 6), ("A4", 2, 10), ("D4", 2, 12), ("E7*", 3, 28),
])
def test_builtin_minima(name, minimum, count):
    r = shortest_vectors(SymForm.of(data.GRAMS[name]))
    assert (r.minimum, len(r.pairs)) == (minimum, count)


def test_rejects_non_pd():
    with pytest.raises(NotPositiveDefinite):
        shortest_vectors(SymForm.of([[1, 2], [2, 1]]))
    with pytest.raises(NotPositiveDefinite):
        vectors_below(SymForm.of([[0, 0], [0, 1]]), 1)


def test_vectors_below_examples():
    assert vectors_below(I2, 2).pair_set() == {(1, 0), (0, 1), (1, 1), (1, -1)}
    assert len(vectors_below(I2, Fraction(1, 2))) == 0
    assert vectors_below(A2, 2).pair_set() == {(1, 0), (0, 1), (1, -1)}


def test_rational_form():
    q = SymForm.of([[1, Fraction(1, 3)], [Fraction(1, 3), 1]])
    r = shortest_vectors(q)
    assert r.minimum == 1 and r.pairs.pair_set() == {(1, 0), (0, 1)}


def test_nonpositive_direction():
    q = SymForm.of([[1, 2], [2, 1]])
    w = nonpositive_direction(q)
    assert w is not None and evaluate(q, w) <= 0
    assert nonpositive_direction(A2) is None


def _build(g, entries):
    m = [[0] * g for _ in range(g)]
    k = 0
    for i in range(g):
        for j in range(i, g):
            m[i][j] = m[j][i] = entries[k]
            k += 1
    return SymForm.of(m)


def _pd_forms(g=None):
    """Random symmetric forms with entries in [-10, 10], kept when PD, plus L L^T forms."""
    dims = st.just(g) if g else st.integers(1, 4)
    raw = dims.flatmap(
        lambda n: st.lists(st.integers(-10, 10), min_size=n * (n + 1) // 2, max_size=n * (n + 1) // 2)
        .map(lambda e, n=n: _build(n, e))
    )

    def gram(args):
        n, low = args
        lmat = [[low[i * n + j] if j < i else (abs(low[i * n + j]) % 3 + 1 if i == j else 0)
                 for j in range(n)] for i in range(n)]
        return SymForm.of([[sum(lmat[i][k] * lmat[j][k] for k in range(n)) for j in range(n)] for i in range(n)])

    lower = dims.flatmap(lambda n: st.tuples(st.just(n), st.lists(st.integers(-2, 2), min_size=n * n, max_size=n * n)))
    return st.one_of(raw.filter(is_positive_definite), lower.map(gram))


def _box_radius(q):
    # |x_i|^2 <= m (Q^-1)_ii for any x with Q[x] <= m
    from math import isqrt

    from perfcone.exactlinalg import inverse_rational

    m = min(q.entries[i][i] for i in range(q.g))
    inv = inverse_rational(q.entries)
    return max(isqrt(int(m * inv[i][i])) for i in range(q.g))


@given(_pd_forms())
def test_shortest_vectors_match_box_search(q):
    r = shortest_vectors(q)
    m, pairs = brute(q, max(1, _box_radius(q)))
    assert r.minimum == m
    assert r.pairs.pair_set() == pairs


@given(_pd_forms())
def test_shortest_vectors_box_six(q):
    assume(q.g <= 3)
    r = shortest_vectors(q)
    m, pairs = brute(q, 6)
    assert r.minimum == m and r.pairs.pair_set() == pairs


@given(_pd_forms(), st.integers(1, 4))
def test_vectors_below_match_box_search(q, k):
    from math import isqrt

    from perfcone.exactlinalg import inverse_rational

    bound = Fraction(k, 2) * min(q.entries[i][i] for i in range(q.g))
    inv = inverse_rational(q.entries)
    box = max(isqrt(int(bound * inv[i][i])) for i in range(q.g))
    assume(box <= 6)
    assert vectors_below(q, bound).pair_set() == brute(q, max(box, 1), bound)


unimodular = st.sampled_from([
    ((1, 1), (0, 1)), ((0, 1), (1, 0)), ((2, 1), (1, 1)), ((1, 0), (-3, 1)), ((-1, 0), (0, 1)),
])


@given(_pd_forms(2), unimodular)
def test_shortest_vectors_equivariant(q, u):
    from perfcone.exactlinalg import inverse_rational

    t = q.transformed(u)  # u^T Q u
    inv = [[int(x) for x in row] for row in inverse_rational(u)]
    image = {reduce_primitive(tuple(sum(inv[i][j] * v[j] for j in range(2)) for i in range(2)))
             for v in shortest_vectors(q).pairs}
    r = shortest_vectors(t)
    assert r.minimum == shortest_vectors(q).minimum
    assert r.pairs.pair_set() == image


@given(_pd_forms(), st.fractions(min_value=Fraction(1, 7), max_value=7))
def test_shortest_vectors_scaling(q, lam):
    r = shortest_vectors(q)
    s = shortest_vectors(q.scaled(lam))
    assert s.minimum == lam * r.minimum
    assert s.pairs.pair_set() == r.pairs.pair_set()
