from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from perfcone.equiv import are_equivalent
from perfcone.exactlinalg import det, rank_rational, smith_normal_form
from perfcone.forms import (
    ParseError,
    SymForm,
    VectorConfig,
    evaluate,
    from_sym2_coords,
    parse_config,
    rank1_coords,
    rank1_form,
    reduce_primitive,
    saturate,
    sym2_coords,
    value_row,
)

vec = st.integers(1, 4).flatmap(lambda g: st.lists(st.integers(-5, 5), min_size=g, max_size=g))


def test_rank1_form_examples():
    assert rank1_form((1, 0)).entries == ((1, 0), (0, 0))
    assert rank1_form((1, 2)).entries == ((1, 2), (2, 4))
    assert rank1_form((1, 1, -1)).entries == ((1, 1, -1), (1, 1, -1), (-1, -1, 1))
    with pytest.raises(ValueError):
        rank1_form((0, 0))


@given(vec, st.data())
def test_rank1_form_evaluates_to_squared_product(v, data):
    assume(any(v))
    x = data.draw(st.lists(st.integers(-5, 5), min_size=len(v), max_size=len(v)))
    p = rank1_form(v)
    assert evaluate(p, x) == sum(a * b for a, b in zip(v, x)) ** 2
    assert rank_rational(p.entries) == 1
    assert sym2_coords(p) == rank1_coords(v)


def test_reduce_primitive_examples():
    assert reduce_primitive((2, 4)) == (1, 2)
    assert reduce_primitive((-3, 0, 3)) == (1, 0, -1)
    assert reduce_primitive((1, 1)) == (1, 1)
    with pytest.raises(ValueError):
        reduce_primitive((0, 0, 0))


@given(vec)
def test_reduce_primitive_idempotent(v):
    assume(any(v))
    r = reduce_primitive(v)
    assert reduce_primitive(r) == r


def test_sym2_coords_examples():
    assert sym2_coords(rank1_form((1, 1))) == (1, 1, 1)
    assert sym2_coords(SymForm.of([[1, 0], [0, 1]])) == (1, 1, 0)
    assert sym2_coords(rank1_form((1, -1))) == (1, 1, -1)
    # order: diagonal first, then the upper triangle row by row
    assert sym2_coords(SymForm.of([[1, 4, 5], [4, 2, 6], [5, 6, 3]])) == (1, 2, 3, 4, 5, 6)


@given(st.integers(1, 4).flatmap(lambda g: st.lists(st.integers(-9, 9), min_size=g * (g + 1) // 2,
                                                      max_size=g * (g + 1) // 2).map(lambda c: (g, c))))
def test_sym2_round_trip(gc):
    g, c = gc
    assert sym2_coords(from_sym2_coords(c, g)) == tuple(c)


@given(vec, st.data())
def test_value_row_evaluates(x, data):
    g = len(x)
    c = data.draw(st.lists(st.integers(-9, 9), min_size=g * (g + 1) // 2, max_size=g * (g + 1) // 2))
    q = from_sym2_coords(c, g)
    assert sum(a * b for a, b in zip(value_row(x), c)) == evaluate(q, x)


def test_evaluate_examples():
    assert evaluate(SymForm.of([[1, 0], [0, 1]]), (1, 1)) == 2
    assert evaluate(rank1_form((1, 2)), (2, -1)) == 0
    assert evaluate(SymForm.of([[2, 1], [1, 2]]), (1, -1)) == 2
    with pytest.raises(ValueError):
        evaluate(SymForm.of([[1]]), (1, 2))


def test_symform_rejects_asymmetric():
    with pytest.raises(ValueError, match="not symmetric"):
        SymForm.of([[1, 2], [3, 4]])


def test_symform_rational_entries():
    q = SymForm.of([[2, Fraction(1, 2)], [Fraction(1, 2), 2]])
    assert not q.is_integral
    assert evaluate(q, (1, 1)) == 5


def test_transformed_is_congruence():
    q = SymForm.of([[2, 1], [1, 2]])
    u = ((1, 1), (0, 1))
    t = q.transformed(u)
    for x in [(1, 0), (0, 1), (1, -1), (2, 3)]:
        ux = tuple(sum(u[i][j] * x[j] for j in range(2)) for i in range(2))
        assert evaluate(t, x) == evaluate(q, ux)


# ---------------------------------------------------------------- configs


def test_config_invariants():
    with pytest.raises(ValueError):
        VectorConfig(2, ((2, 0),))
    with pytest.raises(ValueError):
        VectorConfig(2, ((-1, 0),))
    with pytest.raises(ValueError):
        VectorConfig(2, ((1, 0), (1, 0)))
    c = VectorConfig.from_vectors([(-2, 0), (0, 3), (1, 0)])
    assert c.pairs == ((1, 0), (0, 1))


def test_characteristic_form():
    c = VectorConfig.from_vectors([(1, 0), (0, 1), (1, 1)])
    assert c.characteristic_form().entries == ((2, 1), (1, 2))


def test_parse_config_round_trip():
    text = "# the A2 configuration\n2 3\n1 0\n0 1\n# shear\n1 -1\n"
    c = parse_config(text)
    assert c.pairs == ((1, 0), (0, 1), (1, -1))
    assert parse_config(c.serialize()) == c


@pytest.mark.parametrize("text, line", [
    ("2 2\n1 0\n", 1),
    ("2 1\n1 0 0\n", 2),
    ("2 2\n1 0\n-1 0\n", 3),
    ("2 1\n0 0\n", 2),
    ("2 1\n1 x\n", 2),
    ("two 1\n1 0\n", 1),
])
def test_parse_config_errors_carry_line(text, line):
    with pytest.raises(ParseError) as err:
        parse_config(text)
    assert err.value.line == line


def test_parse_config_empty():
    with pytest.raises(ParseError):
        parse_config("# nothing\n")


# ---------------------------------------------------------------- saturation


def test_saturate_coordinate_vectors_in_z4():
    c = VectorConfig.from_vectors([(1, 0, 0, 0), (0, 1, 0, 0)])
    sat, info = saturate(c)
    assert sat.g == 2 and len(sat) == 2
    assert are_equivalent(sat, VectorConfig.from_vectors([(1, 0), (0, 1)])) is not None
    assert abs(det(info.transform)) == 1


def test_saturate_reduces_then_drops_dimension():
    c = VectorConfig.from_vectors([(2, 0, 0), (0, 1, 0)])
    sat, _ = saturate(c)
    assert are_equivalent(sat, VectorConfig.from_vectors([(1, 0), (0, 1)])) is not None


def test_saturate_index_two():
    c = VectorConfig.from_vectors([(1, 1, 0), (1, -1, 0)])
    sat, info = saturate(c)
    assert sat.g == 2
    assert abs(det(sat.pairs)) == 2
    for v, w in zip(c.pairs, sat.pairs):
        lifted = info.lift(w)
        assert lifted == v or lifted == tuple(-x for x in v)


configs = st.integers(2, 4).flatmap(
    lambda g: st.lists(st.lists(st.integers(-3, 3), min_size=g, max_size=g), min_size=1, max_size=4)
)


@given(configs)
def test_saturate_preserves_snf_divisors(vectors):
    vectors = [v for v in vectors if any(v)]
    assume(vectors)
    c = VectorConfig.from_vectors(vectors)
    sat, info = saturate(c)
    assert sat.g == c.rank()
    assert smith_normal_form(c.coordinate_rows()).divisors == smith_normal_form(sat.coordinate_rows()).divisors
    for v, w in zip(c.pairs, sat.pairs):
        lifted = info.lift(w)
        assert lifted in (v, tuple(-x for x in v))
