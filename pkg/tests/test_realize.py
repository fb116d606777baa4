
import pytest
from hypothesis import given, strategies as st

from perfcone import data
from perfcone.cone import certified_faces
from perfcone.forms import SymForm, VectorConfig
from perfcone.minvec import NotPositiveDefinite, shortest_vectors
from perfcone.realize import (
    IterationCapExceeded,
    is_perfect_cone_config,
    is_perfect_form,
    perfect_domain,
    verify_witness,
)


def cfg(*vectors):
    return VectorConfig.from_vectors(vectors)


def test_unit_vectors_realizable():
    v = is_perfect_cone_config(cfg((1, 0), (0, 1)))
    assert v.realizable
    assert shortest_vectors(v.witness).pairs.pair_set() == {(1, 0), (0, 1)}


def test_toy_not_realizable():
    v = is_perfect_cone_config(cfg((1, 1), (1, -1)))
    assert not v.realizable and v.obstruction


def test_raw_input_forms():
    assert is_perfect_cone_config([(1, 0), (0, 1)]).realizable
    assert not is_perfect_cone_config([(1, 1), (-1, 1)]).realizable


@pytest.mark.parametrize("vectors, reason", [
    ([(1, 2), (-1, -2)], "proportional"),
    ([(1, 0), (-1, 0)], "proportional"),
    ([(2, 0), (0, 1)], "primitive"),
    ([(0, 0), (0, 1)], "zero"),
])
def test_malformed_input_rejected_before_iteration(vectors, reason):
    v = is_perfect_cone_config(vectors)
    assert not v.realizable and reason in v.obstruction and v.iterations == 0


@pytest.mark.parametrize("name", ["A2", "A3", "A4", "D4", "E7*"])
def test_round_trip_builtin(name):
    pairs = shortest_vectors(SymForm.of(data.GRAMS[name])).pairs
    v = is_perfect_cone_config(pairs)
    assert v.realizable
    assert shortest_vectors(v.witness).pairs.pair_set() == pairs.pair_set()


def test_d4_witness_equivalent_to_d4(d4_config):
    from perfcone.equiv import are_equivalent

    v = is_perfect_cone_config(d4_config)
    assert verify_witness(d4_config, v.witness)
    assert are_equivalent(shortest_vectors(v.witness).pairs, d4_config) is not None


@pytest.mark.parametrize("vectors, ok", [
    ([(1, 0), (0, 1), (1, 1)], True),
    ([(1, 0), (0, 1), (2, 1)], False),
    ([(1, 0, 0), (0, 1, 0), (0, 0, 1)], True),
    ([(0, 0, 1), (1, 0, 0), (1, 2, 0)], False),
    ([(0, 1, 0), (1, 0, 0), (1, 1, 2)], False),
    ([(1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1), (1, 1, 1), (0, 1, 1)], True),
])
def test_small_verdicts(vectors, ok):
    assert is_perfect_cone_config(vectors).realizable is ok


@pytest.mark.parametrize("vectors, ok", [
    ([(1, 0, 0)], True),
    ([(1, 0, 0), (0, 1, 0)], True),
    ([(1, 1, 0), (1, -1, 0)], False),
    ([(1, 0, 0, 0), (0, 1, 0, 0), (1, 1, 0, 0)], True),
])
def test_non_spanning(vectors, ok):
    c = cfg(*vectors)
    v = is_perfect_cone_config(c)
    assert v.realizable is ok
    if ok:
        assert shortest_vectors(v.witness).pairs.pair_set() == c.pair_set()


def test_faces_of_d4_are_realizable(d4_cone):
    faces = certified_faces(d4_cone)
    for cert in faces[::97]:
        sub = d4_cone.generators.subset(sorted(cert.face))
        assert is_perfect_cone_config(sub).realizable


def test_iteration_cap_is_an_error():
    with pytest.raises(IterationCapExceeded):
        is_perfect_cone_config(shortest_vectors(SymForm.of(data.D4)).pairs, max_cuts=3)


def test_is_perfect_form_examples():
    assert is_perfect_form(SymForm.of(data.A2))
    assert not is_perfect_form(SymForm.of([[1, 0], [0, 1]]))
    assert is_perfect_form(SymForm.of(data.D4))
    with pytest.raises(NotPositiveDefinite):
        is_perfect_form(SymForm.of([[1, 2], [2, 1]]))


def test_perfect_domain_examples():
    assert len(perfect_domain(SymForm.of(data.A2))) == 3
    assert len(perfect_domain(SymForm.of(data.A3))) == 6
    assert len(perfect_domain(SymForm.of(data.D4))) == 12
    with pytest.raises(ValueError):
        perfect_domain(SymForm.of([[1, 0], [0, 1]]))


forms2 = st.tuples(st.integers(1, 8), st.integers(-8, 8), st.integers(1, 8)).filter(
    lambda t: t[0] * t[2] > t[1] * t[1]
)


@given(forms2)
def test_minimal_vectors_of_any_form_are_realizable(t):
    a, b, c = t
    q = SymForm.of([[a, b], [b, c]])
    pairs = shortest_vectors(q).pairs
    v = is_perfect_cone_config(pairs)
    assert v.realizable
    assert shortest_vectors(v.witness).pairs.pair_set() == pairs.pair_set()


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)).filter(any), min_size=1, max_size=4))
def test_verdicts_are_certified(vectors):
    c = VectorConfig.from_vectors(vectors)
    v = is_perfect_cone_config(c)
    if v.realizable:
        assert verify_witness(c, v.witness)
    else:
        # no small binary form may have exactly this minimal set
        for a in range(1, 7):
            for b in range(-a, a + 1):
                for cc in range(a, 10):
                    if a * cc > b * b:
                        m = shortest_vectors(SymForm.of([[a, b], [b, cc]])).pairs.pair_set()
                        assert m != c.pair_set()
