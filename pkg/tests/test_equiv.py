from itertools import product

import pytest
from hypothesis import assume, given, settings, strategies as st

from perfcone.equiv import (
    are_equivalent,
    automorphism_elements,
    automorphism_group,
    dedup_orbits,
    fingerprint,
    maps_onto,
    orbit_partition,
)
from perfcone.exactlinalg import det, matmul
from perfcone.forms import VectorConfig, saturate

E2 = VectorConfig.from_vectors([(1, 0), (0, 1)])
A2 = VectorConfig.from_vectors([(1, 0), (0, 1), (1, 1)])
A2_SHEAR = A2.image(((1, 1), (0, 1)))


def _inverse(u):
    from perfcone.exactlinalg import inverse_rational

    return tuple(tuple(int(x) for x in row) for row in inverse_rational(u))


def _brute_witnesses(a, b, box=2):
    """Every U with entries in [-box, box] mapping a's pairs onto b's."""
    g = a.g
    out = []
    for flat in product(range(-box, box + 1), repeat=g * g):
        u = tuple(tuple(flat[i * g:(i + 1) * g]) for i in range(g))
        if abs(det(u)) == 1 and maps_onto(u, a, b):
            out.append(u)
    return out


def test_fingerprint_examples():
    f = fingerprint(E2)
    assert (f.pair_count, f.det_char_form) == (2, 1)
    assert f.norms == (1, 1)
    assert fingerprint(A2) == fingerprint(A2_SHEAR)
    assert fingerprint(A2) != fingerprint(E2)
    with pytest.raises(ValueError):
        fingerprint(VectorConfig.from_vectors([(1, 0, 0)]))


def test_equivalent_examples():
    other = VectorConfig.from_vectors([(1, 0), (0, 1), (1, -1)])
    w = are_equivalent(A2, other)
    assert w is not None and maps_onto(w.U, A2, other)
    assert are_equivalent(A2, A2) is not None
    assert are_equivalent(A2, VectorConfig.from_vectors([(1, 0), (0, 1), (2, 1)])) is None
    assert are_equivalent(A2, E2) is None


def test_shear_image_witness():
    w = are_equivalent(A2, A2_SHEAR)
    assert w is not None and maps_onto(w.U, A2, A2_SHEAR)


def test_non_spanning_equivalence():
    a = VectorConfig.from_vectors([(1, 0, 0), (0, 1, 0)])
    b = VectorConfig.from_vectors([(1, 1, 0), (0, 1, 1)])
    c = VectorConfig.from_vectors([(1, 1, 0), (1, -1, 0)])
    w = are_equivalent(a, b)
    assert w is not None and maps_onto(w.U, a, b)
    assert are_equivalent(a, c) is None


def test_automorphism_orders(d4_config):
    assert automorphism_group(E2).order == 8
    assert automorphism_group(A2).order == 12
    assert automorphism_group(d4_config).order == 1152


def test_a2_group_matches_brute_force():
    assert set(automorphism_elements(A2)) == set(_brute_witnesses(A2, A2, box=1))


def test_d4_group_matches_basis_image_search(d4_config):
    # the unit vectors are minimal for this Gram matrix, so an automorphism
    # sends each of them to a signed configuration vector
    assert all(tuple(int(i == j) for j in range(4)) in d4_config.pair_set() for i in range(4))
    signed = [v for p in d4_config.pairs for v in (p, tuple(-x for x in p))]
    count = 0
    for cols in product(signed, repeat=4):
        u = tuple(tuple(cols[j][i] for j in range(4)) for i in range(4))
        if abs(det(u)) == 1 and maps_onto(u, d4_config, d4_config):
            count += 1
    assert count == 1152


def test_generators_generate(a3_config):
    grp = automorphism_group(a3_config)
    elems = set(automorphism_elements(a3_config))
    assert len(elems) == grp.order
    for u in grp.generators:
        assert u in elems


def test_dedup_examples():
    reps = dedup_orbits([A2, A2_SHEAR, E2])
    assert len(reps) == 2
    assert dedup_orbits([]) == []
    singles = [VectorConfig.from_vectors([v]) for v in [(1, 0), (0, 1), (1, 1), (2, 1)]]
    assert len(dedup_orbits([saturate(c)[0] for c in singles])) == 1
    assert len(dedup_orbits(singles)) == 1


def test_orbit_partition_is_independent_of_jobs_and_order(a3_config):
    pool = [a3_config.subset(s) for s in [(0, 1), (1, 2), (0, 5), (2, 3, 4), (0, 1, 2)]]
    one = orbit_partition(pool)
    many = orbit_partition(pool, n_jobs=2)
    assert [(r.key(), m) for r, m in one] == [(r.key(), m) for r, m in many]
    rev = dedup_orbits(list(reversed(pool)))
    assert [r.key() for r in rev] == [r.key() for r, _ in one]


configs2 = st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2)).filter(any), min_size=2, max_size=4)
unimodular2 = st.sampled_from([((1, 1), (0, 1)), ((0, 1), (1, 0)), ((2, 1), (1, 1)), ((1, 0), (-2, 1)),
                               ((-1, 0), (0, 1)), ((1, -1), (1, 0))])


@given(configs2, unimodular2)
def test_images_are_equivalent_with_verified_witness(vectors, u):
    a = VectorConfig.from_vectors(vectors)
    assume(a.rank() == 2)
    b = a.image(u)
    w = are_equivalent(a, b)
    assert w is not None and maps_onto(w.U, a, b)
    back = are_equivalent(b, a)
    assert back is not None and maps_onto(_inverse(w.U), b, a)


@settings(max_examples=40)
@given(configs2, configs2, configs2)
def test_equivalence_relation(x, y, z):
    a, b, c = (VectorConfig.from_vectors(v) for v in (x, y, z))
    assert are_equivalent(a, a) is not None
    ab, bc = are_equivalent(a, b), are_equivalent(b, c)
    if ab is not None:
        assert maps_onto(_inverse(ab.U), b, a)
        assert are_equivalent(b, a) is not None
    if ab is not None and bc is not None:
        comp = tuple(tuple(int(x) for x in row) for row in matmul(bc.U, ab.U))
        assert maps_onto(comp, a, c)
        assert are_equivalent(a, c) is not None


@settings(max_examples=30)
@given(configs2, configs2)
def test_agrees_with_brute_force_search(x, y):
    a, b = VectorConfig.from_vectors(x), VectorConfig.from_vectors(y)
    assume(a.rank() == 2 and b.rank() == 2 and len(a) == len(b))
    brute = _brute_witnesses(a, b, box=2)
    found = are_equivalent(a, b)
    if brute:
        assert found is not None
        assert fingerprint(a) == fingerprint(b)
    if found is not None:
        assert maps_onto(found.U, a, b)
