"""GL_g(Z)-equivalence and automorphisms of vector configurations.

All searches run on the characteristic form ``Q_V = sum_i v_i v_i^T``. Under
``v -> U v`` it transforms as ``Q_V -> U Q_V U^T``, so ``P = adj(Q_V)`` gives an
invariant integral bilinear form ``(v, w) -> v^T P w``. Backtracking assigns
images to a spanning subset of the source pairs, pruning on these values, and
only then solves for U.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Sequence

from .exactlinalg import Matrix, adjugate, as_matrix, det, identity, inverse_rational, matmul
from .forms import IntVec, VectorConfig, saturate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EquivWitness:
    """Unimodular U with ``U {+-a_i} = {+-b_j}``."""

    U: Matrix


@dataclass(frozen=True)
class AutGroup:
    generators: tuple[Matrix, ...]
    order: int


@dataclass(frozen=True, order=True)
class Fingerprint:
    rank: int
    pair_count: int
    det_char_form: int
    norms: tuple[int, ...]
    products: tuple[int, ...]
    dimension: int


def _dot(p: Sequence[Sequence[int]], x: Sequence[int], y: Sequence[int]) -> int:
    return sum(x[i] * sum(p[i][j] * y[j] for j in range(len(y)) if y[j]) for i in range(len(x)) if x[i])


def _neg(v: IntVec) -> IntVec:
    return tuple(-x for x in v)


def _apply(u: Sequence[Sequence[int]], v: Sequence[int]) -> IntVec:
    return tuple(sum(r[k] * v[k] for k in range(len(v))) for r in u)


class _Invariants:
    """Cached invariant form data of a spanning configuration."""

    def __init__(self, config: VectorConfig):
        if config.rank() != config.g:
            raise ValueError("configuration does not span; saturate it first")
        self.config = config
        q = config.characteristic_form().entries
        self.det = det(q)
        self.p = adjugate(q)
        self.norm = {v: _dot(self.p, v, v) for v in config.pairs}


def fingerprint(config: VectorConfig) -> Fingerprint:
    """GL_g(Z)-invariant summary of a spanning configuration."""
    from .exactlinalg import rank_rational

    inv = _Invariants(config)
    pairs = config.pairs
    norms = tuple(sorted(inv.norm[v] for v in pairs))
    prods = tuple(sorted(abs(_dot(inv.p, a, b)) for a, b in combinations(pairs, 2)))
    dim = rank_rational(config.coordinate_rows())
    return Fingerprint(config.g, len(pairs), inv.det, norms, prods, dim)


def _spanning_order(config: VectorConfig, inv: _Invariants) -> list[IntVec]:
    """Pairs reordered so the first g are independent, rarest norms first."""
    counts: dict[int, int] = defaultdict(int)
    for v in config.pairs:
        counts[inv.norm[v]] += 1
    ranked = sorted(config.pairs, key=lambda v: (counts[inv.norm[v]], v))
    from .exactlinalg import rank_rational

    chosen: list[IntVec] = []
    for v in ranked:
        if rank_rational(chosen + [v]) == len(chosen) + 1:
            chosen.append(v)
            if len(chosen) == config.g:
                break
    return chosen


def _isometries(a: VectorConfig, b: VectorConfig, ia: _Invariants, ib: _Invariants) -> Iterator[Matrix]:
    """All U in GL_g(Z) mapping the pair set of ``a`` onto that of ``b``."""
    g = a.g
    if len(a) != len(b) or ia.det != ib.det:
        return
    basis = _spanning_order(a, ia)
    amat_inv = inverse_rational(tuple(zip(*basis)))  # columns are basis vectors
    target = b.pair_set()
    by_norm: dict[int, list[IntVec]] = defaultdict(list)
    for w in b.pairs:
        by_norm[ib.norm[w]].append(w)
        by_norm[ib.norm[w]].append(_neg(w))
    gram_a = [[_dot(ia.p, x, y) for y in basis] for x in basis]
    images: list[IntVec] = []

    def rec(k: int):
        if k == g:
            cols = tuple(zip(*images))  # g x g, columns are images
            u = matmul(cols, amat_inv)
            if any(Fraction(x).denominator != 1 for row in u for x in row):
                return
            u = as_matrix([[int(x) for x in row] for row in u])
            if abs(det(u)) != 1:
                return
            for v in a.pairs:
                w = _apply(u, v)
                if w not in target and _neg(w) not in target:
                    return
            yield u
            return
        used = {x for x in images} | {_neg(x) for x in images}
        for w in by_norm.get(ia.norm[basis[k]], ()):
            if w in used:
                continue
            if any(_dot(ib.p, w, images[l]) != gram_a[k][l] for l in range(k)):
                continue
            images.append(w)
            yield from rec(k + 1)
            images.pop()

    yield from rec(0)


def _lift(u_d: Matrix, sat_a, sat_b, g: int) -> Matrix:
    """Extend a witness between saturations to GL_g(Z)."""
    d = len(u_d)
    block = [[0] * g for _ in range(g)]
    for i in range(g):
        for j in range(g):
            if i < d and j < d:
                block[i][j] = u_d[i][j]
            elif i == j:
                block[i][j] = 1
    tb_inv = inverse_rational(sat_b.transform)
    tb_inv = [[int(x) for x in row] for row in tb_inv]
    return as_matrix(matmul(matmul(tb_inv, block), sat_a.transform))


def maps_onto(u: Sequence[Sequence[int]], a: VectorConfig, b: VectorConfig) -> bool:
    """Substitution check: ``u`` is unimodular and bijective from a's pairs to b's."""
    if abs(det(u)) != 1 or len(a) != len(b):
        return False
    target = b.pair_set()
    seen = set()
    for v in a.pairs:
        w = _apply(u, v)
        key = w if w in target else _neg(w)
        if key not in target or key in seen:
            return False
        seen.add(key)
    return True


def are_equivalent(a: VectorConfig, b: VectorConfig) -> EquivWitness | None:
    """Witness U in GL_g(Z) with ``U a = b`` as pair sets, or None.

    Non-spanning configurations are compared through their saturations and
    the witness is lifted back to GL_g(Z).
    """
    if a.g != b.g or len(a) != len(b):
        return None
    ra, rb = a.rank(), b.rank()
    if ra != rb:
        return None
    if ra == a.g:
        sa, sb = a, b
    else:
        sa, sat_a = saturate(a)
        sb, sat_b = saturate(b)
    ia, ib = _Invariants(sa), _Invariants(sb)
    if ia.det != ib.det or sorted(ia.norm.values()) != sorted(ib.norm.values()):
        return None
    u = next(_isometries(sa, sb, ia, ib), None)
    if u is None:
        return None
    if ra != a.g:
        u = _lift(u, sat_a, sat_b, a.g)
    if not maps_onto(u, a, b):
        raise AssertionError("equivalence witness failed verification")
    return EquivWitness(u)


def _closure(gens: Sequence[Matrix], g: int) -> set[Matrix]:
    elems = {identity(g)}
    frontier = [identity(g)]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = as_matrix(matmul(x, s))
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return elems


def automorphism_group(config: VectorConfig) -> AutGroup:
    """Stabilizer of the pair set in GL_g(Z) (which always contains -I).

    Every element is enumerated, so this is meant for small groups; generators
    are picked greedily in sorted order and their closure is checked against
    the enumerated order.
    """
    inv = _Invariants(config)
    elements = sorted(set(_isometries(config, config, inv, inv)))
    gens: list[Matrix] = []
    group = {identity(config.g)}
    for x in elements:
        if x not in group:
            gens.append(x)
            group = _closure(gens, config.g)
    if len(group) != len(elements):
        raise AssertionError("generated group does not match the enumerated stabilizer")
    return AutGroup(tuple(gens), len(elements))


def automorphism_elements(config: VectorConfig) -> list[Matrix]:
    inv = _Invariants(config)
    return sorted(set(_isometries(config, config, inv, inv)))


# ------------------------------------------------------------------ dedup


def _saturated(config: VectorConfig) -> VectorConfig:
    return config if config.rank() == config.g else saturate(config)[0]


def orbit_key(config: VectorConfig) -> tuple:
    """Bucket key: rank plus the fingerprint of the saturation."""
    sat = _saturated(config)
    return (config.g, sat.g, fingerprint(sat))


def _dedup_bucket(items: list[tuple[VectorConfig, VectorConfig]]) -> list[tuple[VectorConfig, list[int]]]:
    # items are (config, saturation); saturations are direct summands, so two
    # configurations are equivalent exactly when their saturations are
    reps: list[tuple[VectorConfig, VectorConfig, list[int]]] = []
    order = sorted(range(len(items)), key=lambda i: items[i][0].key())
    for i in order:
        c, sat = items[i]
        for rep, rep_sat, members in reps:
            if c.key() == rep.key() or are_equivalent(rep_sat, sat) is not None:
                members.append(i)
                break
        else:
            reps.append((c, sat, [i]))
    return [(rep, members) for rep, _, members in reps]


def orbit_partition(configs: Sequence[VectorConfig], n_jobs: int = 1) -> list[tuple[VectorConfig, list[int]]]:
    """Group configurations into GL_g(Z)-orbits.

    Returns ``(representative, member indices)`` pairs. The representative is
    the lexicographically least canonical form in its orbit among the inputs;
    output is sorted by representative, independent of ``n_jobs``.
    """
    canon = [c.canonical() for c in configs]
    sats = [_saturated(c) for c in canon]
    buckets: dict[tuple, list[int]] = defaultdict(list)
    for i, (c, sat) in enumerate(zip(canon, sats)):
        buckets[(c.g, sat.g, fingerprint(sat))].append(i)
    keys = sorted(buckets, key=repr)
    tasks = [[(canon[i], sats[i]) for i in buckets[k]] for k in keys]
    if n_jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            results = list(pool.map(_dedup_bucket, tasks, chunksize=max(1, len(tasks) // (4 * n_jobs))))
    else:
        results = [_dedup_bucket(t) for t in tasks]
    out = []
    for k, res in zip(keys, results):
        idx = buckets[k]
        for rep, members in res:
            out.append((rep, sorted(idx[m] for m in members)))
    out.sort(key=lambda item: item[0].key())
    logger.debug("%d configurations fall into %d orbits", len(configs), len(out))
    return out


def dedup_orbits(configs: Sequence[VectorConfig], n_jobs: int = 1) -> list[VectorConfig]:
    return [rep for rep, _ in orbit_partition(configs, n_jobs)]
