"""Realizability of vector configurations as full sets of minimal vectors.

A configuration is realizable when some rational positive definite Q has
``Q[v] = 2`` on every configuration vector and ``Q[w] > 2`` on every other
nonzero integer vector. The test is a cutting-plane loop around an exact LP:

* variables are the Sym^2 coordinates of Q and a margin ``lam <= 1``;
* ``Q[v] = 2`` for configuration vectors, ``Q[w] >= 2 + lam`` for the
  excluded vectors collected so far;
* ``|v^T Q v'| <= 2`` for pairs of a fixed basis among the configuration
  (Cauchy-Schwarz for any admissible Q), which keeps the region bounded.

Each LP optimum is checked exactly: a non positive definite optimum yields a
vector with ``Q[w] <= 0``; otherwise the minimal vectors of Q are enumerated
and any vector outside the configuration becomes a new cut. Every cut is a
valid necessary condition, so ``lam <= 0`` (or an infeasible LP) proves the
configuration is not realizable.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

from .cone import RayCone
from .exactlinalg import RationalLP, solve_lp
from .forms import (
    IntVec,
    SymForm,
    VectorConfig,
    evaluate,
    from_sym2_coords,
    is_primitive,
    value_row,
    reduce_primitive,
    saturate,
    sym2_dim,
)
from .minvec import (
    NotPositiveDefinite,
    is_positive_definite,
    nonpositive_direction,
    shortest_vectors,
)

logger = logging.getLogger(__name__)

DEFAULT_MAX_CUTS = 10_000


class IterationCapExceeded(RuntimeError):
    """The cutting-plane loop exceeded its constraint budget."""


@dataclass(frozen=True)
class RealizabilityVerdict:
    realizable: bool
    witness: SymForm | None = None
    obstruction: str | None = None
    excluded: tuple[IntVec, ...] = field(default=(), repr=False)
    iterations: int = 0


def _bilinear_coords(v: Sequence[int], w: Sequence[int]) -> tuple[int, ...]:
    # coefficients of v^T Q w in the Sym^2 coordinates of Q
    g = len(v)
    return tuple(v[i] * w[i] for i in range(g)) + tuple(
        v[i] * w[j] + v[j] * w[i] for i in range(g) for j in range(i + 1, g)
    )


def _basis_of(vectors: Sequence[IntVec]) -> list[IntVec]:
    from .exactlinalg import rank_rational

    chosen: list[IntVec] = []
    for v in vectors:
        if rank_rational(chosen + [v]) > len(chosen):
            chosen.append(v)
    return chosen


def _short_violations(q: SymForm, members, known, radius: int = 2, limit: int = 8) -> list[IntVec]:
    """Canonical primitive w in the box ``[-radius, radius]^g`` with ``Q[w] <= 2``."""
    g = q.g
    hits = []
    for r in range(1, radius + 1):
        for w in product(range(-r, r + 1), repeat=g):
            if not any(w) or max(map(abs, w)) != r or reduce_primitive(w) != w:
                continue
            if w in members or w in known:
                continue
            val = evaluate(q, w)
            if val <= 2:
                hits.append((val, w))
        if hits:
            break
    hits.sort()
    return [w for _, w in hits[:limit]]


def _realize_spanning(config: VectorConfig, max_cuts: int) -> RealizabilityVerdict:
    g = config.g
    n = sym2_dim(g)
    pairs = config.pairs
    members = config.pair_set()
    two = Fraction(2)

    eqs = [(list(value_row(v)) + [0], two) for v in pairs]
    box = []
    for v, w in combinations(_basis_of(pairs), 2):
        row = list(_bilinear_coords(v, w))
        box.append((row + [0], -two))
        box.append(([-x for x in row] + [0], -two))
    box.append(([0] * n + [-1], -1))  # lam <= 1
    # short vectors e_i +- e_j outside the configuration seed the cut set
    cuts: list[IntVec] = []
    for i in range(g):
        for j in range(i, g):
            for s in ((1,) if i == j else (1, -1)):
                w = [0] * g
                w[i] = 1
                w[j] = s if i != j else 1
                w = tuple(w)
                if w not in members:
                    cuts.append(w)
    objective = [0] * n + [1]

    for it in range(1, max_cuts + 2):
        if len(cuts) > max_cuts:
            raise IterationCapExceeded(f"more than {max_cuts} cuts for {config.serialize()!r}")
        ineqs = box + [(list(value_row(w)) + [-1], two) for w in cuts]
        res = solve_lp(RationalLP.build(objective, eqs, ineqs))
        if res.status == "infeasible":
            return RealizabilityVerdict(
                False, obstruction="LP infeasible: no form takes value 2 on the configuration "
                "within the Cauchy-Schwarz bounds and exceeds 2 on the excluded vectors",
                excluded=tuple(cuts), iterations=it,
            )
        if res.status != "optimal":
            raise AssertionError("bounded LP reported unbounded")
        if res.value <= 0:
            return RealizabilityVerdict(
                False, obstruction=f"maximal margin is {res.value}: the excluded vectors "
                "cannot all be pushed above the minimum",
                excluded=tuple(cuts), iterations=it,
            )
        q = from_sym2_coords(res.point[:n], g)
        if not is_positive_definite(q):
            # prefer short violated vectors; exact LDL directions can be huge
            short = _short_violations(q, members, set(cuts))
            cuts.extend(short if short else [nonpositive_direction(q)])
            continue
        sv = shortest_vectors(q)
        extra = [v for v in sv.pairs if v not in members]
        if sv.minimum == two and not extra:
            return RealizabilityVerdict(True, witness=q, excluded=tuple(cuts), iterations=it)
        if not extra:
            raise AssertionError("minimum below 2 attained only on configuration vectors")
        cuts.extend(extra)
    raise IterationCapExceeded(f"more than {max_cuts} iterations")


def is_perfect_cone_config(
    vectors: VectorConfig | Iterable[Sequence[int]], max_cuts: int = DEFAULT_MAX_CUTS
) -> RealizabilityVerdict:
    """Decide whether the pairs are exactly the minimal vectors of some lattice.

    Accepts a :class:`VectorConfig` or raw vectors; raw input with repeated or
    proportional pairs, or non-primitive vectors, is rejected up front.
    Non-spanning configurations are decided on their saturation and the
    witness is extended by a large form on a complement.
    """
    if isinstance(vectors, VectorConfig):
        config = vectors
    else:
        raw = [tuple(int(x) for x in v) for v in vectors]
        if not raw:
            raise ValueError("empty configuration")
        if any(not any(v) for v in raw):
            return RealizabilityVerdict(False, obstruction="zero vector in the configuration")
        bad = next((v for v in raw if not is_primitive(v)), None)
        if bad is not None:
            return RealizabilityVerdict(False, obstruction=f"vector {bad} is not primitive")
        reduced = [reduce_primitive(v) for v in raw]
        if len(set(reduced)) != len(reduced):
            return RealizabilityVerdict(False, obstruction="configuration contains proportional pairs")
        config = VectorConfig(len(raw[0]), tuple(reduced))
    if not config.pairs:
        raise ValueError("empty configuration")
    r = config.rank()
    if r == config.g:
        verdict = _realize_spanning(config, max_cuts)
    else:
        sat, info = saturate(config)
        verdict = _realize_spanning(sat, max_cuts)
        if verdict.realizable:
            verdict = RealizabilityVerdict(
                True, witness=_extend_witness(verdict.witness, info.transform),
                excluded=verdict.excluded, iterations=verdict.iterations,
            )
    if verdict.realizable and not verify_witness(config, verdict.witness):
        raise AssertionError("realizability witness failed verification")
    return verdict


def _extend_witness(q_d: SymForm, transform) -> SymForm:
    """Block form ``Q_d + 3 I`` in the adapted coordinates ``y = S x``.

    There are no cross terms, so any vector leaving the saturation has value at
    least 3 and the minimal vectors are unchanged.
    """
    d = q_d.g
    g = len(transform)
    m = [[0] * g for _ in range(g)]
    for i in range(g):
        for j in range(g):
            if i < d and j < d:
                m[i][j] = q_d.entries[i][j]
            elif i == j:
                m[i][j] = 3
    # Q = S^T M S
    return SymForm.of(m).transformed(transform)


def verify_witness(config: VectorConfig, witness: SymForm) -> bool:
    """Independent check: Min(witness) is exactly the configuration's pair set."""
    try:
        sv = shortest_vectors(witness)
    except NotPositiveDefinite:
        return False
    return sv.pairs.pair_set() == config.pair_set()


def is_perfect_form(q: SymForm) -> bool:
    """Voronoi's criterion: minimal vectors' rank-1 forms span Sym^2."""
    from .cone import dimension

    if not is_positive_definite(q):
        raise NotPositiveDefinite("form is not positive definite")
    c = RayCone(shortest_vectors(q).pairs)
    return dimension(c) == sym2_dim(q.g)


def perfect_domain(q: SymForm) -> RayCone:
    if not is_perfect_form(q):
        raise ValueError("form is not perfect")
    return RayCone(shortest_vectors(q).pairs)
