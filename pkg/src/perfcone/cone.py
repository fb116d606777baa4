"""Polyhedral cones spanned by rank-1 forms p(v) = v v^T."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .exactlinalg import (
    RationalLP,
    pivot_columns,
    primitive_integer,
    rank_rational,
    smith_normal_form,
    solve_lp,
)
from .forms import VectorConfig, functional_value, sym2_dim


@dataclass(frozen=True)
class FaceCertificate:
    """A functional on Sym^2 vanishing exactly on the face's generators."""

    functional: tuple[int, ...]
    face: frozenset[int]


@dataclass(frozen=True, eq=False)
class RayCone:
    """The cone ``sum_i R_+ p(v_i)`` over the pairs of a configuration."""

    generators: VectorConfig

    def __post_init__(self) -> None:
        if not self.generators.pairs:
            raise ValueError("a cone needs at least one generator")

    @classmethod
    def from_vectors(cls, vectors: Iterable[Sequence[int]], g: int | None = None) -> "RayCone":
        return cls(VectorConfig.from_vectors(vectors, g))

    @property
    def g(self) -> int:
        return self.generators.g

    def __len__(self) -> int:
        return len(self.generators)

    @cached_property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return self.generators.coordinate_rows()

    @cached_property
    def snf_divisors(self) -> tuple[int, ...]:
        return smith_normal_form(self.rows).divisors

    def __repr__(self) -> str:
        return f"RayCone(g={self.g}, rays={len(self)})"


def dimension(c: RayCone) -> int:
    return rank_rational(c.rows)


def is_simplicial(c: RayCone) -> bool:
    return dimension(c) == len(c)


def sublattice_index(c: RayCone) -> int:
    """Index of the generated sublattice of Sym^2(Z^g) inside its saturation."""
    out = 1
    for d in c.snf_divisors:
        out *= d
    return out


def is_basic(c: RayCone) -> bool:
    """True when the generators extend to a Z-basis of Sym^2(Z^g).

    This needs linear independence as well as trivial Smith divisors: the D4
    cone has all divisors equal to 1 but twelve generators in dimension 10.
    """
    return len(c.snf_divisors) == len(c) and all(d == 1 for d in c.snf_divisors)


# ------------------------------------------------------------------ faces


def _verify(c: RayCone, functional: Sequence[int], face: frozenset[int]) -> bool:
    for i, row in enumerate(c.rows):
        val = functional_value(functional, row)
        if (i in face and val != 0) or (i not in face and val <= 0):
            return False
    return True


def is_face(c: RayCone, subset: Iterable[int]) -> FaceCertificate | None:
    """Certificate that ``subset`` is exactly the generator set of a face.

    Solves ``max t`` subject to ``f . r_i = 0`` on the subset, ``f . r_j >= t``
    off it and ``t <= 1``; the subset is a face iff the optimum is positive.
    """
    face = frozenset(subset)
    n = len(c)
    if any(i < 0 or i >= n for i in face):
        raise IndexError("generator index out of range")
    if len(face) == n:
        cert = FaceCertificate(tuple([0] * sym2_dim(c.g)), face)
        return cert
    dim = sym2_dim(c.g)
    obj = [0] * dim + [1]
    eqs = [(list(c.rows[i]) + [0], 0) for i in sorted(face)]
    ineqs = [(list(c.rows[j]) + [-1], 0) for j in range(n) if j not in face]
    ineqs.append(([0] * dim + [-1], -1))  # t <= 1
    res = solve_lp(RationalLP.build(obj, eqs, ineqs))
    if res.status != "optimal" or res.value <= 0:
        return None
    functional = primitive_integer(res.point[:dim])
    if not _verify(c, functional, face):
        raise AssertionError("face certificate failed verification")
    return FaceCertificate(functional, face)


@dataclass(frozen=True)
class DualDescription:
    """Facets and extreme rays of a cone.

    ``facets`` are integer functionals in Sym^2 dual coordinates, nonnegative on
    every generator; ``facet_sets`` lists the generators each one vanishes on.
    ``redundant`` holds generators that are not extreme rays.
    """

    extreme: tuple[int, ...]
    redundant: tuple[int, ...]
    facets: tuple[tuple[int, ...], ...]
    facet_sets: tuple[frozenset[int], ...]


def _double_description(rows: list[list[int]], d: int) -> list[tuple[int, ...]]:
    """Extreme rays of ``{y in Q^d : r . y >= 0 for r in rows}`` (full rank rows).

    Classic incremental double description with the combinatorial adjacency
    test; rays are kept as primitive integer vectors.
    """
    from .exactlinalg import inverse_rational

    base = pivot_columns([list(x) for x in zip(*rows)])  # independent rows
    if len(base) != d:
        raise ValueError("constraint rows do not have full rank")
    binv = inverse_rational([rows[i] for i in base])
    # columns of B^{-1}: rays of the initial simplicial cone
    rays = [primitive_integer([binv[k][j] for k in range(d)]) for j in range(d)]
    added = list(base)

    def zeros(y):
        return frozenset(i for i in added if sum(a * b for a, b in zip(rows[i], y)) == 0)

    zsets = [zeros(y) for y in rays]
    for idx in range(len(rows)):
        if idx in base:
            continue
        r = rows[idx]
        vals = [sum(a * b for a, b in zip(r, y)) for y in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        zer = [k for k, v in enumerate(vals) if v == 0]
        new_rays = [rays[k] for k in pos + zer]
        for p in pos:
            for q in neg:
                common = zsets[p] & zsets[q]
                if len(common) < d - 2:
                    continue
                adjacent = not any(
                    k != p and k != q and common <= zsets[k] for k in range(len(rays))
                )
                if not adjacent:
                    continue
                y = primitive_integer(
                    [vals[p] * b - vals[q] * a for a, b in zip(rays[p], rays[q])]
                )
                new_rays.append(y)
        added.append(idx)
        rays = new_rays
        zsets = [zeros(y) for y in rays]
    return rays


def extreme_rays_and_facets(c: RayCone) -> DualDescription:
    """Dual description of the cone inside its linear span.

    The generators are projected onto a set of coordinates on which the span
    projects injectively; facets of the projected (full dimensional) cone are
    the extreme rays of its dual, found by double description.
    """
    rows = c.rows
    d = rank_rational(rows)
    if d == 0:
        raise ValueError("cone of dimension 0")
    cols = pivot_columns(rows)
    proj = [[row[j] for j in cols] for row in rows]
    n = len(rows)
    if d == 1:
        normals = [(1 if proj[0][0] > 0 else -1,)]
    else:
        normals = _double_description(proj, d)
    dim = sym2_dim(c.g)
    facets = []
    facet_sets = []
    for y in sorted(normals):
        f = [0] * dim
        for j, val in zip(cols, y):
            f[j] = val
        f = tuple(f)
        zero = frozenset(i for i in range(n) if functional_value(f, rows[i]) == 0)
        if any(functional_value(f, r) < 0 for r in rows):
            raise AssertionError("facet normal negative on a generator")
        facets.append(f)
        facet_sets.append(zero)
    if d == 1:
        extreme = tuple(range(n))
    else:
        extreme = tuple(
            i for i in range(n)
            if rank_rational([f for f, s in zip(facets, facet_sets) if i in s]) == d - 1
        )
    redundant = tuple(i for i in range(n) if i not in extreme)
    return DualDescription(extreme, redundant, tuple(facets), tuple(facet_sets))


def _simplicial_certificate(c: RayCone, face: frozenset[int]) -> tuple[int, ...]:
    """Functional that is 0 on ``face`` and 1 on the other (independent) generators."""
    from .exactlinalg import solve_rational

    rows = c.rows
    cols = pivot_columns(rows)
    y = solve_rational(
        [[row[j] for j in cols] for row in rows], [0 if i in face else 1 for i in range(len(rows))]
    )
    f = [0] * sym2_dim(c.g)
    for j, val in zip(cols, y):
        f[j] = val
    return primitive_integer(f)


def certified_faces(c: RayCone) -> list[FaceCertificate]:
    """Every nonempty face with a certificate, sorted by (size, indices).

    Simplicial cones short-cut to all nonempty generator subsets. Otherwise
    faces are the closure of the facet sets under intersection (plus the cone
    itself) and a face's certificate is the sum of the facet normals defining
    it. Each certificate is checked by direct evaluation.
    """
    n = len(c)
    out: list[FaceCertificate] = []
    if is_simplicial(c):
        for k in range(1, n + 1):
            for s in combinations(range(n), k):
                face = frozenset(s)
                out.append(FaceCertificate(_simplicial_certificate(c, face), face))
    else:
        dd = extreme_rays_and_facets(c)
        normal = dict(zip(dd.facet_sets, dd.facets))
        found: dict[frozenset[int], tuple[int, ...]] = dict(normal)
        frontier = dict(normal)
        while frontier:
            new: dict[frozenset[int], tuple[int, ...]] = {}
            for a, fa in frontier.items():
                for b, fb in normal.items():
                    x = a & b
                    if x and x not in found and x not in new:
                        new[x] = tuple(p + q for p, q in zip(fa, fb))
            found.update(new)
            frontier = new
        found[frozenset(range(n))] = tuple([0] * sym2_dim(c.g))
        out = [FaceCertificate(f, s) for s, f in found.items()]
    for cert in out:
        if not _verify(c, cert.functional, cert.face):
            raise AssertionError(f"certificate for {sorted(cert.face)} failed verification")
    return sorted(out, key=lambda cert: (len(cert.face), sorted(cert.face)))


def face_sets(c: RayCone) -> list[frozenset[int]]:
    return [cert.face for cert in certified_faces(c)]


def enumerate_faces(c: RayCone, dims: Iterable[int] | None = None) -> list[RayCone]:
    """All faces with dimension in ``dims``, each as the sub-configuration on it."""
    wanted = None if dims is None else set(dims)
    out = []
    for cert in certified_faces(c):
        sub = RayCone(c.generators.subset(sorted(cert.face)))
        if wanted is None or dimension(sub) in wanted:
            out.append(sub)
    return out
