"""Built-in Gram matrices and the two explicit second-Voronoi cones.

Minimal vectors are never stored: they are derived from the Gram matrices with
:func:`perfcone.minvec.shortest_vectors` whenever needed.
"""

from __future__ import annotations

from .exactlinalg import adjugate


def _root_a(n: int) -> tuple[tuple[int, ...], ...]:
    # basis e_0 - e_i of the A_n root lattice: norm 2, mutual products 1
    return tuple(tuple(2 if i == j else 1 for j in range(n)) for i in range(n))


def _cartan(n: int, edges) -> tuple[tuple[int, ...], ...]:
    m = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for a, b in edges:
        m[a - 1][b - 1] = m[b - 1][a - 1] = -1
    return tuple(map(tuple, m))


A2 = _root_a(2)
A3 = _root_a(3)
A4 = _root_a(4)
D4 = ((2, -1, 0, 0), (-1, 2, -1, -1), (0, -1, 2, 0), (0, -1, 0, 2))

# Bourbaki labelling: 1-3-4-5-6-7 with node 2 attached to node 4
E7 = _cartan(7, [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (2, 4)])
# E7 has determinant 2, so adj(E7) = 2 * E7^{-1} is an integral Gram matrix of
# the dual lattice scaled by 2 (minimum 3 instead of 3/2)
E7_DUAL = adjugate(E7)

GRAMS = {"A2": A2, "A3": A3, "A4": A4, "D4": D4, "E7*": E7_DUAL}

# Perfect domains used for face classification, by dimension g
DOMAINS_BY_G = {2: ("A2",), 3: ("A3",), 4: ("A4", "D4")}

SECOND_VORONOI_CONES = (
    (
        ((4, -2, -2, 0, -2), (-2, 4, 0, -1, 1), (-2, 0, 4, -1, 1), (0, -1, -1, 3, -1), (-2, 1, 1, -1, 3)),
        ((2, -1, -1, 0, -1), (-1, 2, 0, 0, 0), (-1, 0, 2, -1, 1), (0, 0, -1, 2, -1), (-1, 0, 1, -1, 2)),
        ((2, -1, -1, 0, -1), (-1, 2, 0, -1, 1), (-1, 0, 2, 0, 0), (0, -1, 0, 2, -1), (-1, 1, 0, -1, 2)),
        ((0, 0, 0, 0, 0), (0, 0, 0, 0, 0), (0, 0, 0, 0, 0), (0, 0, 0, 1, -1), (0, 0, 0, -1, 1)),
    ),
    (
        ((3, -1, -1, -1, -1), (-1, 4, -1, -1, 0), (-1, -1, 3, 1, -1), (-1, -1, 1, 3, -1), (-1, 0, -1, -1, 4)),
        ((6, -2, -2, -2, -2), (-2, 6, -1, -1, 0), (-2, -1, 4, 1, -1), (-2, -1, 1, 4, -1), (-2, 0, -1, -1, 6)),
        ((2, 0, -1, -1, -1), (0, 2, -1, -1, 0), (-1, -1, 2, 1, 0), (-1, -1, 1, 2, 0), (-1, 0, 0, 0, 2)),
        ((5, -1, -2, -2, -2), (-1, 4, -1, -1, 0), (-2, -1, 3, 1, 0), (-2, -1, 1, 3, 0), (-2, 0, 0, 0, 4)),
    ),
)

# Reported g=8 figures, kept as documentation only (not reproducible at desk scale)
G8_BASE_ORBITS = 13
G8_INDEX_RANGE = (1, 5)
G8_CANDIDATE_SYSTEMS = 131
G8_NINE_DIM_ORBITS = 106
