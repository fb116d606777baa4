"""The reproduction criteria, shared by ``perfcone verify-paper`` and the test suite.

Each criterion is a function returning a :class:`CriterionResult`; exceptions
inside a criterion count as a failure and are reported in its detail line.
Built-in data is read from :mod:`perfcone.data` at call time, so a corrupted
Gram matrix makes the corresponding criterion fail.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import isqrt
from typing import Callable

from . import data
from .classify import (
    BaseSystem,
    builtin_domain,
    classify_faces,
    extend_and_classify,
    verify_theorems,
)
from .cone import RayCone, certified_faces, dimension, is_basic, is_simplicial, sublattice_index
from .equiv import are_equivalent, maps_onto
from .exactlinalg import det, inverse_rational, maximal_minor_gcd, smith_normal_form
from .forms import SymForm, evaluate, functional_value, reduce_primitive
from .minvec import is_positive_definite, shortest_vectors
from .realize import is_perfect_cone_config
from .voronoi2 import cone_dimension, embedded_cones, is_simplicial_matrix_cone, pad_to

# orbit counts per dimension (1..10) of the faces of the A4 and D4 domains,
# recorded on the first verified run
G4_ORBIT_COUNTS = {1: 1, 2: 1, 3: 2, 4: 3, 5: 4, 6: 5, 7: 4, 8: 2, 9: 2, 10: 2}


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag} [{self.number}] {self.name}: {self.detail} ({self.seconds:.1f}s)"

    def to_json(self) -> dict:
        return {
            "number": str(self.number),
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "seconds": f"{self.seconds:.2f}",
        }


def _domain_from_gram(name: str) -> RayCone:
    return RayCone(shortest_vectors(SymForm.of(data.GRAMS[name])).pairs)


@lru_cache(maxsize=None)
def _theorems(g: int):
    return verify_theorems(g)


def reset_caches() -> None:
    builtin_domain.cache_clear()
    _theorems.cache_clear()


def _expect(checks: list[tuple[str, object, object]]) -> tuple[bool, str]:
    bad = [f"{what} = {got!r}, expected {want!r}" for what, got, want in checks if got != want]
    if bad:
        return False, "; ".join(bad)
    return True, ", ".join(f"{what} = {got}" for what, got, _ in checks)


# ---------------------------------------------------------------- criteria


def d4_cone() -> tuple[bool, str]:
    c = _domain_from_gram("D4")
    return _expect([
        ("pairs", len(c), 12),
        ("dimension", dimension(c), 10),
        ("simplicial", is_simplicial(c), False),
        ("basic", is_basic(c), False),
    ])


def a2_a3_domains() -> tuple[bool, str]:
    parts = []
    for name, want in (("A2", 3), ("A3", 6)):
        c = _domain_from_gram(name)
        faces = certified_faces(c)
        non_basic = [sorted(f.face) for f in faces if not is_basic(RayCone(c.generators.subset(sorted(f.face))))]
        ok, detail = _expect([(f"{name} dimension", dimension(c), want), (f"{name} non-basic faces", len(non_basic), 0)])
        if not ok:
            return False, detail
        parts.append(f"{name}: dimension {want}, {len(faces)} faces all basic")
    return True, "; ".join(parts)


def g4_basic_and_simplicial() -> tuple[bool, str]:
    t = _theorems(4)
    checks = {c.name: c for c in t.checks}
    a = checks["faces of dimension <= 9 are basic"]
    b = checks["dimension-10 orbits simplicial except D4"]
    counts = t.report.counts()
    detail = f"{a.detail}; {b.detail}; orbit counts by dimension {counts}"
    if counts != G4_ORBIT_COUNTS:
        return False, detail + f" (recorded {G4_ORBIT_COUNTS})"
    return a.passed and b.passed, detail


def e7_dual_cone() -> tuple[bool, str]:
    c = _domain_from_gram("E7*")
    return _expect([
        ("pairs", len(c), 28),
        ("dimension", dimension(c), 28),
        ("simplicial", is_simplicial(c), True),
        ("basic", is_basic(c), False),
        ("index", sublattice_index(c), 384),
    ])


def toy_cone() -> tuple[bool, str]:
    vecs = [(1, 1), (1, -1)]
    c = RayCone.from_vectors(vecs)
    verdict = is_perfect_cone_config(vecs)
    return _expect([
        ("simplicial", is_simplicial(c), True),
        ("basic", is_basic(c), False),
        ("index", sublattice_index(c), 2),
        ("realizable", verdict.realizable, False),
    ])


def second_voronoi() -> tuple[bool, str]:
    checks = []
    for k, c in enumerate(embedded_cones(), 1):
        for big_g in (5, 6, 7):
            p = pad_to(c, big_g)
            checks.append((f"cone {k} at G={big_g}: (generators, dimension, simplicial)",
                           (len(p), cone_dimension(p), is_simplicial_matrix_cone(p)), (4, 3, False)))
    ok, detail = _expect(checks)
    return ok, ("both cones: 4 generators, dimension 3, non-simplicial at G = 5, 6, 7" if ok else detail)


def spanning_faces_simplicial() -> tuple[bool, str]:
    parts = []
    ok = True
    for g in (2, 3, 4):
        chk = next(c for c in _theorems(g).checks if c.name.startswith("spanning faces"))
        ok = ok and chk.passed
        parts.append(f"g={g}: {chk.detail}")
    return ok, "; ".join(parts)


def pipeline_cross_oracle() -> tuple[bool, str]:
    base2 = BaseSystem.of([(1, 0), (0, 1)])
    r2 = extend_and_classify([base2])
    reps2 = r2.dims.get(3, [])
    a2 = _domain_from_gram("A2").generators
    ok2 = len(reps2) == 1 and are_equivalent(reps2[0].vectors, a2) is not None
    if not ok2:
        return False, f"g=2: {len(reps2)} orbits from base e1, e2 (expected 1, equivalent to A2)"

    base3 = BaseSystem.of([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    ext = [o.vectors for o in extend_and_classify([base3]).dims.get(4, [])]
    faces = classify_faces([_domain_from_gram("A3")], [4], ["A3"])
    four_ray = [o.vectors for o in faces.dims.get(4, []) if len(o.vectors) == 4]
    matched = all(any(are_equivalent(a, b) is not None for b in four_ray) for a in ext) and all(
        any(are_equivalent(a, b) is not None for b in ext) for a in four_ray
    )
    detail = (f"g=2: 1 orbit, equivalent to A2; g=3: {len(ext)} extension orbits vs "
              f"{len(four_ray)} four-ray face orbits of A3")
    return matched and len(ext) == len(four_ray), detail + ("" if matched else " (mismatch)")


def _box_shortest(q: SymForm) -> tuple[Fraction, set]:
    """Exhaustive search in the box |x_i|^2 <= m (Q^-1)_ii with m the least diagonal entry."""
    g = q.g
    m = min(q.entries[i][i] for i in range(g))
    inv = inverse_rational(q.entries)
    radius = [isqrt(int(m * inv[i][i])) for i in range(g)]
    best, found = None, set()
    for x in product(*(range(-r, r + 1) for r in radius)):
        if not any(x):
            continue
        val = evaluate(q, x)
        if best is None or val < best:
            best, found = val, set()
        if val == best:
            found.add(reduce_primitive(x))
    return best, found


def _random_pd(rng: random.Random, g: int) -> SymForm:
    while True:
        m = [[0] * g for _ in range(g)]
        for i in range(g):
            for j in range(i, g):
                m[i][j] = m[j][i] = rng.randint(-10, 10) if i != j else rng.randint(1, 10)
        q = SymForm.of(m)
        if is_positive_definite(q):
            return q


def oracle_equivalences(seed: int = 20240601) -> tuple[bool, str]:
    rng = random.Random(seed)
    for _ in range(50):
        q = _random_pd(rng, rng.randint(1, 4))
        sv = shortest_vectors(q)
        best, found = _box_shortest(q)
        if sv.minimum != best or sv.pairs.pair_set() != found:
            return False, f"shortest vectors disagree with box search for {q.entries}"
    for _ in range(100):
        rows, cols = rng.randint(1, 4), rng.randint(1, 6)
        rows = min(rows, cols)
        a = [[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)]
        snf = smith_normal_form(a)
        if snf.rank < rows:
            continue
        if maximal_minor_gcd(a) != snf.product:
            return False, f"maximal minor gcd disagrees with Smith divisors for {a}"
    n_certs = 0
    for name in ("A2", "A3", "A4", "D4"):
        c = _domain_from_gram(name)
        for cert in certified_faces(c):
            for i, row in enumerate(c.rows):
                val = functional_value(cert.functional, row)
                if (i in cert.face) != (val == 0) or val < 0:
                    return False, f"{name}: certificate for {sorted(cert.face)} fails substitution"
            n_certs += 1
    n_wit = 0
    for name in ("A2", "A3", "A4", "D4"):
        cfg = _domain_from_gram(name).generators
        g = cfg.g
        for _ in range(5):
            u = _random_unimodular(rng, g)
            img = cfg.image(u)
            w = are_equivalent(cfg, img)
            if w is None or not maps_onto(w.U, cfg, img):
                return False, f"{name}: no verified witness for a unimodular image"
            n_wit += 1
    return True, (f"50 forms vs box search, 100 matrices minor gcd vs Smith, "
                  f"{n_certs} face certificates and {n_wit} equivalence witnesses verified")


def _random_unimodular(rng: random.Random, g: int):
    u = [[int(i == j) for j in range(g)] for i in range(g)]
    for _ in range(3 * g):
        i, j = rng.sample(range(g), 2) if g > 1 else (0, 0)
        if i == j:
            u[0][0] = -u[0][0]
            continue
        f = rng.choice((-1, 1))
        u[i] = [a + f * b for a, b in zip(u[i], u[j])]
    assert abs(det(u)) == 1
    return tuple(map(tuple, u))


def determinism(n_jobs: int = 4) -> tuple[bool, str]:
    from .cli import classify_json

    one = classify_json(4, None, None, n_jobs=1)
    many = classify_json(4, None, None, n_jobs=n_jobs)
    same = one == many
    return same, f"g=4 report, 1 vs {n_jobs} workers: {'byte-identical' if same else 'outputs differ'} ({len(one)} bytes)"


CRITERIA: list[tuple[int, str, Callable[[], tuple[bool, str]]]] = [
    (1, "D4 cone", d4_cone),
    (2, "A2/A3 domains", a2_a3_domains),
    (3, "g=4 basicness and simpliciality", g4_basic_and_simplicial),
    (4, "E7* cone", e7_dual_cone),
    (5, "toy cone", toy_cone),
    (6, "second Voronoi cones", second_voronoi),
    (7, "spanning low-dimensional faces simplicial", spanning_faces_simplicial),
    (8, "pipeline cross-oracle", pipeline_cross_oracle),
    (9, "oracle equivalences", oracle_equivalences),
    (10, "determinism", determinism),
]


def run_criterion(number: int, n_jobs: int = 4) -> CriterionResult:
    num, name, fn = next(c for c in CRITERIA if c[0] == number)
    start = time.perf_counter()
    try:
        passed, detail = fn(max(2, n_jobs)) if fn is determinism else fn()
    except Exception as exc:  # a crash is a failed criterion
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    return CriterionResult(num, name, bool(passed), detail, time.perf_counter() - start)


def run_all(numbers=None, n_jobs: int = 4) -> list[CriterionResult]:
    reset_caches()
    wanted = [c[0] for c in CRITERIA] if numbers is None else list(numbers)
    return [run_criterion(n, n_jobs) for n in wanted]
