"""Classification of perfect cones at small g.

Two engines:

* :func:`classify_faces` collects the faces of given perfect domains and
  sorts them into GL_g(Z)-orbits per dimension;
* :func:`extend_and_classify` grows g-pair base systems by one vector, using
  determinant (adjugate) bounds to make the search finite, and keeps the
  realizable simplicial results up to equivalence.
"""

from __future__ import annotations

import itertools
import json
import logging
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from . import data
from .cone import RayCone, certified_faces, dimension, is_basic, is_simplicial, sublattice_index
from .equiv import are_equivalent, automorphism_elements, orbit_partition
from .exactlinalg import det, rank_rational
from .forms import IntVec, SymForm, VectorConfig, is_primitive, reduce_primitive
from .minvec import shortest_vectors
from .realize import IterationCapExceeded, RealizabilityVerdict, is_perfect_cone_config

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def builtin_domain(name: str) -> RayCone:
    """Perfect domain of a built-in Gram matrix; minimal vectors computed here."""
    try:
        gram = data.GRAMS[name]
    except KeyError:
        raise KeyError(f"unknown built-in domain {name!r}; known: {sorted(data.GRAMS)}") from None
    return RayCone(shortest_vectors(SymForm.of(gram)).pairs)


def default_domains(g: int, include_e7: bool = False) -> tuple[str, ...]:
    if g == 7 and include_e7:
        return ("E7*",)
    if g not in data.DOMAINS_BY_G:
        raise ValueError(f"no built-in perfect domains for g={g} (available: 2, 3, 4)")
    return data.DOMAINS_BY_G[g]


class _VerdictCache:
    """Thread-safe memo of realizability verdicts keyed by canonical pair set."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._store: dict[tuple, RealizabilityVerdict] = {}

    def __call__(self, config: VectorConfig) -> RealizabilityVerdict:
        key = config.key()
        with self._lock:
            hit = self._store.get(key)
        if hit is not None:
            return hit
        verdict = is_perfect_cone_config(config.canonical())
        with self._lock:
            self._store.setdefault(key, verdict)
        return verdict


realizability = _VerdictCache()


# ----------------------------------------------------------------- reports


@dataclass(frozen=True)
class Orbit:
    vectors: VectorConfig
    basic: bool
    simplicial: bool
    index: int
    members: int = 1

    @classmethod
    def of(cls, config: VectorConfig, members: int = 1) -> "Orbit":
        c = RayCone(config)
        return cls(config, is_basic(c), is_simplicial(c), sublattice_index(c), members)

    def to_json(self) -> dict:
        return {
            "vectors": [[str(x) for x in v] for v in self.vectors.pairs],
            "rays": str(len(self.vectors)),
            "basic": self.basic,
            "simplicial": self.simplicial,
            "index": str(self.index),
            "members": str(self.members),
        }


@dataclass
class OrbitReport:
    """Orbits per cone dimension, with flags recomputed from the vectors."""

    g: int
    domains: list[str]
    dims: dict[int, list[Orbit]]
    provenance: dict = field(default_factory=dict)

    def count(self, dim: int) -> int:
        return len(self.dims.get(dim, []))

    def counts(self) -> dict[int, int]:
        return {d: len(v) for d, v in sorted(self.dims.items())}

    def to_json(self) -> dict:
        return {
            "g": str(self.g),
            "domains": list(self.domains),
            "provenance": self.provenance,
            "dims": {
                str(d): {"count": str(len(orbits)), "orbits": [o.to_json() for o in orbits]}
                for d, orbits in sorted(self.dims.items())
            },
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def loads(cls, text: str) -> "OrbitReport":
        raw = json.loads(text)
        g = int(raw["g"])
        dims = {}
        for d, block in raw["dims"].items():
            dims[int(d)] = [
                Orbit(
                    VectorConfig(g, tuple(tuple(int(x) for x in v) for v in o["vectors"])),
                    o["basic"], o["simplicial"], int(o["index"]), int(o.get("members", "1")),
                )
                for o in block["orbits"]
            ]
        return cls(g, list(raw["domains"]), dims, raw.get("provenance", {}))


def reverify(report: OrbitReport, check_realizable: bool = True) -> list[str]:
    """Recompute every stored flag; returns a list of discrepancies."""
    problems = []
    for d, orbits in report.dims.items():
        for o in orbits:
            fresh = Orbit.of(o.vectors, o.members)
            if (fresh.basic, fresh.simplicial, fresh.index) != (o.basic, o.simplicial, o.index):
                problems.append(f"dim {d}: stored flags differ for {o.vectors.pairs}")
            if dimension(RayCone(o.vectors)) != d:
                problems.append(f"dim {d}: representative has dimension {dimension(RayCone(o.vectors))}")
            if check_realizable and not realizability(o.vectors).realizable:
                problems.append(f"dim {d}: representative {o.vectors.pairs} is not realizable")
    for d, orbits in report.dims.items():
        for a, b in itertools.combinations(orbits, 2):
            if are_equivalent(a.vectors, b.vectors) is not None:
                problems.append(f"dim {d}: representatives {a.vectors.pairs} and {b.vectors.pairs} are equivalent")
    return problems


# ------------------------------------------------------------ face engine


def collect_faces(domains: Sequence[RayCone], dims: Iterable[int] | None = None) -> list[VectorConfig]:
    wanted = None if dims is None else set(dims)
    out = []
    for dom in domains:
        if wanted is not None and is_simplicial(dom):
            # every generator subset is a face of the same dimension as its size
            for k in sorted(d for d in wanted if 1 <= d <= len(dom)):
                out.extend(dom.generators.subset(s) for s in itertools.combinations(range(len(dom)), k))
            continue
        for cert in certified_faces(dom):
            sub = dom.generators.subset(sorted(cert.face))
            if wanted is None or rank_rational(sub.coordinate_rows()) in wanted:
                out.append(sub)
    return out


def classify_faces(
    domains: Sequence[RayCone],
    dims: Iterable[int] | None = None,
    names: Sequence[str] | None = None,
    n_jobs: int = 1,
) -> OrbitReport:
    """Orbits under GL_g(Z) of the faces of ``domains`` with dimension in ``dims``."""
    if not domains:
        raise ValueError("no domains given")
    g = domains[0].g
    if any(d.g != g for d in domains):
        raise ValueError("domains live in different dimensions")
    faces = collect_faces(domains, dims)
    by_dim: dict[int, list[VectorConfig]] = {}
    for f in faces:
        by_dim.setdefault(rank_rational(f.coordinate_rows()), []).append(f)
    out: dict[int, list[Orbit]] = {}
    for d in sorted(by_dim):
        part = orbit_partition(by_dim[d], n_jobs=n_jobs)
        out[d] = [Orbit.of(rep, len(members)) for rep, members in part]
    names = list(names) if names else [f"domain{i}" for i in range(len(domains))]
    prov = {"engine": "faces", "faces_total": str(len(faces)), "dims_requested": _dims_label(dims)}
    return OrbitReport(g, names, out, prov)


def _dims_label(dims) -> str:
    if dims is None:
        return "all"
    return ",".join(str(d) for d in sorted(set(dims)))


# ------------------------------------------------------- extension engine


@dataclass(frozen=True)
class BaseSystem:
    """g linearly independent primitive vectors (one per pair)."""

    vectors: tuple[IntVec, ...]

    def __post_init__(self) -> None:
        g = len(self.vectors)
        if any(len(v) != g for v in self.vectors):
            raise ValueError("a base system needs g vectors in Z^g")
        if any(not is_primitive(v) for v in self.vectors):
            raise ValueError("base vectors must be primitive")
        if det(self.matrix) == 0:
            raise ValueError("base vectors are linearly dependent")

    @classmethod
    def of(cls, vectors: Iterable[Sequence[int]]) -> "BaseSystem":
        return cls(tuple(reduce_primitive(v) for v in vectors))

    @property
    def g(self) -> int:
        return len(self.vectors)

    @property
    def matrix(self) -> tuple[tuple[int, ...], ...]:
        # rows are the base vectors
        return tuple(self.vectors)

    @property
    def index(self) -> int:
        return abs(det(self.matrix))

    def config(self) -> VectorConfig:
        return VectorConfig(self.g, self.vectors)


def extension_candidates(base: BaseSystem) -> list[IntVec]:
    """Extension vectors keeping the base of maximal index.

    Replacing base vector j by v gives determinant ``<w_j, v>`` with w_j the
    j-th column of adj(V^T) (V having the base vectors as rows). Requiring all
    of these in ``[-i(L), i(L)]`` bounds the coordinates ``u = W v``; the map is
    injective, so we enumerate u in the box and keep integral preimages
    ``v = V^T u / det``.
    """
    g = base.g
    vt = tuple(zip(*base.matrix))  # columns are base vectors
    dv = det(vt)
    i_l = abs(dv)
    out = set()
    for u in itertools.product(range(-i_l, i_l + 1), repeat=g):
        if sum(1 for x in u if x) < 2:
            continue  # zero, or proportional to a base vector
        num = [sum(vt[r][k] * u[k] for k in range(g)) for r in range(g)]
        if any(x % dv for x in num):
            continue
        v = tuple(x // dv for x in num)
        if is_primitive(v) and reduce_primitive(v) == v:
            out.add(v)
    return sorted(out)


def _candidate_orbits(base: BaseSystem, candidates: list[IntVec]) -> list[IntVec]:
    """One candidate per orbit of the base configuration's automorphism group."""
    group = automorphism_elements(base.config())
    seen: set[IntVec] = set()
    reps = []
    for v in candidates:
        if v in seen:
            continue
        orbit = {reduce_primitive(tuple(sum(r[k] * v[k] for k in range(len(v))) for r in u)) for u in group}
        seen |= orbit
        reps.append(min(orbit))
    return sorted(reps)


def _facets_ok(vectors: Sequence[IntVec], g: int) -> bool:
    for sub in itertools.combinations(vectors, g):
        if not realizability(VectorConfig(g, tuple(sub))).realizable:
            return False
    return True


@dataclass
class ExtensionLog:
    bases_used: int = 0
    bases_rejected: list = field(default_factory=list)
    candidates: int = 0
    candidate_orbits: int = 0
    passed_prefilter: int = 0
    realizable: int = 0


def extend_and_classify(
    bases: Sequence[BaseSystem], n_jobs: int = 1, log: ExtensionLog | None = None
) -> OrbitReport:
    """Orbits of simplicial perfect cones with g+1 pairs extending ``bases``.

    Bases that are not realizable are skipped and listed in the provenance.
    """
    if not bases:
        raise ValueError("no base systems given")
    g = bases[0].g
    log = log if log is not None else ExtensionLog()
    found: list[VectorConfig] = []
    for base in bases:
        if base.g != g:
            raise ValueError("base systems of different dimensions")
        try:
            ok = realizability(base.config()).realizable
        except IterationCapExceeded as exc:
            raise IterationCapExceeded(f"base {base.vectors}: {exc}") from exc
        if not ok:
            log.bases_rejected.append(base.vectors)
            continue
        log.bases_used += 1
        cands = extension_candidates(base)
        reps = _candidate_orbits(base, cands)
        log.candidates += len(cands)
        log.candidate_orbits += len(reps)
        for v in reps:
            system = base.vectors + (v,)
            # maximal index among g-subsets is built into the candidate bounds
            assert all(abs(det(s)) <= base.index for s in itertools.combinations(system, g))
            if not _facets_ok(system, g):
                continue
            log.passed_prefilter += 1
            config = VectorConfig(g, system)
            try:
                verdict = realizability(config)
            except IterationCapExceeded as exc:
                raise IterationCapExceeded(f"extension {system}: {exc}") from exc
            if verdict.realizable and is_simplicial(RayCone(config)):
                log.realizable += 1
                found.append(config)
    part = orbit_partition(found, n_jobs=n_jobs)
    orbits = [Orbit.of(rep, len(members)) for rep, members in part]
    prov = {
        "engine": "extension",
        "bases": [[[str(x) for x in v] for v in b.vectors] for b in bases],
        "bases_rejected": [[[str(x) for x in v] for v in b] for b in log.bases_rejected],
        "candidates": str(log.candidates),
        "candidate_orbits": str(log.candidate_orbits),
        "passed_prefilter": str(log.passed_prefilter),
        "realizable_systems": str(log.realizable),
    }
    return OrbitReport(g, ["extension"], {g + 1: orbits} if orbits else {}, prov)


def hermite_base_matrices(g: int, index: int) -> Iterable[tuple[IntVec, ...]]:
    """Column vectors of every upper triangular Hermite form with determinant ``index``.

    Each GL_g(Z)-orbit of ordered bases (under ``V -> U V``) has exactly one
    such representative: positive diagonal, entries above a pivot reduced
    modulo it.
    """

    def diagonals(k: int, remaining: int):
        if k == 1:
            yield (remaining,)
            return
        for d in range(1, remaining + 1):
            if remaining % d == 0:
                for rest in diagonals(k - 1, remaining // d):
                    yield (d,) + rest

    for diag in diagonals(g, index):
        slots = [(i, j) for j in range(g) for i in range(j)]
        for vals in itertools.product(*(range(diag[j]) for i, j in slots)):
            h = [[0] * g for _ in range(g)]
            for k in range(g):
                h[k][k] = diag[k]
            for (i, j), x in zip(slots, vals):
                h[i][j] = x
            yield tuple(tuple(h[i][j] for i in range(g)) for j in range(g))


def realizable_bases(g: int, max_index: int = 2, n_jobs: int = 1) -> list[BaseSystem]:
    """Orbit representatives of realizable g-pair spanning configurations.

    Enumerated independently of any perfect domain: all Hermite forms up to
    ``max_index``, deduplicated as pair sets, then filtered by realizability.
    """
    configs = []
    for idx in range(1, max_index + 1):
        for cols in hermite_base_matrices(g, idx):
            if all(is_primitive(v) for v in cols):
                configs.append(VectorConfig.from_vectors(cols, g))
    reps = [rep for rep, _ in orbit_partition(configs, n_jobs=n_jobs)]
    out = []
    for rep in reps:
        if realizability(rep).realizable:
            out.append(BaseSystem(rep.pairs))
    return out


# ------------------------------------------------------- low-dimension checks


@dataclass
class TheoremCheck:
    name: str
    passed: bool
    detail: str


@dataclass
class TheoremReport:
    g: int
    report: OrbitReport
    checks: list[TheoremCheck]
    scope: str

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {
            "g": str(self.g),
            "scope": self.scope,
            "passed": self.passed,
            "orbit_counts": {str(d): str(n) for d, n in self.report.counts().items()},
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks],
        }


def verify_theorems(g: int, n_jobs: int = 1) -> TheoremReport:
    """Check the low-dimensional basicness/simpliciality claims on built-in domains.

    (a) every face orbit of dimension <= 9 is basic; (b) dimension-10 orbits are
    simplicial except the D4 cone (only at g = 4); (c) every face whose
    generators span R^g and whose dimension is g, g+1 or g+2 is simplicial.
    """
    if g not in data.DOMAINS_BY_G:
        raise ValueError("built-in perfect domains exist only for g = 2, 3, 4")
    names = data.DOMAINS_BY_G[g]
    domains = [builtin_domain(n) for n in names]
    report = classify_faces(domains, None, names, n_jobs=n_jobs)
    checks = []

    bad = [(d, o.vectors.pairs) for d, orbits in report.dims.items() if d <= 9 for o in orbits if not o.basic]
    checks.append(TheoremCheck(
        "faces of dimension <= 9 are basic", not bad,
        f"{sum(report.count(d) for d in report.dims if d <= 9)} orbits checked"
        + (f"; offending: {bad}" if bad else ""),
    ))

    ten = report.dims.get(10, [])
    non_simp = [o for o in ten if not o.simplicial]
    if g < 4:
        ok = not ten
        detail = "no faces of dimension 10 exist"
    else:
        d4 = builtin_domain("D4").generators
        ok = len(non_simp) == 1 and are_equivalent(non_simp[0].vectors, d4) is not None
        detail = f"{len(ten)} orbits of dimension 10, {len(non_simp)} non-simplicial" + (
            " (the D4 cone)" if ok else f": {[o.vectors.pairs for o in non_simp]}"
        )
    checks.append(TheoremCheck("dimension-10 orbits simplicial except D4", ok, detail))

    faces = collect_faces(domains)
    offending = []
    n_checked = 0
    for f in faces:
        if f.rank() != g:
            continue
        d = rank_rational(f.coordinate_rows())
        if d in (g, g + 1, g + 2):
            n_checked += 1
            if d != len(f):
                offending.append(f.pairs)
    checks.append(TheoremCheck(
        "spanning faces of dimension g, g+1, g+2 are simplicial", not offending,
        f"{n_checked} faces checked exhaustively" + (f"; offending: {offending}" if offending else ""),
    ))
    scope = f"exhaustive over the faces of the built-in perfect domains {', '.join(names)} at g={g}"
    return TheoremReport(g, report, checks, scope)
