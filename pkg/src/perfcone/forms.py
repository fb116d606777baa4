"""Quadratic forms, rank-1 forms and vector configurations.

Symmetric matrices are identified with vectors of length g(g+1)/2 through the
basis ``{E_ii} + {E_ij + E_ji : i < j}`` of Sym^2(Z^g): the diagonal entries
come first, followed by the strict upper triangle row by row.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .exactlinalg import Matrix, as_matrix, rank_rational, smith_normal_form

IntVec = tuple[int, ...]


def _check_symmetric(rows: Sequence[Sequence]) -> None:
    n = len(rows)
    for i, row in enumerate(rows):
        if len(row) != n:
            raise ValueError("form must be square")
        for j in range(i):
            if row[j] != rows[j][i]:
                raise ValueError(f"form is not symmetric at entry ({i + 1},{j + 1})")


@dataclass(frozen=True)
class SymForm:
    """A symmetric g x g matrix with int or Fraction entries."""

    entries: tuple[tuple, ...]

    def __post_init__(self) -> None:
        _check_symmetric(self.entries)

    @classmethod
    def of(cls, rows: Sequence[Sequence]) -> "SymForm":
        def conv(x):
            if isinstance(x, Fraction):
                return int(x) if x.denominator == 1 else x
            if isinstance(x, int):
                return x
            f = Fraction(x)
            return int(f) if f.denominator == 1 else f

        return cls(tuple(tuple(conv(x) for x in row) for row in rows))

    @property
    def g(self) -> int:
        return len(self.entries)

    @property
    def is_integral(self) -> bool:
        return all(isinstance(x, int) for row in self.entries for x in row)

    def __getitem__(self, ij: tuple[int, int]):
        i, j = ij
        return self.entries[i][j]

    def __call__(self, x: Sequence[int]):
        return evaluate(self, x)

    def scaled(self, factor) -> "SymForm":
        return SymForm.of([[factor * x for x in row] for row in self.entries])

    def transformed(self, u: Sequence[Sequence[int]]) -> "SymForm":
        """The form ``u^T Q u`` (coordinates change ``x -> u x``)."""
        g = self.g
        q = self.entries
        tmp = [[sum(q[i][k] * u[k][j] for k in range(g)) for j in range(g)] for i in range(g)]
        return SymForm.of(
            [[sum(u[k][i] * tmp[k][j] for k in range(g)) for j in range(g)] for i in range(g)]
        )


def rank1_form(v: Sequence[int]) -> SymForm:
    """The rank-1 form ``v v^T``."""
    if not any(v):
        raise ValueError("rank-1 form of the zero vector")
    return SymForm(tuple(tuple(a * b for b in v) for a in v))


def reduce_primitive(v: Sequence[int]) -> IntVec:
    """Divide by the content and flip so the first nonzero coordinate is positive."""
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("cannot reduce the zero vector")
    out = [x // g for x in v]
    first = next(x for x in out if x)
    if first < 0:
        out = [-x for x in out]
    return tuple(out)


def is_primitive(v: Sequence[int]) -> bool:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g == 1


def sym2_dim(g: int) -> int:
    return g * (g + 1) // 2


def sym2_coords(q: SymForm | Sequence[Sequence[int]]) -> tuple:
    """Coordinates ``(Q_11, ..., Q_gg, Q_12, Q_13, ..., Q_{g-1,g})``."""
    e = q.entries if isinstance(q, SymForm) else q
    g = len(e)
    return tuple(e[i][i] for i in range(g)) + tuple(
        e[i][j] for i in range(g) for j in range(i + 1, g)
    )


def from_sym2_coords(coords: Sequence, g: int) -> SymForm:
    """Inverse of :func:`sym2_coords`."""
    if len(coords) != sym2_dim(g):
        raise ValueError(f"expected {sym2_dim(g)} coordinates for g={g}")
    m = [[0] * g for _ in range(g)]
    for i in range(g):
        m[i][i] = coords[i]
    k = g
    for i in range(g):
        for j in range(i + 1, g):
            m[i][j] = m[j][i] = coords[k]
            k += 1
    return SymForm.of(m)


def rank1_coords(v: Sequence[int]) -> tuple[int, ...]:
    """``sym2_coords(rank1_form(v))`` without building the matrix."""
    g = len(v)
    return tuple(v[i] * v[i] for i in range(g)) + tuple(
        v[i] * v[j] for i in range(g) for j in range(i + 1, g)
    )


def value_row(x: Sequence[int]) -> tuple[int, ...]:
    """Coefficients c with ``Q[x] = c . sym2_coords(Q)`` (off-diagonals count twice)."""
    g = len(x)
    return tuple(x[i] * x[i] for i in range(g)) + tuple(
        2 * x[i] * x[j] for i in range(g) for j in range(i + 1, g)
    )


def evaluate(q: SymForm, x: Sequence[int]):
    """``x^T Q x``."""
    e = q.entries
    if len(x) != len(e):
        raise ValueError(f"dimension mismatch: form has g={len(e)}, vector has {len(x)}")
    return sum(x[i] * sum(e[i][j] * x[j] for j in range(len(x)) if x[j]) for i in range(len(x)) if x[i])


def bilinear(q: SymForm, x: Sequence[int], y: Sequence[int]):
    e = q.entries
    return sum(x[i] * sum(e[i][j] * y[j] for j in range(len(y))) for i in range(len(x)))


def functional_value(functional: Sequence, form_coords: Sequence) -> Fraction | int:
    """Pair a functional on Sym^2 (in dual coordinates) with a form's coordinates."""
    return sum(a * b for a, b in zip(functional, form_coords))


# ---------------------------------------------------------------- configs


@dataclass(frozen=True)
class VectorConfig:
    """A finite set of +-pairs of primitive vectors in Z^g.

    Each pair is stored once, sign-normalized so the first nonzero coordinate
    is positive. Order is preserved as given (generator indices refer to it).
    """

    g: int
    pairs: tuple[IntVec, ...]

    def __post_init__(self) -> None:
        seen = set()
        for v in self.pairs:
            if len(v) != self.g:
                raise ValueError(f"vector {v} does not have {self.g} coordinates")
            if not is_primitive(v):
                raise ValueError(f"vector {v} is not primitive")
            if reduce_primitive(v) != tuple(v):
                raise ValueError(f"vector {v} is not sign-normalized")
            if v in seen:
                raise ValueError(f"vector {v} listed twice (up to sign)")
            seen.add(v)

    @classmethod
    def from_vectors(cls, vectors: Iterable[Sequence[int]], g: int | None = None) -> "VectorConfig":
        """Build from arbitrary nonzero vectors; reduces them and drops repeated pairs."""
        out: list[IntVec] = []
        seen = set()
        for v in vectors:
            r = reduce_primitive(tuple(int(x) for x in v))
            if r not in seen:
                seen.add(r)
                out.append(r)
        if g is None:
            if not out:
                raise ValueError("empty configuration needs an explicit g")
            g = len(out[0])
        return cls(g, tuple(out))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def canonical(self) -> "VectorConfig":
        """Same pair set, sorted lexicographically."""
        return VectorConfig(self.g, tuple(sorted(self.pairs)))

    def key(self) -> tuple:
        """Hashable identity of the pair set (order independent)."""
        return (self.g, tuple(sorted(self.pairs)))

    def pair_set(self) -> frozenset[IntVec]:
        return frozenset(self.pairs)

    def rank(self) -> int:
        return rank_rational(self.pairs) if self.pairs else 0

    def coordinate_rows(self) -> Matrix:
        """The Sym^2 coordinates of the rank-1 forms, one row per pair."""
        return tuple(rank1_coords(v) for v in self.pairs)

    def characteristic_form(self) -> SymForm:
        g = self.g
        m = [[0] * g for _ in range(g)]
        for v in self.pairs:
            for i in range(g):
                if v[i]:
                    for j in range(g):
                        m[i][j] += v[i] * v[j]
        return SymForm.of(m)

    def subset(self, indices: Iterable[int]) -> "VectorConfig":
        return VectorConfig(self.g, tuple(self.pairs[i] for i in indices))

    def image(self, u: Sequence[Sequence[int]]) -> "VectorConfig":
        """Apply ``v -> u v`` to every pair."""
        return VectorConfig.from_vectors(
            (tuple(sum(r[k] * v[k] for k in range(self.g)) for r in u) for v in self.pairs),
            g=len(u),
        )

    def serialize(self) -> str:
        lines = [f"{self.g} {len(self.pairs)}"]
        lines += [" ".join(str(x) for x in v) for v in self.pairs]
        return "\n".join(lines) + "\n"


class ParseError(ValueError):
    """Malformed input file; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


def _data_lines(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        s = raw.split("#", 1)[0].strip()
        if s:
            out.append((no, s.split()))
    return out


def _ints(tokens: list[str], line: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(tokens)!r}", line) from None


def parse_config(text: str) -> VectorConfig:
    """Parse the ``g M`` header + M vector lines format."""
    lines = _data_lines(text)
    if not lines:
        raise ParseError("empty vector configuration file")
    no, head = lines[0]
    hdr = _ints(head, no)
    if len(hdr) != 2 or hdr[0] < 1 or hdr[1] < 0:
        raise ParseError("header must be 'g M' with g >= 1", no)
    g, count = hdr
    body = lines[1:]
    if len(body) != count:
        raise ParseError(f"header announces {count} vectors, found {len(body)}", no)
    vecs = []
    seen = set()
    for no, toks in body:
        v = _ints(toks, no)
        if len(v) != g:
            raise ParseError(f"expected {g} coordinates, got {len(v)}", no)
        if not any(v):
            raise ParseError("zero vector", no)
        r = reduce_primitive(v)
        if r in seen:
            raise ParseError(f"vector {tuple(v)} repeats an earlier pair", no)
        seen.add(r)
        vecs.append(r)
    return VectorConfig(g, tuple(vecs))


def read_config(path) -> VectorConfig:
    with open(path) as fh:
        return parse_config(fh.read())


# -------------------------------------------------------------- saturation


@dataclass(frozen=True)
class Saturation:
    """Coordinates of a configuration inside its saturated lattice.

    ``coord_map`` (d x g) sends a vector of the span to its coordinates in the
    basis given by the columns of ``basis`` (g x d); ``transform`` is the full
    unimodular g x g matrix whose first d rows are ``coord_map``.
    """

    config: VectorConfig
    coord_map: Matrix
    basis: Matrix
    transform: Matrix

    def lift(self, w: Sequence[int]) -> IntVec:
        return tuple(sum(self.basis[i][k] * w[k] for k in range(len(w))) for i in range(len(self.basis)))


def _unimodular_inverse(u: Matrix) -> Matrix:
    from .exactlinalg import inverse_rational

    inv = inverse_rational(u)
    if inv is None:
        raise ValueError("matrix is singular")
    out = as_matrix([[int(x) for x in row] for row in inv])
    if any(Fraction(x) != y for r1, r2 in zip(out, inv) for x, y in zip(r1, r2)):
        raise ValueError("matrix is not unimodular")
    return out


def saturate(config: VectorConfig) -> tuple[VectorConfig, Saturation]:
    """Rewrite ``config`` in a basis of ``(span config) & Z^g``.

    Uses the left transform ``S`` of the Smith form of the g x M matrix of
    column vectors: ``S V`` vanishes below row d, so the first d rows of ``S``
    give coordinates on the saturation.
    """
    if not config.pairs:
        raise ValueError("cannot saturate an empty configuration")
    cols = tuple(zip(*config.pairs))  # g x M
    snf = smith_normal_form(cols)
    d = snf.rank
    s = snf.left_transform
    coord_map = s[:d]
    inv = _unimodular_inverse(s)
    basis = tuple(row[:d] for row in inv)
    images = [tuple(sum(r[k] * v[k] for k in range(config.g)) for r in coord_map) for v in config.pairs]
    sat = VectorConfig.from_vectors(images, g=d)
    if len(sat) != len(config):
        raise AssertionError("saturation merged distinct pairs")
    return sat, Saturation(sat, coord_map, basis, s)
