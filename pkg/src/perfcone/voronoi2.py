"""Cones spanned by general symmetric matrices (second Voronoi cones).

Generators need not have rank 1. The cone lives in Sym^2(Z^g) with the same
coordinates as everywhere else, so dimension, simpliciality and basicness are
read off the stacked Sym^2 coordinate rows.

File format: a header ``g K`` followed by K blocks of g rows of g integers.
Blocks are usually separated by blank lines; ``#`` starts a comment.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import data
from .exactlinalg import rank_rational, smith_normal_form
from .forms import ParseError, SymForm, _data_lines, _ints, sym2_coords


@dataclass(frozen=True)
class MatrixCone:
    """The cone ``sum_k R_+ M_k`` over symmetric integer matrices ``M_k``."""

    g: int
    generators: tuple[SymForm, ...]

    def __post_init__(self) -> None:
        if not self.generators:
            raise ValueError("a cone needs at least one generator")
        for m in self.generators:
            if m.g != self.g:
                raise ValueError(f"generator of size {m.g} in a cone with g={self.g}")
            if not m.is_integral:
                raise ValueError("generators must be integral")

    @classmethod
    def of(cls, matrices: Iterable[Sequence[Sequence[int]]]) -> "MatrixCone":
        gens = tuple(SymForm.of(m) for m in matrices)
        if not gens:
            raise ValueError("a cone needs at least one generator")
        return cls(gens[0].g, gens)

    def __len__(self) -> int:
        return len(self.generators)

    @property
    def rows(self) -> list[tuple[int, ...]]:
        return [sym2_coords(m) for m in self.generators]

    def psd_flags(self) -> tuple[bool, ...]:
        return tuple(is_psd(m) for m in self.generators)


def is_psd(m: SymForm) -> bool:
    """Exact positive semidefiniteness by symmetric elimination."""
    a = [[Fraction(x) for x in row] for row in m.entries]
    n = len(a)
    for k in range(n):
        p = a[k][k]
        if p < 0:
            return False
        if p == 0:
            # a zero pivot of a PSD matrix forces a zero row
            if any(a[k][j] != 0 for j in range(k + 1, n)):
                return False
            continue
        for i in range(k + 1, n):
            f = a[i][k] / p
            if f:
                for j in range(k + 1, n):
                    a[i][j] -= f * a[k][j]
    return True


def cone_dimension(c: MatrixCone) -> int:
    return rank_rational(c.rows)


def is_simplicial_matrix_cone(c: MatrixCone) -> bool:
    return cone_dimension(c) == len(c)


def is_basic_matrix_cone(c: MatrixCone) -> bool:
    """Generators extend to a Z-basis of Sym^2(Z^g).

    The generators are taken to be the primitive ray generators of the cone;
    that is the caller's responsibility.
    """
    divisors = smith_normal_form(c.rows).divisors
    return len(divisors) == len(c) and all(d == 1 for d in divisors)


def sublattice_index(c: MatrixCone) -> int:
    out = 1
    for d in smith_normal_form(c.rows).divisors:
        out *= d
    return out


def pad_to(c: MatrixCone, big_g: int) -> MatrixCone:
    """Embed every generator in the top-left block of a ``big_g x big_g`` zero matrix."""
    if big_g < c.g:
        raise ValueError(f"cannot pad a g={c.g} cone down to {big_g}")
    if big_g == c.g:
        return c
    gens = []
    for m in c.generators:
        rows = [list(r) + [0] * (big_g - c.g) for r in m.entries]
        rows += [[0] * big_g for _ in range(big_g - c.g)]
        gens.append(SymForm.of(rows))
    return MatrixCone(big_g, tuple(gens))


def embedded_cones() -> list[MatrixCone]:
    """The two explicit non-simplicial cones with four 5x5 generators."""
    return [MatrixCone.of(gens) for gens in data.SECOND_VORONOI_CONES]


# ---------------------------------------------------------------- file I/O


def serialize_cones(cones: Sequence[MatrixCone]) -> str:
    """Concatenated ``g K`` blocks; inverse of :func:`parse_cones`."""
    chunks = []
    for c in cones:
        lines = [f"{c.g} {len(c)}"]
        for m in c.generators:
            lines.append("")
            lines += [" ".join(str(x) for x in row) for row in m.entries]
        chunks.append("\n".join(lines) + "\n")
    return "\n".join(chunks)


def parse_cones(text: str) -> list[MatrixCone]:
    """Parse zero or more cones; each starts with its own ``g K`` header."""
    lines = _data_lines(text)
    cones = []
    pos = 0
    while pos < len(lines):
        no, head = lines[pos]
        hdr = _ints(head, no)
        if len(hdr) != 2 or hdr[0] < 1 or hdr[1] < 1:
            raise ParseError("cone header must be 'g K' with g, K >= 1", no)
        g, k = hdr
        pos += 1
        mats = []
        for _ in range(k):
            if pos + g > len(lines):
                raise ParseError(f"cone announces {k} matrices of size {g}, file ends early", no)
            block = lines[pos:pos + g]
            rows = []
            for lno, toks in block:
                row = _ints(toks, lno)
                if len(row) != g:
                    raise ParseError(f"expected {g} entries, got {len(row)}", lno)
                rows.append(row)
            for i in range(g):
                for j in range(i):
                    if rows[i][j] != rows[j][i]:
                        raise ParseError(
                            f"matrix is not symmetric: entry ({i + 1},{j + 1}) = {rows[i][j]} "
                            f"but ({j + 1},{i + 1}) = {rows[j][i]}", block[i][0],
                        )
            mats.append(SymForm.of(rows))
            pos += g
        cones.append(MatrixCone(g, tuple(mats)))
    return cones


def ingest_cone_file(path) -> list[MatrixCone]:
    with open(path) as fh:
        return parse_cones(fh.read())
