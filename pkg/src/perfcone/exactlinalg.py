"""Exact integer and rational linear algebra.

Matrices are plain nested sequences of Python ints (or Fractions where noted);
results are returned as tuples of tuples so they can be hashed and shared
freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Literal, Sequence

Matrix = tuple[tuple[int, ...], ...]


def as_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    """Copy ``rows`` into an immutable integer matrix, checking the shape."""
    out = tuple(tuple(int(x) for x in row) for row in rows)
    if out and len({len(r) for r in out}) != 1:
        raise ValueError("ragged matrix")
    return out


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(a: Sequence[Sequence]) -> tuple:
    return tuple(zip(*a))


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    bt = tuple(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(a: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def _bareiss(a: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form. Returns the reduced rows and pivot columns."""
    m = [list(map(int, row)) for row in a]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        for i in range(r + 1, nrows):
            mic = m[i][c]
            row_i, row_r = m[i], m[r]
            for j in range(c, ncols):
                row_i[j] = (piv * row_i[j] - mic * row_r[j]) // prev
        prev = piv
        pivots.append(c)
        r += 1
    return m, pivots


def rank_rational(a: Sequence[Sequence[int]]) -> int:
    """Rank over Q, by fraction-free (Bareiss) elimination."""
    if not a or not a[0]:
        return 0
    return len(_bareiss(a)[1])


def pivot_columns(a: Sequence[Sequence[int]]) -> list[int]:
    """Columns carrying the pivots of the echelon form of ``a``."""
    return _bareiss(a)[1]


def det(a: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix (Bareiss)."""
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    m = [list(map(int, row)) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            p = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if p is None:
                return 0
            m[k], m[p] = m[p], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def det_rational(a: Sequence[Sequence]) -> Fraction:
    """Determinant of a square rational matrix by Gaussian elimination."""
    m = [[Fraction(x) for x in row] for row in a]
    n = len(m)
    result = Fraction(1)
    for k in range(n):
        p = next((i for i in range(k, n) if m[i][k] != 0), None)
        if p is None:
            return Fraction(0)
        if p != k:
            m[k], m[p] = m[p], m[k]
            result = -result
        result *= m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            if f:
                for j in range(k, n):
                    m[i][j] -= f * m[k][j]
    return result


def adjugate(a: Sequence[Sequence[int]]) -> Matrix:
    """Classical adjoint: ``a @ adjugate(a) == det(a) * I``.

    Computed cofactor by cofactor so that singular inputs are handled as well.
    """
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("adjugate of a non-square matrix")
    if n == 1:
        return ((1,),)
    cof = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(map(tuple, a)) if k != i]
            cof[i][j] = (-1) ** (i + j) * det(minor)
    return tuple(tuple(cof[j][i] for j in range(n)) for i in range(n))


def solve_rational(a: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...] | None:
    """Solve ``a x = b`` for square nonsingular ``a``; None if singular."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    for k in range(n):
        p = next((i for i in range(k, n) if m[i][k] != 0), None)
        if p is None:
            return None
        m[k], m[p] = m[p], m[k]
        inv = 1 / m[k][k]
        m[k] = [x * inv for x in m[k]]
        for i in range(n):
            if i != k and m[i][k]:
                f = m[i][k]
                m[i] = [x - f * y for x, y in zip(m[i], m[k])]
    return tuple(row[n] for row in m)


def inverse_rational(a: Sequence[Sequence]) -> tuple[tuple[Fraction, ...], ...] | None:
    n = len(a)
    cols = []
    for j in range(n):
        col = solve_rational(a, [int(i == j) for i in range(n)])
        if col is None:
            return None
        cols.append(col)
    return transpose(cols)


def nullspace_integer(a: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Primitive integer basis of the right kernel of ``a``."""
    ncols = len(a[0])
    rows = [[Fraction(x) for x in row] for row in a]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -rows[i][free]
        basis.append(primitive_integer(vec))
    return basis


def primitive_integer(v: Sequence) -> tuple[int, ...]:
    """Clear denominators of a rational vector and divide out the content."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


# --------------------------------------------------------------------- Smith


@dataclass(frozen=True)
class SnfResult:
    """Smith form ``left @ A @ right == diag(divisors)`` (padded with zeros)."""

    divisors: tuple[int, ...]
    left_transform: Matrix
    right_transform: Matrix

    @property
    def rank(self) -> int:
        return len(self.divisors)

    @property
    def product(self) -> int:
        out = 1
        for d in self.divisors:
            out *= d
        return out


def smith_normal_form(a: Sequence[Sequence[int]]) -> SnfResult:
    """Smith normal form with unimodular witnesses.

    Elimination pivots on the entry of smallest absolute value in the remaining
    block, which keeps intermediate entries small for the matrices met here.
    The zero matrix yields an empty divisor list.
    """
    m = [list(map(int, row)) for row in a]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    left = [[int(i == j) for j in range(nr)] for i in range(nr)]
    right = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def swap_rows(i: int, j: int) -> None:
        m[i], m[j] = m[j], m[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i: int, j: int) -> None:
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def add_row(dst: int, src: int, f: int) -> None:
        # row_dst += f * row_src
        m[dst] = [x + f * y for x, y in zip(m[dst], m[src])]
        left[dst] = [x + f * y for x, y in zip(left[dst], left[src])]

    def add_col(dst: int, src: int, f: int) -> None:
        for row in m:
            row[dst] += f * row[src]
        for row in right:
            row[dst] += f * row[src]

    divisors: list[int] = []
    t = 0
    while t < min(nr, nc):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                x = m[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            piv = m[t][t]
            dirty = False
            for i in range(t + 1, nr):
                if m[i][t]:
                    add_row(i, t, -(m[i][t] // piv))
                    if m[i][t]:
                        dirty = True
            for j in range(t + 1, nc):
                if m[t][j]:
                    add_col(j, t, -(m[t][j] // piv))
                    if m[t][j]:
                        dirty = True
            if dirty:
                # move the smallest leftover remainder into the pivot slot
                cand = [(abs(m[i][t]), i, t) for i in range(t + 1, nr) if m[i][t]]
                cand += [(abs(m[t][j]), t, j) for j in range(t + 1, nc) if m[t][j]]
                _, i, j = min(cand)
                if j == t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            # row and column cleared; enforce divisibility of the remaining block
            bad = next(
                ((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc) if m[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if m[t][t] < 0:
            m[t] = [-x for x in m[t]]
            left[t] = [-x for x in left[t]]
        divisors.append(m[t][t])
        t += 1
    return SnfResult(tuple(divisors), as_matrix(left), as_matrix(right))


def maximal_minor_gcd(a: Sequence[Sequence[int]]) -> int:
    """gcd of all maximal minors of a matrix with full row rank over Q."""
    from itertools import combinations

    rows = as_matrix(a)
    r = len(rows)
    nc = len(rows[0])
    if rank_rational(rows) != r:
        raise ValueError("rows are linearly dependent over Q")
    g = 0
    for cols in combinations(range(nc), r):
        g = gcd(g, det([[row[c] for c in cols] for row in rows]))
        if g == 1:
            break
    return g


# ------------------------------------------------------------------------ LP


@dataclass(frozen=True)
class RationalLP:
    """A linear program over free rational variables.

    ``equalities`` and ``inequalities`` hold ``(coefficients, rhs)`` pairs; the
    inequalities read ``coefficients . x >= rhs``.
    """

    variables: int
    objective: tuple[Fraction, ...]
    equalities: tuple[tuple[tuple[Fraction, ...], Fraction], ...] = ()
    inequalities: tuple[tuple[tuple[Fraction, ...], Fraction], ...] = ()
    sense: Literal["maximize", "minimize"] = "maximize"

    def __post_init__(self) -> None:
        for row, _ in self.equalities + self.inequalities:
            if len(row) != self.variables:
                raise ValueError("constraint row has wrong length")
        if len(self.objective) != self.variables:
            raise ValueError("objective has wrong length")
        if self.sense not in ("maximize", "minimize"):
            raise ValueError(f"unknown sense {self.sense!r}")

    @classmethod
    def build(cls, objective, equalities=(), inequalities=(), sense="maximize") -> "RationalLP":
        conv = lambda rows: tuple(
            (tuple(Fraction(x) for x in r), Fraction(b)) for r, b in rows
        )
        obj = tuple(Fraction(x) for x in objective)
        return cls(len(obj), obj, conv(equalities), conv(inequalities), sense)


@dataclass(frozen=True)
class LPResult:
    status: Literal["optimal", "unbounded", "infeasible"]
    value: Fraction | None = None
    point: tuple[Fraction, ...] | None = None
    # row multipliers proving infeasibility are not tracked; the status is final
    iterations: int = field(default=0, compare=False)


class _Tableau:
    """Dense simplex tableau for ``min c.x, A x = b, x >= 0`` with Bland's rule."""

    def __init__(self, a: list[list[Fraction]], b: list[Fraction]):
        self.rows = [row + [rhs] for row, rhs in zip(a, b)]
        self.ncols = len(a[0]) if a else 0
        self.basis: list[int] = []
        self.iterations = 0

    def pivot(self, r: int, c: int) -> None:
        rows = self.rows
        prow = rows[r]
        inv = 1 / prow[c]
        if inv != 1:
            prow = rows[r] = [x * inv for x in prow]
        nz = [j for j, x in enumerate(prow) if x]
        for i, row in enumerate(rows):
            if i != r:
                f = row[c]
                if f:
                    for j in nz:
                        row[j] -= f * prow[j]
        self.basis[r] = c
        self.iterations += 1

    def run(self, cost: list[Fraction], allowed: int) -> bool:
        """Minimize ``cost`` over columns ``< allowed``. False when unbounded."""
        rows = self.rows
        while True:
            # reduced costs of nonbasic columns
            basic_cost = [cost[j] for j in self.basis]
            enter = None
            for c in range(allowed):
                if c in self.basis:
                    continue
                red = cost[c] - sum(bc * row[c] for bc, row in zip(basic_cost, rows) if bc)
                if red < 0:
                    enter = c
                    break
            if enter is None:
                return True
            leave = None
            best = None
            for i, row in enumerate(rows):
                if row[enter] > 0:
                    ratio = row[-1] / row[enter]
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[leave]):
                        best, leave = ratio, i
            if leave is None:
                return False
            self.pivot(leave, enter)


def solve_lp(lp: RationalLP) -> LPResult:
    """Exact two-phase primal simplex with Bland's anti-cycling rule.

    Free variables are split into positive and negative parts; ``>=`` rows get
    surplus columns. No floating point is involved at any step.
    """
    n = lp.variables
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    n_ineq = len(lp.inequalities)
    for k, (coef, b) in enumerate(lp.equalities + lp.inequalities):
        row = list(coef) + [-x for x in coef]
        surplus = [Fraction(0)] * n_ineq
        if k >= len(lp.equalities):
            surplus[k - len(lp.equalities)] = Fraction(-1)
        row += surplus
        if b < 0:
            row = [-x for x in row]
            b = -b
        rows.append(row)
        rhs.append(b)
    nstruct = 2 * n + n_ineq
    sign = -1 if lp.sense == "maximize" else 1
    cost = [sign * c for c in lp.objective] + [-sign * c for c in lp.objective]
    cost += [Fraction(0)] * n_ineq

    m = len(rows)
    if m == 0:
        if any(cost):
            return LPResult("unbounded")
        return LPResult("optimal", Fraction(0), tuple(Fraction(0) for _ in range(n)))

    # phase 1: artificial columns form the starting basis
    a = [row + [Fraction(int(i == j)) for j in range(m)] for i, row in enumerate(rows)]
    tab = _Tableau(a, rhs)
    tab.basis = [nstruct + i for i in range(m)]
    phase1 = [Fraction(0)] * nstruct + [Fraction(1)] * m
    tab.run(phase1, nstruct + m)
    if any(tab.rows[i][-1] for i, j in enumerate(tab.basis) if j >= nstruct):
        return LPResult("infeasible", iterations=tab.iterations)
    # drive remaining zero-level artificials out of the basis, drop redundant rows
    for i in range(m - 1, -1, -1):
        if tab.basis[i] >= nstruct:
            c = next((c for c in range(nstruct) if tab.rows[i][c] != 0), None)
            if c is None:
                del tab.rows[i]
                del tab.basis[i]
            else:
                tab.pivot(i, c)
    tab.rows = [row[:nstruct] + [row[-1]] for row in tab.rows]
    if not tab.run(cost + [], nstruct):
        return LPResult("unbounded", iterations=tab.iterations)
    x = [Fraction(0)] * nstruct
    for i, j in enumerate(tab.basis):
        x[j] = tab.rows[i][-1]
    point = tuple(x[i] - x[n + i] for i in range(n))
    value = sum((c * p for c, p in zip(lp.objective, point)), Fraction(0))
    return LPResult("optimal", value, point, tab.iterations)
