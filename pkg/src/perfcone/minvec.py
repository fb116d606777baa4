"""Exact short vector enumeration for rational positive definite forms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, isqrt
from typing import Sequence

from .exactlinalg import primitive_integer, solve_rational
from .forms import IntVec, SymForm, VectorConfig, evaluate, reduce_primitive


class NotPositiveDefinite(ValueError):
    """Raised when an operation needs a positive definite form."""


@dataclass(frozen=True)
class MinVecResult:
    minimum: Fraction
    pairs: VectorConfig


def ldl(q: SymForm) -> tuple[list[list[Fraction]], list[Fraction]] | None:
    """Exact ``Q = L D L^T`` with unit lower-triangular L.

    Returns None as soon as a pivot is not strictly positive.
    """
    g = q.g
    a = [[Fraction(x) for x in row] for row in q.entries]
    lo = [[Fraction(int(i == j)) for j in range(g)] for i in range(g)]
    d: list[Fraction] = []
    for j in range(g):
        dj = a[j][j] - sum(lo[j][k] ** 2 * d[k] for k in range(j))
        if dj <= 0:
            return None
        d.append(dj)
        for i in range(j + 1, g):
            lo[i][j] = (a[i][j] - sum(lo[i][k] * lo[j][k] * d[k] for k in range(j))) / dj
    return lo, d


def is_positive_definite(q: SymForm) -> bool:
    """Sylvester's criterion, evaluated through exact LDL pivots."""
    return ldl(q) is not None


def nonpositive_direction(q: SymForm) -> IntVec | None:
    """A primitive integer x with ``Q[x] <= 0``, or None when Q is PD.

    Found at the first non-positive pivot k of the LDL decomposition:
    the vector ``(y, 1, 0, ...)`` with ``Q_{k-1} y = -q_k`` has value
    equal to that pivot.
    """
    g = q.g
    a = [[Fraction(x) for x in row] for row in q.entries]
    for k in range(g):
        if k == 0:
            x = [Fraction(0)] * g
            x[0] = Fraction(1)
        else:
            y = solve_rational([row[:k] for row in a[:k]], [-a[i][k] for i in range(k)])
            if y is None:  # earlier minors positive, cannot happen
                raise AssertionError("singular leading block")
            x = list(y) + [Fraction(1)] + [Fraction(0)] * (g - k - 1)
        val = sum(x[i] * sum(a[i][j] * x[j] for j in range(g)) for i in range(g))
        if val <= 0:
            v = primitive_integer(x)
            assert evaluate(q, v) <= 0
            return reduce_primitive(v)
    return None


def _coordinate_range(center: Fraction, radius_sq: Fraction) -> range:
    """Integers x with ``(x - center)^2 <= radius_sq``."""
    if radius_sq < 0:
        return range(0)
    # integer square root guess, then exact correction
    r = Fraction(isqrt(radius_sq.numerator * radius_sq.denominator), radius_sq.denominator)
    lo = floor(center - r) - 1
    hi = ceil(center + r) + 1
    while (lo - center) ** 2 > radius_sq and lo <= hi:
        lo += 1
    while (hi - center) ** 2 > radius_sq and hi >= lo:
        hi -= 1
    return range(lo, hi + 1)


def _enumerate(q: SymForm, bound: Fraction, shrink: bool):
    """Yield (value, x) for nonzero x with Q[x] <= bound (Fincke-Pohst).

    With ``shrink`` the bound tightens to the smallest value found so far, so
    the final batch of yields at the minimum is complete.
    """
    fac = ldl(q)
    if fac is None:
        raise NotPositiveDefinite("form is not positive definite")
    lo, d = fac
    g = q.g
    x = [0] * g
    state = {"bound": Fraction(bound)}

    # Q[x] = sum_i d_i (x_i + sum_{j>i} L_ji x_j)^2
    def rec(i: int, partial: Fraction):
        center = -sum((lo[j][i] * x[j] for j in range(i + 1, g)), Fraction(0))
        rem = (state["bound"] - partial) / d[i]
        for xi in _coordinate_range(center, rem):
            x[i] = xi
            val = partial + d[i] * (xi - center) ** 2
            if val > state["bound"]:
                continue
            if i == 0:
                if any(x):
                    if shrink and val < state["bound"]:
                        state["bound"] = val
                    yield val, tuple(x)
            else:
                yield from rec(i - 1, val)
        x[i] = 0

    yield from rec(g - 1, Fraction(0))


def vectors_below(q: SymForm, bound) -> VectorConfig:
    """All +-pairs with ``0 < Q[v] <= bound``, sorted."""
    bound = Fraction(bound)
    if bound <= 0:
        raise ValueError("bound must be positive")
    found = {reduce_primitive(v) if _is_canon(v) else None for _, v in _enumerate(q, bound, False)}
    found.discard(None)
    return VectorConfig(q.g, tuple(sorted(found)))


def _is_canon(v: Sequence[int]) -> bool:
    first = next(x for x in v if x)
    return first > 0


def vectors_with_value(q: SymForm, bound) -> dict[IntVec, Fraction]:
    """Canonical representatives v with ``Q[v] <= bound`` mapped to their values."""
    return {v: val for val, v in _enumerate(q, Fraction(bound), False) if _is_canon(v)}


def shortest_vectors(q: SymForm) -> MinVecResult:
    """Arithmetical minimum and all minimal +-pairs.

    The search starts from the smallest diagonal entry (the value of some unit
    vector), so it is never empty, and shrinks as shorter vectors appear.
    """
    if not is_positive_definite(q):
        raise NotPositiveDefinite("form is not positive definite")
    start = min(Fraction(q.entries[i][i]) for i in range(q.g))
    best = start
    hits: list[IntVec] = []
    for val, v in _enumerate(q, start, True):
        if val < best:
            best = val
            hits = []
        if val == best and _is_canon(v):
            hits.append(v)
    pairs = tuple(sorted(set(hits)))
    return MinVecResult(best, VectorConfig(q.g, pairs))
