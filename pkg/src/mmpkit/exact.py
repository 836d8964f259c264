"""Exact rational linear algebra and a two-phase simplex method.

Everything here works on :class:`fractions.Fraction` so verdicts are
certificates rather than floating-point approximations.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

Vector = tuple[Fraction, ...]


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(u, v)), Fraction(0))


def rref(rows: Sequence[Sequence], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns the nonzero rows and pivot columns."""
    m = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        if p != 1:
            m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence], ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[Vector]:
    """Basis of {x : r.x = 0 for every row r}, one vector per free column."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(red, pivots):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to coprime integers, first nonzero entry kept in sign."""
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


# ------------------------------------------------------------------ simplex

@dataclass(frozen=True)
class LPResult:
    """Outcome of :func:`solve_lp`.

    ``status`` is ``"optimal"``, ``"infeasible"`` or ``"unbounded"``.  For an
    infeasible system ``farkas`` holds ``y`` with ``y.A <= 0`` componentwise
    and ``y.b > 0``, which rules out any ``x >= 0`` with ``A x = b``.
    """

    status: str
    x: Vector | None = None
    value: Fraction | None = None
    farkas: Vector | None = None

    @property
    def feasible(self) -> bool:
        return self.status != "infeasible"


def _pivot(T: list[list[Fraction]], obj: list[Fraction], basis: list[int], r: int, c: int) -> None:
    row = T[r]
    p = row[c]
    if p != 1:
        row = T[r] = [x / p if x else x for x in row]
    # tableaux here are sparse; touch only the pivot row's nonzero columns
    nz = [j for j, x in enumerate(row) if x]
    for i, other in enumerate(T):
        if i != r:
            f = other[c]
            if f:
                for j in nz:
                    other[j] -= f * row[j]
    f = obj[c]
    if f:
        for j in nz:
            obj[j] -= f * row[j]
    basis[r] = c


def _simplex(T, obj, basis, ncols: int) -> bool:
    """Bland's rule iterations on columns < ncols; False when unbounded."""
    while True:
        enter = next((j for j in range(ncols) if obj[j] < 0), None)
        if enter is None:
            return True
        best = None
        for i, row in enumerate(T):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return False
        _pivot(T, obj, basis, best[1], enter)


def solve_lp(A: Sequence[Sequence], b: Sequence, cost: Sequence | None = None) -> LPResult:
    """Minimise ``cost.x`` subject to ``A x = b`` and ``x >= 0`` exactly.

    Without ``cost`` only feasibility is decided and a basic feasible point
    is returned.
    """
    m = len(A)
    n = len(A[0]) if m else (len(cost) if cost is not None else 0)
    signs = [1] * m
    T: list[list[Fraction]] = []
    for i in range(m):
        row = [Fraction(x) for x in A[i]]
        rhs = Fraction(b[i])
        if rhs < 0:
            signs[i] = -1
            row = [-x for x in row]
            rhs = -rhs
        T.append(row + [Fraction(int(i == k)) for k in range(m)] + [rhs])
    basis = [n + i for i in range(m)]
    width = n + m + 1
    obj = [Fraction(0)] * n + [Fraction(1)] * m + [Fraction(0)]
    for row in T:
        obj = [a - r for a, r in zip(obj, row)]
    _simplex(T, obj, basis, n + m)
    if -obj[-1] > 0:
        y = tuple(signs[i] * (1 - obj[n + i]) for i in range(m))
        return LPResult("infeasible", farkas=y)

    # drive zero-level artificials out of the basis, dropping redundant rows
    i = 0
    while i < len(T):
        if basis[i] >= n:
            c = next((j for j in range(n) if T[i][j] != 0), None)
            if c is None:
                del T[i]
                del basis[i]
                continue
            _pivot(T, obj, basis, i, c)
        i += 1

    c_full = [Fraction(x) for x in cost] if cost is not None else [Fraction(0)] * n
    obj = c_full + [Fraction(0)] * (width - n)
    for r, row in enumerate(T):
        cb = c_full[basis[r]]
        if cb != 0:
            obj = [a - cb * x for a, x in zip(obj, row)]
    if not _simplex(T, obj, basis, n):
        return LPResult("unbounded")
    x = [Fraction(0)] * n
    for r, row in enumerate(T):
        x[basis[r]] = row[-1]
    return LPResult("optimal", tuple(x), -obj[-1])


def check_farkas(A: Sequence[Sequence], b: Sequence, y: Sequence) -> bool:
    """True when ``y`` certifies that ``A x = b, x >= 0`` has no solution."""
    n = len(A[0]) if A else 0
    cols_ok = all(sum((Fraction(y[i]) * A[i][j] for i in range(len(A))), Fraction(0)) <= 0 for j in range(n))
    return cols_ok and dot(y, b) > 0
