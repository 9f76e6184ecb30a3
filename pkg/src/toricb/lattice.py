"""Exact linear algebra over the lattice N = Z^n.

Vectors are plain tuples of Python ints and every rational quantity is a
:class:`fractions.Fraction`, so nothing here ever touches floating point.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd
from typing import Callable, Iterable, Sequence

from .errors import DependentGenerators, NotInSpan, ZeroVector

Rational = Fraction
Vector = tuple[int, ...]


def as_vector(v: Iterable[int]) -> Vector:
    out = []
    for x in v:
        if isinstance(x, bool) or int(x) != x:
            raise TypeError(f"non-integer coordinate {x!r}")
        out.append(int(x))
    return tuple(out)


def content(v: Sequence[int]) -> int:
    """gcd of the coordinates (0 for the zero vector)."""
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def is_primitive(v: Sequence[int]) -> bool:
    return content(v) == 1


def make_primitive(v: Sequence[int]) -> tuple[Vector, int]:
    """Split ``v`` as ``g * w`` with ``w`` primitive and ``g >= 1``.

    >>> make_primitive((2, 4, 6))
    ((1, 2, 3), 2)
    """
    g = content(v)
    if g == 0:
        raise ZeroVector("the zero vector has no primitive generator")
    return tuple(x // g for x in v), g


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def combine(coeffs: Sequence, vectors: Sequence[Sequence[int]]) -> tuple:
    """Return sum(coeffs[i] * vectors[i])."""
    n = len(vectors[0])
    return tuple(sum(c * vec[j] for c, vec in zip(coeffs, vectors)) for j in range(n))


# -- rational row reduction -------------------------------------------------

def row_reduce(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (rref, pivot columns)."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(row_reduce(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[Vector]:
    """Integer basis (primitive vectors) of the rational kernel of ``rows``."""
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    rref, pivots = row_reduce(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            x[pc] = -rref[i][f]
        den = 1
        for q in x:
            den = den * q.denominator // gcd(den, q.denominator)
        basis.append(make_primitive([int(q * den) for q in x])[0])
    return basis


def solve_linear(rows: Sequence[Sequence], rhs: Sequence) -> list[Fraction] | None:
    """One solution x of rows @ x = rhs (free variables set to 0), or None."""
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    rref, pivots = row_reduce(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for i, pc in enumerate(pivots):
        x[pc] = rref[i][ncols]
    return x


def solve_in_generators(generators: Sequence[Sequence[int]], w: Sequence[int]) -> list[Fraction]:
    """Coefficients a with w = sum(a[i] * generators[i]), exactly.

    The generators must be linearly independent, so the answer is unique.
    """
    gens = [tuple(g) for g in generators]
    if not gens:
        if any(w):
            raise NotInSpan("only the zero vector lies in the span of no generators")
        return []
    if rank(gens) < len(gens):
        raise DependentGenerators(f"generators {gens} are linearly dependent")
    cols = [[g[j] for g in gens] for j in range(len(w))]
    x = solve_linear(cols, list(w))
    if x is None:
        raise NotInSpan(f"{tuple(w)} is not in the span of {gens}")
    return x


# -- integer determinants and normal forms ----------------------------------

def determinant(matrix: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant of a square integer matrix."""
    m = [list(map(int, row)) for row in matrix]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def diagonal_form(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Diagonal entries of D = S @ A @ T for unimodular S, T.

    No divisibility chain is enforced, but the product of the entries equals
    the gcd of the maximal minors, which is all callers need.
    """
    d = [list(map(int, row)) for row in matrix]
    if not d:
        return []
    nr, nc = len(d), len(d[0])
    diag = []
    for i in range(min(nr, nc)):
        piv = next(((r, c) for c in range(i, nc) for r in range(i, nr) if d[r][c]), None)
        if piv is None:
            break
        r, c = piv
        d[i], d[r] = d[r], d[i]
        for row in d:
            row[i], row[c] = row[c], row[i]
        while True:
            for r in range(i + 1, nr):
                if d[r][i] and d[r][i] % d[i][i] == 0:
                    f = d[r][i] // d[i][i]
                    d[r] = [q - f * p for p, q in zip(d[i], d[r])]
                elif d[r][i]:
                    g, x, y = _xgcd(d[i][i], d[r][i])
                    a, b = d[i][i] // g, d[r][i] // g
                    top = [x * p + y * q for p, q in zip(d[i], d[r])]
                    bot = [-b * p + a * q for p, q in zip(d[i], d[r])]
                    d[i], d[r] = top, bot
            dirty = False
            for c in range(i + 1, nc):
                if d[i][c] and d[i][c] % d[i][i] == 0:
                    f = d[i][c] // d[i][i]
                    for row in d:
                        row[c] -= f * row[i]
                elif d[i][c]:
                    g, x, y = _xgcd(d[i][i], d[i][c])
                    a, b = d[i][i] // g, d[i][c] // g
                    for row in d:
                        p, q = row[i], row[c]
                        row[i], row[c] = x * p + y * q, -b * p + a * q
                    dirty = True
            if not dirty or all(d[r][i] == 0 for r in range(i + 1, nr)):
                break
        diag.append(abs(d[i][i]))
    return diag


def cone_multiplicity(generators: Sequence[Sequence[int]]) -> int:
    """Index of the sublattice spanned by ``generators`` in its saturation.

    Equals 1 exactly for smooth cones.
    """
    gens = [tuple(g) for g in generators]
    if not gens:
        return 1
    diag = diagonal_form(gens)
    if len(diag) < len(gens):
        raise DependentGenerators(f"generators {gens} are linearly dependent")
    out = 1
    for x in diag:
        out *= x
    return out


def independent_frame(generators: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], list[list[int]], int]:
    """Integer coordinate frame for a set of independent generators.

    Returns ``(rows, adj, det)`` where ``rows`` picks m coordinates whose
    m x m minor ``G`` of the generator matrix is invertible, ``det = det G``
    and ``adj`` is its adjugate, so that for w in the span the generator
    coefficients are ``adj @ w[rows] / det``.
    """
    gens = [tuple(g) for g in generators]
    m = len(gens)
    _, pivots = row_reduce([list(g) for g in gens])
    if len(pivots) < m:
        raise DependentGenerators(f"generators {gens} are linearly dependent")
    rows = tuple(pivots)
    sub = [[g[j] for g in gens] for j in rows]  # m x m, column i is generator i
    det = determinant(sub)
    # adj = det * inverse(sub)
    inv_cols = []
    for k in range(m):
        e = [Fraction(int(i == k)) for i in range(m)]
        inv_cols.append(solve_linear(sub, e))
    adj = [[int(inv_cols[k][i] * det) for k in range(m)] for i in range(m)]
    return rows, adj, det


# -- enumeration ------------------------------------------------------------

def enumerate_integer_points(box_lo: Sequence[int], box_hi: Sequence[int],
                             predicate: Callable[[Vector], bool] | None = None) -> list[Vector]:
    """All integer points of the box satisfying ``predicate``, lexicographically."""
    if any(lo > hi for lo, hi in zip(box_lo, box_hi)):
        return []
    ranges = [range(lo, hi + 1) for lo, hi in zip(box_lo, box_hi)]
    pts = itertools.product(*ranges)
    if predicate is None:
        return list(pts)
    return [p for p in pts if predicate(p)]


# -- exact feasibility ------------------------------------------------------

def lp_feasible(a_rows: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Find x >= 0 with a_rows @ x = b, or return None.

    Phase one of the simplex method over Q with Bland's rule, which cannot
    cycle, so the loop terminates.
    """
    m = len(a_rows)
    if m == 0:
        return [Fraction(0)] * (len(a_rows[0]) if a_rows else 0)
    n = len(a_rows[0])
    rows = []
    for row, bi in zip(a_rows, b):
        row = [Fraction(x) for x in row]
        bi = Fraction(bi)
        if bi < 0:
            row, bi = [-x for x in row], -bi
        rows.append(row + [Fraction(int(i == len(rows))) for i in range(m)] + [bi])
    basis = list(range(n, n + m))
    # objective: minimise sum of artificials, i.e. maximise -sum
    total = n + m
    while True:
        cost = [Fraction(0)] * n
        for i in range(m):
            if basis[i] >= n:
                for j in range(n):
                    cost[j] += rows[i][j]
        entering = next((j for j in range(n) if j not in basis and cost[j] > 0), None)
        if entering is None:
            break
        ratios = [(rows[i][-1] / rows[i][entering], basis[i], i)
                  for i in range(m) if rows[i][entering] > 0]
        _, _, leave = min(ratios)
        piv = rows[leave][entering]
        rows[leave] = [x / piv for x in rows[leave]]
        for i in range(m):
            if i != leave and rows[i][entering] != 0:
                f = rows[i][entering]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[leave])]
        basis[leave] = entering
    x = [Fraction(0)] * total
    for i, j in enumerate(basis):
        x[j] = rows[i][-1]
    if any(x[j] != 0 for j in range(n, total)):
        return None
    return x[:n]
