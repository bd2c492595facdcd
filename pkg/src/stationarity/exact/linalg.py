"""Exact linear algebra over ``Fraction``: rank, nullspace, linear solves."""
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import kernels


def frac(x):
    """Coerce an int, Fraction or "p/q" string to Fraction."""
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def vec(xs):
    return tuple(frac(x) for x in xs)


def mat(rows):
    return tuple(vec(r) for r in rows)


def dot(a, b):
    return kernels.dot(a, b)


def matvec(rows, x):
    return tuple(kernels.dot(r, x) for r in rows)


def scale(t, v):
    return tuple(t * x for x in v)


def add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def is_zero(v):
    return not any(v)


def transpose(rows, ncols):
    return tuple(tuple(r[j] for r in rows) for j in range(ncols))


def norm1(v):
    return sum((abs(x) for x in v), Fraction(0))


def primitive(v):
    """Positive multiple of ``v`` with coprime integer entries."""
    if is_zero(v):
        return tuple(Fraction(0) for _ in v)
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for k in ints:
        g = gcd(g, k)
    return tuple(Fraction(k // g) for k in ints)


def normalize1(v):
    """Scale ``v`` to unit 1-norm (the canonical ray representative)."""
    s = norm1(v)
    return tuple(x / s for x in v)


@dataclass(frozen=True)
class RankInfo:
    rank: int
    nullspace_basis: tuple
    independent: bool
    pivots: tuple = ()


def rank_and_nullspace(rows, n=None):
    """Exact rank of ``rows`` plus a basis of their right nullspace.

    Each nullspace vector is scaled so its first nonzero entry is +1.
    ``n`` is the column count; it is needed when ``rows`` is empty.
    """
    rows = [list(vec(r)) for r in rows]
    if n is None:
        if not rows:
            raise ValueError("column count required for an empty matrix")
        n = len(rows[0])
    for r in rows:
        if len(r) != n:
            raise ValueError("ragged matrix")
    m = len(rows)
    pivots = kernels.rref(rows, n)
    free = [j for j in range(n) if j not in set(pivots)]
    basis = []
    for fj in free:
        x = [Fraction(0)] * n
        x[fj] = Fraction(1)
        for i, pc in enumerate(pivots):
            x[pc] = -rows[i][fj]
        lead = next(v for v in x if v)
        basis.append(tuple(v / lead for v in x))
    return RankInfo(len(pivots), tuple(basis), len(pivots) == m, tuple(pivots))


def rank(rows, n=None):
    if not rows:
        return 0
    return rank_and_nullspace(rows, n).rank


def solve(rows, rhs, n):
    """One solution of ``rows x = rhs`` (free variables at zero), or None."""
    aug = [list(vec(r)) + [frac(b)] for r, b in zip(rows, rhs)]
    pivots = kernels.rref(aug, n)
    for i in range(len(pivots), len(aug)):
        if aug[i][n]:
            return None
    x = [Fraction(0)] * n
    for i, pc in enumerate(pivots):
        x[pc] = aug[i][n]
    return tuple(x)


def min_norm_solution(rows, rhs, n):
    """Least-Euclidean-norm solution of a consistent system, or None.

    Computed as x = A^T y with A A^T y = rhs, all exact.
    """
    rows = mat(rows)
    if not rows:
        return tuple(Fraction(0) for _ in range(n))
    gram = [[dot(a, b) for b in rows] for a in rows]
    y = solve(gram, rhs, len(rows))
    if y is None:
        return None
    x = [Fraction(0)] * n
    for yi, r in zip(y, rows):
        if yi:
            for j in range(n):
                x[j] += yi * r[j]
    x = tuple(x)
    if matvec(rows, x) != vec(rhs):
        return None
    return x


def row_basis(rows, n):
    """Reduced row echelon basis of the row space of ``rows``."""
    work = [list(vec(r)) for r in rows]
    pivots = kernels.rref(work, n)
    return tuple(tuple(work[i]) for i in range(len(pivots)))


def in_span(v, rows, n):
    return solve(transpose(rows, n), v, len(rows)) is not None if rows else is_zero(v)
