"""Pure-Python row-reduction kernels over ``Fraction`` entries.

These are the hot loops of the exact core: every simplex pivot and every
Gaussian elimination goes through ``pivot``.  A compiled twin with the same
signatures lives in ``_ckernels.pyx``; ``kernels.py`` picks one at import.
"""
from fractions import Fraction


def pivot(rows, r, c):
    """Gauss-Jordan pivot on ``rows[r][c]`` in place.

    Row ``r`` is scaled so the pivot becomes 1, then ``c`` is eliminated
    from every other row.  Zero entries of the pivot row are skipped.
    """
    prow = rows[r]
    p = prow[c]
    if p != 1:
        inv = 1 / Fraction(p)
        for j in range(len(prow)):
            if prow[j]:
                prow[j] = prow[j] * inv
    nz = [(j, v) for j, v in enumerate(prow) if v]
    for i in range(len(rows)):
        if i == r:
            continue
        row = rows[i]
        f = row[c]
        if f:
            for j, v in nz:
                row[j] = row[j] - f * v


def rref(rows, ncols):
    """Reduce ``rows`` (list of mutable lists) to reduced row echelon form.

    Returns the list of pivot columns.  Rows are permuted in place.
    """
    pivots = []
    r = 0
    m = len(rows)
    for c in range(ncols):
        if r == m:
            break
        k = r
        while k < m and not rows[k][c]:
            k += 1
        if k == m:
            continue
        if k != r:
            rows[r], rows[k] = rows[k], rows[r]
        pivot(rows, r, c)
        pivots.append(c)
        r += 1
    return pivots


def dot(a, b):
    s = 0
    for x, y in zip(a, b):
        if x and y:
            s += x * y
    return Fraction(s)
