# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of ``_pykernels``: same algorithms and results.

Entry updates a - f*v are done on 64-bit numerators and denominators with
overflow checks and gcd reduction; any overflow falls back to Fraction
arithmetic for that entry.  Results are Fractions in lowest terms, so they
compare and hash exactly like the pure-Python kernels' output.
"""
from fractions import Fraction

cdef extern from "Python.h":
    long long PyLong_AsLongLongAndOverflow(object obj, int *overflow) except? -1

cdef extern from *:
    """
    static inline int sk_mul(long long a, long long b, long long *r) { return __builtin_mul_overflow(a, b, r); }
    static inline int sk_sub(long long a, long long b, long long *r) { return __builtin_sub_overflow(a, b, r); }
    """
    int sk_mul(long long a, long long b, long long *r) nogil
    int sk_sub(long long a, long long b, long long *r) nogil

cdef object _F = Fraction
cdef long long _LIM = 1LL << 62  # keeps negation and gcd clear of overflow
cdef object _object_new = object.__new__


cdef inline long long _gcd(long long a, long long b) nogil:
    cdef long long t
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef bint _fast_ok():
    # Fraction keeps its state in two slots; build a probe and compare.
    try:
        x = _object_new(_F)
        x._numerator = 3
        x._denominator = 4
        return x == _F(3, 4) and hash(x) == hash(_F(3, 4)) and str(x) == "3/4"
    except Exception:
        return False


cdef bint _FAST = _fast_ok()


cdef inline object _make(long long n, long long d):
    """Fraction n/d from coprime n, d with d > 0."""
    if _FAST:
        x = _object_new(_F)
        x._numerator = n
        x._denominator = d
        return x
    return _F(n, d)


cdef inline bint _split(object x, long long *n, long long *d):
    """Numerator and denominator as C integers; False when they do not fit."""
    cdef int of = 0
    if type(x) is _F:
        num, den = x._numerator, x._denominator
    else:
        num, den = x.numerator, x.denominator
    n[0] = PyLong_AsLongLongAndOverflow(num, &of)
    if of or n[0] > _LIM or n[0] < -_LIM:
        return False
    d[0] = PyLong_AsLongLongAndOverflow(den, &of)
    return not of and d[0] <= _LIM


cdef object _mul(object a, object b):
    cdef long long an, ad, bn, bd, g1, g2, n, d
    if _split(a, &an, &ad) and _split(b, &bn, &bd):
        g1 = _gcd(an, bd)
        g2 = _gcd(bn, ad)
        if g1 > 1:
            an //= g1
            bd //= g1
        if g2 > 1:
            bn //= g2
            ad //= g2
        if not sk_mul(an, bn, &n) and not sk_mul(ad, bd, &d):
            return _make(n, d)
    return _F(a) * b


cdef object _sub_mul(object a, object f, object v):
    """a - f*v."""
    cdef long long an, ad, fn, fd, vn, vd, g1, g2, pn, pd, x, y, n, d, g
    if _split(a, &an, &ad) and _split(f, &fn, &fd) and _split(v, &vn, &vd):
        g1 = _gcd(fn, vd)
        g2 = _gcd(vn, fd)
        if g1 > 1:
            fn //= g1
            vd //= g1
        if g2 > 1:
            vn //= g2
            fd //= g2
        if not sk_mul(fn, vn, &pn) and not sk_mul(fd, vd, &pd):
            g = _gcd(ad, pd)
            # a - p = (an*(pd/g) - pn*(ad/g)) / (ad*(pd/g))
            if (
                not sk_mul(an, pd // g, &x)
                and not sk_mul(pn, ad // g, &y)
                and not sk_sub(x, y, &n)
                and not sk_mul(ad, pd // g, &d)
            ):
                if n == 0:
                    return _make(0, 1)
                g = _gcd(n, d)
                return _make(n // g, d // g)
    return a - f * v


def pivot(list rows, Py_ssize_t r, Py_ssize_t c):
    cdef list prow = rows[r]
    cdef list row
    cdef list nzj = []
    cdef list nzv = []
    cdef Py_ssize_t i, j, k, m = len(rows), n = len(prow), nnz
    p = prow[c]
    if p != 1:
        inv = 1 / _F(p)
        for j in range(n):
            if prow[j]:
                prow[j] = _mul(prow[j], inv)
    for j in range(n):
        v = prow[j]
        if v:
            nzj.append(j)
            nzv.append(v)
    nnz = len(nzj)
    for i in range(m):
        if i == r:
            continue
        row = rows[i]
        f = row[c]
        if f:
            for k in range(nnz):
                j = nzj[k]
                row[j] = _sub_mul(row[j], f, nzv[k])


def rref(list rows, Py_ssize_t ncols):
    cdef list pivots = []
    cdef Py_ssize_t r = 0, c, k, m = len(rows)
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
    cdef Py_ssize_t i, n = len(a)
    s = 0
    for i in range(n):
        x = a[i]
        if x:
            y = b[i]
            if y:
                s += x * y
    return _F(s)


BACKEND_FAST_PATH = _FAST
