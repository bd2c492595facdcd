"""Grid-sampling falsifier for local minimality.

Symbolic functions are sparse polynomials plus at most one |x_i|^(3/2) term,
so every value is r + c*sqrt(s) with rational r, c, s.  Signs of such values
(and of sums of a few of them) are decided exactly by squaring.
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import isqrt

from ..errors import InputError
from .problem import Symbolic, Term, format_rational

_ZERO = Fraction(0)
_ONE = Fraction(1)


class OracleUnavailable(Exception):
    pass


def _rational_sqrt(s):
    """sqrt(s) if rational, else None (s >= 0)."""
    p, q = s.numerator, s.denominator
    a, b = isqrt(p), isqrt(q)
    if a * a == p and b * b == q:
        return Fraction(a, b)
    return None


class Surd:
    """Finite sum of c_k * sqrt(s_k); the key 1 holds the rational part."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        for s, c in (terms or {}).items():
            self._add(Fraction(s), Fraction(c))

    def _add(self, s, c):
        if c == 0 or s == 0:
            return
        r = _rational_sqrt(s)
        if r is not None:
            c, s = c * r, _ONE
        v = self.terms.get(s, _ZERO) + c
        if v:
            self.terms[s] = v
        else:
            self.terms.pop(s, None)

    @classmethod
    def rational(cls, r):
        return cls({1: r})

    def __add__(self, other):
        out = Surd(self.terms)
        for s, c in other.terms.items():
            out._add(s, c)
        return out

    def __neg__(self):
        return Surd({s: -c for s, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out = Surd()
        for s1, c1 in self.terms.items():
            for s2, c2 in other.terms.items():
                out._add(s1 * s2, c1 * c2)
        return out

    def split(self):
        """(rest, c, s) with self = rest + c*sqrt(s) for one irrational s."""
        irr = sorted(s for s in self.terms if s != 1)
        s = irr[-1]
        rest = Surd({k: v for k, v in self.terms.items() if k != s})
        return rest, self.terms[s], s

    def sign(self, depth=0):
        if depth > 8:
            raise OracleUnavailable("sign of a surd expression could not be decided")
        if not any(s != 1 for s in self.terms):
            r = self.terms.get(_ONE, _ZERO)
            return (r > 0) - (r < 0)
        rest, c, s = self.split()
        sa = rest.sign(depth + 1)
        sb = 1 if c > 0 else -1
        if sa == 0 or sa == sb:
            return sb
        # rest and c*sqrt(s) have opposite signs; compare squares
        diff = rest * rest - Surd.rational(c * c * s)
        return sa * diff.sign(depth + 1)

    def __str__(self):
        parts = []
        r = self.terms.get(_ONE, _ZERO)
        if r or len(self.terms) == 0:
            parts.append(format_rational(r))
        for s in sorted(k for k in self.terms if k != 1):
            parts.append(f"{format_rational(self.terms[s])}*sqrt({format_rational(s)})")
        return " + ".join(parts)


def evaluate(terms, x):
    """Exact value of a symbolic function at a rational point."""
    out = Surd()
    rat = _ZERO
    for t in terms:
        if t.abspow_var is not None:
            a = abs(x[t.abspow_var])
            out._add(a, t.coef * a)  # |a|^(3/2) = a * sqrt(a)
        else:
            v = t.coef
            for xi, k in zip(x, t.powers):
                if k:
                    v *= xi**k
            rat += v
    out._add(_ONE, rat)
    return out


def feasible(sym, x):
    for t in sym.g:
        if evaluate(t, x).sign() > 0:
            return False
    for t in sym.h:
        if evaluate(t, x).sign() != 0:
            return False
    for tg, th in zip(sym.G, sym.H):
        sg, sh = evaluate(tg, x).sign(), evaluate(th, x).sign()
        if sg < 0 or sh < 0 or (sg and sh):
            return False
    return True


def taylor_symbolic(point):
    """Quadratic model in the offset dx = x - xbar, built from point data.

    Exact when every function is a polynomial of degree <= 2 with its Hessian
    given (affine problems in particular).  Search it with xbar = 0.
    """
    n = point.n

    def poly(fd):
        if fd.hessian is None and not fd.affine:
            raise OracleUnavailable("a Hessian is missing, so no quadratic model")
        terms = [Term(fd.value, (0,) * n)]
        for i, gi in enumerate(fd.gradient):
            if gi:
                terms.append(Term(gi, tuple(int(j == i) for j in range(n))))
        if fd.hessian is not None:
            for i in range(n):
                for j in range(i, n):
                    c = fd.hessian[i][j] * (Fraction(1, 2) if i == j else 1)
                    if c:
                        pw = [0] * n
                        pw[i] += 1
                        pw[j] += 1
                        terms.append(Term(c, tuple(pw)))
        return tuple(terms)

    return Symbolic(
        poly(point.f),
        tuple(poly(fd) for fd in point.g),
        tuple(poly(fd) for fd in point.h),
        tuple(poly(fd) for fd in point.G),
        tuple(poly(fd) for fd in point.H),
    )


@dataclass(frozen=True)
class OracleResult:
    found: bool
    x: tuple = None
    value: str = None
    reference: str = "0"
    checked: int = 0
    note: str = ""


def _shell(n, s):
    for k in product(range(-s, s + 1), repeat=n):
        if max(abs(v) for v in k) == s:
            yield k


def grid_oracle(sym, xbar, radius, resolution, direction=None):
    """Search the grid xbar + (k/resolution)*radius for a feasible point with
    a smaller objective.

    Shells are scanned by increasing sup-norm; in the first shell holding
    descent points the one with the smallest objective is returned (ties go
    to the lexicographically smallest offset).  With ``direction`` only the
    ray xbar + t*direction, t = k*radius/resolution, is scanned.
    """
    if sym is None:
        raise OracleUnavailable("problem has no symbolic block")
    radius = Fraction(radius)
    if radius <= 0 or resolution < 1:
        raise InputError("radius must be positive and resolution at least 1")
    xbar = tuple(Fraction(v) for v in xbar)
    n = len(xbar)
    step = radius / resolution
    f0 = evaluate(sym.f, xbar)
    checked = 0

    def descent(x):
        if not feasible(sym, x):
            return None
        fx = evaluate(sym.f, x)
        return fx if (fx - f0).sign() < 0 else None

    if direction is not None:
        d = tuple(Fraction(v) for v in direction)
        if len(d) != n:
            raise InputError(f"direction has length {len(d)}, expected {n}")
        for k in range(1, resolution + 1):
            x = tuple(a + k * step * b for a, b in zip(xbar, d))
            checked += 1
            fx = descent(x)
            if fx is not None:
                return OracleResult(True, x, str(fx), str(f0), checked)
        return OracleResult(False, reference=str(f0), checked=checked, note=_NONE_FOUND)

    for s in range(1, resolution + 1):
        best = None
        for k in _shell(n, s):
            x = tuple(a + v * step for a, v in zip(xbar, k))
            checked += 1
            fx = descent(x)
            if fx is None:
                continue
            if best is None or (fx - best[1]).sign() < 0:
                best = (x, fx)
        if best is not None:
            return OracleResult(True, best[0], str(best[1]), str(f0), checked)
    return OracleResult(False, reference=str(f0), checked=checked, note=_NONE_FOUND)


_NONE_FOUND = "no counterexample at this resolution (not a proof of local minimality)"
