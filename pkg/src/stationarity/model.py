"""MPEC point data at a candidate point and its first-order index calculus.

The problem is

    min f(x)  s.t.  g(x) <= 0,  h(x) = 0,  G(x) >= 0,  H(x) >= 0,  G_i H_i = 0,

described only through values, gradients and (optional) Hessians at the
candidate point.  Internally indices are 0-based; labels such as ``g1`` or
``c2`` (the second complementarity pair) are 1-based.
"""
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .errors import InfeasiblePointError, InputError
from .exact import LinearSystem
from .exact.linalg import dot, frac, mat, rank_and_nullspace, vec
from .geometry import Polyhedron, PolyUnion

_ZERO = Fraction(0)

H_ZERO = "H_zero"  # branch of a biactive pair with grad H . u = 0, grad G . u >= 0
G_ZERO = "G_zero"


@dataclass(frozen=True)
class FunctionData:
    """Value, gradient and optional Hessian of one function at the point."""

    value: Fraction
    gradient: tuple
    hessian: tuple = None
    affine: bool = False

    def __post_init__(self):
        object.__setattr__(self, "value", frac(self.value))
        object.__setattr__(self, "gradient", vec(self.gradient))
        if self.hessian is not None:
            object.__setattr__(self, "hessian", mat(self.hessian))

    def curvature(self, u):
        """``u^T hess u``; zero for affine functions, None when unknown."""
        if self.hessian is None:
            return _ZERO if self.affine else None
        return dot(u, tuple(dot(row, u) for row in self.hessian))


@dataclass(frozen=True)
class IndexSets:
    I_g: frozenset
    I_plus0: frozenset
    I_0plus: frozenset
    I_00: frozenset


@dataclass(frozen=True)
class DirIndexSets:
    I_g: frozenset
    I_plus0: frozenset
    I_0plus: frozenset
    I_00: frozenset


_LABEL = re.compile(r"^([ghc])([1-9][0-9]*)$")


def parse_label(text):
    """``"g2"`` -> ``("g", 1)``; ``c`` labels name complementarity pairs."""
    m = _LABEL.match(text.strip())
    if not m:
        raise InputError(f"bad constraint label {text!r}; expected g<i>, h<i> or c<i>")
    return (m.group(1), int(m.group(2)) - 1)


def format_label(label):
    return f"{label[0]}{label[1] + 1}"


@dataclass(frozen=True)
class MpecPoint:
    n: int
    f: FunctionData
    g: tuple = ()
    h: tuple = ()
    G: tuple = ()
    H: tuple = ()

    def __post_init__(self):
        for name in ("g", "h", "G", "H"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if len(self.G) != len(self.H):
            raise InputError("G and H must have the same length")
        for name, block in (("f", (self.f,)), ("g", self.g), ("h", self.h), ("G", self.G), ("H", self.H)):
            for i, fd in enumerate(block):
                if len(fd.gradient) != self.n:
                    raise InputError(f"gradient of {name}{i + 1} has length {len(fd.gradient)}, expected {self.n}")
                if fd.hessian is not None:
                    if len(fd.hessian) != self.n or any(len(r) != self.n for r in fd.hessian):
                        raise InputError(f"Hessian of {name}{i + 1} is not {self.n}x{self.n}")
                    for a in range(self.n):
                        for b in range(a):
                            if fd.hessian[a][b] != fd.hessian[b][a]:
                                raise InputError(f"Hessian of {name}{i + 1} is not symmetric")
                    if fd.affine and any(any(r) for r in fd.hessian):
                        raise InputError(f"{name}{i + 1} is flagged affine but has a nonzero Hessian")
        for i, fd in enumerate(self.g):
            if fd.value > 0:
                raise InfeasiblePointError("g", i, f"g_i(x) <= 0 violated at i = {i + 1}")
        for i, fd in enumerate(self.h):
            if fd.value != 0:
                raise InfeasiblePointError("h", i, f"h_i(x) = 0 violated at i = {i + 1}")
        for i, fd in enumerate(self.G):
            if fd.value < 0:
                raise InfeasiblePointError("G", i, f"G_i(x) >= 0 violated at i = {i + 1}")
        for i, fd in enumerate(self.H):
            if fd.value < 0:
                raise InfeasiblePointError("H", i, f"H_i(x) >= 0 violated at i = {i + 1}")
        for i, (a, b) in enumerate(zip(self.G, self.H)):
            if a.value * b.value != 0:
                raise InfeasiblePointError("G", i, f"G_i(x) H_i(x) = 0 violated at i = {i + 1}")

    # sizes and layout of the multiplier vector (lambda^g, lambda^h, lambda^G, lambda^H)
    @property
    def l(self):
        return len(self.g)

    @property
    def p(self):
        return len(self.h)

    @property
    def q(self):
        return len(self.G)

    @property
    def m(self):
        return self.l + self.p + 2 * self.q

    def idx_g(self, i):
        return i

    def idx_h(self, i):
        return self.l + i

    def idx_G(self, i):
        return self.l + self.p + i

    def idx_H(self, i):
        return self.l + self.p + self.q + i

    def component_names(self):
        return (
            [f"g{i + 1}" for i in range(self.l)]
            + [f"h{i + 1}" for i in range(self.p)]
            + [f"G{i + 1}" for i in range(self.q)]
            + [f"H{i + 1}" for i in range(self.q)]
        )

    def components(self):
        """Function data per multiplier component, with the sign it enters L with."""
        return (
            [(fd, 1) for fd in self.g]
            + [(fd, 1) for fd in self.h]
            + [(fd, -1) for fd in self.G]
            + [(fd, -1) for fd in self.H]
        )

    def signed_gradients(self):
        """Columns ``c_k`` with grad_x L = lambda0 grad f + sum_k lambda_k c_k."""
        return [tuple(s * x for x in fd.gradient) for fd, s in self.components()]

    def constraint_labels(self):
        return (
            [("g", i) for i in range(self.l)]
            + [("h", i) for i in range(self.p)]
            + [("c", i) for i in range(self.q)]
        )

    def label_components(self, label):
        kind, i = label
        size = {"g": self.l, "h": self.p, "c": self.q}[kind]
        if not 0 <= i < size:
            raise InputError(f"constraint {format_label(label)} does not exist")
        if kind == "g":
            return (self.idx_g(i),)
        if kind == "h":
            return (self.idx_h(i),)
        return (self.idx_G(i), self.idx_H(i))

    def is_affine(self, label):
        kind, i = label
        if kind == "g":
            return self.g[i].affine
        if kind == "h":
            return self.h[i].affine
        return self.G[i].affine and self.H[i].affine

    def nonaffine_labels(self):
        return frozenset(lb for lb in self.constraint_labels() if not self.is_affine(lb))

    def restrict(self, labels):
        """Point data of the subproblem keeping only the constraints in ``labels``."""
        labels = set(labels)
        return MpecPoint(
            self.n,
            self.f,
            tuple(fd for i, fd in enumerate(self.g) if ("g", i) in labels),
            tuple(fd for i, fd in enumerate(self.h) if ("h", i) in labels),
            tuple(fd for i, fd in enumerate(self.G) if ("c", i) in labels),
            tuple(fd for i, fd in enumerate(self.H) if ("c", i) in labels),
        )

    def restricted_labels(self, labels):
        """Map labels of this point onto the numbering of ``restrict(labels)``."""
        out = {}
        for kind in "ghc":
            kept = sorted(i for k, i in labels if k == kind)
            for new, old in enumerate(kept):
                out[(kind, old)] = (kind, new)
        return out

    def encoding(self):
        """Values F, Jacobian rows and the set Omega of the disjunctive form.

        F = (g, h, -G_1, -H_1, ..., -G_q, -H_q) and
        Omega = R_-^l x {0}^p x Q^q with Q the complementarity corner.
        """
        F = [fd.value for fd in self.g] + [fd.value for fd in self.h]
        jac = [fd.gradient for fd in self.g] + [fd.gradient for fd in self.h]
        for a, b in zip(self.G, self.H):
            F += [-a.value, -b.value]
            jac += [tuple(-x for x in a.gradient), tuple(-x for x in b.gradient)]
        dim = len(F)

        def e(k):
            return tuple(Fraction(int(j == k)) for j in range(dim))

        pieces = []
        for choice in product((0, 1), repeat=self.q):
            ineq = [e(k) for k in range(self.l)]
            eq = [e(self.l + k) for k in range(self.p)]
            for i, c in enumerate(choice):
                ka, kb = self.l + self.p + 2 * i, self.l + self.p + 2 * i + 1
                if c == 0:
                    ineq.append(e(ka))
                    eq.append(e(kb))
                else:
                    eq.append(e(ka))
                    ineq.append(e(kb))
            pieces.append(Polyhedron.build(dim, ineq=ineq, eq=eq))
        if not pieces:
            pieces = [Polyhedron.whole(dim)]
        return tuple(F), tuple(jac), PolyUnion(dim, tuple(pieces))


def classify_indices(point):
    I_g = frozenset(i for i, fd in enumerate(point.g) if fd.value == 0)
    p0 = frozenset(i for i in range(point.q) if point.G[i].value > 0)
    zp = frozenset(i for i in range(point.q) if point.H[i].value > 0)
    zz = frozenset(i for i in range(point.q) if point.G[i].value == 0 and point.H[i].value == 0)
    return IndexSets(I_g, p0, zp, zz)


def _check_dir(point, u):
    u = vec(u)
    if len(u) != point.n:
        raise InputError(f"direction of length {len(u)}, expected {point.n}")
    return u


def directional_index_sets(point, u):
    """Directional index sets at ``u``, or None when u is outside T_lin."""
    u = _check_dir(point, u)
    ix = classify_indices(point)
    I_g = set()
    for i in ix.I_g:
        v = dot(point.g[i].gradient, u)
        if v > 0:
            return None
        if v == 0:
            I_g.add(i)
    if any(dot(fd.gradient, u) != 0 for fd in point.h):
        return None
    if any(dot(point.G[i].gradient, u) != 0 for i in ix.I_0plus):
        return None
    if any(dot(point.H[i].gradient, u) != 0 for i in ix.I_plus0):
        return None
    p0, zp, zz = set(), set(), set()
    for i in ix.I_00:
        a = dot(point.G[i].gradient, u)
        b = dot(point.H[i].gradient, u)
        if a < 0 or b < 0 or a * b != 0:
            return None
        if a > 0:
            p0.add(i)
        elif b > 0:
            zp.add(i)
        else:
            zz.add(i)
    return DirIndexSets(frozenset(I_g), frozenset(p0), frozenset(zp), frozenset(zz))


def in_tlin(point, u):
    return directional_index_sets(point, u) is not None


def critical_test(point, u):
    u = _check_dir(point, u)
    return in_tlin(point, u) and dot(point.f.gradient, u) <= 0


def require_tlin(point, u):
    d = directional_index_sets(point, u)
    if d is None:
        raise InputError("direction is not in the linearized cone")
    return d


def require_critical(point, u):
    d = require_tlin(point, u)
    if dot(point.f.gradient, vec(u)) > 0:
        raise InputError("direction is not critical (grad f . u > 0)")
    return d


def licq_family(point, u):
    """Gradients that must be independent for LICQ in direction ``u``."""
    ix = classify_indices(point)
    d = require_tlin(point, u)
    rows = [point.g[i].gradient for i in sorted(d.I_g)]
    rows += [fd.gradient for fd in point.h]
    Gset = ix.I_0plus | d.I_0plus | d.I_00
    Hset = ix.I_plus0 | d.I_plus0 | d.I_00
    rows += [point.G[i].gradient for i in sorted(Gset)]
    rows += [point.H[i].gradient for i in sorted(Hset)]
    return rows


def licq_u(point, u):
    rows = licq_family(point, u)
    if not rows:
        return True
    return rank_and_nullspace(rows, point.n).independent


def tlin_branches(point):
    """T_lin as a union of polyhedral cones, one per arm choice of biactive pairs.

    Returns a list of (pattern, LinearSystem) where pattern maps each index of
    the biactive set to H_ZERO or G_ZERO.
    """
    ix = classify_indices(point)
    base_ineq = [point.g[i].gradient for i in sorted(ix.I_g)]
    base_eq = [fd.gradient for fd in point.h]
    base_eq += [point.G[i].gradient for i in sorted(ix.I_0plus)]
    base_eq += [point.H[i].gradient for i in sorted(ix.I_plus0)]
    biactive = sorted(ix.I_00)
    out = []
    for choice in product((H_ZERO, G_ZERO), repeat=len(biactive)):
        eq = list(base_eq)
        ineq = list(base_ineq)
        for i, c in zip(biactive, choice):
            G, H = point.G[i].gradient, point.H[i].gradient
            if c == H_ZERO:
                eq.append(H)
                ineq.append(tuple(-x for x in G))
            else:
                eq.append(G)
                ineq.append(tuple(-x for x in H))
        out.append((dict(zip(biactive, choice)), LinearSystem(point.n, eq_rows=eq, ineq_rows=ineq)))
    return out


@dataclass(frozen=True)
class GmfcqResult:
    holds: bool
    witness: tuple = None


def gmfcq_check(point):
    """No nonzero abnormal multiplier: the kernel condition over the normal cone.

    A witness, when the condition fails, is scaled so its first nonzero entry
    has absolute value 1.
    """
    from .multipliers import LIMITING, build_multiplier_set, query

    ms = build_multiplier_set(point, 0, (0,) * point.n, LIMITING, core_set=point.constraint_labels())
    res = query(ms, decide_singleton=False)
    if res.status == "empty":
        return GmfcqResult(True)
    w = res.witness
    lead = next(abs(x) for x in w if x)
    return GmfcqResult(False, tuple(x / lead for x in w))
