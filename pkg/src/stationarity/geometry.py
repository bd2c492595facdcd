"""Tangent and normal cones of finite unions of convex polyhedra.

A set is a ``PolyUnion`` of H-represented pieces.  Cones come back as a
single ``Polyhedron`` (regular normal cone) or a ``ConeUnion`` (tangent and
directional limiting normal cones).  Everything is exact.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .exact import LinearSystem, extreme_rays, is_feasible, max_slack
from .exact.linalg import dot, mat, primitive, vec

_ZERO = Fraction(0)


@dataclass(frozen=True)
class Polyhedron:
    """``{x | rows[j].x <= rhs[j]}``; equalities are stored as two rows."""

    dim: int
    rows: tuple = ()
    rhs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "rows", mat(self.rows))
        rhs = vec(self.rhs) if self.rhs else tuple(_ZERO for _ in self.rows)
        object.__setattr__(self, "rhs", rhs)
        if len(rhs) != len(self.rows):
            raise ValueError("row/rhs count mismatch")
        for r in self.rows:
            if len(r) != self.dim:
                raise ValueError("row dimension mismatch")

    @classmethod
    def build(cls, dim, ineq=(), ineq_rhs=None, eq=(), eq_rhs=None):
        ineq, eq = mat(ineq), mat(eq)
        ineq_rhs = vec(ineq_rhs) if ineq_rhs is not None else tuple(_ZERO for _ in ineq)
        eq_rhs = vec(eq_rhs) if eq_rhs is not None else tuple(_ZERO for _ in eq)
        rows = list(ineq)
        rhs = list(ineq_rhs)
        for a, b in zip(eq, eq_rhs):
            rows += [a, tuple(-x for x in a)]
            rhs += [b, -b]
        return cls(dim, tuple(rows), tuple(rhs))

    @classmethod
    def whole(cls, dim):
        return cls(dim)

    @classmethod
    def empty(cls, dim):
        return cls(dim, ((_ZERO,) * dim,), (Fraction(-1),))

    @property
    def homogeneous(self):
        return not any(self.rhs)

    def system(self):
        return LinearSystem(self.dim, ineq_rows=self.rows, ineq_rhs=self.rhs)

    def contains(self, x):
        x = vec(x)
        return all(dot(a, x) <= b for a, b in zip(self.rows, self.rhs))

    def active_set(self, x):
        x = vec(x)
        return tuple(j for j, (a, b) in enumerate(zip(self.rows, self.rhs)) if dot(a, x) == b)

    def is_empty(self):
        return not is_feasible(self.system())

    def generators(self):
        """Rays and lineality of a homogeneous polyhedron."""
        return _generators(self)

    def contains_cone(self, other):
        """``other`` is a subset of ``self`` (both homogeneous)."""
        gens = other.generators()
        for r in gens.rays:
            if not self.contains(r):
                return False
        for l in gens.lineality:
            if not self.contains(l) or not self.contains(tuple(-x for x in l)):
                return False
        return True

    def same_cone(self, other):
        return self.contains_cone(other) and other.contains_cone(self)

    def intersect(self, other):
        return Polyhedron(self.dim, self.rows + other.rows, self.rhs + other.rhs)


@lru_cache(maxsize=4096)
def _generators(poly):
    if not poly.homogeneous:
        raise ValueError("generators are defined for homogeneous polyhedra only")
    return extreme_rays(poly.system())


def cone_from_generators(dim, gens):
    """H-representation of ``cone(gens)`` via the double polar."""
    gens = mat(gens)
    polar = Polyhedron(dim, gens)
    g = polar.generators()
    return Polyhedron.build(dim, ineq=g.rays, eq=g.lineality)


@dataclass(frozen=True)
class PolyUnion:
    dim: int
    pieces: tuple

    def __post_init__(self):
        if not self.pieces:
            raise ValueError("a PolyUnion needs at least one piece")
        for p in self.pieces:
            if p.dim != self.dim:
                raise ValueError("pieces must share the dimension")

    def contains(self, x):
        return any(p.contains(x) for p in self.pieces)


@dataclass(frozen=True)
class ConeUnion:
    """Union of homogeneous polyhedral cones; no pieces means the empty set."""

    dim: int
    pieces: tuple = ()

    @property
    def empty(self):
        return not self.pieces

    def contains(self, x):
        return any(p.contains(x) for p in self.pieces)

    def covered_by(self, other):
        """Every piece of ``self`` lies inside some piece of ``other``."""
        return all(any(q.contains_cone(p) for q in other.pieces) for p in self.pieces)

    def same_union(self, other):
        return self.covered_by(other) and other.covered_by(self)


def prune_pieces(dim, pieces):
    """Drop duplicate and subsumed cone pieces, keeping the first of equals."""
    kept = []
    for p in pieces:
        if any(q.contains_cone(p) for q in kept):
            continue
        kept = [q for q in kept if not p.contains_cone(q)]
        kept.append(p)
    order = {id(p): i for i, p in enumerate(pieces)}
    kept.sort(key=lambda p: order[id(p)])
    return ConeUnion(dim, tuple(kept))


def tangent_cone(omega, x):
    """Union over the pieces containing ``x`` of their tangent cones."""
    x = vec(x)
    cones = []
    for p in omega.pieces:
        if p.contains(x):
            act = p.active_set(x)
            cones.append(Polyhedron(omega.dim, tuple(p.rows[j] for j in act)))
    return prune_pieces(omega.dim, cones)


def frechet_normal_cone(omega, x):
    """Intersection over pieces containing ``x`` of their normal cones."""
    x = vec(x)
    out = None
    for p in omega.pieces:
        if p.contains(x):
            act = p.active_set(x)
            piece = cone_from_generators(omega.dim, [p.rows[j] for j in act])
            out = piece if out is None else out.intersect(piece)
    return out if out is not None else Polyhedron.empty(omega.dim)


def _hyperplanes(rows):
    """Distinct hyperplane normals among ``rows`` and each row's (index, sign)."""
    normals = []
    index = {}
    where = []
    for a in rows:
        if not any(a):
            where.append(None)
            continue
        p = primitive(a)
        lead = next(v for v in p if v)
        sgn = 1 if lead > 0 else -1
        key = tuple(sgn * v for v in p)
        if key not in index:
            index[key] = len(normals)
            normals.append(key)
        where.append((index[key], sgn))
    return normals, where


def arrangement_faces(dim, normals):
    """All realizable sign vectors of a central hyperplane arrangement.

    Depth-first over the hyperplanes; each partial sign vector is kept only if
    an exact max-slack LP realizes it.  Yields tuples over {-1, 0, 1}.
    """
    normals = list(normals)

    def realizable(signs):
        eq = [h for h, s in zip(normals, signs) if s == 0]
        strict = [tuple(s * v for v in h) for h, s in zip(normals, signs) if s != 0]
        base = LinearSystem(dim, eq_rows=eq)
        if not strict:
            return True
        return max_slack(base, strict) is not None

    out = []

    def walk(prefix):
        if len(prefix) == len(normals):
            out.append(tuple(prefix))
            return
        for s in (-1, 0, 1):
            cand = prefix + [s]
            if realizable(cand):
                walk(cand)

    walk([])
    return out


def directional_limiting_normal_cone(omega, x, u):
    """Directional limiting normal cone of ``omega`` at ``x`` in direction ``u``.

    Reduces to the cone ``K`` of pieces whose tangent cones contain ``u``
    (linearised at ``u``), then takes the union of regular normal cones of
    ``K`` over every face of the hyperplane arrangement it generates.
    Returns the empty union when ``x`` is outside ``omega`` or ``u`` is not
    a tangent direction.
    """
    x, u = vec(x), vec(u)
    dim = omega.dim
    data = []  # (piece index, rows of A_i(u))
    for i, p in enumerate(omega.pieces):
        if not p.contains(x):
            continue
        act = p.active_set(x)
        vals = [dot(p.rows[j], u) for j in act]
        if all(v <= 0 for v in vals):
            data.append((i, tuple(p.rows[j] for j, v in zip(act, vals) if v == 0)))
    if not data:
        return ConeUnion(dim)
    all_rows = [a for _, rows in data for a in rows]
    normals, where = _hyperplanes(all_rows)
    faces = arrangement_faces(dim, normals)
    candidates = []
    for sigma in faces:
        pos = 0
        in_pieces = []
        for i, rows in data:
            signs = []
            for _ in rows:
                w = where[pos]
                pos += 1
                signs.append(0 if w is None else w[1] * sigma[w[0]])
            if all(s <= 0 for s in signs):
                tight = tuple(a for a, s in zip(rows, signs) if s == 0)
                in_pieces.append((i, tight))
        if not in_pieces:
            continue
        cone = None
        for _, tight in in_pieces:
            c = cone_from_generators(dim, tight)
            cone = c if cone is None else cone.intersect(c)
        key = tuple((i, len(t)) for i, t in in_pieces)
        candidates.append((key, sigma, cone))
    candidates.sort(key=lambda c: (c[0], c[1]))
    return prune_pieces(dim, [c for _, _, c in candidates])


def limiting_normal_cone(omega, x):
    return directional_limiting_normal_cone(omega, x, (0,) * omega.dim)


def q_ec(dim_pairs=1):
    """The complementarity corner set ``{(a, b) <= 0, ab = 0}`` per pair, as a union."""
    pieces = []
    m = 2 * dim_pairs
    for choice in product((0, 1), repeat=dim_pairs):
        ineq, eq = [], []
        for k, c in enumerate(choice):
            ea = tuple(Fraction(int(j == 2 * k)) for j in range(m))
            eb = tuple(Fraction(int(j == 2 * k + 1)) for j in range(m))
            if c == 0:  # a <= 0, b = 0
                ineq.append(ea)
                eq.append(eb)
            else:  # a = 0, b <= 0
                eq.append(ea)
                ineq.append(eb)
        pieces.append(Polyhedron.build(m, ineq=ineq, eq=eq))
    return PolyUnion(m, tuple(pieces))
