"""Extreme rays and lineality of a homogeneous cone by double description.

The cone ``{x | E x = 0, A x <= 0}`` is built up one constraint at a time
from the whole space.  Lineality directions are eliminated first; once the
remaining cone is pointed the classic Motzkin step with the combinatorial
adjacency test takes over.
"""
from dataclasses import dataclass
from fractions import Fraction

from .linalg import dot, normalize1, row_basis


@dataclass(frozen=True)
class ConeGenerators:
    rays: tuple
    lineality: tuple

    @property
    def trivial(self):
        return not self.rays and not self.lineality


def _combine(a, rp, rm):
    """Point on the hyperplane ``a.x = 0`` between rays rp (a.rp > 0) and rm."""
    vp, vm = dot(a, rp), dot(a, rm)
    return tuple(vp * y - vm * x for x, y in zip(rp, rm))


def extreme_rays(system):
    """Rays (1-norm normalised) and a lineality basis of a homogeneous system.

    The result satisfies ``cone = cone(rays) + span(lineality)``; the zero
    cone gives two empty tuples.
    """
    if not system.homogeneous:
        raise ValueError("extreme_rays needs a homogeneous system")
    n = system.n
    lin = [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    rays = []  # (vector, frozenset of tight inequality indices)
    constraints = [(a, True) for a in system.eq_rows] + [(a, False) for a in system.ineq_rows]
    for k, (a, is_eq) in enumerate(constraints):
        if not any(a):
            continue
        vals = [dot(a, l) for l in lin]
        piv = next((i for i, v in enumerate(vals) if v), None)
        if piv is not None:
            l0, v0 = lin[piv], vals[piv]
            new_lin = []
            for i, l in enumerate(lin):
                if i == piv:
                    continue
                t = vals[i] / v0
                new_lin.append(tuple(x - t * y for x, y in zip(l, l0)) if t else l)
            lin = new_lin
            new_rays = []
            for r, z in rays:
                t = dot(a, r) / v0
                r2 = tuple(x - t * y for x, y in zip(r, l0)) if t else r
                new_rays.append((r2, z | {k}))
            if not is_eq:
                # previously processed constraints all vanish on l0
                tight = frozenset(range(k))
                sgn = -1 if v0 > 0 else 1
                new_rays.append((tuple(sgn * x for x in l0), tight))
            rays = new_rays
            continue
        plus, zero, minus = [], [], []
        for r, z in rays:
            v = dot(a, r)
            (plus if v > 0 else minus if v < 0 else zero).append((r, z))
        new_rays = [(r, z | {k}) for r, z in zero]
        if not is_eq:
            new_rays += minus
        for rp, zp in plus:
            for rm, zm in minus:
                common = zp & zm
                adjacent = True
                for r, z in rays:
                    if r is rp or r is rm:
                        continue
                    if common <= z:
                        adjacent = False
                        break
                if adjacent:
                    new_rays.append((_combine(a, rp, rm), common | {k}))
        rays = new_rays
    seen = set()
    out = []
    for r, _ in rays:
        if not any(r):
            continue
        rn = normalize1(r)
        if rn not in seen:
            seen.add(rn)
            out.append(rn)
    out.sort(reverse=True)
    lineality = row_basis(lin, n) if lin else ()
    return ConeGenerators(tuple(out), tuple(lineality))
