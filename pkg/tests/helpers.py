"""Shared fixtures: corpus loading, random instances and brute-force oracles."""
import random
from fractions import Fraction
from importlib import resources
from itertools import product

from stationarity.cli.problem import parse_problem
from stationarity.exact import LinearSystem, lp_solve, max_slack
from stationarity.geometry import ConeUnion, Polyhedron, PolyUnion, cone_from_generators, prune_pieces
from stationarity.model import FunctionData, MpecPoint

CORPUS = (
    "abs_power_nlp",
    "linear_m_not_extended",
    "curved_pair_min",
    "curved_pair_nonmin",
    "linear_pivot_descent",
    "strong_m_not_s",
    "m_not_strong_m",
    "strong_so_not_min",
)


def corpus_path(name):
    return resources.files("stationarity.cli") / "corpus" / f"{name}.json"


def load(name):
    return parse_problem(corpus_path(name).read_bytes())


def F(x, d=1):
    return Fraction(x, d)


def rvec(rng, n, lo=-2, hi=2):
    return tuple(F(rng.randint(lo, hi)) for _ in range(n))


def rsym(rng, n, lo=-2, hi=2):
    h = [[F(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            h[i][j] = h[j][i] = F(rng.randint(lo, hi))
    return tuple(tuple(r) for r in h)


def random_point(rng, n=None, l=None, p=None, q=None, affine=False, hessians=True, active=False):
    """A feasible MpecPoint at the origin with small integer data.

    ``active`` makes every inequality active and every pair biactive.
    """
    n = n if n is not None else rng.randint(1, 4)
    l = l if l is not None else rng.randint(0, 2)
    p = p if p is not None else rng.randint(0, 1)
    q = q if q is not None else rng.randint(0, 2)

    def fn(value, lin=None):
        is_aff = affine or (lin if lin is not None else rng.random() < 0.5)
        hess = None
        if not is_aff and hessians:
            hess = rsym(rng, n)
        return FunctionData(F(value), rvec(rng, n), hess, is_aff)

    f = fn(0)
    g = tuple(fn(0 if active else rng.choice((0, 0, -1))) for _ in range(l))
    h = tuple(fn(0) for _ in range(p))
    G, H = [], []
    for _ in range(q):
        a, b = (0, 0) if active else rng.choice(((0, 0), (0, 0), (1, 0), (0, 1)))
        G.append(fn(a))
        H.append(fn(b))
    return MpecPoint(n, f, g, h, tuple(G), tuple(H))


def with_gradient_from(rng, point, components, lo=-2, hi=3):
    """Same point with grad f = -sum w_k c_k over the given multiplier
    components, so a multiplier supported there exists."""
    cols = point.signed_gradients()
    grad = [F(0)] * point.n
    for k in components:
        w = F(rng.randint(lo, hi))
        grad = [a - w * b for a, b in zip(grad, cols[k])]
    f = point.f
    f = FunctionData(f.value, grad, f.hessian, f.affine)
    return MpecPoint(point.n, f, point.g, point.h, point.G, point.H)


def active_components(point):
    from stationarity.model import classify_indices

    ix = classify_indices(point)
    out = [point.idx_g(i) for i in sorted(ix.I_g)]
    out += [point.idx_h(i) for i in range(point.p)]
    out += [point.idx_G(i) for i in sorted(ix.I_0plus | ix.I_00)]
    out += [point.idx_H(i) for i in sorted(ix.I_plus0 | ix.I_00)]
    return out


def random_polyunion(rng, dim=None, pieces=None):
    """Union of small polyhedra all containing the origin."""
    dim = dim or rng.randint(1, 3)
    out = []
    for _ in range(pieces or rng.randint(1, 3)):
        k = rng.randint(1, dim + 1)
        rows, rhs = [], []
        for _ in range(k):
            a = rvec(rng, dim)
            if not any(a):
                continue
            rows.append(a)
            rhs.append(F(rng.choice((0, 0, 1))))
        out.append(Polyhedron.build(dim, ineq=rows, ineq_rhs=rhs))
    return PolyUnion(dim, tuple(out))


def brute_limiting_normal_cone(omega, x):
    """Limiting normal cone at ``x`` by enumerating every face pattern.

    For each piece containing x choose either "v outside" (with a witness
    row a.v > 0) or a tight subset of its active rows; realise the pattern
    with a strict-slack LP and emit the intersection of the per-piece
    regular normal cones.  Independent of the arrangement-based code path.
    """
    dim = omega.dim
    data = []
    for p in omega.pieces:
        if p.contains(x):
            act = p.active_set(x)
            data.append(tuple(p.rows[j] for j in act))
    if not data:
        return ConeUnion(dim)
    options = []
    for rows in data:
        opts = [("out", j) for j in range(len(rows))]
        for mask in product((0, 1), repeat=len(rows)):
            opts.append(("in", mask))
        options.append(opts)
    cones = []
    for choice in product(*options):
        eq, strict = [], []
        for rows, (kind, spec) in zip(data, choice):
            if kind == "out":
                strict.append(tuple(-v for v in rows[spec]))  # a.v > 0
            else:
                for a, tight in zip(rows, spec):
                    if tight:
                        eq.append(a)
                    else:
                        strict.append(a)  # a.v < 0
        if not any(kind == "in" for kind, _ in choice):
            continue
        system = LinearSystem(dim, eq_rows=eq)
        if strict:
            if max_slack(system, strict) is None:
                continue
        cone = None
        for rows, (kind, spec) in zip(data, choice):
            if kind != "in":
                continue
            tight = [a for a, t in zip(rows, spec) if t]
            c = cone_from_generators(dim, tight)
            cone = c if cone is None else cone.intersect(c)
        cones.append(cone)
    return prune_pieces(dim, cones)


def in_regular_cone_region(lg, lh):
    """The complementarity multiplier region {a > 0, b > 0} or {ab = 0}."""
    return (lg > 0 and lh > 0) or lg * lh == 0


def sample_members(ms, rng, count=3):
    """A few members of a multiplier set: LP optima for random objectives."""
    out = []
    for sl in ms.slices():
        for _ in range(count):
            c = rvec(rng, ms.dim)
            res = lp_solve(c, "max", sl.system)
            if res.optimal:
                out.append(res.point)
            elif res.unbounded:
                out.append(res.point)
                out.append(tuple(a + b for a, b in zip(res.point, res.ray)))
    return out


def seeds(count, base=0):
    return [random.Random(base * 100003 + k) for k in range(count)]


def aff(value, grad):
    return FunctionData(F(value), tuple(F(x) for x in grad), None, True)


def quad(value, grad, hess):
    return FunctionData(F(value), tuple(F(x) for x in grad), tuple(tuple(F(x) for x in r) for r in hess))


def corner_point(fgrad, fhess=None):
    """min f over -(x1, x2) in the complementarity corner, i.e. G = x1, H = x2."""
    f = quad(0, fgrad, fhess) if fhess is not None else aff(0, fgrad)
    return MpecPoint(2, f, G=(aff(0, (1, 0)),), H=(aff(0, (0, 1)),))
