"""Second-order necessary and sufficient conditions along critical directions."""
from dataclasses import dataclass
from fractions import Fraction

from .classifier import classify, direction_certificate, subregularity_certificate
from .errors import HessianUnavailable, InputError
from .exact import LinearSystem, extreme_rays, feasible_point, lp_solve, max_slack
from .exact.linalg import dot, matvec, normalize1, vec
from .model import format_label, require_critical, tlin_branches
from .multipliers import (
    LIMITING,
    REGULAR,
    build_multiplier_set,
    is_empty,
    live_components,
    quadratic_form_vector,
    query,
)

HOLDS = "holds"
VIOLATED = "violated"
FAILS = "fails"
UNAVAILABLE = "unavailable"
INAPPLICABLE = "inapplicable"

DIRECTIONAL = "directional"
UNIFORM = "uniform"
SSOSC = "ssosc"

_ZERO = Fraction(0)


@dataclass(frozen=True)
class Verdict:
    status: str
    direction: tuple
    lambda0: int = None
    witness: tuple = None
    value: Fraction = None
    order: str = None  # "first" or "second" for necessary-condition violations
    certified: bool = False  # for VIOLATED: the non-minimality conclusion is certified
    note: str = ""

    @property
    def holds(self):
        return self.status == HOLDS


def _witness(ms, c0, c, strict):
    """A member of ``ms`` with c0 + c.lambda > 0 (strict) or >= 0, or None."""
    row = tuple(-x for x in c)
    for sl in ms.slices():
        if strict:
            pt = max_slack(sl.system, [row], [c0])
        else:
            pt = feasible_point(sl.system.with_rows(ineq=[row], ineq_rhs=[c0]))
        if pt is not None:
            return pt
    return None


def _witness_below(ms, c0, c):
    """A member with c0 + c.lambda <= 0, or None."""
    for sl in ms.slices():
        pt = feasible_point(sl.system.with_rows(ineq=[c], ineq_rhs=[-c0]))
        if pt is not None:
            return pt
    return None


def _curvature(point, u, sets, with_f):
    live = set()
    for ms in sets:
        live |= live_components(ms)
    if with_f:
        live.add("f")
    return quadratic_form_vector(point, u, components=live)


def validate_splitting(point, core_set, u):
    """Whether the complement of ``core_set`` is certified subregular along ``u``."""
    rest = frozenset(point.constraint_labels()) - frozenset(core_set)
    if all(point.is_affine(lb) for lb in rest):
        return True, "the non-core constraints are affine"
    cert = subregularity_certificate(point, rest, u)
    if cert.certified:
        names = ", ".join(format_label(lb) for lb in sorted(rest))
        return True, f"non-core constraints {{{names}}} certified ({cert.kind.replace('_', ' ')})"
    return False, "the non-core constraints are not certified subregular along u"


def necessary_so(point, u, core_set=None):
    """Second-order necessary condition along a critical direction.

    Holds when some lambda0 in {0, 1} admits a directional multiplier with
    nonnegative Lagrangian curvature.  When the constraint map is certified
    subregular along u only lambda0 = 1 counts.  A violation is reported as
    certified non-minimality only if the core-set splitting is justified.
    """
    u = vec(u)
    require_critical(point, u)
    if core_set is None:
        core_set = point.nonaffine_labels()
    ok_split, split_note = validate_splitting(point, core_set, u)
    ms1 = build_multiplier_set(point, 1, u, LIMITING, core_set)
    ms0 = build_multiplier_set(point, 0, u, LIMITING, core_set)
    e1, e0 = is_empty(ms1), is_empty(ms0)
    if e1 and e0:
        return Verdict(
            VIOLATED,
            u,
            order="first",
            certified=ok_split,
            note="no directional multiplier for either lambda0; " + split_note,
        )
    try:
        c0, c = _curvature(point, u, [m for m, e in ((ms1, e1), (ms0, e0)) if not e], not e1)
    except HessianUnavailable as exc:
        return Verdict(UNAVAILABLE, u, note=str(exc))
    if not e1:
        r1 = query(ms1, c, "max", c0, decide_singleton=False)
        if r1.unbounded or r1.value >= 0:
            w = r1.witness if not r1.unbounded else _witness(ms1, c0, c, False)
            return Verdict(HOLDS, u, 1, w, c0 + dot(c, w), note=split_note)
    cert = direction_certificate(point, u)
    if cert.certified:
        return Verdict(
            VIOLATED,
            u,
            order="second",
            certified=ok_split,
            note="constraint map certified subregular along u, so only lambda0 = 1 counts; " + split_note,
        )
    if not e0:
        r0 = query(ms0, c, "max", 0, decide_singleton=False)
        if r0.unbounded or r0.value >= 0:
            w = r0.witness if not r0.unbounded else _witness(ms0, _ZERO, c, False)
            return Verdict(HOLDS, u, 0, w, dot(c, w), note=split_note)
    return Verdict(VIOLATED, u, order="second", certified=ok_split, note=split_note)


def _check_dirs(point, directions):
    out = []
    for u in directions:
        u = vec(u)
        if len(u) != point.n:
            raise InputError(f"direction of length {len(u)}, expected {point.n}")
        if not any(u):
            raise InputError("sufficient conditions need nonzero directions")
        require_critical(point, u)
        out.append(u)
    return out


def _sufficient_directional(point, u, variant, core_set):
    sets = [(lam0, build_multiplier_set(point, lam0, u, variant, core_set)) for lam0 in (1, 0)]
    sets = [(lam0, ms) for lam0, ms in sets if not is_empty(ms)]
    if not sets:
        return Verdict(FAILS, u, note="no directional multiplier")
    try:
        c0, c = _curvature(point, u, [ms for _, ms in sets], any(l0 == 1 for l0, _ in sets))
    except HessianUnavailable as exc:
        return Verdict(UNAVAILABLE, u, note=str(exc))
    for lam0, ms in sets:
        off = c0 if lam0 == 1 else _ZERO
        r = query(ms, c, "max", off, decide_singleton=False)
        if r.unbounded or r.value > 0:
            w = r.witness if not r.unbounded else _witness(ms, off, c, True)
            return Verdict(HOLDS, u, lam0, w, off + dot(c, w))
    return Verdict(FAILS, u, note="curvature is nonpositive on every directional multiplier")


def _sufficient_uniform(point, u, core_set):
    ms = build_multiplier_set(point, 1, u, LIMITING, core_set)
    if is_empty(ms):
        return Verdict(INAPPLICABLE, u, note="no normal directional multiplier (extended M-stationarity fails at u)")
    try:
        c0, c = _curvature(point, u, [ms], True)
    except HessianUnavailable as exc:
        return Verdict(UNAVAILABLE, u, note=str(exc))
    r = query(ms, c, "min", c0, decide_singleton=False)
    if r.unbounded:
        w = _witness_below(ms, c0, c)
        return Verdict(FAILS, u, 1, w, c0 + dot(c, w), note="curvature unbounded below")
    if r.value > 0:
        return Verdict(HOLDS, u, 1, r.witness, r.value)
    return Verdict(FAILS, u, 1, r.witness, r.value)


def _ssosc(point, u):
    zero = (0,) * point.n
    ms = build_multiplier_set(point, 1, zero, LIMITING)
    if is_empty(ms):
        return Verdict(INAPPLICABLE, u, note="the point is not M-stationary")
    try:
        c0, c = _curvature(point, u, [ms], True)
    except HessianUnavailable as exc:
        return Verdict(UNAVAILABLE, u, note=str(exc))
    r = query(ms, c, "min", c0, decide_singleton=False)
    caveat = "strong second-order condition over all multipliers; not sufficient for local optimality by itself"
    if r.unbounded:
        w = _witness_below(ms, c0, c)
        return Verdict(FAILS, u, 1, w, c0 + dot(c, w), note=caveat)
    if r.value > 0:
        return Verdict(HOLDS, u, 1, r.witness, r.value, note=caveat)
    return Verdict(FAILS, u, 1, r.witness, r.value, note=caveat)


@dataclass(frozen=True)
class SufficientReport:
    mode: str
    per_direction: tuple
    global_verdict: bool
    note: str


def critical_branch_rays(point):
    """Per branch of the critical cone: (rays, lineality) of that branch."""
    out = []
    for _, system in tlin_branches(point):
        crit = system.with_rows(ineq=[point.f.gradient])
        gens = extreme_rays(crit)
        out.append((gens.rays, gens.lineality))
    return out


def sufficient_so(point, directions, mode=DIRECTIONAL, variant=REGULAR, core_set=None):
    """Sufficient conditions for an essential local minimizer of second order.

    Per-direction verdicts for ``mode`` in {directional, uniform, ssosc}.  A global
    claim is made only when every branch of the critical cone is a single ray
    (or zero) and each such ray is among the supplied directions with a
    holding verdict.  ``variant`` selects the multiplier set used by the directional mode
    (regular by default; ``limiting`` is the other reading).
    """
    dirs = _check_dirs(point, directions)
    if mode == DIRECTIONAL:
        per = [_sufficient_directional(point, u, variant, core_set) for u in dirs]
    elif mode == UNIFORM:
        per = [_sufficient_uniform(point, u, core_set) for u in dirs]
    elif mode == SSOSC:
        per = [_ssosc(point, u) for u in dirs]
    else:
        raise InputError(f"unknown mode {mode!r}")
    if mode == SSOSC:
        return SufficientReport(mode, tuple(per), False, "no global claim is made from the strong second-order condition")
    branches = critical_branch_rays(point)
    if any(lin or len(rays) > 1 for rays, lin in branches):
        return SufficientReport(
            mode, tuple(per), False, "some branch of the critical cone is not a single ray; no global claim"
        )
    needed = {normalize1(r) for rays, _ in branches for r in rays}
    held = {normalize1(v.direction) for v in per if v.holds}
    if not needed <= held:
        return SufficientReport(mode, tuple(per), False, "not every critical ray is covered by a holding direction")
    if mode == UNIFORM and not classify(point).extended_m.verdict:
        return SufficientReport(mode, tuple(per), False, "the point is not extended M-stationary")
    return SufficientReport(
        mode, tuple(per), True, "essential local minimizer of second order (critical cone is a union of rays)"
    )


@dataclass(frozen=True)
class PrimalResult:
    kind: str  # "no_witness" | "witness" | "unavailable"
    v: tuple = None
    piece: int = None
    note: str = ""


def _pieces_along(point, u):
    """Pieces of the disjunctive set whose tangent cone at F contains grad F u.

    Yields (piece index, rows a with a.(grad F u) = 0 among active rows).
    """
    F, jac, omega = point.encoding()
    Fu = matvec(jac, u) if jac else ()
    for i, piece in enumerate(omega.pieces):
        if not piece.contains(F):
            continue
        act = piece.active_set(F)
        vals = [dot(piece.rows[j], Fu) for j in act]
        if all(v <= 0 for v in vals):
            yield i, [piece.rows[j] for j, v in zip(act, vals) if v == 0]


def _encoded_curvature(point, u, rows):
    """u^T hess F u in encoding order, only for components some row touches."""
    need = set()
    for a in rows:
        need |= {k for k, x in enumerate(a) if x}
    comps = [fd for fd in point.g] + [fd for fd in point.h]
    signs = [1] * (point.l + point.p)
    for a, b in zip(point.G, point.H):
        comps += [a, b]
        signs += [-1, -1]
    w = []
    missing = []
    for k, (fd, s) in enumerate(zip(comps, signs)):
        if k not in need:
            w.append(_ZERO)
            continue
        v = fd.curvature(u)
        if v is None:
            missing.append(k)
            w.append(_ZERO)
        else:
            w.append(s * v)
    return tuple(w), missing


def primal_curvature_witness(point, u):
    """Search for v with grad f v + u'hess f u/2 in the tangent cone of R_- at
    grad f u and grad F v + u'hess F u/2 in the second-order tangent set of
    some piece.  NoWitness is the primal form of the curvature condition."""
    u = vec(u)
    require_critical(point, u)
    n = point.n
    fu = dot(point.f.gradient, u)
    _, jac, _ = point.encoding()
    pieces = list(_pieces_along(point, u))
    all_rows = [a for _, rows in pieces for a in rows]
    w, missing = _encoded_curvature(point, u, all_rows)
    c0 = point.f.curvature(u)
    if missing or (fu == 0 and c0 is None):
        return PrimalResult("unavailable", note="missing Hessian")
    half = Fraction(1, 2)
    for i, rows in pieces:
        ineq, rhs = [], []
        for a in rows:
            ineq.append(tuple(sum((a[k] * jac[k][j] for k in range(len(a)) if a[k]), _ZERO) for j in range(n)))
            rhs.append(-half * dot(a, w))
        if fu == 0:
            ineq.append(point.f.gradient)
            rhs.append(-half * c0)
        v = feasible_point(LinearSystem(n, ineq_rows=ineq, ineq_rhs=rhs))
        if v is not None:
            return PrimalResult("witness", v, i)
    return PrimalResult("no_witness")


def curvature_multiplier_per_piece(point, u):
    """Per piece along u: is there (lambda0, lambda) in the regular normal cones
    with grad_x L = 0 and positive curvature?  Returns {piece: bool}."""
    u = vec(u)
    require_critical(point, u)
    n = point.n
    fu = dot(point.f.gradient, u)
    _, jac, _ = point.encoding()
    pieces = list(_pieces_along(point, u))
    w, missing = _encoded_curvature(point, u, [a for _, rows in pieces for a in rows])
    c0 = point.f.curvature(u)
    if missing or (fu == 0 and c0 is None):
        raise HessianUnavailable(["encoded components"] if missing else ["f"])
    out = {}
    for i, rows in pieces:
        k = len(rows)
        dim = 1 + k  # (lambda0, mu_1..mu_k), all >= 0
        eq = []
        for j in range(n):
            row = [point.f.gradient[j]]
            for a in rows:
                row.append(sum((a[t] * jac[t][j] for t in range(len(a)) if a[t]), _ZERO))
            eq.append(row)
        ineq = []
        for t in range(dim):
            r = [_ZERO] * dim
            r[t] = Fraction(-1)
            ineq.append(r)
        ineq.append([Fraction(1)] * dim)
        ineq_rhs = [0] * dim + [1]
        if fu != 0:
            eq.append([Fraction(1)] + [_ZERO] * k)
        system = LinearSystem(dim, eq, [0] * len(eq), ineq, ineq_rhs)
        obj = [c0 if c0 is not None else _ZERO] + [dot(a, w) for a in rows]
        res = lp_solve(obj, "max", system)
        out[i] = res.optimal and res.value > 0
    return out
