"""Directional multiplier sets as unions of branch polyhedra.

A multiplier set collects lambda = (lambda^g, lambda^h, lambda^G, lambda^H)
with grad_x L(x, lambda0, lambda) = 0, where

    L = lambda0 f + lambda^g.g + lambda^h.h - lambda^G.G - lambda^H.H,

and the sign pattern of the normal cone of the constraint set taken in
direction u.  The limiting variant splits each doubly-degenerate pair into
three branches; the regular variant keeps one.  For lambda0 = 0 the nonzero
condition on the core constraints is enforced by splitting free core
components into orthants and normalising their signed sum to 1.
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import InputError
from .exact import LinearSystem, lp_solve
from .exact.linalg import vec
from .model import classify_indices, require_tlin

LIMITING = "limiting"
REGULAR = "regular"

BOTH_NONNEG = "both_nonneg"
G_ZERO = "G_zero"
H_ZERO = "H_zero"

EMPTY = "empty"
NONEMPTY = "nonempty"
SINGLETON = "singleton"

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class Branch:
    pattern: tuple  # ((pair index, BOTH_NONNEG | G_ZERO | H_ZERO), ...)
    system: LinearSystem
    fixed_zero: frozenset
    nonneg: frozenset


@dataclass(frozen=True)
class Slice:
    """A convex piece actually handed to the LP solver."""

    branch: int
    orthant: tuple  # ((component, sign), ...) for lambda0 = 0, else ()
    system: LinearSystem


@dataclass(frozen=True)
class MultiplierSet:
    point: object
    lambda0: int
    direction: tuple
    variant: str
    core_set: frozenset
    core_components: tuple
    branches: tuple

    @property
    def dim(self):
        return self.point.m

    def slices(self):
        out = []
        for b, br in enumerate(self.branches):
            if self.lambda0 != 0:
                out.append(Slice(b, (), br.system))
                continue
            live = [k for k in self.core_components if k not in br.fixed_zero]
            free = [k for k in live if k not in br.nonneg]
            for signs in product((1, -1), repeat=len(free)):
                sign_of = dict(zip(free, signs))
                norm = [_ZERO] * self.dim
                ineq = []
                for k in live:
                    s = sign_of.get(k, 1)
                    norm[k] = Fraction(s)
                    if k in sign_of:
                        row = [_ZERO] * self.dim
                        row[k] = Fraction(-s)
                        ineq.append(row)
                if not live:
                    continue
                system = br.system.with_rows(eq=[norm], eq_rhs=[1], ineq=ineq)
                out.append(Slice(b, tuple(sorted(sign_of.items())), system))
        return out


def _unit(dim, k, s=1):
    row = [_ZERO] * dim
    row[k] = Fraction(s)
    return row


def build_multiplier_set(point, lambda0, u, variant=LIMITING, core_set=None):
    """The set Lambda^{lambda0}(x; u) (limiting) or its regular counterpart.

    ``core_set`` holds constraint labels such as ("g", 0) or ("c", 1) whose
    multipliers enter the nonzero condition when lambda0 = 0; the default is
    every non-affine constraint.
    """
    if lambda0 not in (0, 1):
        raise InputError("lambda0 must be 0 or 1")
    if variant not in (LIMITING, REGULAR):
        raise InputError(f"unknown variant {variant!r}")
    u = vec(u)
    d = require_tlin(point, u)
    ix = classify_indices(point)
    m, n = point.m, point.n
    if core_set is None:
        core_set = point.nonaffine_labels()
    core_set = frozenset(core_set)
    core = sorted(k for lb in core_set for k in point.label_components(lb))

    cols = point.signed_gradients()
    eq = []
    rhs = []
    for j in range(n):
        eq.append([c[j] for c in cols])
        rhs.append(-lambda0 * point.f.gradient[j])
    fixed = set()
    nonneg = set()
    for i in range(point.l):
        k = point.idx_g(i)
        if i in d.I_g:
            nonneg.add(k)
        else:
            fixed.add(k)
    for i in ix.I_0plus | d.I_0plus:
        fixed.add(point.idx_H(i))
    for i in ix.I_plus0 | d.I_plus0:
        fixed.add(point.idx_G(i))

    zz = sorted(d.I_00)
    if variant == REGULAR:
        patterns = [tuple((i, BOTH_NONNEG) for i in zz)]
    else:
        patterns = [tuple(zip(zz, c)) for c in product((BOTH_NONNEG, G_ZERO, H_ZERO), repeat=len(zz))]
    branches = []
    for pat in patterns:
        bfixed, bnonneg = set(fixed), set(nonneg)
        for i, kind in pat:
            if kind == BOTH_NONNEG:
                bnonneg |= {point.idx_G(i), point.idx_H(i)}
            elif kind == G_ZERO:
                bfixed.add(point.idx_G(i))
            else:
                bfixed.add(point.idx_H(i))
        beq = list(eq) + [_unit(m, k) for k in sorted(bfixed)]
        brhs = list(rhs) + [0] * len(bfixed)
        bineq = [_unit(m, k, -1) for k in sorted(bnonneg - bfixed)]
        system = LinearSystem(m, beq, brhs, bineq)
        branches.append(Branch(pat, system, frozenset(bfixed), frozenset(bnonneg)))
    return MultiplierSet(point, lambda0, u, variant, core_set, tuple(core), tuple(branches))


@dataclass(frozen=True)
class SetQueryResult:
    status: str
    witness: tuple = None
    value: Fraction = None  # best objective value incl. offset; None if unbounded/empty
    unbounded: bool = False
    extrema: tuple = ()  # ((Slice, LpOutcome), ...) when an objective was given

    @property
    def empty(self):
        return self.status == EMPTY


def query(ms, objective=None, sense="max", offset=0, decide_singleton=True):
    """Emptiness, a witness, and optionally the extreme value of an objective.

    With an objective ``c`` the reported value is ``offset + c.lambda``
    optimised over the whole union.  For lambda0 = 0 all answers refer to the
    normalised slices.
    """
    offset = Fraction(offset)
    c = vec(objective) if objective is not None else (_ZERO,) * ms.dim
    slices = ms.slices()
    outcomes = []
    best = None
    unbounded = False
    for sl in slices:
        out = lp_solve(c, sense, sl.system)
        outcomes.append((sl, out))
        if out.infeasible:
            continue
        if out.unbounded:
            if not unbounded:
                best = (sl, out)
            unbounded = True
            continue
        if unbounded:
            continue
        if best is None or (out.value > best[1].value if sense == "max" else out.value < best[1].value):
            best = (sl, out)
    if best is None:
        return SetQueryResult(EMPTY, extrema=tuple(outcomes) if objective is not None else ())
    witness = best[1].point
    value = None if unbounded else offset + best[1].value
    status = NONEMPTY
    if decide_singleton and not unbounded:
        status = SINGLETON if _all_equal(ms.dim, [sl for sl, o in outcomes if not o.infeasible], witness) else NONEMPTY
    return SetQueryResult(
        status,
        witness,
        value,
        unbounded,
        tuple(outcomes) if objective is not None else (),
    )


def _all_equal(dim, slices, point):
    for sl in slices:
        for k in range(dim):
            for sense in ("min", "max"):
                e = _unit(dim, k)
                out = lp_solve(e, sense, sl.system)
                if not out.optimal or out.value != point[k]:
                    return False
    return True


def is_empty(ms):
    return query(ms, decide_singleton=False).empty


def membership(ms, lam):
    lam = vec(lam)
    if len(lam) != ms.dim:
        raise InputError(f"multiplier of length {len(lam)}, expected {ms.dim}")
    if ms.lambda0 == 0 and not any(lam[k] for k in ms.core_components):
        return False
    return any(br.system.contains(lam) for br in ms.branches)


def quadratic_form_vector(point, u, components=None):
    """Coefficients c0, c with u^T hess_xx L u = lambda0 c0 + c.lambda.

    Raises HessianUnavailable listing every needed Hessian that is missing.
    ``components`` restricts which multiplier components need curvature (the
    others are reported as 0); the objective is needed unless
    ``components`` is given without the key "f".
    """
    from .errors import HessianUnavailable

    u = vec(u)
    if not any(u):
        return _ZERO, (_ZERO,) * point.m
    names = point.component_names()
    need = set(range(point.m)) if components is None else set(components)
    missing = []
    c = []
    for k, (fd, s) in enumerate(point.components()):
        if k not in need:
            c.append(_ZERO)
            continue
        v = fd.curvature(u)
        if v is None:
            missing.append(names[k])
            c.append(_ZERO)
        else:
            c.append(s * v)
    c0 = point.f.curvature(u)
    if c0 is None and (components is None or "f" in components):
        missing.insert(0, "f")
    if missing:
        raise HessianUnavailable(missing)
    return (c0 if c0 is not None else _ZERO), tuple(c)


def live_components(ms):
    """Components not fixed to zero in every branch (those whose curvature matters)."""
    out = set()
    for br in ms.branches:
        out |= set(range(ms.dim)) - br.fixed_zero
    return out
