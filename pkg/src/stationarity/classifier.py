"""Stationarity classification, generators of the linearized cone and
directional subregularity certificates."""
from dataclasses import dataclass
from fractions import Fraction

from .errors import HessianUnavailable, InputError
from .exact import extreme_rays, lp_solve
from .exact.linalg import dot, primitive, vec
from .model import critical_test, format_label, tlin_branches
from .multipliers import (
    LIMITING,
    REGULAR,
    build_multiplier_set,
    is_empty,
    live_components,
    quadratic_form_vector,
    query,
)

FIRST_ORDER = "first_order"
SECOND_ORDER = "second_order"
NONE = "none"
UNAVAILABLE = "unavailable"


@dataclass(frozen=True)
class GeneratorSet:
    rays: tuple
    provenance: tuple  # per ray: tuple of branch patterns that produced it

    def __iter__(self):
        return iter(self.rays)

    def __len__(self):
        return len(self.rays)


def _pattern_key(pattern):
    return tuple(sorted((i, kind) for i, kind in pattern.items()))


def generators_of_Tlin(point):
    """Finite set whose conic hull is the convex hull of T_lin.

    The union over branches of extreme rays, with each lineality direction
    contributing both signs.  Rays are primitive integer vectors.
    """
    rays = []
    prov = {}
    for pattern, system in tlin_branches(point):
        gens = extreme_rays(system)
        cand = list(gens.rays)
        for l in gens.lineality:
            cand += [l, tuple(-x for x in l)]
        for r in cand:
            r = primitive(r)
            if r not in prov:
                prov[r] = []
                rays.append(r)
            key = _pattern_key(pattern)
            if key not in prov[r]:
                prov[r].append(key)
    rays.sort(reverse=True)
    return GeneratorSet(tuple(rays), tuple(tuple(prov[r]) for r in rays))


@dataclass(frozen=True)
class Certificate:
    """Outcome of a directional subregularity test.

    kind is FIRST_ORDER / SECOND_ORDER (certified), NONE (inconclusive) or
    UNAVAILABLE (a needed Hessian is missing).  ``split`` names the constraint
    moved to the subregular part when a splitting was needed.
    """

    kind: str
    value: Fraction = None
    split: tuple = None
    basis: str = ""
    missing: tuple = ()

    @property
    def certified(self):
        return self.kind in (FIRST_ORDER, SECOND_ORDER)


def subregularity_certificate(point, subset, u, core_set=None):
    """Sufficient test for metric subregularity in direction ``u`` of the
    constraint map restricted to ``subset`` (constraint labels).

    First order: no abnormal directional multiplier with nonzero core part.
    Second order: the Lagrangian curvature of every such multiplier is
    negative along ``u``.
    """
    subset = frozenset(subset)
    u = vec(u)
    if not subset or all(point.is_affine(lb) for lb in subset):
        return Certificate(FIRST_ORDER, basis="polyhedral")
    sub = point.restrict(subset)
    relabel = point.restricted_labels(subset)
    if core_set is None:
        core = sub.nonaffine_labels()
    else:
        core = frozenset(relabel[lb] for lb in core_set if lb in relabel)
    ms = build_multiplier_set(sub, 0, u, LIMITING, core)
    if is_empty(ms):
        return Certificate(FIRST_ORDER, basis="no abnormal multiplier")
    if not any(u):
        return Certificate(NONE, basis="abnormal multiplier at the zero direction")
    try:
        _, c = quadratic_form_vector(sub, u, components=live_components(ms))
    except HessianUnavailable as e:
        return Certificate(UNAVAILABLE, missing=e.labels)
    res = query(ms, c, "max", decide_singleton=False)
    if res.unbounded or res.value >= 0:
        return Certificate(NONE, value=res.value, basis="abnormal multiplier with nonnegative curvature")
    return Certificate(SECOND_ORDER, value=res.value, basis="negative curvature on abnormal multipliers")


def direction_certificate(point, u):
    """Best available subregularity certificate for the full map along ``u``.

    Tries the whole map first; if that is not first order, tries moving one
    non-affine constraint that is itself certified along ``u`` into the
    subregular part and asks for no abnormal multiplier on the rest.
    """
    labels = frozenset(point.constraint_labels())
    whole = subregularity_certificate(point, labels, u)
    if whole.kind == FIRST_ORDER:
        return whole
    for lb in point.constraint_labels():
        if point.is_affine(lb):
            continue
        single = subregularity_certificate(point, {lb}, u)
        if not single.certified:
            continue
        ms = build_multiplier_set(point, 0, u, LIMITING, labels - {lb})
        if is_empty(ms):
            return Certificate(
                FIRST_ORDER,
                split=lb,
                basis=f"no abnormal multiplier after moving {format_label(lb)} "
                f"({single.kind.replace('_', ' ')} certified) to the subregular part",
            )
    return whole


@dataclass(frozen=True)
class WdmscqReport:
    per_generator: tuple  # ((u, Certificate), ...)

    @property
    def confirmed(self):
        return all(c.certified for _, c in self.per_generator)


def wdmscq_report(point, generators=None):
    if generators is None:
        generators = generators_of_Tlin(point)
    return WdmscqReport(tuple((u, direction_certificate(point, u)) for u in generators))


@dataclass(frozen=True)
class ExtendedM:
    verdict: bool
    failing_direction: tuple = None
    per_direction: tuple = ()  # ((u, SetQueryResult), ...)


@dataclass(frozen=True)
class StationarityReport:
    s_stationary: bool
    m_stationary: bool
    extended_m: ExtendedM
    linearized_b: bool
    wdmscq: WdmscqReport
    generators: GeneratorSet
    s_multipliers: object
    m_multipliers: object
    notes: tuple = ()


def linearized_b_stationary(point):
    """grad f . u >= 0 on every branch of T_lin."""
    for _, system in tlin_branches(point):
        if lp_solve(point.f.gradient, "min", system).unbounded:
            return False
    return True


def classify(point, extra_directions=()):
    zero = (0,) * point.n
    s_res = query(build_multiplier_set(point, 1, zero, REGULAR))
    m_res = query(build_multiplier_set(point, 1, zero, LIMITING))
    gens = generators_of_Tlin(point)
    dirs = [u for u in gens if dot(point.f.gradient, u) <= 0]
    for u in extra_directions:
        u = vec(u)
        if not critical_test(point, u):
            raise InputError(f"direction {tuple(str(x) for x in u)} is not critical")
        if u not in dirs:
            dirs.append(u)
    per = []
    failing = None
    for u in dirs:
        r = query(build_multiplier_set(point, 1, u, LIMITING))
        per.append((u, r))
        if r.empty and failing is None:
            failing = u
    ext = ExtendedM(failing is None, failing, tuple(per))
    lin_b = linearized_b_stationary(point)
    wd = wdmscq_report(point, gens)
    notes = [
        "B-stationarity is reported in its linearized form; it coincides with "
        "B-stationarity when the generalized Guignard condition holds",
    ]
    if wd.confirmed:
        notes.append("directional subregularity certified on every generator, so the Guignard condition holds")
    else:
        notes.append(
            "subregularity is inconclusive on some generator; this does not mean it fails"
        )
    report = StationarityReport(
        not s_res.empty,
        not m_res.empty,
        ext,
        lin_b,
        wd,
        gens,
        s_res,
        m_res,
        tuple(notes),
    )
    assert not report.s_stationary or report.linearized_b
    assert not report.extended_m.verdict or report.m_stationary
    return report
