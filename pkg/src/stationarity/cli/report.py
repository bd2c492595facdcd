"""Structured reports for the command line: plain dicts with rationals as
canonical strings, so json.dumps(sort_keys=True) is deterministic."""
from fractions import Fraction

from ..classifier import classify, generators_of_Tlin
from ..errors import HessianUnavailable
from ..exact import extreme_rays
from ..exact.linalg import matvec, primitive, vec
from ..geometry import (
    directional_limiting_normal_cone,
    frechet_normal_cone,
    limiting_normal_cone,
    tangent_cone,
)
from ..model import (
    classify_indices,
    critical_test,
    directional_index_sets,
    format_label,
    gmfcq_check,
    licq_u,
    require_tlin,
    tlin_branches,
)
from ..multipliers import LIMITING, REGULAR, build_multiplier_set, query
from ..pivot import (
    count_bound,
    find_initial_working_set,
    make_working_set,
    pivot,
    verify_strong_m,
)
from ..second_order import (
    SSOSC,
    DIRECTIONAL,
    UNIFORM,
    UNAVAILABLE,
    critical_branch_rays,
    curvature_multiplier_per_piece,
    necessary_so,
    primal_curvature_witness,
    sufficient_so,
)
from .oracle import grid_oracle, taylor_symbolic
from .problem import format_rational

SUBREGULARITY_CAVEAT = (
    "the necessary condition needs metric subregularity of the constraint map "
    "in the direction; a violation is a certified non-minimality only when "
    "the splitting is certified"
)


def rat(x):
    return None if x is None else format_rational(x)


def rvec(v):
    return None if v is None else [format_rational(x) for x in v]


def _idx(s):
    return [i + 1 for i in sorted(s)]


def _cone(poly):
    g = poly.generators()
    return {
        "rays": sorted((rvec(primitive(r)) for r in g.rays), key=_vec_key),
        "lineality": [rvec(primitive(r)) for r in g.lineality],
    }


def _vec_key(v):
    return tuple(-Fraction(x) for x in v)


def _union(cu):
    return [_cone(p) for p in cu.pieces]


def _pattern(pattern):
    return {f"c{i + 1}": kind for i, kind in sorted(pattern.items())}


def _multipliers(point, res):
    if res.empty:
        return {"status": "empty", "multiplier": None}
    names = point.component_names()
    return {
        "status": res.status,
        "multiplier": rvec(res.witness),
        "components": names,
    }


def _certificate(cert):
    return {
        "kind": cert.kind,
        "basis": cert.basis,
        "value": rat(cert.value),
        "split": format_label(cert.split) if cert.split is not None else None,
        "missing_hessians": list(cert.missing),
    }


def index_sets(point):
    ix = classify_indices(point)
    return {
        "I_g": _idx(ix.I_g),
        "I_plus0": _idx(ix.I_plus0),
        "I_0plus": _idx(ix.I_0plus),
        "I_00": _idx(ix.I_00),
    }


def classify_report(problem, directions=()):
    point = problem.point
    rep = classify(point, directions)
    gm = gmfcq_check(point)
    ext = rep.extended_m
    per = []
    for u, r in ext.per_direction:
        per.append({"u": rvec(u), **_multipliers(point, r)})
    gens = []
    for ray, prov in zip(rep.generators.rays, rep.generators.provenance):
        gens.append({"ray": rvec(ray), "branches": [{f"c{i + 1}": k for i, k in p} for p in prov]})
    return {
        "command": "classify",
        "problem": problem.name,
        "index_sets": index_sets(point),
        "linearized_cone_generators": gens,
        "conditions": {
            "S_stationarity": {
                "condition": "regular multiplier set with lambda0 = 1 at u = 0 is nonempty",
                "holds": rep.s_stationary,
                **_multipliers(point, rep.s_multipliers),
            },
            "M_stationarity": {
                "condition": "limiting multiplier set with lambda0 = 1 at u = 0 is nonempty",
                "holds": rep.m_stationary,
                **_multipliers(point, rep.m_multipliers),
            },
            "extended_M_stationarity": {
                "condition": "limiting directional multiplier set with lambda0 = 1 is nonempty along every critical direction",
                "holds": ext.verdict,
                "failing_direction": rvec(ext.failing_direction),
                "per_direction": per,
                "caveat": "checked on the critical generators of the linearized cone and on any supplied direction",
            },
            "linearized_B_stationarity": {
                "condition": "grad f . u >= 0 on the linearized cone",
                "holds": rep.linearized_b,
                "caveat": "equals B-stationarity under the generalized Guignard condition",
            },
        },
        "constraint_qualifications": {
            "GMFCQ": {
                "condition": "no nonzero abnormal multiplier at u = 0",
                "holds": gm.holds,
                "abnormal_multiplier": rvec(gm.witness),
            },
            "directional_subregularity": {
                "condition": "first- or second-order certificate of metric subregularity on every generator",
                "confirmed": rep.wdmscq.confirmed,
                "per_generator": [{"u": rvec(u), **_certificate(c)} for u, c in rep.wdmscq.per_generator],
            },
        },
        "notes": list(rep.notes),
    }


def cones_report(problem, directions=()):
    point = problem.point
    F, jac, omega = point.encoding()
    out = {
        "command": "cones",
        "problem": problem.name,
        "F": rvec(F),
        "omega": f"R_-^{point.l} x {{0}}^{point.p} x Q^{point.q}, Q = {{(a, b) <= 0, ab = 0}}",
        "tangent_cone": _union(tangent_cone(omega, F)),
        "regular_normal_cone": _cone(frechet_normal_cone(omega, F)),
        "limiting_normal_cone": _union(limiting_normal_cone(omega, F)),
    }
    branches = []
    for pattern, system in tlin_branches(point):
        g = extreme_rays(system)
        branches.append(
            {
                "pattern": _pattern(pattern),
                "rays": [rvec(primitive(r)) for r in g.rays],
                "lineality": [rvec(primitive(r)) for r in g.lineality],
            }
        )
    out["linearized_cone"] = {
        "branches": branches,
        "generators": [rvec(r) for r in generators_of_Tlin(point)],
    }
    out["critical_cone"] = [
        {"rays": [rvec(primitive(r)) for r in rays], "lineality": [rvec(primitive(r)) for r in lin]}
        for rays, lin in critical_branch_rays(point)
    ]
    per = []
    for u in directions:
        u = vec(u)
        require_tlin(point, u)
        d = directional_index_sets(point, u)
        Fu = matvec(jac, u) if jac else ()
        per.append(
            {
                "u": rvec(u),
                "grad_F_u": rvec(Fu),
                "critical": critical_test(point, u),
                "index_sets": {
                    "I_g": _idx(d.I_g),
                    "I_plus0": _idx(d.I_plus0),
                    "I_0plus": _idx(d.I_0plus),
                    "I_00": _idx(d.I_00),
                },
                "LICQ": licq_u(point, u),
                "directional_limiting_normal_cone": _union(directional_limiting_normal_cone(omega, F, Fu)),
            }
        )
    out["directions"] = per
    return out


def multipliers_report(problem, directions=(), core_set=None):
    point = problem.point
    dirs = [vec(u) for u in directions] or [vec((0,) * point.n)]
    per = []
    for u in dirs:
        require_tlin(point, u)
        sets = {}
        for lam0 in (1, 0):
            for variant in (LIMITING, REGULAR):
                ms = build_multiplier_set(point, lam0, u, variant, core_set)
                key = f"lambda0={lam0},{variant}"
                sets[key] = _multipliers(point, query(ms))
        per.append({"u": rvec(u), "critical": critical_test(point, u), "LICQ": licq_u(point, u), "sets": sets})
    core = sorted(core_set) if core_set is not None else sorted(point.nonaffine_labels())
    return {
        "command": "multipliers",
        "problem": problem.name,
        "components": point.component_names(),
        "core_set": [format_label(lb) for lb in core],
        "note": "for lambda0 = 0 the witness lies on the slice where the signed core sum is 1; "
        "singleton refers to that slice",
        "directions": per,
    }


def _verdict(v):
    return {
        "status": v.status,
        "u": rvec(v.direction),
        "lambda0": v.lambda0,
        "multiplier": rvec(v.witness),
        "value": rat(v.value),
        "order": v.order,
        "certified": v.certified,
        "note": v.note,
    }


def second_order_report(problem, directions=(), mode=DIRECTIONAL, core_set=None, variant=REGULAR):
    point = problem.point
    dirs = [vec(u) for u in directions]
    if not dirs:
        dirs = [primitive(r) for rays, _ in critical_branch_rays(point) for r in rays]
        dirs = sorted(set(dirs), reverse=True)
    necessary = []
    primal = []
    for u in dirs:
        necessary.append(_verdict(necessary_so(point, u, core_set)))
        p = primal_curvature_witness(point, u)
        entry = {"u": rvec(u), "kind": p.kind, "v": rvec(p.v), "piece": p.piece}
        try:
            entry["multiplier_form_per_piece"] = {str(k): val for k, val in sorted(curvature_multiplier_per_piece(point, u).items())}
        except HessianUnavailable:
            entry["multiplier_form_per_piece"] = None
        primal.append(entry)
    suff = sufficient_so(point, [u for u in dirs if any(u)], mode, variant, core_set)
    label = {
        DIRECTIONAL: "sufficient condition with directional multipliers (lambda0 in {0, 1})",
        UNIFORM: "sufficient condition with lambda0 = 1 under extended M-stationarity",
        SSOSC: "strong second-order sufficient condition (no global claim)",
    }[mode]
    unavailable = any(v["status"] == UNAVAILABLE for v in necessary) or any(
        v.status == UNAVAILABLE for v in suff.per_direction
    )
    return {
        "command": "second-order",
        "problem": problem.name,
        "necessary": {
            "condition": "second-order necessary condition with directional multipliers",
            "caveat": SUBREGULARITY_CAVEAT,
            "per_direction": necessary,
            "violated": any(v["status"] == "violated" and v["certified"] for v in necessary),
        },
        "primal_curvature_check": primal,
        "sufficient": {
            "condition": label,
            "mode": mode,
            "variant": variant if mode == DIRECTIONAL else None,
            "per_direction": [_verdict(v) for v in suff.per_direction],
            "essential_local_minimizer_of_second_order": suff.global_verdict,
            "note": suff.note,
        },
        "unavailable": unavailable,
    }


def strong_m_report(problem, seed=0):
    point = problem.point
    if problem.working_set is not None:
        ws = problem.working_set
        J0 = make_working_set(point, *[[i - 1 for i in ws.get(k, ())] for k in ("g", "G", "H")])
        origin = "problem file"
    else:
        J0 = find_initial_working_set(point)
        origin = "greedy search"
    if J0 is None:
        return {
            "command": "strong-m",
            "problem": problem.name,
            "outcome": "no_working_set",
            "note": "no working set exists, so the pivoting scheme does not apply",
        }
    out = pivot(point, J0, seed=seed, b=problem.b)
    rep = {
        "command": "strong-m",
        "problem": problem.name,
        "initial_working_set": J0.as_dict(),
        "working_set_origin": origin,
        "seed": seed,
        "b": {k: rvec(v) for k, v in out.b.items()},
        "restarts": out.restarts,
        "cycle_bound": count_bound(point),
        "trace": list(out.trace),
        "outcome": out.kind,
    }
    if out.kind == "strongly_m":
        rep["working_set"] = out.J.as_dict()
        rep["multiplier"] = rvec(out.lam)
        rep["verified"] = verify_strong_m(point, out.J, out.lam)
        rep["condition"] = "strong M-stationarity: a working set with a multiplier of the required signs"
    else:
        rep["descent_direction"] = rvec(out.d)
        rep["condition"] = "direction d in the linearized cone with grad f . d = -1"
        rep["caveat"] = "a descent direction of the linearization; for affine data it is a feasible descent direction"
    return rep


def oracle_report(problem, radius, resolution, direction=None):
    point = problem.point
    sym = problem.symbolic
    xbar = problem.x if problem.x is not None else (0,) * point.n
    source = "symbolic block"
    if sym is None and all(point.is_affine(lb) for lb in point.constraint_labels()) and point.f.affine:
        sym = taylor_symbolic(point)
        xbar = (0,) * point.n
        source = "affine point data"
    res = grid_oracle(sym, xbar, radius, resolution, direction)
    return {
        "command": "oracle",
        "problem": problem.name,
        "source": source,
        "radius": rat(radius),
        "resolution": resolution,
        "direction": rvec(direction),
        "found": res.found,
        "point": rvec(res.x),
        "value": res.value,
        "reference_value": res.reference,
        "points_checked": res.checked,
        "note": res.note if not res.found else "feasible point with a smaller objective (x is not a local minimizer)",
    }


# -- text rendering ------------------------------------------------------


def _fmt(v):
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, list) and all(isinstance(x, str) for x in v):
        return "(" + ", ".join(v) + ")"
    return str(v)


def render_text(report, indent=0):
    lines = []
    pad = "  " * indent
    for key in sorted(report):
        val = report[key]
        if isinstance(val, dict):
            lines.append(f"{pad}{key}:")
            lines.append(render_text(val, indent + 1))
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            lines.append(f"{pad}{key}:")
            for item in val:
                lines.append(f"{pad}  -")
                lines.append(render_text(item, indent + 2))
        else:
            lines.append(f"{pad}{key}: {_fmt(val)}")
    return "\n".join(l for l in lines if l)
