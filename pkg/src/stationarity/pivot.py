"""Working sets, strong M-stationarity and the active-set pivoting scheme.

The pivot either ends with a working set whose multipliers certify strong
M-stationarity or with a direction d in the linearized cone with
grad f . d = -1.
"""
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .errors import DegenerateInput, InputError, NotRepresentable
from .exact.linalg import dot, min_norm_solution, rank_and_nullspace, solve, vec
from .model import classify_indices, directional_index_sets
from .multipliers import LIMITING, build_multiplier_set, membership

_ZERO = Fraction(0)
INF = "inf"


@dataclass(frozen=True)
class WorkingSet:
    Jg: frozenset = frozenset()
    JG: frozenset = frozenset()
    JH: frozenset = frozenset()

    def __post_init__(self):
        for name in ("Jg", "JG", "JH"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))

    def size(self, point):
        return len(self.Jg) + point.p + len(self.JG) + len(self.JH)

    def family(self, point):
        """(component index, gradient) in the order g, h, G, H."""
        out = [(point.idx_g(i), point.g[i].gradient) for i in sorted(self.Jg)]
        out += [(point.idx_h(i), point.h[i].gradient) for i in range(point.p)]
        out += [(point.idx_G(i), point.G[i].gradient) for i in sorted(self.JG)]
        out += [(point.idx_H(i), point.H[i].gradient) for i in sorted(self.JH)]
        return out

    def as_dict(self):
        return {
            "g": [i + 1 for i in sorted(self.Jg)],
            "G": [i + 1 for i in sorted(self.JG)],
            "H": [i + 1 for i in sorted(self.JH)],
        }


def full_family(point):
    ix = classify_indices(point)
    rows = [point.g[i].gradient for i in sorted(ix.I_g)]
    rows += [fd.gradient for fd in point.h]
    rows += [point.G[i].gradient for i in sorted(ix.I_0plus | ix.I_00)]
    rows += [point.H[i].gradient for i in sorted(ix.I_plus0 | ix.I_00)]
    return rows


def rank_r(point):
    rows = full_family(point)
    return rank_and_nullspace(rows, point.n).rank if rows else 0


def working_set_problems(point, J, r=None):
    """Reasons why ``J`` is not a working set (empty list when it is)."""
    ix = classify_indices(point)
    probs = []
    if not J.Jg <= ix.I_g:
        probs.append("J_g must consist of active inequalities")
    if not J.JG <= (ix.I_0plus | ix.I_00):
        probs.append("J_G must lie in the G-active pairs")
    if not J.JH <= (ix.I_plus0 | ix.I_00):
        probs.append("J_H must lie in the H-active pairs")
    if J.JG | J.JH != frozenset(range(point.q)):
        probs.append("J_G and J_H must cover every pair")
    if r is None:
        r = rank_r(point)
    if J.size(point) != r:
        probs.append(f"working set has {J.size(point)} gradients, rank is {r}")
    rows = [gr for _, gr in J.family(point)]
    if rows and not rank_and_nullspace(rows, point.n).independent:
        probs.append("working-set gradients are dependent")
    return probs


def make_working_set(point, Jg=(), JG=(), JH=()):
    J = WorkingSet(frozenset(Jg), frozenset(JG), frozenset(JH))
    probs = working_set_problems(point, J)
    if probs:
        raise InputError("not a working set: " + "; ".join(probs))
    return J


def find_initial_working_set(point):
    """Some working set, or None.  Biactive pairs try both, then G, then H."""
    ix = classify_indices(point)
    r = rank_r(point)
    zz = sorted(ix.I_00)
    gs = sorted(ix.I_g)
    for choice in product(("both", "G", "H"), repeat=len(zz)):
        JG = set(ix.I_0plus)
        JH = set(ix.I_plus0)
        for i, c in zip(zz, choice):
            if c in ("both", "G"):
                JG.add(i)
            if c in ("both", "H"):
                JH.add(i)
        J = WorkingSet(frozenset(), frozenset(JG), frozenset(JH))
        rows = [gr for _, gr in J.family(point)]
        if rows and not rank_and_nullspace(rows, point.n).independent:
            continue
        cur = len(rows)
        Jg = []
        for i in gs:
            if cur == r:
                break
            trial = rows + [point.g[i].gradient]
            if rank_and_nullspace(trial, point.n).independent:
                rows = trial
                Jg.append(i)
                cur += 1
        if cur == r:
            return WorkingSet(frozenset(Jg), J.JG, J.JH)
    return None


def lambda_of(point, J):
    """Multipliers supported on ``J`` solving grad_x L(x, 1, lambda) = 0."""
    fam = J.family(point)
    cols = point.signed_gradients()
    n = point.n
    rows = [[cols[k][j] for k, _ in fam] for j in range(n)]
    rhs = [-x for x in point.f.gradient]
    if fam:
        sol = solve(rows, rhs, len(fam))
    else:
        sol = () if not any(rhs) else None
    if sol is None:
        raise NotRepresentable("grad f is not in the span of the working-set gradients")
    lam = [_ZERO] * point.m
    for (k, _), v in zip(fam, sol):
        lam[k] = v
    return tuple(lam)


def strong_m_violations(point, J, lam):
    lam = vec(lam)
    out = list(working_set_problems(point, J))
    if len(lam) != point.m:
        return out + [f"multiplier of length {len(lam)}, expected {point.m}"]
    ms = build_multiplier_set(point, 1, (0,) * point.n, LIMITING)
    if not membership(ms, lam):
        out.append("multiplier is not a limiting multiplier at the point")
    for i in range(point.l):
        if i not in J.Jg and lam[point.idx_g(i)] != 0:
            out.append(f"lambda^g_{i + 1} must vanish outside J_g")
    for i in range(point.q):
        if i not in J.JG and lam[point.idx_G(i)] != 0:
            out.append(f"lambda^G_{i + 1} must vanish outside J_G")
        if i not in J.JH and lam[point.idx_H(i)] != 0:
            out.append(f"lambda^H_{i + 1} must vanish outside J_H")
        if i in J.JG and i in J.JH and (lam[point.idx_G(i)] < 0 or lam[point.idx_H(i)] < 0):
            out.append(f"lambda^G_{i + 1}, lambda^H_{i + 1} must be nonnegative on J_G and J_H")
    return out


def verify_strong_m(point, J, lam):
    return not strong_m_violations(point, J, lam)


@dataclass(frozen=True)
class PivotOutcome:
    kind: str  # "strongly_m" | "descent_direction"
    J: WorkingSet = None
    lam: tuple = None
    d: tuple = None
    trace: tuple = ()
    b: dict = None
    restarts: int = 0


def _primes(lo, hi):
    sieve = bytearray([1]) * hi
    sieve[0:2] = b"\x00\x00"
    for k in range(2, int(hi ** 0.5) + 1):
        if sieve[k]:
            sieve[k * k :: k] = bytearray(len(sieve[k * k :: k]))
    return [k for k in range(lo, hi) if sieve[k]]


_PRIMES = _primes(10007, 60000)


def draw_b(point, J0, rng):
    """Perturbation with distinct prime denominators on the free components."""
    ix = classify_indices(point)
    slots = [("g", i) for i in sorted(ix.I_g - J0.Jg)]
    slots += [("G", i) for i in sorted(ix.I_00 - J0.JG)]
    slots += [("H", i) for i in sorted(ix.I_00 - J0.JH)]
    dens = rng.sample(_PRIMES, len(slots))
    b = {"g": [_ZERO] * point.l, "G": [_ZERO] * point.q, "H": [_ZERO] * point.q}
    for (kind, i), p in zip(slots, dens):
        v = Fraction(rng.randrange(1, p), p)
        b[kind][i] = v if kind == "g" else -v
    return b


def _label(point, k):
    return point.component_names()[k]


def _fmt(v):
    return [str(x) for x in v]


class _Degenerate(Exception):
    pass


def _run(point, J0, b, bound):
    ix = classify_indices(point)
    n = point.n
    grad_f = point.f.gradient
    J = J0
    u = tuple(_ZERO for _ in range(n))
    trace = []
    last_fu = None
    for _ in range(bound + 1):
        lam = lambda_of(point, J)
        entry = {"J": J.as_dict(), "lambda": _fmt(lam), "u": _fmt(u)}
        drop = None
        for i in sorted(J.Jg):
            if lam[point.idx_g(i)] < 0:
                drop = ("g", i)
                break
        if drop is None:
            for i in sorted(J.JG & J.JH):
                if lam[point.idx_G(i)] < 0:
                    drop = ("G", i)
                    break
                if lam[point.idx_H(i)] < 0:
                    drop = ("H", i)
                    break
        if drop is None:
            entry["drop"] = None
            trace.append(entry)
            return PivotOutcome("strongly_m", J, lam, trace=tuple(trace))
        kind, i0 = drop
        Jg, JG, JH = set(J.Jg), set(J.JG), set(J.JH)
        {"g": Jg, "G": JG, "H": JH}[kind].discard(i0)
        J = WorkingSet(frozenset(Jg), frozenset(JG), frozenset(JH))
        entry["drop"] = f"{kind}{i0 + 1}"
        fam = [gr for _, gr in J.family(point)]
        assert rank_and_nullspace([grad_f] + fam, n).independent, "family with grad f must be independent"
        d = min_norm_solution([grad_f] + fam, [-1] + [0] * len(fam), n)
        assert d is not None
        entry["d"] = _fmt(d)
        cands = []
        for i in sorted(ix.I_g - J.Jg):
            a = dot(point.g[i].gradient, d)
            if a > 0:
                cands.append(((b["g"][i] - dot(point.g[i].gradient, u)) / a, "g", i))
        for i in sorted(ix.I_00 - J.JG):
            a = dot(point.G[i].gradient, d)
            if a < 0:
                cands.append(((b["G"][i] - dot(point.G[i].gradient, u)) / a, "G", i))
        for i in sorted(ix.I_00 - J.JH):
            a = dot(point.H[i].gradient, d)
            if a < 0:
                cands.append(((b["H"][i] - dot(point.H[i].gradient, u)) / a, "H", i))
        if not cands:
            entry["step"] = INF
            entry["enter"] = None
            trace.append(entry)
            assert directional_index_sets(point, d) is not None, "descent direction must be linearized-feasible"
            assert dot(grad_f, d) == -1
            return PivotOutcome("descent_direction", J, lam, d, tuple(trace))
        alpha = min(c[0] for c in cands)
        winners = [c for c in cands if c[0] == alpha]
        if alpha <= 0 or len(winners) > 1:
            raise _Degenerate()
        _, kind, j = winners[0]
        Jg, JG, JH = set(J.Jg), set(J.JG), set(J.JH)
        {"g": Jg, "G": JG, "H": JH}[kind].add(j)
        J = WorkingSet(frozenset(Jg), frozenset(JG), frozenset(JH))
        if working_set_problems(point, J):
            raise _Degenerate()
        u = tuple(x + alpha * y for x, y in zip(u, d))
        fu = dot(grad_f, u)
        assert last_fu is None or fu < last_fu, "grad f . u must strictly decrease"
        last_fu = fu
        _check_invariants(point, ix, J, u, b)
        entry["step"] = str(alpha)
        entry["enter"] = f"{kind}{j + 1}"
        trace.append(entry)
    raise RuntimeError("pivot exceeded the working-set count bound")


def _check_invariants(point, ix, J, u, b):
    for i in ix.I_g:
        v = dot(point.g[i].gradient, u)
        assert v == b["g"][i] if i in J.Jg else v <= b["g"][i]
    for fd in point.h:
        assert dot(fd.gradient, u) == 0
    for i in range(point.q):
        vg = dot(point.G[i].gradient, u)
        vh = dot(point.H[i].gradient, u)
        if i in J.JG:
            assert vg == b["G"][i]
        elif i in ix.I_00:
            assert vg >= b["G"][i]
        if i in J.JH:
            assert vh == b["H"][i]
        elif i in ix.I_00:
            assert vh >= b["H"][i]


def count_bound(point):
    ix = classify_indices(point)
    return 2 ** len(ix.I_g) * 3 ** len(ix.I_00)


def pivot(point, J0, seed=0, b=None, max_retries=32):
    """Run the pivoting scheme from working set ``J0``.

    ``b`` (dict with lists "g", "G", "H") fixes the perturbation for the first
    attempt; otherwise it is drawn from ``random.Random(seed)``.  Ties in the
    ratio test and zero steps trigger a fresh draw, at most ``max_retries``
    times.
    """
    probs = working_set_problems(point, J0)
    if probs:
        raise InputError("not a working set: " + "; ".join(probs))
    rng = random.Random(seed)
    bound = count_bound(point)
    if b is not None:
        b = {k: [Fraction(x) for x in b.get(k, [0] * size)] for k, size in (("g", point.l), ("G", point.q), ("H", point.q))}
    for attempt in range(max_retries + 1):
        if b is None:
            b = draw_b(point, J0, rng)
        try:
            out = _run(point, J0, b, bound)
        except _Degenerate:
            b = None
            continue
        return PivotOutcome(out.kind, out.J, out.lam, out.d, out.trace, b, attempt)
    raise DegenerateInput(f"pivot degenerate after {max_retries} re-draws of the perturbation")
