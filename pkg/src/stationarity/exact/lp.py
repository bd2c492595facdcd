"""Exact two-phase simplex over ``Fraction`` with Bland's rule.

Every outcome carries a certificate that is checked exactly before it is
returned:

* Optimal: a point and multipliers ``(y, z)`` with
  ``s*c + A_eq^T y + A_ub^T z = 0``, ``z >= 0``, ``z_i (b_i - a_i x) = 0``
  where ``s = +1`` for min and ``-1`` for max.
* Infeasible: a Farkas pair ``(y, z)`` with ``A_eq^T y + A_ub^T z = 0``,
  ``z >= 0`` and ``b_eq.y + b_ub.z < 0``.
* Unbounded: a feasible point and a ray ``r`` with ``A_eq r = 0``,
  ``A_ub r <= 0`` and ``s*c.r < 0``.
"""
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import InputError
from . import kernels
from .linalg import dot, frac, mat, vec

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_ZERO = Fraction(0)
_ONE = Fraction(1)


class DimensionError(InputError):
    pass


@dataclass(frozen=True)
class LinearSystem:
    """``{x in R^n | eq_rows x = eq_rhs, ineq_rows x <= ineq_rhs}``."""

    n: int
    eq_rows: tuple = ()
    eq_rhs: tuple = ()
    ineq_rows: tuple = ()
    ineq_rhs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "eq_rows", mat(self.eq_rows))
        object.__setattr__(self, "ineq_rows", mat(self.ineq_rows))
        eq_rhs = vec(self.eq_rhs) if self.eq_rhs else tuple(_ZERO for _ in self.eq_rows)
        ineq_rhs = vec(self.ineq_rhs) if self.ineq_rhs else tuple(_ZERO for _ in self.ineq_rows)
        object.__setattr__(self, "eq_rhs", eq_rhs)
        object.__setattr__(self, "ineq_rhs", ineq_rhs)
        if len(eq_rhs) != len(self.eq_rows) or len(ineq_rhs) != len(self.ineq_rows):
            raise DimensionError("row/rhs count mismatch")
        for r in self.eq_rows + self.ineq_rows:
            if len(r) != self.n:
                raise DimensionError(f"row of length {len(r)} in a system of dimension {self.n}")

    @property
    def homogeneous(self):
        return not any(self.eq_rhs) and not any(self.ineq_rhs)

    def contains(self, x):
        x = vec(x)
        return all(dot(a, x) == b for a, b in zip(self.eq_rows, self.eq_rhs)) and all(
            dot(a, x) <= b for a, b in zip(self.ineq_rows, self.ineq_rhs)
        )

    def with_rows(self, eq=(), eq_rhs=None, ineq=(), ineq_rhs=None):
        eq, ineq = mat(eq), mat(ineq)
        eq_rhs = vec(eq_rhs) if eq_rhs is not None else tuple(_ZERO for _ in eq)
        ineq_rhs = vec(ineq_rhs) if ineq_rhs is not None else tuple(_ZERO for _ in ineq)
        return LinearSystem(
            self.n,
            self.eq_rows + eq,
            self.eq_rhs + eq_rhs,
            self.ineq_rows + ineq,
            self.ineq_rhs + ineq_rhs,
        )

    def stack(self, other):
        if other.n != self.n:
            raise DimensionError("stacking systems of different dimension")
        return self.with_rows(other.eq_rows, other.eq_rhs, other.ineq_rows, other.ineq_rhs)


@dataclass(frozen=True)
class LpOutcome:
    status: str
    value: Fraction = None
    point: tuple = None
    dual_certificate: tuple = None  # (y_eq, z_ineq)
    ray: tuple = None

    @property
    def optimal(self):
        return self.status == OPTIMAL

    @property
    def infeasible(self):
        return self.status == INFEASIBLE

    @property
    def unbounded(self):
        return self.status == UNBOUNDED


def _solve_min(c, system):
    """Minimise ``c.x`` over ``system``; returns an LpOutcome (sense min)."""
    n = system.n
    A_eq, A_ub = system.eq_rows, system.ineq_rows
    m_eq, m_ub = len(A_eq), len(A_ub)
    m = m_eq + m_ub
    # columns: x+ (n), x- (n), slacks (m_ub), artificials (one per row)
    n_real = 2 * n + m_ub
    ncols = n_real + m
    rows = []
    signs = []
    basis = []
    art_cols = []
    for i in range(m):
        if i < m_eq:
            a, b = A_eq[i], system.eq_rhs[i]
        else:
            a, b = A_ub[i - m_eq], system.ineq_rhs[i - m_eq]
        s = -1 if b < 0 else 1
        row = [_ZERO] * (ncols + 1)
        for j in range(n):
            if a[j]:
                row[j] = s * a[j]
                row[n + j] = -s * a[j]
        if i >= m_eq:
            row[2 * n + (i - m_eq)] = Fraction(s)
        row[n_real + i] = _ONE
        row[ncols] = s * b
        rows.append(row)
        signs.append(s)
        # a slack with coefficient +1 can start basic instead of an artificial
        if i >= m_eq and s == 1:
            basis.append(2 * n + (i - m_eq))
        else:
            basis.append(n_real + i)
            art_cols.append(n_real + i)
    # column of the identity block each row started with; its reduced cost
    # encodes the dual value of that row
    start_col = list(basis)

    def objective_row(cost):
        obj = [Fraction(cj) for cj in cost] + [_ZERO]
        for i, bi in enumerate(basis):
            cb = cost[bi]
            if cb:
                r = rows[i]
                for j in range(ncols + 1):
                    if r[j]:
                        obj[j] -= cb * r[j]
        return obj

    def run(cost, allowed):
        obj = objective_row(cost)
        tab = rows + [obj]
        while True:
            enter = -1
            for j in range(ncols):
                if allowed[j] and obj[j] < 0:
                    enter = j
                    break
            if enter < 0:
                return obj, None
            best = -1
            best_ratio = None
            for i in range(m):
                a = rows[i][enter]
                if a > 0:
                    ratio = rows[i][ncols] / a
                    if (
                        best < 0
                        or ratio < best_ratio
                        or (ratio == best_ratio and basis[i] < basis[best])
                    ):
                        best, best_ratio = i, ratio
            if best < 0:
                return obj, enter
            kernels.pivot(tab, best, enter)
            basis[best] = enter

    def duals(cost, obj):
        y = []
        for i in range(m):
            j = start_col[i]
            y.append(signs[i] * (cost[j] - obj[j]))
        return y

    art_set = set(art_cols)
    if art_cols:
        cost1 = [_ZERO] * ncols
        for j in art_cols:
            cost1[j] = _ONE
        obj1, _ = run(cost1, [j < n_real for j in range(ncols)])
        if -obj1[ncols] > 0:
            y = duals(cost1, obj1)
            return LpOutcome(
                INFEASIBLE,
                dual_certificate=(tuple(-v for v in y[:m_eq]), tuple(-v for v in y[m_eq:])),
            )
        # drive zero-level artificials out of the basis where possible
        for i in range(m):
            if basis[i] in art_set:
                for j in range(n_real):
                    if rows[i][j]:
                        kernels.pivot(rows, i, j)
                        basis[i] = j
                        break
    cost2 = [_ZERO] * ncols
    for j in range(n):
        cost2[j] = c[j]
        cost2[n + j] = -c[j]
    obj2, unb = run(cost2, [j < n_real for j in range(ncols)])
    w = [_ZERO] * ncols
    for i, bi in enumerate(basis):
        w[bi] = rows[i][ncols]
    x = tuple(w[j] - w[n + j] for j in range(n))
    if unb is not None:
        d = [_ZERO] * ncols
        d[unb] = _ONE
        for i, bi in enumerate(basis):
            if rows[i][unb]:
                d[bi] = -rows[i][unb]
        ray = tuple(d[j] - d[n + j] for j in range(n))
        return LpOutcome(UNBOUNDED, point=x, ray=ray)
    y = duals(cost2, obj2)
    value = dot(c, x)
    return LpOutcome(
        OPTIMAL,
        value=value,
        point=x,
        dual_certificate=(tuple(-v for v in y[:m_eq]), tuple(-v for v in y[m_eq:])),
    )


def check_outcome(outcome, objective, sense, system):
    """Exact check of an outcome's certificate; raises AssertionError."""
    n = system.n
    s = 1 if sense == "min" else -1
    c = vec(objective)
    if outcome.status == INFEASIBLE:
        y, z = outcome.dual_certificate
        assert all(v >= 0 for v in z), "Farkas multipliers must be nonnegative"
        comb = [_ZERO] * n
        for yi, a in zip(y, system.eq_rows):
            for j in range(n):
                comb[j] += yi * a[j]
        for zi, a in zip(z, system.ineq_rows):
            for j in range(n):
                comb[j] += zi * a[j]
        assert not any(comb), "Farkas combination must vanish"
        assert dot(y, system.eq_rhs) + dot(z, system.ineq_rhs) < 0, "Farkas rhs must be negative"
        return
    assert system.contains(outcome.point), "reported point is infeasible"
    if outcome.status == UNBOUNDED:
        r = outcome.ray
        assert all(dot(a, r) == 0 for a in system.eq_rows)
        assert all(dot(a, r) <= 0 for a in system.ineq_rows)
        assert s * dot(c, r) < 0, "ray must improve the objective"
        return
    y, z = outcome.dual_certificate
    assert all(v >= 0 for v in z), "dual inequality multipliers must be nonnegative"
    comb = [s * cj for cj in c]
    for yi, a in zip(y, system.eq_rows):
        for j in range(n):
            comb[j] += yi * a[j]
    for zi, a in zip(z, system.ineq_rows):
        for j in range(n):
            comb[j] += zi * a[j]
    assert not any(comb), "dual stationarity fails"
    x = outcome.point
    for zi, a, b in zip(z, system.ineq_rows, system.ineq_rhs):
        assert zi == 0 or dot(a, x) == b, "complementary slackness fails"
    assert outcome.value == dot(c, x)
    # strong duality follows from the above; check it anyway
    assert s * outcome.value == -(dot(y, system.eq_rhs) + dot(z, system.ineq_rhs))


def lp_solve(objective, sense, system):
    """Optimise ``objective . x`` over ``system`` exactly.

    ``sense`` is "min" or "max".  The certificate of the outcome is checked
    before returning.
    """
    if sense not in ("min", "max"):
        raise ValueError("sense must be 'min' or 'max'")
    c = vec(objective)
    if len(c) != system.n:
        raise DimensionError(f"objective of length {len(c)} for dimension {system.n}")
    cmin = c if sense == "min" else tuple(-v for v in c)
    out = _solve_min(cmin, system)
    if out.status == OPTIMAL and sense == "max":
        out = LpOutcome(OPTIMAL, -out.value, out.point, out.dual_certificate)
    check_outcome(out, c, sense, system)
    return out


def feasible_point(system):
    """A point of ``system`` or None if it is empty."""
    out = lp_solve([0] * system.n, "min", system)
    return None if out.infeasible else out.point


def is_feasible(system):
    return feasible_point(system) is not None


def max_slack(system, strict_rows, strict_rhs=None, cap=1):
    """Decide whether ``strict_rows x < strict_rhs`` is attainable in ``system``.

    Maximises ``s`` subject to ``system``, ``a x + s <= b`` for each strict row
    and ``s <= cap``.  Returns the maximising point (without ``s``) when the
    optimal slack is positive, otherwise None.
    """
    n = system.n
    strict_rows = mat(strict_rows)
    strict_rhs = vec(strict_rhs) if strict_rhs is not None else tuple(_ZERO for _ in strict_rows)
    if not strict_rows:
        return feasible_point(system)
    ext = LinearSystem(
        n + 1,
        tuple(r + (_ZERO,) for r in system.eq_rows),
        system.eq_rhs,
        tuple(r + (_ZERO,) for r in system.ineq_rows)
        + tuple(r + (_ONE,) for r in strict_rows)
        + ((_ZERO,) * n + (_ONE,),),
        system.ineq_rhs + strict_rhs + (frac(cap),),
    )
    out = lp_solve((_ZERO,) * n + (_ONE,), "max", ext)
    if out.optimal and out.value > 0:
        return out.point[:n]
    return None
