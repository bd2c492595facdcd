from fractions import Fraction

import pytest

from helpers import aff, corner_point, load
from stationarity.errors import DegenerateInput, InputError, NotRepresentable
from stationarity.model import MpecPoint
from stationarity.multipliers import LIMITING, build_multiplier_set, membership
from stationarity.pivot import (
    WorkingSet,
    count_bound,
    find_initial_working_set,
    lambda_of,
    make_working_set,
    pivot,
    rank_r,
    verify_strong_m,
    working_set_problems,
)


def fr(*xs):
    return tuple(Fraction(x) for x in xs)


DESCENT = load("linear_pivot_descent").point
STRONG = load("strong_m_not_s").point


def test_rank_of_active_family():
    assert rank_r(DESCENT) == 3
    assert rank_r(STRONG) == 3
    one = MpecPoint(2, aff(0, (1, 0)), g=(aff(0, (1, 1)),))
    assert rank_r(one) == 1


def test_working_sets():
    assert not working_set_problems(DESCENT, WorkingSet({0}, {0}, {0}))
    assert not working_set_problems(STRONG, WorkingSet({0, 1}, {0}, ()))
    assert find_initial_working_set(DESCENT) is not None
    corner = corner_point((-1, 0))
    assert find_initial_working_set(corner) == WorkingSet((), {0}, {0})
    with pytest.raises(InputError, match="cover every pair"):
        make_working_set(STRONG, Jg=[0, 1], JG=[], JH=[])


def test_multipliers_of_working_sets():
    assert lambda_of(DESCENT, WorkingSet({0}, {0}, {0})) == fr(-2, 0, 3, 1)
    assert lambda_of(DESCENT, WorkingSet({1}, {0}, {0})) == fr(0, 2, 1, -1)
    flat = MpecPoint(2, aff(0, (0, 0)), G=(aff(0, (1, 0)),), H=(aff(0, (0, 1)),))
    assert lambda_of(flat, WorkingSet((), {0}, {0})) == fr(0, 0)


def test_gradient_outside_span():
    p = MpecPoint(2, aff(0, (0, 1)), G=(aff(0, (1, 0)),), H=(aff(1, (1, 1)),))
    J = make_working_set(p, JG=[0])
    with pytest.raises(NotRepresentable):
        lambda_of(p, J)


def test_strong_point_stops_at_once():
    J = make_working_set(STRONG, Jg=[0, 1], JG=[0])
    out = pivot(STRONG, J)
    assert out.kind == "strongly_m" and out.lam == fr("3/4", "1/4", -2, 0)
    ms = build_multiplier_set(STRONG, 1, (0, 0, 0), LIMITING)
    assert membership(ms, out.lam)


def test_corner_with_positive_objective():
    p = corner_point((1, 1))
    out = pivot(p, make_working_set(p, JG=[0], JH=[0]))
    assert out.kind == "strongly_m" and out.lam == fr(1, 1) and len(out.trace) == 1


def test_strong_m_checks():
    J = WorkingSet({0, 1}, {0}, ())
    assert verify_strong_m(STRONG, J, fr("3/4", "1/4", -2, 0))
    assert not verify_strong_m(STRONG, J, fr("3/4", "1/4", -2, 1))
    p = corner_point((-1, 0))
    assert not verify_strong_m(p, WorkingSet((), {0}, {0}), fr(-1, 0))
    assert not verify_strong_m(p, WorkingSet((), {0}, {0}), fr(-1))


def test_m_but_not_strong_m_descends():
    p = load("m_not_strong_m").point
    out = pivot(p, find_initial_working_set(p))
    assert out.kind == "descent_direction" and out.d == fr(1, 0)


def test_seeded_runs_are_deterministic():
    J = make_working_set(DESCENT, Jg=[0], JG=[0], JH=[0])
    a = pivot(DESCENT, J, seed=7)
    b = pivot(DESCENT, J, seed=7)
    assert a.trace == b.trace and a.b == b.b
    assert a.kind == "descent_direction" and a.d == fr(0, 1, 1)
    assert len(a.trace) <= count_bound(DESCENT) == 2 * 2 * 3


def test_zero_step_without_retries_is_degenerate():
    J = make_working_set(DESCENT, Jg=[0], JG=[0], JH=[0])
    with pytest.raises(DegenerateInput):
        pivot(DESCENT, J, b={"g": [0, 0], "G": [0], "H": [0]}, max_retries=0)
    out = pivot(DESCENT, J, b={"g": [0, 0], "G": [0], "H": [0]}, seed=3)
    assert out.restarts >= 1 and out.kind == "descent_direction"


def test_invalid_start():
    with pytest.raises(InputError):
        pivot(DESCENT, WorkingSet({0}, {0}, ()))
