from fractions import Fraction

import pytest

from helpers import F, active_components, load, quad, random_point, seeds, with_gradient_from, aff
from stationarity.classifier import generators_of_Tlin
from stationarity.errors import InputError
from stationarity.model import MpecPoint, critical_test
from stationarity.multipliers import LIMITING, build_multiplier_set, is_empty
from stationarity.second_order import (
    DIRECTIONAL,
    FAILS,
    HOLDS,
    INAPPLICABLE,
    SSOSC,
    UNAVAILABLE,
    UNIFORM,
    VIOLATED,
    necessary_so,
    primal_curvature_witness,
    sufficient_so,
)


def fr(*xs):
    return tuple(Fraction(x) for x in xs)


CURVED = load("curved_pair_min").point
CURVED_NEG = load("curved_pair_nonmin").point


def test_necessary_condition_examples():
    v = necessary_so(CURVED_NEG, (1, 0))
    assert v.status == VIOLATED and v.certified
    v = necessary_so(CURVED, (1, 0))
    assert v.status == HOLDS and v.lambda0 == 0 and v.witness == fr(1, 0, -1) and v.value == 2
    v = necessary_so(CURVED, (0, 0))
    assert v.status == HOLDS and v.value == 0


def test_directional_sufficiency_on_curved_pair():
    rep = sufficient_so(CURVED, [(1, 0), (0, 1)], DIRECTIONAL)
    assert rep.global_verdict
    a, b = rep.per_direction
    assert (a.lambda0, a.value) == (0, 2)
    assert (b.lambda0, b.witness, b.value) == (1, fr(0, -1, 0), 1)
    partial = sufficient_so(CURVED, [(1, 0)], DIRECTIONAL)
    assert not partial.global_verdict


def test_strong_condition_is_not_sufficient():
    p = load("strong_so_not_min").point
    rep = sufficient_so(p, [(1, 0)], SSOSC)
    assert rep.per_direction[0].status == HOLDS and rep.per_direction[0].witness == fr(-1, 0)
    assert not rep.global_verdict
    rep = sufficient_so(p, [(1, 0)], UNIFORM)
    assert rep.per_direction[0].status == INAPPLICABLE


def test_strictly_convex_objective_on_a_ray():
    p = MpecPoint(1, quad(0, (0,), ((2,),)), g=(aff(0, (-1,)),))
    rep = sufficient_so(p, [(1,)], DIRECTIONAL)
    v = rep.per_direction[0]
    assert v.status == HOLDS and v.lambda0 == 1 and v.witness == fr(0) and v.value == 2
    assert rep.global_verdict


def test_primal_curvature_examples():
    assert primal_curvature_witness(CURVED, (1, 0)).kind == "no_witness"
    w = primal_curvature_witness(CURVED_NEG, (1, 0))
    assert w.kind == "witness" and w.v[1] == 0
    free = MpecPoint(1, quad(0, (0,), ((2,),)))
    assert primal_curvature_witness(free, (1,)).kind == "no_witness"


def test_bad_directions():
    with pytest.raises(InputError):
        sufficient_so(CURVED, [(0, 0)], DIRECTIONAL)
    with pytest.raises(InputError):
        necessary_so(CURVED, (-1, 0))
    with pytest.raises(InputError):
        sufficient_so(CURVED, [(1, 0)], "other")


def test_missing_hessian_gives_unavailable():
    p = load("abs_power_nlp").point
    v = necessary_so(p, (0, 1))
    assert v.status == UNAVAILABLE and "g1" in v.note
    assert necessary_so(p, (1, 0)).status == VIOLATED


def _random_critical(rng, count, base):
    for k, rng in enumerate(seeds(count, base)):
        point = random_point(rng)
        if k % 2:
            point = with_gradient_from(rng, point, active_components(point))
        for u in generators_of_Tlin(point):
            if critical_test(point, u):
                yield point, u


def test_scale_covariance():
    n = 0
    for point, u in _random_critical(None, 200, 51):
        base = necessary_so(point, u)
        for t in (F(2), F(1, 3)):
            assert necessary_so(point, tuple(t * x for x in u)).status == base.status
        n += 1
    assert n > 100


def test_uniform_implies_directional():
    hits = 0
    for point, u in _random_critical(None, 200, 52):
        uni = sufficient_so(point, [u], UNIFORM).per_direction[0]
        if uni.status == HOLDS:
            hits += 1
            assert sufficient_so(point, [u], DIRECTIONAL).per_direction[0].status == HOLDS
    assert hits > 0


def test_affine_problem_has_zero_curvature():
    p = load("linear_m_not_extended").point
    for u in generators_of_Tlin(p):
        if not critical_test(p, u):
            continue
        nonempty = not is_empty(build_multiplier_set(p, 1, u, LIMITING))
        v = necessary_so(p, u)
        if nonempty:
            assert v.status == HOLDS and v.value == 0
        uni = sufficient_so(p, [u], UNIFORM).per_direction[0]
        assert uni.status in (FAILS, INAPPLICABLE)
