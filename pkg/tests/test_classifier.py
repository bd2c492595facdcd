from fractions import Fraction

from helpers import CORPUS, active_components, aff, load, random_point, seeds, with_gradient_from
from stationarity.classifier import (
    FIRST_ORDER,
    NONE,
    SECOND_ORDER,
    classify,
    direction_certificate,
    generators_of_Tlin,
    linearized_b_stationary,
    subregularity_certificate,
    wdmscq_report,
)
from stationarity.model import MpecPoint, critical_test, in_tlin, licq_u
from stationarity.multipliers import LIMITING, REGULAR, SINGLETON, build_multiplier_set, query


def fr(*xs):
    return tuple(Fraction(x) for x in xs)


def test_generator_sets():
    lin = load("linear_m_not_extended").point
    assert set(generators_of_Tlin(lin)) == {fr(0, 1, 0), fr(0, 1, 1), fr(1, 0, 0), fr(1, 0, -1)}
    assert set(generators_of_Tlin(load("curved_pair_min").point)) == {fr(1, 0), fr(0, 1)}
    free = MpecPoint(1, aff(0, (0,)))
    assert set(generators_of_Tlin(free)) == {fr(1), fr(-1)}


def test_linear_point_report():
    rep = classify(load("linear_m_not_extended").point)
    assert rep.m_stationary and not rep.s_stationary
    assert not rep.extended_m.verdict and rep.extended_m.failing_direction == fr(0, 1, 1)
    assert not rep.linearized_b
    assert rep.wdmscq.confirmed


def test_strong_m_point_is_not_s():
    rep = classify(load("strong_m_not_s").point)
    assert rep.m_stationary and not rep.s_stationary


def test_unconstrained_zero_gradient():
    rep = classify(MpecPoint(2, aff(0, (0, 0))))
    assert rep.s_stationary and rep.m_stationary and rep.extended_m.verdict and rep.linearized_b


def test_subregularity_examples():
    p = load("abs_power_nlp").point
    g3 = ("g", 2)
    cert = subregularity_certificate(p, {g3}, (1, 0))
    assert cert.kind == SECOND_ORDER and cert.value < 0
    assert subregularity_certificate(p, {g3}, (1, 1)).kind == NONE
    lin = load("linear_m_not_extended").point
    assert subregularity_certificate(lin, set(lin.constraint_labels()), (0, 1, 1)).kind == FIRST_ORDER


def test_wdmscq_reports():
    wd = wdmscq_report(load("abs_power_nlp").point)
    assert wd.confirmed and all(c.kind == FIRST_ORDER for _, c in wd.per_generator)
    assert wdmscq_report(load("linear_m_not_extended").point).confirmed
    curved = dict(wdmscq_report(load("curved_pair_min").point).per_generator)
    assert not curved[fr(1, 0)].certified


def test_split_certificate_moves_one_constraint():
    p = load("abs_power_nlp").point
    cert = direction_certificate(p, (1, 0))
    assert cert.kind == FIRST_ORDER


def test_generators_lie_in_linearized_cone():
    for rng in seeds(200, 41):
        point = random_point(rng)
        for u in generators_of_Tlin(point):
            assert in_tlin(point, u)


def test_linearized_b_matches_extended_m_and_s_implies_b():
    for rng in seeds(200, 42):
        point = random_point(rng, affine=True)
        rep = classify(point)
        assert rep.linearized_b == rep.extended_m.verdict
        assert not rep.s_stationary or rep.linearized_b
        assert linearized_b_stationary(point) == rep.linearized_b


def test_unique_multiplier_under_directional_licq():
    seen = 0
    points = [load(name).point for name in CORPUS]
    for k, rng in enumerate(seeds(200, 43)):
        point = random_point(rng, affine=True)
        points.append(with_gradient_from(rng, point, active_components(point), 0, 3) if k % 2 else point)
    for point in points:
        if not linearized_b_stationary(point):
            continue
        for u in generators_of_Tlin(point):
            if not critical_test(point, u) or not licq_u(point, u):
                continue
            lim = query(build_multiplier_set(point, 1, u, LIMITING))
            reg = query(build_multiplier_set(point, 1, u, REGULAR))
            assert lim.status == reg.status == SINGLETON
            assert lim.witness == reg.witness
            seen += 1
    assert seen >= 50
