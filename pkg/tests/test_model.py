import pytest

from helpers import F, aff, corner_point, load, random_point, rvec, seeds
from stationarity.errors import InfeasiblePointError, InputError
from stationarity.exact.linalg import matvec
from stationarity.geometry import tangent_cone
from stationarity.model import (
    FunctionData,
    MpecPoint,
    classify_indices,
    critical_test,
    directional_index_sets,
    format_label,
    gmfcq_check,
    in_tlin,
    licq_u,
    parse_label,
)


def test_index_sets_at_origin():
    ix = classify_indices(load("linear_m_not_extended").point)
    assert ix.I_g == {0, 1} and ix.I_00 == {0} and not ix.I_plus0 and not ix.I_0plus
    ix = classify_indices(load("curved_pair_min").point)
    assert ix.I_g == {0} and ix.I_00 == {0}


def test_index_sets_strict_pair():
    p = MpecPoint(1, aff(0, (1,)), G=(aff(1, (1,)),), H=(aff(0, (1,)),))
    assert classify_indices(p).I_plus0 == {0}


def test_directional_index_sets():
    p = load("linear_m_not_extended").point
    d = directional_index_sets(p, (0, 1, 1))
    assert d.I_g == {1} and d.I_0plus == {0} and not d.I_00
    d = directional_index_sets(p, (0, 0, 0))
    assert d.I_g == {0, 1} and d.I_00 == {0}
    d = directional_index_sets(load("curved_pair_min").point, (1, 0))
    assert d.I_g == {0} and d.I_plus0 == {0}
    assert directional_index_sets(p, (-1, 0, 0)) is None


def test_critical_directions():
    p = load("linear_m_not_extended").point
    assert critical_test(p, (0, 1, 1))
    assert critical_test(p, (0, 0, 0))
    assert not critical_test(p, (0, 1, 0))
    with pytest.raises(InputError):
        critical_test(p, (0, 1))


def test_licq():
    p = load("curved_pair_min").point
    assert licq_u(p, (0, 1))
    assert not licq_u(p, (0, 0))
    one = MpecPoint(2, aff(0, (1, 0)), g=(aff(0, (1, 1)),))
    assert licq_u(one, (0, 0))


def test_gmfcq():
    res = gmfcq_check(load("curved_pair_min").point)
    assert not res.holds
    assert res.witness == (1, 0, -1)
    assert gmfcq_check(load("strong_m_not_s").point).holds
    one = MpecPoint(2, aff(0, (1, 0)), g=(aff(0, (1, 1)),))
    assert gmfcq_check(one).holds


def test_feasibility_gate():
    with pytest.raises(InfeasiblePointError, match="G_i\\(x\\) >= 0 violated at i = 1"):
        MpecPoint(1, aff(0, (1,)), G=(aff(-1, (1,)),), H=(aff(0, (1,)),))
    with pytest.raises(InfeasiblePointError, match="g_i"):
        MpecPoint(1, aff(0, (1,)), g=(aff(1, (1,)),))
    with pytest.raises(InfeasiblePointError, match="G_i\\(x\\) H_i\\(x\\) = 0"):
        MpecPoint(1, aff(0, (1,)), G=(aff(1, (1,)),), H=(aff(1, (1,)),))


def test_shape_checks():
    with pytest.raises(InputError, match="gradient"):
        MpecPoint(2, aff(0, (1,)))
    with pytest.raises(InputError, match="symmetric"):
        MpecPoint(2, FunctionData(0, (1, 0), ((0, 1), (0, 0))))
    with pytest.raises(InputError, match="affine"):
        MpecPoint(1, FunctionData(0, (1,), ((1,),), True))


def test_labels_round_trip():
    assert parse_label("g2") == ("g", 1)
    assert format_label(("c", 0)) == "c1"
    for bad in ("x1", "g0", "g", "c-1"):
        with pytest.raises(InputError):
            parse_label(bad)


def test_linearized_cone_is_tangent_cone_of_encoding():
    checked = 0
    for rng in seeds(200, 21):
        point = random_point(rng, affine=True)
        F_, jac, omega = point.encoding()
        tan = tangent_cone(omega, F_)
        for _ in range(4):
            u = rvec(rng, point.n, -1, 1)
            Fu = matvec(jac, u) if jac else ()
            expect = tan.contains(Fu) if jac else True
            assert in_tlin(point, u) == expect
            checked += 1
    assert checked == 800


def test_corner_point_helper():
    p = corner_point((1, 1))
    assert p.q == 1 and p.m == 2
    assert in_tlin(p, (F(1), F(0))) and not in_tlin(p, (F(1), F(1)))
