import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import extenlab as xl
from extenlab.errors import (DiameterTooLarge, DomainMismatch,
                             EpsilonTooLarge, GluingMismatch, InvalidArgument,
                             LoopTooCoarse)
from extenlab.maps import (MapSample, collapse_retraction, cone_contraction,
                           constant_map, dugundji_extend,
                           equiconnect_homotopy, glue_homotopy_extension,
                           homotopy_between, restrict, small_diameter_extend,
                           winding_number)
from extenlab.metric import Modulus, Net, check_modulus, euclidean_rows, \
    sup_distance
from extenlab.spaces import SpacePair, subspace

EPS6 = 2.0 ** -6


@pytest.fixture(scope="module")
def interval():
    return xl.make_space("interval", EPS6)


@pytest.fixture(scope="module")
def circle():
    return xl.make_space("circle", EPS6)


@pytest.fixture(scope="module")
def ends_pair(interval):
    return SpacePair.build("ends", interval,
                           [interval.basepoint("left"),
                            interval.basepoint("right")])


# ---------------------------------------------------------------------------
# restrict


def test_restrict_copies_values_and_modulus():
    fam = xl.example_family("comb", 2.0 ** -8)
    ext = xl.explicit_extension("comb", 4, 2.0 ** -8)
    back = restrict(ext, fam.pair)
    assert np.array_equal(back.values, fam.member(4).values)
    assert back.modulus is ext.modulus
    assert sup_distance(back, fam.member(4)) == 0.0


def test_restrict_identity_on_comb_base_is_inclusion():
    comb = xl.make_space("comb", EPS6)
    base = np.nonzero(comb.net.points[:, 1] == 0.0)[0]
    pair = SpacePair.build("comb-base", comb, base)
    ident = MapSample(comb.net, comb, comb.net.points, Modulus.lip(1.0))
    r = restrict(ident, pair)
    assert np.array_equal(r.values, comb.net.points[base])


def test_restrict_constant(interval, ends_pair):
    c = constant_map(interval.net, interval, [0.25])
    r = restrict(c, ends_pair)
    assert np.all(r.values == 0.25)


def test_restrict_rejects_wrong_domain(interval, ends_pair):
    other = xl.make_space("interval", 2.0 ** -5)
    f = constant_map(other.net, other, [0.0])
    with pytest.raises(DomainMismatch):
        restrict(f, ends_pair)


def test_restrict_after_extend_is_identity(interval, ends_pair):
    f = MapSample(ends_pair.z_net, interval, np.array([[0.0], [1.0]]),
                  Modulus.lip(1.0))
    ext = dugundji_extend(ends_pair, f, "clamp")
    assert np.array_equal(restrict(ext, ends_pair).values, f.values)


# ---------------------------------------------------------------------------
# weighted extension


def test_dugundji_midpoint(interval, ends_pair):
    f = MapSample(ends_pair.z_net, interval, np.array([[0.0], [1.0]]),
                  Modulus.lip(1.0))
    ext = dugundji_extend(ends_pair, f, "clamp")
    mid = int(np.nonzero(interval.net.points[:, 0] == 0.5)[0][0])
    assert ext.values[mid, 0] == 0.5
    assert check_modulus(ext, 0.0)


def test_dugundji_whole_space_returns_input(interval):
    pair = SpacePair.build("all", interval, np.arange(len(interval.net)))
    f = MapSample(pair.z_net, interval, interval.net.points.copy(),
                  Modulus.lip(1.0))
    ext = dugundji_extend(pair, f, "clamp")
    assert np.array_equal(ext.values, f.values)


def test_dugundji_constant_stays_constant(interval, ends_pair):
    f = constant_map(ends_pair.z_net, interval, [0.75])
    ext = dugundji_extend(ends_pair, f, "clamp")
    assert np.all(ext.values == 0.75)


def test_dugundji_interval_range_stays_in_hull(interval):
    # convex-combination property: output within [min f, max f]
    idx = np.nonzero(np.isin(interval.net.points[:, 0],
                             [0.0, 0.25, 0.75, 1.0]))[0]
    pair = SpacePair.build("four", interval, idx)
    f = MapSample(pair.z_net, interval,
                  np.array([[0.2], [0.9], [0.3], [0.6]]), Modulus.lip(8.0))
    ext = dugundji_extend(pair, f, "clamp")
    assert ext.values.min() >= 0.2 - 1e-12
    assert ext.values.max() <= 0.9 + 1e-12


def test_dugundji_circle_antipodal_fails(circle, interval):
    pair = SpacePair.build("ends", interval,
                           [interval.basepoint("left"),
                            interval.basepoint("right")])
    f = MapSample(pair.z_net, circle, np.array([[1.0, 0.0], [-1.0, 0.0]]),
                  Modulus.lip(2.0))
    with pytest.raises(xl.ExtensionFailure):
        dugundji_extend(pair, f, "radial")


def test_small_diameter_extension_interval(interval):
    idx = np.nonzero(np.isin(interval.net.points[:, 0], [0.0, 1.0]))[0]
    pair = SpacePair.build("ends", interval, idx)
    f = MapSample(pair.z_net, interval, np.array([[0.5], [0.5 + EPS6]]),
                  Modulus.lip(1.0))
    ext = small_diameter_extend(pair, f, eps_target=8 * EPS6)
    assert ext.value_diameter() < 8 * EPS6
    assert ext.values.min() >= 0.5 - 1e-12
    assert ext.values.max() <= 0.5 + EPS6 + 1e-12


def test_small_diameter_extension_circle_arc(circle, interval):
    idx = np.nonzero(np.isin(interval.net.points[:, 0], [0.0, 1.0]))[0]
    pair = SpacePair.build("ends", interval, idx)
    a = 2.0 ** -5
    f = MapSample(pair.z_net, circle,
                  np.array([[math.cos(-a), math.sin(-a)],
                            [math.cos(a), math.sin(a)]]),
                  Modulus.lip(2.0))
    ext = small_diameter_extend(pair, f, eps_target=2.0 ** -3)
    assert ext.value_diameter() < 2.0 ** -3
    radius = np.hypot(ext.values[:, 0], ext.values[:, 1])
    assert np.allclose(radius, 1.0)


def test_small_diameter_rejects_wide_input(circle, interval):
    idx = np.nonzero(np.isin(interval.net.points[:, 0], [0.0, 1.0]))[0]
    pair = SpacePair.build("ends", interval, idx)
    f = MapSample(pair.z_net, circle, np.array([[1.0, 0.0], [0.0, 1.0]]),
                  Modulus.lip(2.0))
    with pytest.raises(DiameterTooLarge):
        small_diameter_extend(pair, f, eps_target=0.25)


def test_small_diameter_constant(interval):
    idx = np.nonzero(np.isin(interval.net.points[:, 0], [0.0, 1.0]))[0]
    pair = SpacePair.build("ends", interval, idx)
    f = constant_map(pair.z_net, interval, [0.5])
    ext = small_diameter_extend(pair, f, eps_target=0.25)
    assert ext.value_diameter() == 0.0


# ---------------------------------------------------------------------------
# homotopies


def test_homotopy_constant_when_endpoints_equal(circle):
    f = constant_map(circle.net, circle, [1.0, 0.0])
    g = constant_map(circle.net, circle, [1.0, 0.0])
    h = homotopy_between(f, g, "geodesic-circle")
    assert np.all(h.values == h.values[0])


def test_homotopy_interval_midslice(interval):
    f = constant_map(interval.net, interval, [0.0])
    g = constant_map(interval.net, interval, [1.0])
    h = homotopy_between(f, g, "straight-line")
    assert np.all(h.slice(0.5).values == 0.5)
    assert np.array_equal(h.values[0], f.values)
    assert np.array_equal(h.values[-1], g.values)


def test_homotopy_geodesic_quarter_turn(circle):
    dom = Net(np.array([[0.0]]), 1.0)
    f = MapSample(dom, circle, np.array([[1.0, 0.0]]), Modulus.lip(0.0))
    g = MapSample(dom, circle, np.array([[0.0, 1.0]]), Modulus.lip(0.0))
    h = homotopy_between(f, g, "geodesic-circle")
    v = h.slice(0.5).values[0]
    assert math.atan2(v[1], v[0]) == pytest.approx(math.pi / 4, abs=1e-12)
    # stays within the spanned arc
    angles = np.arctan2(h.values[..., 1], h.values[..., 0])
    assert angles.min() >= -1e-12 and angles.max() <= math.pi / 2 + 1e-12


def test_homotopy_geodesic_rejects_antipodal(circle):
    dom = Net(np.array([[0.0]]), 1.0)
    f = MapSample(dom, circle, np.array([[1.0, 0.0]]), Modulus.lip(0.0))
    g = MapSample(dom, circle, np.array([[-1.0, 0.0]]), Modulus.lip(0.0))
    with pytest.raises(EpsilonTooLarge):
        homotopy_between(f, g, "geodesic-circle")


def test_homotopy_straight_line_needs_convex_codomain(circle):
    f = constant_map(circle.net, circle, [1.0, 0.0])
    with pytest.raises(InvalidArgument):
        homotopy_between(f, f, "straight-line")


def test_equiconnect_fixes_coincidence_and_stays_close(circle):
    net = circle.net
    phi0 = MapSample(net, circle, net.points, Modulus.lip(1.0))
    ang = np.arctan2(net.points[:, 1], net.points[:, 0])
    bump = np.where((ang >= 0) & (ang <= math.pi),
                    0.01 * np.sin(np.maximum(ang, 0.0)), 0.0)
    vals = np.where((bump == 0.0)[:, None], net.points,
                    np.column_stack([np.cos(ang + bump), np.sin(ang + bump)]))
    phi1 = MapSample(net, circle, vals, Modulus.lip(2.0))
    h = equiconnect_homotopy(phi0, phi1, delta=0.05)
    coincidence = np.all(phi0.values == phi1.values, axis=1)
    assert coincidence.sum() > 0
    assert np.all(h.values[:, coincidence, :] == phi0.values[coincidence])
    for a in range(len(h.times)):
        gap = euclidean_rows(h.values[a], h.values[0]).max()
        assert gap < 0.05


def test_equiconnect_identical_maps(circle):
    phi = MapSample(circle.net, circle, circle.net.points, Modulus.lip(1.0))
    h = equiconnect_homotopy(phi, phi, delta=0.1)
    assert np.all(h.values == phi.values)


def test_equiconnect_rejects_distant_maps(circle):
    phi0 = MapSample(circle.net, circle, circle.net.points, Modulus.lip(1.0))
    rolled = np.roll(circle.net.points, circle.meta["count"] // 2, axis=0)
    phi1 = MapSample(circle.net, circle, rolled, Modulus.lip(1.0))
    with pytest.raises(EpsilonTooLarge):
        equiconnect_homotopy(phi0, phi1, delta=0.1)


def test_glue_returns_phibar_when_f_vanishes(interval):
    pair = xl.make_pair("interval-N", EPS6)
    y = pair.space
    vals = np.column_stack([np.cos(y.net.points[:, 0]),
                            np.sin(y.net.points[:, 0])])
    circle6 = xl.make_space("circle", EPS6)
    phibar = MapSample(y.net, circle6, vals, Modulus.lip(1.0))
    sub_idx = np.arange(5)
    sub = y.net.subnet(sub_idx)
    from extenlab.maps import Homotopy
    frames = np.stack([vals[sub_idx], vals[sub_idx]])
    psi = Homotopy(sub, circle6, np.array([0.0, 1.0]), frames,
                   Modulus.lip(1.0), meta={"indices": sub_idx})
    f = constant_map(y.net, xl.make_space("interval", EPS6), [0.0])
    out = glue_homotopy_extension(pair, sub_idx, phibar, psi, f)
    assert np.array_equal(out.values, phibar.values)


def test_glue_rejects_mismatched_start(interval):
    pair = xl.make_pair("interval-N", EPS6)
    y = pair.space
    circle6 = xl.make_space("circle", EPS6)
    vals = np.tile([1.0, 0.0], (len(y.net), 1))
    phibar = MapSample(y.net, circle6, vals, Modulus.lip(0.0))
    sub_idx = np.arange(5)
    sub = y.net.subnet(sub_idx)
    from extenlab.maps import Homotopy
    wrong = np.tile([0.0, 1.0], (5, 1))
    psi = Homotopy(sub, circle6, np.array([0.0, 1.0]),
                   np.stack([wrong, wrong]), Modulus.lip(0.0),
                   meta={"indices": sub_idx})
    f = constant_map(y.net, xl.make_space("interval", EPS6), [0.0])
    with pytest.raises(GluingMismatch):
        glue_homotopy_extension(pair, sub_idx, phibar, psi, f)


# ---------------------------------------------------------------------------
# cone contraction


def test_cone_contraction_contract(circle):
    p_idx = 0
    p = circle.net.points[p_idx]
    d = euclidean_rows(circle.net.points,
                       np.broadcast_to(p, circle.net.points.shape))
    ball = subspace(circle, np.nonzero(d <= 2.0 ** -5)[0], "ball")
    p_local = int(np.nonzero(ball.net.points[:, 0] == p[0])[0][0])
    h = cone_contraction(ball, p_local, eps_target=2.0 ** -2)
    assert np.array_equal(h.slice(0.0).values, ball.net.points)
    assert np.all(h.slice(1.0).values == p)
    assert np.all(h.values[:, p_local, :] == p)
    spread = euclidean_rows(
        h.values.reshape(-1, 2),
        np.broadcast_to(p, (h.values.size // 2, 2))).max()
    assert spread < 2.0 ** -2


def test_cone_contraction_single_point(circle):
    ball = subspace(circle, [0], "just-p")
    h = cone_contraction(ball, 0, eps_target=0.5)
    assert np.all(h.values == circle.net.points[0])


def test_cone_contraction_monotone_on_convex_codomain(interval):
    p_idx = int(np.nonzero(interval.net.points[:, 0] == 0.5)[0][0])
    d = np.abs(interval.net.points[:, 0] - 0.5)
    ball_idx = np.nonzero(d <= 2.0 ** -5)[0]
    ball = subspace(interval, ball_idx, "ball")
    p_local = int(np.nonzero(ball_idx == p_idx)[0][0])
    h = cone_contraction(ball, p_local, eps_target=2.0 ** -2)
    dist_to_p = np.abs(h.values[:, :, 0] - 0.5)
    assert np.all(np.diff(dist_to_p, axis=0) <= 1e-12)


# ---------------------------------------------------------------------------
# winding and collapse


def test_winding_standard_and_doubled_loops():
    ang = 2 * np.pi * np.arange(64) / 64
    loop = np.column_stack([np.cos(ang), np.sin(ang)])
    assert winding_number(loop, (0.0, 0.0)) == 1
    ang2 = 4 * np.pi * np.arange(128) / 128
    double = np.column_stack([np.cos(ang2), np.sin(ang2)])
    assert winding_number(double, (0.0, 0.0)) == 2
    assert winding_number(loop[::-1], (0.0, 0.0)) == -1


def test_winding_constant_loop_is_zero():
    assert winding_number(np.tile([[1.0, 0.0]], (6, 1)), (0.0, 0.0)) == 0


def test_winding_rejects_coarse_loop():
    square = np.array([[1.0, 0.0], [-1.0, 0.0], [1.0, 0.0], [-1.0, 0.0]])
    with pytest.raises(LoopTooCoarse):
        winding_number(square, (0.0, 0.0))


@given(st.integers(min_value=0, max_value=63),
       st.integers(min_value=8, max_value=64))
@settings(max_examples=40, deadline=None)
def test_winding_invariant_under_rotation_and_refinement(shift, count):
    ang = 2 * np.pi * np.arange(count) / count
    loop = np.column_stack([np.cos(ang), np.sin(ang)])
    rolled = np.roll(loop, shift % count, axis=0)
    assert winding_number(rolled, (0.0, 0.0)) == 1


def test_collapse_retraction_behaviour():
    ear = xl.make_space("hawaii", EPS6)
    r2 = collapse_retraction(ear, 2)
    c2 = ear.net.points[ear.meta["circles"][2][4]]
    c5 = ear.net.points[ear.meta["circles"][5][3]]
    assert np.allclose(r2.apply(c2[None, :])[0], c2)
    assert np.array_equal(r2.apply(c5[None, :])[0], [0.0, 0.0])
    once = r2.apply(ear.net.points)
    assert np.array_equal(r2.apply(once), once)


def test_collapse_composed_with_other_circle_loop_is_nullwinding():
    ear = xl.make_space("hawaii", EPS6)
    r3 = collapse_retraction(ear, 3)
    loop5 = ear.net.points[ear.meta["circles"][5]]
    collapsed = r3.apply(loop5)
    # everything lands at the origin, reading as winding 0 about C_3
    assert winding_number(collapsed + 0.0, (1.0 / 3, 0.0)) == 0


def test_collapse_retraction_bounds():
    ear = xl.make_space("hawaii", EPS6)
    with pytest.raises(InvalidArgument):
        collapse_retraction(ear, 0)
    with pytest.raises(InvalidArgument):
        collapse_retraction(ear, 10 ** 6)
