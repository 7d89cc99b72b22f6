import math

import numpy as np
import pytest

import extenlab as xl
from extenlab.errors import DegenerateSeparation, InvalidArgument, UnknownName
from extenlab.metric import check_modulus, euclidean_rows
from extenlab.spaces import index_cutoff, osc_cutoff

from conftest import components_by_unionfind

EPS6 = 2.0 ** -6
EPS8 = 2.0 ** -8


# ---------------------------------------------------------------------------
# truncation policy


def test_index_cutoff_matches_shipped_table():
    assert index_cutoff(2.0 ** -6) == 8
    assert index_cutoff(2.0 ** -8) == 32
    assert index_cutoff(2.0 ** -4) == 2
    assert index_cutoff(2.0 ** -10) == 32


def test_osc_cutoff_values():
    assert osc_cutoff(2.0 ** -8) == 15
    assert osc_cutoff(2.0 ** -6) == 7
    assert osc_cutoff(2.0 ** -10) == 31


def test_make_space_rejects_unknown_and_nondyadic():
    with pytest.raises(UnknownName):
        xl.make_space("moebius", EPS6)
    with pytest.raises(InvalidArgument):
        xl.make_space("interval", 0.1)


def test_make_space_is_cached():
    assert xl.make_space("comb", EPS6) is xl.make_space("comb", EPS6)


# ---------------------------------------------------------------------------
# catalog annotations


def test_ndagger_contains_exact_distinguished_points():
    nd = xl.make_space("ndagger", EPS6)
    vals = set(nd.net.points[:, 0].tolist())
    assert 0.0 in vals
    for m in range(1, 9):
        assert 1.0 / m in vals          # distinguished indices, exactly
    assert 1.0 / 64 in vals             # fill points continue to 1/eps
    assert nd.component_count() == len(nd.net)   # totally disconnected
    assert len(nd.clopen.atoms()) == len(nd.net)
    assert nd.clopen.trace_extends(np.arange(len(nd.net)), frozenset({3}))


def test_sine_has_two_labels_and_exact_zeros():
    sine = xl.make_space("sine", EPS8)
    assert sine.label_names == ("curve", "segment")
    assert sine.component_count() == 2
    zeros = sine.meta["zero_index"]
    for m in (1, 2, 15, 16, 100):
        pt = sine.net.points[zeros[m]]
        assert pt[0] == 1.0 / m and pt[1] == 0.0
    origin = sine.net.points[sine.basepoint("origin")]
    assert origin[0] == 0.0 and origin[1] == 0.0


def test_sine_peaks_are_exact():
    sine = xl.make_space("sine", EPS8)
    pts = sine.net.points
    for k in (1, 2, 3):
        x_peak = 2.0 / (2 * k + 1)
        y_peak = 1.0 if k % 2 == 0 else -1.0
        hits = np.nonzero((pts[:, 0] == x_peak) & (pts[:, 1] == y_peak))[0]
        assert len(hits) == 1


def test_comb_keeps_exact_teeth_and_limit_tooth():
    comb = xl.make_space("comb", EPS8)
    xs = set(comb.net.points[:, 0].tolist())
    for m in range(1, 33):
        assert 1.0 / m in xs
    tip = comb.net.points[comb.basepoint("limit-tip")]
    assert tip[0] == 0.0 and tip[1] == 1.0
    assert comb.component_count() == 1


def test_comb_net_covers_true_comb(rng):
    # every point of the full comb lies within eps of the net
    comb = xl.make_space("comb", EPS6)
    ys = rng.random(120)
    ms = rng.integers(1, 500, size=120)
    true_pts = np.column_stack([1.0 / ms, ys])
    base_pts = np.column_stack([rng.random(60), np.zeros(60)])
    _, d = comb.net.nearest(np.vstack([true_pts, base_pts]))
    assert float(d.max()) <= EPS6 + 1e-12


def test_hawaii_circles_and_membership(rng):
    ear = xl.make_space("hawaii", EPS6)
    circles = ear.meta["circles"]
    assert set(circles) == set(range(1, 65))
    # circle rings pass through the shared origin and the far point
    for k in (1, 3, 17):
        ring = circles[k]
        assert ring[0] == 0
        far = ear.net.points[ring[len(ring) // 2]]
        assert far[0] == 2.0 / k and far[1] == 0.0
    # the whole earring is covered within eps, including cut circles
    ks = rng.integers(1, 300, size=200)
    th = rng.uniform(0, 2 * math.pi, size=200)
    pts = np.column_stack([1 / ks + np.cos(th) / ks, np.sin(th) / ks])
    _, d = ear.net.nearest(pts)
    assert float(d.max()) <= EPS6 + 1e-12


def test_circle_distinguished_points_exact():
    c = xl.make_space("circle", EPS6)
    pts = c.net.points
    for target in ((1, 0), (0, 1), (-1, 0), (0, -1)):
        assert np.any(np.all(pts == np.asarray(target, dtype=float), axis=1))


def test_retractions_fix_their_spaces():
    for name in ("interval", "circle", "disk"):
        space = xl.make_space(name, EPS6)
        for retr in space.retractions.values():
            assert bool(np.all(retr.contains(space.net.points)))
            moved = retr.apply(space.net.points)
            gap = euclidean_rows(moved, space.net.points).max()
            assert float(gap) <= EPS6


def test_connected_oracles_accept_only_trivial_traces():
    comb = xl.make_space("comb", EPS6)
    z = np.arange(5)
    assert comb.clopen.trace_extends(z, frozenset())
    assert comb.clopen.trace_extends(z, frozenset(range(5)))
    assert not comb.clopen.trace_extends(z, frozenset({1}))


def test_clopen_oracle_resolution_independent():
    for eps in (2.0 ** -5, 2.0 ** -6, 2.0 ** -7):
        nd = xl.make_space("ndagger", eps)
        assert nd.clopen.extends(frozenset({0, 1}))
        sine = xl.make_space("sine", eps)
        assert not sine.clopen.extends(frozenset({0}))
        assert sine.clopen.extends(frozenset(range(len(sine.net))))


# ---------------------------------------------------------------------------
# constructors


def test_product_point_interval_is_interval():
    prod = xl.product_with(xl.make_space("point", 2.0 ** -4), "interval")
    iv = xl.make_space("interval", 2.0 ** -4)
    assert len(prod.net) == len(iv.net)
    d1 = prod.net.dist_idx(np.arange(len(prod.net)), np.arange(len(prod.net)))
    d2 = iv.net.dist_idx(np.arange(len(iv.net)), np.arange(len(iv.net)))
    assert np.array_equal(d1, d2)


def test_product_interval_square_one_component():
    sq = xl.product_with(xl.make_space("interval", 2.0 ** -4), "interval")
    assert sq.component_count() == 1
    labels = components_by_unionfind(len(sq.net), sq.chain_edges)
    assert len(np.unique(labels)) == 1


def test_product_circle_ndagger_components():
    eps = 2.0 ** -5
    prod = xl.product_with(xl.make_space("circle", eps), "ndagger")
    nd = xl.make_space("ndagger", eps)
    assert prod.component_count() == len(nd.net)
    # each declared component is internally 2eps-chain-connected
    labels = components_by_unionfind(len(prod.net), prod.chain_edges)
    for lab in np.unique(prod.labels):
        members = np.nonzero(prod.labels == lab)[0]
        assert len(np.unique(labels[members])) == 1


def test_product_rejects_coarse_grid():
    with pytest.raises(InvalidArgument):
        xl.product_with(xl.make_space("interval", EPS6), "interval",
                        grid_step=2.0 ** -4)


def test_cone_point_is_interval():
    cp = xl.cone(xl.make_space("point", 2.0 ** -4))
    iv = xl.make_space("interval", 2.0 ** -4)
    assert len(cp.net) == len(iv.net)
    d1 = cp.net.dist_idx(np.arange(len(cp.net)), np.arange(len(cp.net)))
    d2 = iv.net.dist_idx(np.arange(len(iv.net)), np.arange(len(iv.net)))
    assert np.allclose(d1, d2)


def test_cone_two_points_single_component():
    from extenlab.spaces import AnnotatedSpace, ConnectedOracle
    from extenlab.metric import Net
    two = AnnotatedSpace(
        "two-points", (), Net(np.array([[0.0], [1.0]]), 2.0 ** -4),
        np.array([0, 1]), ("a", "b"), ConnectedOracle(2), {}, {},
        np.empty((0, 2)))
    c = xl.cone(two)
    assert c.component_count() == 1
    labels = components_by_unionfind(len(c.net), c.chain_edges)
    assert len(np.unique(labels)) == 1


def test_cone_ndagger_path_connected():
    c = xl.cone(xl.make_space("ndagger", 2.0 ** -5))
    assert c.component_count() == 1
    labels = components_by_unionfind(len(c.net), c.chain_edges)
    assert len(np.unique(labels)) == 1


def test_cone_metric_triangle_inequality_sampled(rng):
    c = xl.cone(xl.make_space("ndagger", 2.0 ** -4))
    n = len(c.net)
    idx = rng.integers(0, n, size=(200, 3))
    d = c.net.dist_idx(np.arange(n), np.arange(n))
    for i, j, k in idx:
        assert d[i, k] <= d[i, j] + d[j, k] + 1e-12
    assert np.allclose(d, d.T)
    assert np.all(np.diag(d) == 0.0)


def test_opc_single_interval():
    opc = xl.opc_disjoint_union([xl.make_space("interval", 2.0 ** -4)])
    assert opc.component_count() == 2    # the block and the infinity point


def test_opc_of_points_all_blocks_clopen():
    pts = [xl.make_space("point", 2.0 ** -4)] * 5
    opc = xl.opc_disjoint_union(pts)
    assert opc.component_count() == 6
    atoms = opc.clopen.atoms()
    assert len(atoms) == 6
    # every union of point blocks is accepted
    assert opc.clopen.extends(frozenset({1, 3}))
    assert opc.clopen.extends(frozenset({0, 2}))     # with infinity


def test_opc_blocks_accumulate_at_infinity():
    opc = xl.opc_disjoint_union([xl.make_space("interval", EPS6)] * 8)
    for b in opc.meta["blocks"]:
        idx = np.arange(b["start"], b["start"] + b["size"])
        far = float(np.abs(opc.net.points[idx, 0]).max())
        assert far <= 2.0 ** (-b["n"]) + 1e-15


def test_opc_oracle_rejects_block_splitting():
    opc = xl.opc_disjoint_union([xl.make_space("interval", 2.0 ** -4)] * 3)
    b = opc.meta["blocks"][0]
    whole = frozenset(range(b["start"], b["start"] + b["size"]))
    assert opc.clopen.extends(whole)
    assert not opc.clopen.extends(frozenset(list(whole)[:3]))


def test_opc_requires_blocks():
    with pytest.raises(InvalidArgument):
        xl.opc_disjoint_union([])


def test_constructors_preserve_net_quality(rng):
    # sampled true points of the defining formulas stay within epsilon
    prod = xl.product_with(xl.make_space("circle", 2.0 ** -5), "interval")
    ts = rng.random(60)
    angs = rng.uniform(0, 2 * math.pi, 60)
    _, d = prod.net.nearest(np.column_stack([ts, np.cos(angs), np.sin(angs)]))
    assert float(d.max()) <= 2.0 ** -5
    cn = xl.cone(xl.make_space("interval", 2.0 ** -4))
    _, d = cn.net.nearest(np.column_stack([rng.random(60), rng.random(60)]))
    assert float(d.max()) <= 2.0 ** -4
    opc = xl.opc_disjoint_union([xl.make_space("interval", 2.0 ** -4)] * 3)
    for b in opc.meta["blocks"]:
        lo = 0.75 * 2.0 ** -b["n"]
        true_pts = (lo + b["scale"] * rng.random(30))[:, None]
        _, d = opc.net.nearest(true_pts)
        assert float(d.max()) <= 2.0 ** -4


def test_cone_single_component_in_two_eps_graph():
    from extenlab.metric import build_epsilon_graph, graph_components
    c = xl.cone(xl.make_space("ndagger", 2.0 ** -4))
    g = build_epsilon_graph(c.net, 2 * 2.0 ** -4)
    assert len(np.unique(graph_components(g))) == 1


def test_spiked_base_pair_shapes():
    v = xl.make_space("ndagger", 2.0 ** -4)
    pair = xl.spiked_base_pair(v, 0)
    levels = len(pair.space.meta["levels"]) + 1   # including the apex level
    assert len(pair.z_indices) == len(v.net) + levels - 1
    with pytest.raises(InvalidArgument):
        xl.spiked_base_pair(v, 999)


def test_spiked_base_pair_point_gives_whole_interval():
    pt = xl.make_space("point", 2.0 ** -4)
    pair = xl.spiked_base_pair(pt, 0)
    assert len(pair.z_indices) == len(pair.space.net)


# ---------------------------------------------------------------------------
# urysohn


def test_urysohn_values_and_modulus():
    iv = xl.make_space("interval", EPS6)
    z = [iv.basepoint("left")]
    v = np.nonzero(iv.net.points[:, 0] < 0.5)[0]
    f = xl.urysohn(iv, z, v)
    x = iv.net.points[:, 0]
    assert f.values[x == 0.0][0, 0] == 1.0
    assert f.values[x == 0.25][0, 0] == 0.5
    assert f.values[x == 0.75][0, 0] == 0.0
    assert np.all((f.values >= 0) & (f.values <= 1))
    assert check_modulus(f, 0.0)
    sep = 0.5   # d(Z, complement of V) on this net
    assert f.modulus.lipschitz == 2.0 / sep


def test_urysohn_degenerate_separation():
    # a duplicated coordinate puts the complement at distance zero from Z
    from extenlab.spaces import AnnotatedSpace, ConnectedOracle
    from extenlab.metric import Net
    net = Net(np.array([[0.0], [0.0], [1.0]]), 1.0)
    sp = AnnotatedSpace("dup", (), net, np.zeros(3, dtype=int), ("dup",),
                        ConnectedOracle(3), {}, {}, np.empty((0, 2)))
    with pytest.raises(DegenerateSeparation):
        xl.urysohn(sp, [0], [0, 2])


def test_urysohn_requires_z_inside_v():
    iv = xl.make_space("interval", EPS6)
    with pytest.raises(InvalidArgument):
        xl.urysohn(iv, [0, 5], [0, 1, 2])


# ---------------------------------------------------------------------------
# pairs


def test_pair_catalog_builds_and_z_nets_match():
    for name in xl.pair_names():
        pair = xl.make_pair(name, EPS6)
        assert np.array_equal(pair.z_net.points,
                              pair.space.net.points[pair.z_indices])


def test_interval_n_pair_members():
    pair = xl.make_pair("interval-N", EPS6)
    members = pair.meta["z_members"]
    coords = pair.z_net.points[:, 0]
    assert members[0] == 0 and coords[0] == 0.0
    for m, c in zip(members[1:], coords[1:]):
        assert c == 1.0 / m


def test_disk_earring_pair_z_is_the_earring():
    pair = xl.make_pair("disk-earring", EPS6)
    ear = pair.meta["z_space"]
    assert np.array_equal(pair.z_net.points, ear.net.points)
    inside = pair.space.contains(ear.net.points)
    assert bool(np.all(inside))
