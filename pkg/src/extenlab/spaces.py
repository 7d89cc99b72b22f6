"""Catalog of annotated compact metric spaces and the pair constructors.

Every catalog space is built at a dyadic resolution eps and carries exact
structural annotations next to its net: a total path-component labeling,
a clopen oracle, retraction data for the ANRs, and named basepoints.

Truncation policy (documented per space, deterministic):

* ndagger      keeps every point 1/m with m <= 1/eps plus the limit 0;
               the distinguished index cutoff (family bounds, exact
               annotations) is index_cutoff(eps) = min(32, 1/(8 eps)).
* comb         keeps teeth 1/m exactly for m <= index_cutoff(eps), then
               fill teeth roughly every 0.75 eps down to ~eps, then the
               limit tooth at x = 0.  An honest eps-net of the full comb.
* sine         keeps full oscillations k <= osc_cutoff(eps) (the widest
               k(k+1) <= 1/eps), then only the baseline zeros (1/m, 0)
               down to m <= 1/eps, plus the limit segment {0} x [-1, 1].
* hawaii       keeps circles of radius 1/k >= eps; every smaller circle
               lies inside the smallest kept one, so the net stays an
               honest eps-net of the whole earring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import dyadic
from .errors import InvalidArgument, UnknownName
from .metric import (ConeMetric, EuclideanMetric, MaxProductMetric, Modulus,
                     Net, euclidean_rows)


def index_cutoff(eps: float) -> int:
    """Distinguished-index truncation bound shared by the 1/n catalogs."""
    dyadic.exponent_of(eps)
    return max(2, min(32, round(1.0 / (8.0 * eps))))


def osc_cutoff(eps: float) -> int:
    """Last fully represented sine oscillation: widest k with k(k+1) <= 1/eps."""
    k = int(math.isqrt(round(1.0 / eps)))
    while (k + 1) * (k + 2) <= round(1.0 / eps):
        k += 1
    while k > 1 and k * (k + 1) > round(1.0 / eps):
        k -= 1
    return k


# ---------------------------------------------------------------------------
# clopen oracles


class ConnectedOracle:
    """Connected space: the only clopen subsets are empty and everything."""

    kind = "connected"

    def __init__(self, size: int):
        self.size = size

    def atoms(self):
        return [frozenset(range(self.size))]

    def extends(self, subset: frozenset) -> bool:
        return len(subset) in (0, self.size)

    def trace_extends(self, z_indices, trace: frozenset) -> bool:
        return len(trace) in (0, len(z_indices))


class DiscreteOracle:
    """Totally disconnected catalog space: every net subset is a trace.

    For the one-point compactification of the naturals, any finite set of
    isolated points is clopen, and any set containing the limit extends
    to a cofinite clopen set that misses the finitely many represented
    points outside it.
    """

    kind = "discrete"

    def __init__(self, size: int):
        self.size = size

    def atoms(self):
        return [frozenset([i]) for i in range(self.size)]

    def extends(self, subset: frozenset) -> bool:
        return True

    def trace_extends(self, z_indices, trace: frozenset) -> bool:
        return True


class BlockOracle:
    """Disjoint clopen blocks (one-point compactification of a union).

    A subset extends to a clopen set of the modeled space iff, ignoring
    the point at infinity, it is a union of whole blocks; the infinity
    point may be added freely because unrepresented tail blocks absorb
    the openness requirement.
    """

    kind = "blocks"

    def __init__(self, blocks: list[frozenset], infinity: int):
        self.blocks = [frozenset(b) for b in blocks]
        self.infinity = infinity

    def atoms(self):
        return self.blocks + [frozenset([self.infinity])]

    def extends(self, subset: frozenset) -> bool:
        rest = set(subset) - {self.infinity}
        for block in self.blocks:
            hit = rest & block
            if hit and hit != block:
                return False
            rest -= block
        return not rest

    def trace_extends(self, z_indices, trace: frozenset) -> bool:
        zset = set(int(i) for i in np.atleast_1d(z_indices))
        rest = set(trace) - {self.infinity}
        if not rest <= zset:
            return False
        for block in self.blocks:
            hit = rest & block
            zhit = zset & block
            if hit and hit != zhit:
                return False
            rest -= block
        return not rest


class ProductOracle:
    """Clopens of factor x A, checked slice by slice over the factor."""

    def __init__(self, kind: str, base_oracle, slices: list[np.ndarray]):
        # kind "ndagger": slices are independent; kind "interval": all
        # slices must carry the same base clopen.
        self.kind = kind
        self.base = base_oracle
        self.slices = [np.asarray(s) for s in slices]
        self._pos = [{int(g): j for j, g in enumerate(s)} for s in self.slices]

    def atoms(self):
        if self.kind == "interval":
            return [frozenset(int(s[j]) for s in self.slices for j in atom)
                    for atom in self.base.atoms()]
        return [frozenset(int(s[j]) for j in atom)
                for s in self.slices for atom in self.base.atoms()]

    def _parts(self, subset: frozenset):
        parts, matched = [], 0
        for pos in self._pos:
            part = frozenset(pos[int(i)] for i in subset if int(i) in pos)
            matched += len(part)
            parts.append(part)
        return parts if matched == len(subset) else None

    def extends(self, subset: frozenset) -> bool:
        parts = self._parts(subset)
        if parts is None:
            return False
        if any(not self.base.extends(p) for p in parts):
            return False
        if self.kind == "interval":
            return len(set(parts)) == 1
        return True

    def trace_extends(self, z_indices, trace: frozenset) -> bool:
        raise InvalidArgument("product spaces are not used as pair bases")


# ---------------------------------------------------------------------------
# retractions


class Retraction:
    """Named retraction r: U -> X from an ambient neighborhood U."""

    def __init__(self, name, space_key, contains, apply):
        self.name = name
        self.space_key = space_key
        self._contains = contains
        self._apply = apply

    def contains(self, pts) -> np.ndarray:
        return self._contains(np.atleast_2d(np.asarray(pts, dtype=float)))

    def apply(self, pts) -> np.ndarray:
        return self._apply(np.atleast_2d(np.asarray(pts, dtype=float)))


def _interval_retraction(key):
    return Retraction(
        "clamp", key,
        lambda p: (p[:, 0] >= -0.5) & (p[:, 0] <= 1.5),
        lambda p: np.clip(p, 0.0, 1.0))


def _circle_retraction(key):
    def contains(p):
        r = np.hypot(p[:, 0], p[:, 1])
        return (r > 0.5) & (r < 1.5)

    def apply(p):
        r = np.maximum(np.hypot(p[:, 0], p[:, 1]), 1e-300)
        return p / r[:, None]

    return Retraction("radial", key, contains, apply)


def _disk_retraction(key, center, radius):
    c = np.asarray(center, dtype=float)

    def contains(p):
        return euclidean_rows(p, np.broadcast_to(c, p.shape)) <= 1.5 * radius

    def apply(p):
        d = euclidean_rows(p, np.broadcast_to(c, p.shape))
        scale = np.minimum(1.0, radius / np.maximum(d, 1e-300))
        return c + (p - c) * scale[:, None]

    return Retraction("radial-clamp", key, contains, apply)


# ---------------------------------------------------------------------------
# annotated spaces


@dataclass(frozen=True)
class AnnotatedSpace:
    """A compact metric space at one resolution, with exact annotations."""

    name: str
    params: tuple
    net: Net
    labels: np.ndarray
    label_names: tuple
    clopen: object
    retractions: dict
    basepoints: dict
    chain_edges: np.ndarray
    meta: dict = field(default_factory=dict)
    contains_fn: object = None

    def __post_init__(self):
        lab = np.asarray(self.labels, dtype=int)
        lab.setflags(write=False)
        object.__setattr__(self, "labels", lab)
        e = np.asarray(self.chain_edges, dtype=int).reshape(-1, 2)
        e.setflags(write=False)
        object.__setattr__(self, "chain_edges", e)

    @property
    def resolution(self) -> float:
        return self.net.resolution

    @property
    def key(self) -> str:
        par = ",".join(f"{k}={v}" for k, v in self.params)
        return f"{self.name}[{par}]@{dyadic.format_epsilon(self.resolution)}"

    def contains(self, pts) -> np.ndarray:
        """Membership in the true space (analytic where available)."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        if self.contains_fn is not None:
            return self.contains_fn(pts)
        _, d = self.net.nearest(pts)
        return d <= self.net.resolution + 1e-9

    def component_count(self) -> int:
        return len(np.unique(self.labels))

    def basepoint(self, name: str) -> int:
        if name not in self.basepoints:
            raise UnknownName(f"{self.name} has no basepoint {name!r}")
        return self.basepoints[name]


@dataclass(frozen=True)
class SpacePair:
    """Space Y with a distinguished closed subspace Z at the same resolution."""

    name: str
    space: AnnotatedSpace
    z_indices: np.ndarray
    z_net: Net
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        z = np.asarray(self.z_indices, dtype=int)
        z.setflags(write=False)
        object.__setattr__(self, "z_indices", z)

    @classmethod
    def build(cls, name, space, z_indices, meta=None):
        z = np.asarray(z_indices, dtype=int)
        return cls(name, space, z, space.net.subnet(z), meta or {})

    @property
    def resolution(self) -> float:
        return self.space.resolution

    def z_position(self, y_index: int) -> int:
        hits = np.nonzero(self.z_indices == y_index)[0]
        if len(hits) == 0:
            raise InvalidArgument(f"Y index {y_index} is not in Z")
        return int(hits[0])


def _consecutive(indices) -> np.ndarray:
    idx = np.asarray(indices, dtype=int)
    if len(idx) < 2:
        return np.empty((0, 2), dtype=int)
    return np.column_stack([idx[:-1], idx[1:]])


# ---------------------------------------------------------------------------
# catalog builders


def _build_point(eps, params):
    net = Net(np.array([[0.0]]), eps)
    return AnnotatedSpace(
        "point", params, net, np.zeros(1, dtype=int), ("point",),
        ConnectedOracle(1), {}, {"origin": 0}, np.empty((0, 2)),
        meta={}, contains_fn=lambda p: euclidean_rows(p, np.zeros_like(p)) <= 1e-12)


def _build_interval(eps, params, extra=()):
    pts = dyadic.grid(eps)
    if len(extra):
        pts = np.unique(np.concatenate([pts, np.asarray(extra, dtype=float)]))
    net = Net(pts[:, None], eps)
    n = len(pts)
    key = f"interval@{dyadic.format_epsilon(eps)}"
    return AnnotatedSpace(
        "interval", params, net, np.zeros(n, dtype=int), ("interval",),
        ConnectedOracle(n), {"clamp": _interval_retraction(key)},
        {"left": 0, "right": n - 1},
        _consecutive(np.arange(n)),
        meta={"values": pts},
        contains_fn=lambda p: (p[:, 0] >= -1e-12) & (p[:, 0] <= 1 + 1e-12))


def _ndagger_values(eps) -> np.ndarray:
    top = round(1.0 / eps)
    vals = [0.0] + [1.0 / m for m in range(top, 0, -1)]
    return np.asarray(vals)


def _build_ndagger(eps, params):
    vals = _ndagger_values(eps)
    n = len(vals)
    net = Net(vals[:, None], eps)
    labels = np.arange(n)
    names = tuple("singleton-0" if v == 0.0 else f"singleton-1/{round(1 / v)}"
                  for v in vals)
    members = np.array([0] + list(range(round(1.0 / eps), 0, -1)))
    index_of = {int(m): i for i, m in enumerate(members)}
    return AnnotatedSpace(
        "ndagger", params, net, labels, names, DiscreteOracle(n), {},
        {"zero": 0, "one": n - 1},
        np.empty((0, 2)),
        meta={"members": members, "index_of_member": index_of,
              "index_cutoff": index_cutoff(eps)})


def _build_circle(eps, params):
    count = 8
    while 2 * math.pi / count > 1.4 * eps:
        count *= 2
    ang = 2 * math.pi * np.arange(count) / count
    pts = np.column_stack([np.cos(ang), np.sin(ang)])
    for j, exact in ((0, (1, 0)), (count // 4, (0, 1)),
                     (count // 2, (-1, 0)), (3 * count // 4, (0, -1))):
        pts[j] = exact
    net = Net(pts, eps)
    key = f"circle@{dyadic.format_epsilon(eps)}"
    edges = np.vstack([_consecutive(np.arange(count)), [[count - 1, 0]]])
    return AnnotatedSpace(
        "circle", params, net, np.zeros(count, dtype=int), ("circle",),
        ConnectedOracle(count), {"radial": _circle_retraction(key)},
        {"angle0": 0},
        edges,
        meta={"count": count, "angles": ang},
        contains_fn=lambda p: np.abs(np.hypot(p[:, 0], p[:, 1]) - 1.0) <= 1e-9)


def _build_disk(eps, params, extra=None):
    lookup = dict(params)
    center = np.asarray(lookup.get("center", (0.0, 0.0)), dtype=float)
    radius = float(lookup.get("radius", 1.0))
    cx, cy = center
    xs = dyadic.grid(eps, cx - radius, cx + radius)
    ys = dyadic.grid(eps, cy - radius, cy + radius)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    mask = (gx - cx) ** 2 + (gy - cy) ** 2 <= radius ** 2
    grid_pts = np.column_stack([gx[mask], gy[mask]])
    n_grid = len(grid_pts)

    idx2d = np.full(mask.shape, -1, dtype=int)
    idx2d[mask] = np.arange(n_grid)

    def lattice_index(p) -> int:
        # exact hit on a kept grid point, else -1 (dyadic divisions are
        # exact, so genuine duplicates compare equal bit for bit)
        fx = (p[0] - xs[0]) / eps
        fy = (p[1] - ys[0]) / eps
        ix, iy = round(fx), round(fy)
        if fx == ix and fy == iy \
                and 0 <= ix < idx2d.shape[0] and 0 <= iy < idx2d.shape[1]:
            return int(idx2d[ix, iy])
        return -1

    rows = [grid_pts]
    seen: dict = {}
    next_index = n_grid

    def add_rows(arr):
        nonlocal next_index
        arr = np.asarray(arr, dtype=float)
        out = np.empty(len(arr), dtype=int)
        fresh = []
        for i, p in enumerate(arr):
            j = lattice_index(p)
            if j < 0:
                j = seen.get((p[0], p[1]), -1)
            if j < 0:
                j = next_index
                seen[(p[0], p[1])] = j
                fresh.append(p)
                next_index += 1
            out[i] = j
        if fresh:
            rows.append(np.asarray(fresh))
        return out

    count = int(math.ceil(2 * math.pi * radius / (0.5 * eps)))
    ang = 2 * math.pi * np.arange(count) / count
    ring_idx = [add_rows(np.column_stack([cx + r * np.cos(ang),
                                          cy + r * np.sin(ang)]))
                for r in (radius, radius - 0.5 * eps, radius - eps)]
    injected = add_rows(extra) if extra is not None and len(extra) else \
        np.empty(0, dtype=int)

    pts_all = np.vstack(rows)
    n = len(pts_all)

    edges = []
    h = (idx2d[:-1, :] >= 0) & (idx2d[1:, :] >= 0)
    edges.append(np.column_stack([idx2d[:-1, :][h], idx2d[1:, :][h]]))
    v = (idx2d[:, :-1] >= 0) & (idx2d[:, 1:] >= 0)
    edges.append(np.column_stack([idx2d[:, :-1][v], idx2d[:, 1:][v]]))
    for r in range(3):
        edges.append(np.column_stack([ring_idx[r], np.roll(ring_idx[r], -1)]))
        if r:
            edges.append(np.column_stack([ring_idx[r], ring_idx[r - 1]]))
    # innermost ring into the grid: one inside corner of the containing cell
    bridge = []
    for k in range(count):
        p = pts_all[ring_idx[2][k]]
        bx = int(math.floor((p[0] - xs[0]) / eps))
        by = int(math.floor((p[1] - ys[0]) / eps))
        for dx, dy in ((0, 0), (1, 0), (0, 1), (1, 1)):
            ix, iy = bx + dx, by + dy
            if 0 <= ix < idx2d.shape[0] and 0 <= iy < idx2d.shape[1] \
                    and idx2d[ix, iy] >= 0:
                bridge.append((ring_idx[2][k], idx2d[ix, iy]))
                break
    edges.append(np.asarray(bridge, dtype=int).reshape(-1, 2))

    net = Net(pts_all, eps)
    key = f"disk[{cx},{cy},{radius}]@{dyadic.format_epsilon(eps)}"

    def member(p):
        return euclidean_rows(p, np.broadcast_to(center, p.shape)) <= radius + 1e-9

    return AnnotatedSpace(
        "disk", params, net, np.zeros(n, dtype=int), ("disk",),
        ConnectedOracle(n),
        {"radial-clamp": _disk_retraction(key, center, radius)},
        {"center": _nearest_row(grid_pts, center)},
        np.vstack(edges),
        meta={"center": center, "radius": radius,
              "injected_indices": injected},
        contains_fn=member)


def _nearest_row(pts, target) -> int:
    return int(euclidean_rows(pts, np.broadcast_to(np.asarray(target, float),
                                                   pts.shape)).argmin())


def _sample_monotone_arc(theta_a, theta_b, step, endpoints):
    """Arc-length resampling of (pi/theta, sin theta) on [theta_a, theta_b].

    Endpoints are replaced by the exact coordinates supplied, so zeros
    and extrema of the curve land on the net bit-exactly.
    """
    fine = max(256, 4 * int(math.ceil(2.5 / step)))
    th = np.linspace(theta_a, theta_b, fine)
    pts = np.column_stack([math.pi / th, np.sin(th)])
    seg = euclidean_rows(pts[1:], pts[:-1])
    arc = np.concatenate([[0.0], np.cumsum(seg)])
    total = arc[-1]
    n = max(1, int(math.ceil(total / step)))
    targets = np.linspace(0.0, total, n + 1)
    th_s = np.interp(targets, arc, th)
    out = np.column_stack([math.pi / th_s, np.sin(th_s)])
    out[0] = endpoints[0]
    out[-1] = endpoints[1]
    return out


def _build_sine(eps, params):
    k_osc = osc_cutoff(eps)
    m_tail = round(1.0 / eps)
    step = 1.4 * eps

    curve_pts = []
    zero_pos = {}
    for k in range(1, k_osc + 1):
        z0 = (1.0 / k, 0.0)
        z1 = (1.0 / (k + 1), 0.0)
        peak = (2.0 / (2 * k + 1), 1.0 if k % 2 == 0 else -1.0)
        half1 = _sample_monotone_arc(k * math.pi, (k + 0.5) * math.pi, step,
                                     (z0, peak))
        half2 = _sample_monotone_arc((k + 0.5) * math.pi, (k + 1) * math.pi,
                                     step, (peak, z1))
        if k == 1:
            zero_pos[1] = 0
            curve_pts.append(half1)
        else:
            curve_pts.append(half1[1:])
        curve_pts.append(half2[1:])
        zero_pos[k + 1] = sum(len(c) for c in curve_pts) - 1
    curve = np.vstack(curve_pts)
    tail = np.column_stack([1.0 / np.arange(k_osc + 2, m_tail + 1, dtype=float),
                            np.zeros(m_tail - k_osc - 1)])
    for j, m in enumerate(range(k_osc + 2, m_tail + 1)):
        zero_pos[m] = len(curve) + j
    seg_y = dyadic.grid(eps, -1.0, 1.0)
    segment = np.column_stack([np.zeros(len(seg_y)), seg_y])
    pts = np.vstack([curve, tail, segment])
    n_curve = len(curve) + len(tail)
    n = len(pts)

    labels = np.zeros(n, dtype=int)
    labels[n_curve:] = 1
    edges = np.vstack([
        _consecutive(np.arange(n_curve)),           # polyline plus zero tail
        _consecutive(np.arange(n_curve, n)),        # the limit segment
    ])
    origin = n_curve + int(np.nonzero(seg_y == 0.0)[0][0])
    net = Net(pts, eps)

    def member(p):
        x, y = p[:, 0], p[:, 1]
        on_seg = (np.abs(x) <= 1e-9) & (np.abs(y) <= 1 + 1e-9)
        good = (x > 1e-12) & (x <= 1 + 1e-9)
        on_curve = np.zeros(len(p), dtype=bool)
        xs = np.where(good, x, 1.0)
        on_curve[good] = np.abs(np.sin(math.pi / xs) - y)[good] <= 1e-6
        return on_seg | on_curve

    return AnnotatedSpace(
        "sine", params, net, labels, ("curve", "segment"),
        ConnectedOracle(n), {}, {"origin": origin, "corner": 0},
        edges,
        meta={"zero_index": zero_pos, "osc_cutoff": k_osc,
              "tail_max": m_tail, "n_curve": n_curve,
              "index_cutoff": index_cutoff(eps)},
        contains_fn=member)


def _comb_teeth(eps) -> list[float]:
    cut = index_cutoff(eps)
    teeth = [1.0 / m for m in range(1, cut + 1)]
    m = cut + 1
    while True:
        target = teeth[-1] - 0.75 * eps
        if target <= 0.85 * eps:
            break
        m = max(m, int(math.ceil(1.0 / target)))
        if 1.0 / m <= 0.85 * eps:
            break
        teeth.append(1.0 / m)
        m += 1
    teeth.append(0.0)
    return teeth


def _build_comb(eps, params):
    teeth = _comb_teeth(eps)
    ygrid = dyadic.grid(eps)
    base_x = np.unique(np.concatenate([dyadic.grid(eps), np.asarray(teeth)]))
    base = np.column_stack([base_x, np.zeros(len(base_x))])
    cols, col_index = [], {}
    offset = len(base)
    for x in teeth:
        col = np.column_stack([np.full(len(ygrid) - 1, x), ygrid[1:]])
        col_index[x] = offset
        cols.append(col)
        offset += len(col)
    pts = np.vstack([base] + cols)
    n = len(pts)
    edges = [_consecutive(np.arange(len(base)))]
    base_pos = {x: i for i, x in enumerate(base_x)}
    for x in teeth:
        start = col_index[x]
        idx = np.concatenate([[base_pos[x]], np.arange(start, start + len(ygrid) - 1)])
        edges.append(_consecutive(idx))
    net = Net(pts, eps)
    tip_of = {x: col_index[x] + len(ygrid) - 2 for x in teeth}

    def member(p):
        x, y = p[:, 0], p[:, 1]
        on_base = (np.abs(y) <= 1e-9) & (x >= -1e-9) & (x <= 1 + 1e-9)
        inv = np.round(1.0 / np.maximum(x, 1e-300))
        on_tooth = ((np.abs(x) <= 1e-9) |
                    ((inv >= 1) & (np.abs(x * inv - 1.0) <= 1e-9)))
        on_tooth &= (y >= -1e-9) & (y <= 1 + 1e-9)
        return on_base | on_tooth

    cut = index_cutoff(eps)
    return AnnotatedSpace(
        "comb", params, net, np.zeros(n, dtype=int), ("comb",),
        ConnectedOracle(n), {},
        {"limit-tip": tip_of[0.0], "origin": base_pos[0.0]},
        np.vstack(edges),
        meta={"teeth": teeth, "index_cutoff": cut, "tip_index": tip_of,
              "exact_teeth": [1.0 / m for m in range(1, cut + 1)]},
        contains_fn=member)


def _build_hawaii(eps, params):
    k_max = round(1.0 / eps)
    pts = [np.array([[0.0, 0.0]])]
    circle_indices = {}
    edges = []
    offset = 1
    for k in range(1, k_max + 1):
        r = 1.0 / k
        count = max(8, int(math.ceil(2 * math.pi * r / (1.4 * eps))))
        count += count % 2
        ang = math.pi + 2 * math.pi * np.arange(count) / count
        circ = np.column_stack([r + r * np.cos(ang), r * np.sin(ang)])
        circ[count // 2] = (2.0 * r, 0.0)
        ring = np.concatenate([[0], offset + np.arange(count - 1)])
        pts.append(circ[1:])  # drop the shared origin sample
        circle_indices[k] = ring
        edges.append(np.column_stack([ring, np.roll(ring, -1)]))
        offset += count - 1
    net_pts = np.vstack(pts)
    n = len(net_pts)
    net = Net(net_pts, eps)
    key = f"hawaii@{dyadic.format_epsilon(eps)}"

    def member(p):
        x, y = p[:, 0], p[:, 1]
        rr = x * x + y * y
        ok = np.zeros(len(p), dtype=bool)
        ok |= rr <= (eps * 1e-3) ** 2
        pos = rr > 0
        # on circle k iff x^2+y^2 = 2x/k for a natural k
        with np.errstate(divide="ignore", invalid="ignore"):
            k_est = np.where(pos & (x > 0), 2 * x / np.where(pos, rr, 1.0), 0.0)
        k_round = np.round(k_est)
        ok |= pos & (k_round >= 1) & (np.abs(k_est - k_round) <= 1e-6 * np.maximum(1, k_round))
        return ok

    return AnnotatedSpace(
        "hawaii", params, net, np.zeros(n, dtype=int), ("earring",),
        ConnectedOracle(n), {}, {"origin": 0},
        np.vstack(edges),
        meta={"circles": circle_indices, "circle_max": k_max,
              "family_bound": min(index_cutoff(eps), k_max - 1)},
        contains_fn=member)


_BUILDERS = {
    "point": _build_point,
    "interval": _build_interval,
    "ndagger": _build_ndagger,
    "circle": _build_circle,
    "disk": _build_disk,
    "sine": _build_sine,
    "comb": _build_comb,
    "hawaii": _build_hawaii,
}

_SPACE_CACHE: dict = {}


def catalog_names() -> list[str]:
    return sorted(_BUILDERS)


def make_space(name: str, resolution: float, **params) -> AnnotatedSpace:
    """Catalog space at a dyadic resolution (instances are cached)."""
    if name not in _BUILDERS:
        raise UnknownName(f"unknown catalog space {name!r}")
    if not dyadic.is_dyadic(resolution):
        raise InvalidArgument(f"resolution {resolution!r} is not dyadic")
    key = (name, resolution, tuple(sorted(params.items())))
    if key not in _SPACE_CACHE:
        _SPACE_CACHE[key] = _BUILDERS[name](resolution,
                                            tuple(sorted(params.items())))
    return _SPACE_CACHE[key]


# ---------------------------------------------------------------------------
# constructors used by the positive-side machinery


def product_with(space: AnnotatedSpace, factor: str,
                 grid_step: float | None = None) -> AnnotatedSpace:
    """Product factor x A with the max metric.

    factor "interval" uses a dyadic grid (step <= A's resolution);
    factor "ndagger" uses the 1/m catalog net at A's resolution.
    """
    eps = space.resolution
    if factor == "interval":
        step = grid_step if grid_step is not None else eps
        if not dyadic.is_dyadic(step) or step > eps + 1e-15:
            raise InvalidArgument("grid step must be dyadic and <= resolution")
        fvals = dyadic.grid(step)
        fkind = "interval"
    elif factor == "ndagger":
        fvals = _ndagger_values(eps)
        fkind = "ndagger"
    else:
        raise InvalidArgument(f"unknown product factor {factor!r}")
    if not isinstance(space.net.metric, EuclideanMetric):
        raise InvalidArgument("product base must carry the ambient metric")

    nA, nF = len(space.net), len(fvals)
    rep = np.repeat(fvals, nA)
    tiled = np.tile(space.net.points, (nF, 1))
    pts = np.column_stack([rep, tiled])
    net = Net(pts, eps, MaxProductMetric(split=1))

    base_labels = space.labels
    base_names = space.label_names
    if fkind == "interval":
        labels = np.tile(base_labels, nF)
        names = base_names
    else:
        labels = np.concatenate([base_labels + i * len(base_names)
                                 for i in range(nF)])
        names = tuple(f"f{i}|{bn}" for i in range(nF) for bn in base_names)

    edges = []
    for i in range(nF):
        edges.append(space.chain_edges + i * nA)
    if fkind == "interval":
        for i in range(nF - 1):
            sl = np.arange(nA)
            edges.append(np.column_stack([sl + i * nA, sl + (i + 1) * nA]))
    slices = [i * nA + np.arange(nA) for i in range(nF)]
    oracle = ProductOracle(fkind, space.clopen, slices)
    return AnnotatedSpace(
        f"product({factor},{space.name})",
        (("factor", fkind), ("base", space.key)),
        net, labels, names, oracle, {}, {},
        np.vstack(edges) if edges else np.empty((0, 2)),
        meta={"factor_values": fvals, "base_size": nA, "base": space,
              "factor_kind": fkind})


def cone(space: AnnotatedSpace) -> AnnotatedSpace:
    """Metric cone: level-t copies with the t=1 level collapsed to an apex."""
    if not isinstance(space.net.metric, EuclideanMetric):
        raise InvalidArgument("cone base must carry the ambient metric")
    eps = space.resolution
    levels = dyadic.grid(eps)[:-1]          # 0 .. 1-eps; apex stands for 1
    nA, nL = len(space.net), len(levels)
    rep = np.repeat(levels, nA)
    tiled = np.tile(space.net.points, (nL, 1))
    pts = np.column_stack([tiled, rep])
    apex = np.concatenate([space.net.points[0], [1.0]])
    pts = np.vstack([pts, apex[None, :]])
    net = Net(pts, eps, ConeMetric())
    n = len(pts)
    edges = []
    for i in range(nL):
        edges.append(space.chain_edges + i * nA)
    for i in range(nL - 1):
        sl = np.arange(nA)
        edges.append(np.column_stack([sl + i * nA, sl + (i + 1) * nA]))
    edges.append(np.column_stack([(nL - 1) * nA + np.arange(nA),
                                  np.full(nA, n - 1)]))
    return AnnotatedSpace(
        f"cone({space.name})", (("base", space.key),),
        net, np.zeros(n, dtype=int), ("cone",),
        ConnectedOracle(n), {}, {"apex": n - 1},
        np.vstack(edges),
        meta={"levels": levels, "base_size": nA, "base": space,
              "apex_index": n - 1})


def opc_disjoint_union(blocks: list[AnnotatedSpace]) -> AnnotatedSpace:
    """One-point compactification of a shrinking disjoint union.

    Block n is rescaled to diameter 2^-n-2 and placed on the first axis
    inside [0.75 * 2^-n, 2^-n], so every point of block n sits within
    2^-n of the point at infinity (placed at the origin).
    """
    if not blocks:
        raise InvalidArgument("opc needs at least one block")
    eps = blocks[0].resolution
    dim = max(b.net.dimension for b in blocks)
    pts = [np.zeros((1, dim))]
    offset = 1
    meta_blocks = []
    labels = [np.array([0])]
    names = ["infinity"]
    edges = []
    block_sets = []
    for n, b in enumerate(blocks, start=1):
        if b.resolution != eps:
            raise InvalidArgument("opc blocks must share one resolution")
        p = b.net.points
        lo = p.min(axis=0)
        extent = float(np.linalg.norm(p.max(axis=0) - lo))  # >= true diameter
        scale = (2.0 ** (-n - 2)) / max(extent, 1e-12)
        shifted = np.zeros((len(p), dim))
        shifted[:, :p.shape[1]] = (p - lo) * scale
        shifted[:, 0] += 0.75 * 2.0 ** (-n)
        pts.append(shifted)
        idx = offset + np.arange(len(p))
        block_sets.append(frozenset(int(i) for i in idx))
        meta_blocks.append({"n": n, "start": offset, "size": len(p),
                            "scale": scale, "shift": 0.75 * 2.0 ** (-n),
                            "source": b})
        labels.append(b.labels + len(names))
        names.extend(f"block{n}:{ln}" for ln in b.label_names)
        edges.append(b.chain_edges + offset)
        offset += len(p)
    net = Net(np.vstack(pts), eps)
    oracle = BlockOracle(block_sets, infinity=0)
    return AnnotatedSpace(
        "opc", tuple((f"block{i + 1}", b.key) for i, b in enumerate(blocks)),
        net, np.concatenate(labels), tuple(names), oracle, {},
        {"infinity": 0},
        np.vstack(edges) if edges else np.empty((0, 2)),
        meta={"blocks": meta_blocks})


def subspace(space: AnnotatedSpace, indices, name: str) -> AnnotatedSpace:
    """Connected sub-net of a catalog space, reusing the parent's metric."""
    idx = np.asarray(indices, dtype=int)
    labs = np.unique(space.labels[idx])
    if len(labs) != 1:
        raise InvalidArgument("subspace must sit inside one path component")
    net = space.net.subnet(idx)
    n = len(idx)
    pos = {int(i): j for j, i in enumerate(idx)}
    kept = [(pos[a], pos[b]) for a, b in space.chain_edges
            if int(a) in pos and int(b) in pos]
    return AnnotatedSpace(
        name, (("base", space.key),), net, np.zeros(n, dtype=int),
        (space.label_names[labs[0]],), ConnectedOracle(n), {}, {},
        np.asarray(kept, dtype=int).reshape(-1, 2),
        meta={"base": space, "base_indices": idx},
        contains_fn=space.contains_fn)


def spiked_base_pair(v_space: AnnotatedSpace, p_index: int) -> SpacePair:
    """Pair (cone of V, base plus the spike over p)."""
    if not (0 <= p_index < len(v_space.net)):
        raise InvalidArgument("spike basepoint must be a net point of V")
    y = cone(v_space)
    nA = y.meta["base_size"]
    nL = len(y.meta["levels"])
    base = np.arange(nA)
    spike = p_index + nA * np.arange(1, nL)
    z = np.concatenate([base, spike, [y.meta["apex_index"]]])
    return SpacePair.build(f"spiked-base({v_space.name})", y, z,
                           meta={"p_index": p_index, "base_size": nA})


def urysohn(space: AnnotatedSpace, z_indices, v_indices):
    """Separating function: 1 on Z, 0 off V, Lipschitz 2 / d(Z, Y - V)."""
    from .maps import MapSample  # local import to avoid a cycle

    z = np.asarray(z_indices, dtype=int)
    v = set(int(i) for i in np.asarray(v_indices, dtype=int))
    if not set(int(i) for i in z) <= v:
        raise InvalidArgument("urysohn requires Z inside V")
    comp = np.asarray([i for i in range(len(space.net)) if i not in v], dtype=int)
    if len(comp) == 0:
        raise InvalidArgument("urysohn requires a nonempty complement")
    all_idx = np.arange(len(space.net))
    d_comp = space.net.dist_idx(all_idx, comp).min(axis=1)
    d_z = space.net.dist_idx(all_idx, z).min(axis=1)
    sep = float(space.net.dist_idx(z, comp).min())
    if sep <= 0:
        from .errors import DegenerateSeparation
        raise DegenerateSeparation("d(Z, Y - V) vanishes on the net")
    values = (d_comp / (d_comp + d_z))[:, None]
    codomain = make_space("interval", space.resolution)
    return MapSample(space.net, codomain, values, Modulus.lip(2.0 / sep),
                     name="urysohn")


# ---------------------------------------------------------------------------
# pair catalog


_PAIR_CACHE: dict = {}


def pair_names() -> list[str]:
    return ["interval-N", "interval-ends", "sine-zeros", "disk-earring",
            "opc-intervals"]


def make_pair(name: str, resolution: float) -> SpacePair:
    """Named (Y, Z) pairs used by the example reproductions."""
    key = (name, resolution)
    if key in _PAIR_CACHE:
        return _PAIR_CACHE[key]
    if not dyadic.is_dyadic(resolution):
        raise InvalidArgument(f"resolution {resolution!r} is not dyadic")
    eps = resolution
    if name == "interval-N":
        members = _ndagger_values(eps)
        y = _build_interval(eps, (("with", "N"),), extra=members)
        vals = y.meta["values"]
        z = np.searchsorted(vals, members)
        member_ids = np.array([0] + list(range(round(1 / eps), 0, -1)))
        pair = SpacePair.build(name, y, z,
                               meta={"z_members": member_ids,
                                     "index_cutoff": index_cutoff(eps)})
    elif name == "interval-ends":
        y = make_space("interval", eps)
        pair = SpacePair.build(name, y, [y.basepoint("left"), y.basepoint("right")])
    elif name == "sine-zeros":
        y = make_space("sine", eps)
        zp = y.meta["zero_index"]
        ms = sorted(zp)  # 1..tail_max
        z = np.asarray([zp[m] for m in ms] + [y.basepoint("origin")])
        pair = SpacePair.build(name, y, z,
                               meta={"z_members": np.asarray(ms + [0]),
                                     "osc_cutoff": y.meta["osc_cutoff"]})
    elif name == "disk-earring":
        ear = make_space("hawaii", eps)
        y = _build_disk(eps, (("center", (1.0, 0.0)), ("radius", 1.0)),
                        extra=ear.net.points)
        z = y.meta["injected_indices"]
        pair = SpacePair.build(name, y, z, meta={"z_space": ear})
    elif name == "opc-intervals":
        block = make_space("interval", eps)
        y = opc_disjoint_union([block] * 8)
        z = [0]
        ends = []
        for b in y.meta["blocks"]:
            start, size = b["start"], b["size"]
            ends.append((start, start + size - 1))
            z.extend([start, start + size - 1])
        pair = SpacePair.build(name, y, np.asarray(z),
                               meta={"block_ends": ends})
    else:
        raise UnknownName(f"unknown pair {name!r}")
    _PAIR_CACHE[key] = pair
    return pair
