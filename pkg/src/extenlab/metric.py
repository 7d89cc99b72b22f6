"""Finite metric machinery: nets, epsilon-graphs, sup metric, moduli.

A Net is a finite point set standing in for a compact metric space at a
stated resolution.  Everything here is pure and immutable; arrays are
frozen after construction so instances are safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .errors import DomainMismatch, InvalidArgument

_CHUNK = 2048


def _frozen(a) -> np.ndarray:
    out = np.ascontiguousarray(np.asarray(a, dtype=float))
    out.setflags(write=False)
    return out


def euclidean_rows(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Row-wise Euclidean distance, exact on axis-aligned 2-d pairs.

    np.hypot keeps distances like |(1/k,1) - (0,1)| equal to 1/k to the
    last bit, which the catalog's closed-form sup values rely on.
    """
    d = p - q
    if d.ndim == 1:
        d = d[None, :]
    if d.shape[1] == 1:
        return np.abs(d[:, 0])
    if d.shape[1] == 2:
        return np.hypot(d[:, 0], d[:, 1])
    return np.sqrt(np.einsum("ij,ij->i", d, d))


def _euclidean_cross(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    if p.shape[1] == 1:
        return np.abs(p[:, 0][:, None] - q[:, 0][None, :])
    if p.shape[1] == 2:
        return np.hypot(p[:, 0][:, None] - q[:, 0][None, :],
                        p[:, 1][:, None] - q[:, 1][None, :])
    diff = p[:, None, :] - q[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


class EuclideanMetric:
    """Ambient Euclidean metric on the stored coordinates."""

    kind = "ambient-euclidean"

    def cross(self, p: np.ndarray, q: np.ndarray) -> np.ndarray:
        return _euclidean_cross(p, q)

    def rows(self, p: np.ndarray, q: np.ndarray) -> np.ndarray:
        return euclidean_rows(p, q)


class MatrixMetric:
    """Explicit distance matrix over net indices.

    Coordinate-based queries fall back to exact index resolution, so maps
    into matrix-metric spaces must take values on net points.
    """

    kind = "explicit-matrix"

    def __init__(self, matrix: np.ndarray):
        self.matrix = _frozen(matrix)

    def cross_idx(self, i: np.ndarray, j: np.ndarray) -> np.ndarray:
        return self.matrix[np.ix_(i, j)]


class MaxProductMetric:
    """max(d_first, d_rest): first coordinate block vs. the remainder.

    Used for cylinders N x Y and [0,1] x Y; the factor metrics are both
    Euclidean on their coordinate blocks.
    """

    kind = "max-product"

    def __init__(self, split: int):
        self.split = split

    def cross(self, p: np.ndarray, q: np.ndarray) -> np.ndarray:
        s = self.split
        a = _euclidean_cross(p[:, :s], q[:, :s])
        b = _euclidean_cross(p[:, s:], q[:, s:])
        return np.maximum(a, b)

    def rows(self, p: np.ndarray, q: np.ndarray) -> np.ndarray:
        s = self.split
        return np.maximum(euclidean_rows(p[:, :s], q[:, :s]),
                          euclidean_rows(p[:, s:], q[:, s:]))


class ConeMetric:
    """Quotient metric of (base x [0,1]) / (base x {1} -> apex).

    Last coordinate is the level; distance is the max metric, except
    that travelling through the apex may be shorter:
    min(max(d_base, |s-t|), (1-s)+(1-t)).
    """

    kind = "cone"

    def cross(self, p: np.ndarray, q: np.ndarray) -> np.ndarray:
        base = _euclidean_cross(p[:, :-1], q[:, :-1])
        s = p[:, -1][:, None]
        t = q[:, -1][None, :]
        direct = np.maximum(base, np.abs(s - t))
        via_apex = (1.0 - s) + (1.0 - t)
        return np.minimum(direct, via_apex)

    def rows(self, p: np.ndarray, q: np.ndarray) -> np.ndarray:
        base = euclidean_rows(p[:, :-1], q[:, :-1])
        s, t = p[:, -1], q[:, -1]
        return np.minimum(np.maximum(base, np.abs(s - t)), (1 - s) + (1 - t))


@dataclass(frozen=True)
class Net:
    """Finite eps-net of a compact metric space.

    points     -- (n, d) ambient coordinates
    resolution -- eps > 0; every intended point is within eps of the net
    metric     -- one of the metric backends above
    """

    points: np.ndarray
    resolution: float
    metric: object = field(default_factory=EuclideanMetric)

    def __post_init__(self):
        object.__setattr__(self, "points", _frozen(self.points))
        if self.points.ndim != 2 or len(self.points) == 0:
            raise InvalidArgument("net needs a nonempty (n, d) point array")
        if not self.resolution > 0:
            raise InvalidArgument("net resolution must be positive")

    def __len__(self) -> int:
        return len(self.points)

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    @property
    def metric_kind(self) -> str:
        return self.metric.kind

    def dist_idx(self, i: np.ndarray, j: np.ndarray) -> np.ndarray:
        """Cross-distance matrix between two index sets."""
        i = np.atleast_1d(np.asarray(i, dtype=int))
        j = np.atleast_1d(np.asarray(j, dtype=int))
        if isinstance(self.metric, MatrixMetric):
            return self.metric.cross_idx(i, j)
        return self.metric.cross(self.points[i], self.points[j])

    def pair_dist(self, i: int, j: int) -> float:
        return float(self.dist_idx([i], [j])[0, 0])

    def nearest(self, coords: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Indices and distances of the nearest net points (Euclidean nets)."""
        coords = np.atleast_2d(np.asarray(coords, dtype=float))
        if isinstance(self.metric, EuclideanMetric):
            d, idx = cKDTree(self.points).query(coords)
            return np.atleast_1d(idx), np.atleast_1d(d)
        best_idx = np.empty(len(coords), dtype=int)
        best_d = np.empty(len(coords))
        for lo in range(0, len(coords), _CHUNK):
            block = coords[lo:lo + _CHUNK]
            d = self.metric.cross(block, self.points)
            best_idx[lo:lo + _CHUNK] = d.argmin(axis=1)
            best_d[lo:lo + _CHUNK] = d.min(axis=1)
        return best_idx, best_d

    def subnet(self, indices: Sequence[int]) -> "Net":
        idx = np.asarray(indices, dtype=int)
        if isinstance(self.metric, MatrixMetric):
            metric = MatrixMetric(self.metric.matrix[np.ix_(idx, idx)])
        else:
            metric = self.metric
        return Net(self.points[idx], self.resolution, metric)


@dataclass(frozen=True)
class EpsilonGraph:
    """Distance-<=-scale graph on a net (no self loops, symmetric)."""

    net: Net
    scale: float
    edges: np.ndarray  # (m, 2) int, i < j, lexicographically sorted

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=int).reshape(-1, 2)
        e.setflags(write=False)
        object.__setattr__(self, "edges", e)

    def adjacency(self) -> csr_matrix:
        n = len(self.net)
        if len(self.edges) == 0:
            return csr_matrix((n, n))
        i, j = self.edges[:, 0], self.edges[:, 1]
        data = np.ones(2 * len(self.edges), dtype=np.int8)
        return csr_matrix((data, (np.r_[i, j], np.r_[j, i])), shape=(n, n))


def build_epsilon_graph(net: Net, scale: float) -> EpsilonGraph:
    """All unordered pairs at distance <= scale."""
    if not scale > 0:
        raise InvalidArgument("scale must be positive")
    if isinstance(net.metric, EuclideanMetric):
        pairs = cKDTree(net.points).query_pairs(scale, output_type="ndarray")
        edges = pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]
        return EpsilonGraph(net, scale, edges)
    rows = []
    n = len(net)
    for lo in range(0, n, _CHUNK):
        idx = np.arange(lo, min(lo + _CHUNK, n))
        d = net.dist_idx(idx, np.arange(n))
        ii, jj = np.nonzero(d <= scale)
        keep = idx[ii] < jj
        rows.append(np.column_stack([idx[ii][keep], jj[keep]]))
    edges = np.vstack(rows) if rows else np.empty((0, 2), dtype=int)
    return EpsilonGraph(net, scale, edges)


def spot_check_triangle(net: Net, samples: int = 200, seed: int = 0) -> float:
    """Worst triangle-inequality defect over sampled triples (<= 0 is good)."""
    rng = np.random.default_rng(seed)
    n = len(net)
    triples = rng.integers(0, n, size=(samples, 3))
    worst = -math.inf
    for i, j, k in triples:
        direct = net.pair_dist(int(i), int(k))
        detour = net.pair_dist(int(i), int(j)) + net.pair_dist(int(j), int(k))
        worst = max(worst, direct - detour)
    return worst


def graph_components(graph: EpsilonGraph) -> np.ndarray:
    """Connected-component labeling; each id is its smallest member index."""
    n = len(graph.net)
    _, raw = connected_components(graph.adjacency(), directed=False)
    first = np.full(raw.max() + 1, n, dtype=int)
    np.minimum.at(first, raw, np.arange(n))
    return first[raw]


def reachable(adj: csr_matrix, allowed: np.ndarray, src: int, dst: int) -> bool:
    """BFS from src to dst through allowed nodes only."""
    if not (allowed[src] and allowed[dst]):
        return False
    if src == dst:
        return True
    n = adj.shape[0]
    seen = np.zeros(n, dtype=bool)
    seen[src] = True
    frontier = np.array([src])
    indptr, indices = adj.indptr, adj.indices
    while len(frontier):
        nbrs = np.unique(np.concatenate(
            [indices[indptr[u]:indptr[u + 1]] for u in frontier]))
        nbrs = nbrs[allowed[nbrs] & ~seen[nbrs]]
        if len(nbrs) == 0:
            return False
        if seen[dst] or dst in nbrs:
            return True
        seen[nbrs] = True
        frontier = nbrs
    return False


def widest_path_value(graph: EpsilonGraph, src: int, dst: int,
                      height) -> float:
    """Maximin bottleneck: max over src->dst paths of the path's min height.

    Implemented as a binary search over the sorted set of node heights
    with a reachability query per threshold; returns -inf if unreachable.
    """
    n = len(graph.net)
    if not (0 <= src < n and 0 <= dst < n):
        raise InvalidArgument("src/dst outside the net")
    h = height(graph.net.points) if callable(height) else np.asarray(height, dtype=float)
    if h.shape != (n,):
        raise InvalidArgument("height must give one value per net point")
    if src == dst:
        return float(h[src])
    adj = graph.adjacency()
    cap = min(h[src], h[dst])
    levels = np.unique(h[h <= cap])
    if len(levels) == 0 or not reachable(adj, h >= levels[0], src, dst):
        return float("-inf")
    lo, hi = 0, len(levels) - 1  # reachable at levels[lo], search upward
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if reachable(adj, h >= levels[mid], src, dst):
            lo = mid
        else:
            hi = mid - 1
    return float(levels[lo])


@dataclass(frozen=True)
class Modulus:
    """Declared modulus of continuity.

    kind "lipschitz": omega(t) = L * t.
    kind "step": omega(t) = bound of the smallest tabulated radius >= t;
    the table is nondecreasing and starts at (0, 0).  Beyond the last
    radius the last bound applies.
    """

    kind: str
    lipschitz: float = 0.0
    radii: np.ndarray | None = None
    bounds: np.ndarray | None = None

    @staticmethod
    def lip(constant: float) -> "Modulus":
        if constant < 0:
            raise InvalidArgument("Lipschitz constant must be >= 0")
        return Modulus("lipschitz", lipschitz=float(constant))

    @staticmethod
    def step(table: Sequence[tuple[float, float]]) -> "Modulus":
        radii = np.asarray([r for r, _ in table], dtype=float)
        bounds = np.asarray([b for _, b in table], dtype=float)
        if len(radii) == 0 or radii[0] != 0.0 or bounds[0] != 0.0:
            raise InvalidArgument("step table must start at (0, 0)")
        if np.any(np.diff(radii) <= 0) or np.any(np.diff(bounds) < 0):
            raise InvalidArgument("step table must be increasing/nondecreasing")
        return Modulus("step", radii=_frozen(radii), bounds=_frozen(bounds))

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.kind == "lipschitz":
            return self.lipschitz * t
        pos = np.searchsorted(self.radii, t, side="left")
        return self.bounds[np.minimum(pos, len(self.bounds) - 1)]

    def table(self) -> list[tuple[float, float]]:
        if self.kind != "step":
            raise InvalidArgument("only step moduli have tables")
        return list(zip(self.radii.tolist(), self.bounds.tolist()))


def measured_modulus_multi(net: Net, values_list, n_buckets: int = 24) -> Modulus:
    """Tightest dyadic-bucket step modulus all the sampled maps obey.

    Used to declare moduli for constructed extensions (and homotopy
    slices) whose analytic modulus has no convenient closed form;
    check_modulus then re-verifies the declaration independently.
    """
    n = len(net)
    dmax = 0.0
    for lo in range(0, n, _CHUNK):
        idx = np.arange(lo, min(lo + _CHUNK, n))
        dmax = max(dmax, float(net.dist_idx(idx, np.arange(n)).max()))
    if dmax == 0.0:
        return Modulus.step([(0.0, 0.0)])
    radii = dmax * 2.0 ** np.arange(-(n_buckets - 1), 1.0)
    peaks = np.zeros(len(radii))
    for lo in range(0, n, _CHUNK):
        idx = np.arange(lo, min(lo + _CHUNK, n))
        dd = net.dist_idx(idx, np.arange(n))
        pos = np.clip(np.searchsorted(radii, dd, side="left"),
                      0, len(radii) - 1).ravel()
        for values in values_list:
            dv = _euclidean_cross(values[idx], values)
            np.maximum.at(peaks, pos, dv.ravel())
    bounds = np.maximum.accumulate(peaks)
    return Modulus.step([(0.0, 0.0)] + list(zip(radii.tolist(), bounds.tolist())))


def measured_modulus(net: Net, values: np.ndarray, n_buckets: int = 24) -> Modulus:
    return measured_modulus_multi(net, [values], n_buckets)


def _same_net(a: Net, b: Net) -> bool:
    return a is b or (a.points.shape == b.points.shape
                      and np.array_equal(a.points, b.points))


def sup_distance(f, g) -> float:
    """Sup metric restricted to the shared domain net.

    Within (omega_f + omega_g)(eps) of the true sup metric whenever both
    maps honour their declared moduli.
    """
    if not _same_net(f.domain, g.domain):
        raise DomainMismatch("sup_distance needs a shared domain net")
    if f.codomain_name != g.codomain_name:
        raise DomainMismatch("sup_distance needs a shared codomain")
    return float(euclidean_rows(f.values, g.values).max())


def sup_distance_interval(f, g) -> tuple[float, float]:
    """Certified bracket [net value, net value + (omega_f+omega_g)(eps)]."""
    value = sup_distance(f, g)
    eps = f.domain.resolution
    slack = float(f.modulus(eps) + g.modulus(eps))
    return value, value + slack


def check_modulus(f, slack: float) -> bool:
    """Does f satisfy its declared modulus up to additive slack on all pairs?"""
    if slack < 0:
        raise InvalidArgument("slack must be >= 0")
    net = f.domain
    values = f.values
    if len(np.unique(values, axis=0)) == 1:
        return True  # constant maps satisfy every modulus
    n = len(net)
    for lo in range(0, n, _CHUNK):
        idx = np.arange(lo, min(lo + _CHUNK, n))
        dd = net.dist_idx(idx, np.arange(n))
        dv = _euclidean_cross(values[idx], values)
        if np.any(dv > f.modulus(dd) + slack + 1e-12):
            return False
    return True
