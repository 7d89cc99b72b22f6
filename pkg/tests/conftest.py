"""Shared fixtures and independent test oracles.

The oracles here deliberately avoid the library's own shortest-path /
component machinery: union-find over explicit edge lists, exhaustive
path enumeration for maximin values, and plain BFS over a dense distance
matrix for reachability.
"""

from __future__ import annotations

import numpy as np
import pytest


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb

    def groups(self) -> dict:
        out: dict = {}
        for i in range(len(self.parent)):
            out.setdefault(self.find(i), []).append(i)
        return out


def components_by_unionfind(n: int, edges) -> np.ndarray:
    uf = UnionFind(n)
    for a, b in edges:
        uf.union(int(a), int(b))
    roots = np.array([uf.find(i) for i in range(n)])
    first = {}
    for i, r in enumerate(roots):
        first.setdefault(r, i)
    return np.array([first[r] for r in roots])


def exhaustive_widest_path(n: int, edges, src: int, dst: int,
                           heights) -> float:
    """Maximin over all simple paths, by depth-first enumeration.

    Neighbors are explored highest first so the incumbent rises quickly;
    callers should keep the graphs sparse (this is exponential).
    """
    adj = [[] for _ in range(n)]
    for a, b in edges:
        adj[int(a)].append(int(b))
        adj[int(b)].append(int(a))
    for u in range(n):
        adj[u].sort(key=lambda w: -heights[w])
    best = float("-inf")
    seen = [False] * n

    def walk(u, low):
        nonlocal best
        if u == dst:
            best = max(best, low)
            return
        seen[u] = True
        for w in adj[u]:
            if not seen[w] and min(low, heights[w]) > best:
                walk(w, min(low, heights[w]))
        seen[u] = False

    walk(src, heights[src])
    return best


def bfs_reachable_dense(points: np.ndarray, scale: float, allowed,
                        src: int, dst: int) -> bool:
    """Chain existence via BFS over an O(n^2) distance matrix."""
    diff = points[:, None, :] - points[None, :, :]
    dist = np.sqrt((diff ** 2).sum(axis=2))
    n = len(points)
    if not (allowed[src] and allowed[dst]):
        return False
    seen = {src}
    frontier = [src]
    while frontier:
        nxt = []
        for u in frontier:
            for w in range(n):
                if w not in seen and allowed[w] and dist[u, w] <= scale:
                    if w == dst:
                        return True
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return src == dst


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240811)
