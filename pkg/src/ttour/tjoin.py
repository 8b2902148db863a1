"""Shortest T'-joins via metric completion and exact perfect matching."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .graph import (
    DEFAULT_CAPS,
    CapacityError,
    Caps,
    Cut,
    Graph,
    Instance,
    min_odd_cut,
    odd_degree_vertices,
    scale_to_int,
    vertex_mask,
)


@dataclass(frozen=True)
class Metric:
    distance: tuple[tuple[Fraction, ...], ...]
    paths: tuple[tuple[tuple[int, ...], ...], ...]  # witness edge lists

    def d(self, u: int, v: int) -> Fraction:
        return self.distance[u][v]

    def path(self, u: int, v: int) -> tuple[int, ...]:
        return self.paths[u][v]


@dataclass(frozen=True)
class JoinResult:
    join: frozenset[int]
    length: Fraction


def shortest_path_metric(inst: Instance) -> Metric:
    """Exact all-pairs distances with one Dijkstra tree per source.

    Parents change only on strict improvement and ties in the queue go to the
    smaller vertex, so the witness paths are deterministic.
    """
    g = inst.graph
    n = g.n
    dist_rows = []
    path_rows = []
    for s in range(n):
        dist: list[Fraction | None] = [None] * n
        parent: list[int] = [-1] * n
        dist[s] = Fraction(0)
        done = [False] * n
        heap = [(dist[s], s)]
        while heap:
            du, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = True
            for e in g.incidence[u]:
                a, b = g.edges[e]
                v = b if a == u else a
                alt = du + inst.lengths[e]
                if not done[v] and (dist[v] is None or alt < dist[v]):
                    dist[v] = alt
                    parent[v] = e
                    heapq.heappush(heap, (alt, v))
        row = []
        for t in range(n):
            route = []
            v = t
            while v != s:
                e = parent[v]
                route.append(e)
                a, b = g.edges[e]
                v = a if b == v else b
            row.append(tuple(reversed(route)))
        dist_rows.append(tuple(dist))
        path_rows.append(tuple(row))
    return Metric(tuple(dist_rows), tuple(path_rows))


def min_perfect_matching(k: int, weight: Sequence[Sequence[int]]) -> tuple[int, list[tuple[int, int]]]:
    """Exact min-weight perfect matching on ``0..k-1`` by subset DP.

    The lowest unmatched index is paired with each candidate in increasing
    order and only strict improvements are kept, so ties resolve to the
    lexicographically smallest pairing.
    """
    full = (1 << k) - 1
    memo: dict[int, tuple[int, int]] = {0: (0, -1)}

    def solve(mask: int) -> int:
        hit = memo.get(mask)
        if hit is not None:
            return hit[0]
        i = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << i)
        best = None
        partner = -1
        r = rest
        while r:
            j = (r & -r).bit_length() - 1
            r &= r - 1
            val = weight[i][j] + solve(rest & ~(1 << j))
            if best is None or val < best:
                best, partner = val, j
        memo[mask] = (best, partner)
        return best

    total = solve(full)
    pairs = []
    mask = full
    while mask:
        i = (mask & -mask).bit_length() - 1
        j = memo[mask][1]
        pairs.append((i, j))
        mask &= ~((1 << i) | (1 << j))
    return total, pairs


def min_tjoin(inst: Instance, tprime: Iterable[int], caps: Caps = DEFAULT_CAPS,
              metric: Metric | None = None) -> JoinResult:
    tp = sorted(set(tprime))
    if len(tp) % 2:
        raise ValueError("|T'| must be even")
    if len(tp) > caps.matching:
        raise CapacityError(f"matching capped at |T'| <= {caps.matching}, got {len(tp)}")
    if not tp:
        return JoinResult(frozenset(), Fraction(0))
    if metric is None:
        metric = shortest_path_metric(inst)
    k = len(tp)
    flat = [metric.d(a, b) for a in tp for b in tp]
    scaled, _ = scale_to_int(flat)
    weight = [scaled[i * k:(i + 1) * k] for i in range(k)]
    _, pairs = min_perfect_matching(k, weight)
    join: set[int] = set()
    for i, j in pairs:
        join.symmetric_difference_update(metric.path(tp[i], tp[j]))
    join_f = frozenset(join)
    assert odd_degree_vertices(inst.graph, join_f) == frozenset(tp)
    return JoinResult(join_f, inst.cost(join_f))


def brute_force_tjoin(inst: Instance, tprime: Iterable[int], max_edges: int = 14) -> Fraction:
    """Minimum ``c(J)`` over every edge subset ``J`` with odd set ``tprime``."""
    g = inst.graph
    if g.m > max_edges:
        raise CapacityError(f"subset enumeration capped at m <= {max_edges}, got m = {g.m}")
    target = vertex_mask(tprime)
    ws, d = scale_to_int(inst.lengths)
    odd = [0]
    cost = [0]
    for e, (u, v) in enumerate(g.edges):
        bits = (1 << u) | (1 << v)
        odd += [o ^ bits for o in odd]
        cost += [c + ws[e] for c in cost]
    best = min(c for o, c in zip(odd, cost) if o == target)
    return Fraction(best, d)


def qplus_contains(g: Graph, tprime: Iterable[int], v: Sequence[Fraction],
                   caps: Caps = DEFAULT_CAPS) -> tuple[bool, Cut | None]:
    """Whether ``v`` is at least 1 on every ``tprime``-cut; otherwise a violated cut."""
    tp = frozenset(tprime)
    if not tp:
        return True, None
    cut, value = min_odd_cut(g, tp, v, caps)
    if value >= 1:
        return True, None
    return False, cut
