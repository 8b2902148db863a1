"""Best-of-Many Christofides for shortest T-tours, plus an exhaustive optimum."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .decomposition import TreeCombination, decompose
from .graph import (
    DEFAULT_CAPS,
    CapacityError,
    Caps,
    EdgeMultiset,
    Instance,
    is_spanning_tree,
    odd_degree_vertices,
    scale_to_int,
    validate_ttour,
    vertex_mask,
)
from .lp import LpSolution, solve_relaxation
from .tjoin import Metric, min_tjoin, shortest_path_metric


@dataclass(frozen=True)
class TourResult:
    tree: frozenset[int]
    join: frozenset[int]
    tour: EdgeMultiset
    length: Fraction
    tree_length: Fraction
    join_length: Fraction


@dataclass(frozen=True)
class BomReport:
    lp: LpSolution
    combo: TreeCombination
    per_tree: tuple[TourResult, ...]
    best: int
    ratio_R: Fraction | None  # None when c.x* = 0

    @property
    def best_tour(self) -> TourResult:
        return self.per_tree[self.best]


@dataclass(frozen=True)
class OptResult:
    tour: EdgeMultiset
    length: Fraction


def christofides_single(inst: Instance, f: Iterable[int], caps: Caps = DEFAULT_CAPS,
                        metric: Metric | None = None) -> TourResult:
    g = inst.graph
    f = frozenset(f)
    if not is_spanning_tree(g, f):
        raise ValueError("not a spanning tree")
    target = odd_degree_vertices(g, f) ^ inst.terminals
    jr = min_tjoin(inst, target, caps, metric)
    tour = tuple((e in f) + (e in jr.join) for e in range(g.m))
    tree_length = inst.cost(f)
    return TourResult(f, jr.join, tour, tree_length + jr.length, tree_length, jr.length)


def best_of_many(inst: Instance, caps: Caps = DEFAULT_CAPS) -> BomReport:
    lp = solve_relaxation(inst, caps)
    combo = decompose(inst.graph, lp.x_star, caps)
    metric = shortest_path_metric(inst)
    tours = tuple(christofides_single(inst, f, caps, metric) for f in combo.trees)
    best = min(range(len(tours)), key=lambda i: (tours[i].length, i))
    ratio = tours[best].length / lp.value if lp.value else None
    return BomReport(lp, combo, tours, best, ratio)


def brute_force_opt(inst: Instance, caps: Caps = DEFAULT_CAPS) -> OptResult:
    """Shortest T-tour by exhausting every multiplicity vector in {0,1,2}^E.

    A vector is split into its support S and its odd part J (multiplicity 1),
    with length ``2 c(S) - c(J)``.  It is a T-tour iff S is connected and
    spanning and J has odd set T.  Connectivity and parity are tabulated over
    all 2^m edge subsets and the best connected superset of each J is found
    by a superset-minimum transform, which covers all 3^m vectors.  Ties go
    to the lexicographically smallest multiplicity vector.
    """
    g = inst.graph
    m = g.m
    if m > caps.bruteforce_edges:
        raise CapacityError(f"optimum oracle capped at m <= {caps.bruteforce_edges}, got m = {m}")
    if g.n == 1:
        return OptResult((), Fraction(0))
    ws, den = scale_to_int(inst.lengths)
    size = 1 << m
    masks = np.arange(size, dtype=np.int64)
    odd = np.zeros(size, dtype=np.int64)
    cost = np.zeros(size, dtype=np.int64)
    label = np.tile(np.arange(g.n, dtype=np.int8), (size, 1))
    has = [(masks >> e) & 1 == 1 for e in range(m)]
    for e, (u, v) in enumerate(g.edges):
        odd[has[e]] ^= (1 << u) | (1 << v)
        cost[has[e]] += ws[e]
    for _ in range(g.n - 1):
        for e, (u, v) in enumerate(g.edges):
            low = np.minimum(label[:, u], label[:, v])
            label[:, u] = np.where(has[e], low, label[:, u])
            label[:, v] = np.where(has[e], low, label[:, v])
    connected = (label == 0).all(axis=1)
    target = vertex_mask(inst.terminals)
    inf = np.iinfo(np.int64).max // 4

    def optimum(fixed: dict[int, int]) -> int:
        s_ok = connected.copy()
        j_ok = odd == target
        for e, k in fixed.items():
            if k == 0:
                s_ok &= ~has[e]
                j_ok &= ~has[e]
            elif k == 1:
                j_ok &= has[e]
            else:
                s_ok &= has[e]
                j_ok &= ~has[e]
        best_sup = np.where(s_ok, cost, inf)
        for e in range(m):
            view = best_sup.reshape(-1, 2, 1 << e)
            np.minimum(view[:, 0, :], view[:, 1, :], out=view[:, 0, :])
        vals = np.where(j_ok & (best_sup < inf), 2 * best_sup - cost, inf)
        return int(vals.min())

    opt = optimum({})
    if opt >= inf:
        raise AssertionError("no T-tour found; input graph must be connected with |T| even")
    fixed: dict[int, int] = {}
    for e in range(m):
        for k in (0, 1, 2):
            fixed[e] = k
            if optimum(fixed) == opt:
                break
    tour = tuple(fixed[e] for e in range(m))
    assert validate_ttour(inst, tour)
    return OptResult(tour, Fraction(opt, den))
