"""Exact-rational weighted multigraphs: cuts, partitions, trees and parity.

Vertices are ``0..n-1`` and edges are identified by their position in
``Graph.edges``.  Vertex and edge sets are ``frozenset`` values; per-edge
rational vectors are plain tuples of :class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence

EdgeVector = tuple  # tuple[Fraction, ...] indexed by edge id
EdgeMultiset = tuple  # tuple[int, ...] of multiplicities in {0, 1, 2}


class CapacityError(RuntimeError):
    """An exhaustive routine was asked to run above its configured cap."""


class InvalidCutError(ValueError):
    pass


class InvalidPartitionError(ValueError):
    pass


class InstanceError(ValueError):
    pass


@dataclass(frozen=True)
class Caps:
    """Size limits for the exhaustive (desk-scale) routines."""

    cut_enum: int = 20  # vertices, for cut enumeration
    partition_enum: int = 12  # vertices, for set-partition enumeration
    matching: int = 18  # terminals in the matching DP
    tree_enum: int = 16  # edges, for spanning tree enumeration
    bruteforce_edges: int = 14  # edges, for the optimum-tour oracle
    universal_tprime: int = 10  # vertices, for the all-T' membership check
    narrow_oracle: int = 14  # vertices, for full narrow-cut enumeration

    def __post_init__(self) -> None:
        for name, value in vars(self).items():
            if value <= 0:
                raise ValueError(f"cap {name} must be positive, got {value}")


DEFAULT_CAPS = Caps()


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))
        if self.n < 1:
            raise InstanceError("graph needs at least one vertex")
        for i, (u, v) in enumerate(self.edges):
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InstanceError(f"edge {i} has an endpoint outside 0..{self.n - 1}")
            if u == v:
                raise InstanceError(f"edge {i} is a self-loop")
        if not is_connected(self.n, self.edges, range(len(self.edges))):
            raise InstanceError("graph is not connected")

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(range(self.n))

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for i, (u, v) in enumerate(self.edges):
            inc[u].append(i)
            inc[v].append(i)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def cut_table(self) -> tuple[tuple[int, tuple[int, ...]], ...]:
        """All canonical sides (bitmasks without vertex 0) with their cut edges."""
        ends = [(1 << u, 1 << v) for u, v in self.edges]
        table = []
        for side in range(2, 1 << self.n, 2):
            crossing = tuple(i for i, (bu, bv) in enumerate(ends)
                             if bool(side & bu) != bool(side & bv))
            table.append((side, crossing))
        return tuple(table)


@dataclass(frozen=True)
class Instance:
    graph: Graph
    terminals: frozenset[int]
    lengths: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "terminals", frozenset(self.terminals))
        object.__setattr__(self, "lengths", tuple(Fraction(c) for c in self.lengths))
        if len(self.lengths) != self.graph.m:
            raise InstanceError(f"expected {self.graph.m} lengths, got {len(self.lengths)}")
        if any(c < 0 for c in self.lengths):
            raise InstanceError("edge lengths must be nonnegative")
        if len(self.terminals) % 2:
            raise InstanceError("terminal set must have even size")
        if any(not 0 <= t < self.graph.n for t in self.terminals):
            raise InstanceError("terminal outside the vertex range")

    def cost(self, edges: Iterable[int]) -> Fraction:
        return sum((self.lengths[e] for e in edges), Fraction(0))

    def cost_multiset(self, mult: Sequence[int]) -> Fraction:
        return sum((k * c for k, c in zip(mult, self.lengths)), Fraction(0))

    def dot(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.lengths, x)), Fraction(0))


@dataclass(frozen=True)
class Cut:
    """A cut ``delta(side)``; ``side`` is the canonical shore, never holding vertex 0."""

    side: frozenset[int]
    edges: frozenset[int] = field(compare=False)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Cut) and self.edges == other.edges

    def __hash__(self) -> int:
        return hash(self.edges)

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((x[e] for e in self.edges), Fraction(0))

    def is_odd(self, t: Iterable[int]) -> bool:
        return len(self.side & frozenset(t)) % 2 == 1

    def describe(self) -> str:
        return " ".join(map(str, sorted(self.side)))


Partition = tuple  # tuple[frozenset[int], ...]


# -- small helpers ---------------------------------------------------------

def vertex_mask(vs: Iterable[int]) -> int:
    mask = 0
    for v in vs:
        mask |= 1 << v
    return mask


def mask_vertices(mask: int) -> frozenset[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return frozenset(out)


def scale_to_int(values: Sequence[Fraction]) -> tuple[list[int], int]:
    """Integers ``k`` and a common denominator ``d`` with ``values[i] == k[i] / d``."""
    d = 1
    for v in values:
        d = math.lcm(d, Fraction(v).denominator)
    return [int(Fraction(v) * d) for v in values], d


def is_connected(n: int, edges: Sequence[tuple[int, int]], subset: Iterable[int]) -> bool:
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    parts = n
    for e in subset:
        ra, rb = find(edges[e][0]), find(edges[e][1])
        if ra != rb:
            parent[ra] = rb
            parts -= 1
    return parts == 1


def _canonical(g: Graph, w: Iterable[int]) -> frozenset[int]:
    w = frozenset(w)
    return g.vertices - w if 0 in w else w


# -- operations ------------------------------------------------------------

def cut_edges(g: Graph, w: Iterable[int]) -> Cut:
    w = frozenset(w)
    if not w or w >= g.vertices or not w <= g.vertices:
        raise InvalidCutError("a cut needs a nonempty proper vertex subset")
    side = _canonical(g, w)
    crossing = frozenset(i for i, (u, v) in enumerate(g.edges) if (u in side) != (v in side))
    return Cut(side, crossing)


def _check_partition(g: Graph, p: Sequence[Iterable[int]]) -> tuple[frozenset[int], ...]:
    classes = tuple(frozenset(c) for c in p)
    seen: set[int] = set()
    for c in classes:
        if not c:
            raise InvalidPartitionError("empty class")
        if seen & c:
            raise InvalidPartitionError("classes overlap")
        seen |= c
    if seen != set(g.vertices):
        raise InvalidPartitionError("classes do not cover the vertex set")
    return classes


def partition_cross_edges(g: Graph, p: Sequence[Iterable[int]]) -> frozenset[int]:
    classes = _check_partition(g, p)
    label = {}
    for k, c in enumerate(classes):
        for v in c:
            label[v] = k
    return frozenset(i for i, (u, v) in enumerate(g.edges) if label[u] != label[v])


def is_spanning_tree(g: Graph, f: Iterable[int]) -> bool:
    f = frozenset(f)
    return len(f) == g.n - 1 and is_connected(g.n, g.edges, f)


def odd_degree_vertices(g: Graph, f: Iterable[int]) -> frozenset[int]:
    mask = 0
    for e in f:
        u, v = g.edges[e]
        mask ^= (1 << u) ^ (1 << v)
    return mask_vertices(mask)


def _rooted(g: Graph, f: frozenset[int]) -> tuple[list[int], list[int]]:
    """BFS order from vertex 0 and the parent edge of each vertex."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    for e in sorted(f):
        u, v = g.edges[e]
        adj[u].append((v, e))
        adj[v].append((u, e))
    parent_edge = [-1] * g.n
    seen = [False] * g.n
    seen[0] = True
    order = [0]
    for a in order:
        for b, e in adj[a]:
            if not seen[b]:
                seen[b] = True
                parent_edge[b] = e
                order.append(b)
    return order, parent_edge


def tree_join(g: Graph, f: Iterable[int], t: Iterable[int]) -> frozenset[int]:
    """The unique ``t``-join contained in the spanning tree ``f``."""
    f = frozenset(f)
    t = frozenset(t)
    if len(t) % 2:
        raise ValueError("a T-join needs |T| even")
    if not is_spanning_tree(g, f):
        raise ValueError("not a spanning tree")
    order, parent_edge = _rooted(g, f)
    odd = [v in t for v in range(g.n)]
    join = set()
    for v in reversed(order[1:]):
        if odd[v]:
            e = parent_edge[v]
            join.add(e)
            a, b = g.edges[e]
            up = a if b == v else b
            odd[up] = not odd[up]
    return frozenset(join)


def fundamental_cut(g: Graph, f: Iterable[int], e: int) -> Cut:
    f = frozenset(f)
    if e not in f:
        raise ValueError(f"edge {e} is not in the tree")
    rest = f - {e}
    u = g.edges[e][0]
    comp = {u}
    stack = [u]
    adj: list[list[int]] = [[] for _ in range(g.n)]
    for i in rest:
        a, b = g.edges[i]
        adj[a].append(b)
        adj[b].append(a)
    while stack:
        a = stack.pop()
        for b in adj[a]:
            if b not in comp:
                comp.add(b)
                stack.append(b)
    return cut_edges(g, comp)


def validate_ttour(inst: Instance, mult: Sequence[int]) -> bool:
    g = inst.graph
    if len(mult) != g.m or any(k not in (0, 1, 2) for k in mult):
        return False
    odd = odd_degree_vertices(g, [e for e, k in enumerate(mult) if k == 1])
    if odd != inst.terminals:
        return False
    return is_connected(g.n, g.edges, [e for e, k in enumerate(mult) if k])


def cut_values(g: Graph, w: Sequence[Fraction], caps: Caps = DEFAULT_CAPS) -> tuple[list[int], list[int], int]:
    """Scaled values ``w(delta(S))`` for every canonical side ``S``.

    Returns ``(sides, values, d)`` where ``values[i] / d`` is the exact value
    on ``sides[i]``.
    """
    if g.n > caps.cut_enum:
        raise CapacityError(f"cut enumeration capped at n <= {caps.cut_enum}, got n = {g.n}")
    ws, d = scale_to_int(w)
    sides = []
    values = []
    for side, crossing in g.cut_table:
        sides.append(side)
        values.append(sum(ws[e] for e in crossing))
    return sides, values, d


def _side_key(mask: int) -> tuple[int, ...]:
    return tuple(sorted(mask_vertices(mask)))


def min_odd_cut(g: Graph, t: Iterable[int], w: Sequence[Fraction],
                caps: Caps = DEFAULT_CAPS) -> tuple[Cut, Fraction]:
    t = frozenset(t)
    if not t:
        raise ValueError("no T-cuts exist for an empty T")
    if len(t) % 2:
        raise ValueError("|T| must be even")
    sides, values, d = cut_values(g, w, caps)
    tmask = vertex_mask(t)
    best = None
    for side, val in zip(sides, values):
        if bin(side & tmask).count("1") % 2:
            key = (val, _side_key(side))
            if best is None or key < best[0]:
                best = (key, side)
    assert best is not None
    return cut_edges(g, mask_vertices(best[1])), Fraction(best[0][0], d)


def all_cuts(g: Graph, caps: Caps = DEFAULT_CAPS) -> Iterator[Cut]:
    if g.n > caps.cut_enum:
        raise CapacityError(f"cut enumeration capped at n <= {caps.cut_enum}, got n = {g.n}")
    for side, crossing in g.cut_table:
        yield Cut(mask_vertices(side), frozenset(crossing))


def set_partitions(n: int) -> Iterator[list[int]]:
    """Restricted growth strings of length ``n``: ``labels[v]`` is the class of ``v``."""
    labels = [0] * n
    if n == 0:
        return

    def rec(i: int, top: int) -> Iterator[list[int]]:
        if i == n:
            yield labels
            return
        for k in range(top + 2):
            labels[i] = k
            yield from rec(i + 1, max(top, k))

    yield from rec(1, 0)


def labels_to_partition(labels: Sequence[int]) -> Partition:
    classes: dict[int, set[int]] = {}
    for v, k in enumerate(labels):
        classes.setdefault(k, set()).add(v)
    return tuple(frozenset(classes[k]) for k in sorted(classes))


def enumerate_spanning_trees(g: Graph, caps: Caps = DEFAULT_CAPS) -> list[frozenset[int]]:
    if g.m > caps.tree_enum:
        raise CapacityError(f"tree enumeration capped at m <= {caps.tree_enum}, got m = {g.m}")
    return [frozenset(f) for f in combinations(range(g.m), g.n - 1)
            if is_connected(g.n, g.edges, f)]


def min_spanning_tree(g: Graph, weights: Sequence[Fraction],
                      allowed: Iterable[int] | None = None) -> frozenset[int]:
    """Kruskal; ties broken by edge id."""
    pool = range(g.m) if allowed is None else sorted(allowed)
    order = sorted(pool, key=lambda e: (weights[e], e))
    parent = list(range(g.n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    tree = []
    for e in order:
        ra, rb = find(g.edges[e][0]), find(g.edges[e][1])
        if ra != rb:
            parent[ra] = rb
            tree.append(e)
    if len(tree) != g.n - 1:
        raise ValueError("allowed edges do not span the graph")
    return frozenset(tree)


def indicator(g: Graph, edges: Iterable[int]) -> tuple[Fraction, ...]:
    s = frozenset(edges)
    return tuple(Fraction(1) if e in s else Fraction(0) for e in range(g.m))
