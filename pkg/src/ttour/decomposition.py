"""Convex combinations of spanning trees dominated by a given edge vector.

The fractional tree packing LP ``max sum(lam) s.t. sum(lam_F * chi_F) <= x``
is solved by column generation; the pricing problem is a minimum spanning
tree under the dual edge prices.  A packing value of at least 1 is exactly
the condition that ``x`` satisfies every partition inequality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .graph import (
    DEFAULT_CAPS,
    CapacityError,
    Caps,
    Graph,
    Instance,
    Partition,
    enumerate_spanning_trees,
    is_spanning_tree,
    min_spanning_tree,
)
from .lp import separate_partition
from .simplex import maximize


class DecompositionError(ValueError):
    """The vector admits no dominated convex combination of spanning trees."""

    def __init__(self, packing_value: Fraction, dual: tuple[Fraction, ...],
                 partition: Partition | None = None):
        self.packing_value = packing_value
        self.dual = dual
        self.partition = partition
        msg = f"input violates the tree-decomposition premises: packing value {packing_value} < 1"
        if partition is not None:
            msg += f"; violated partition {[sorted(c) for c in partition]}"
        super().__init__(msg)


@dataclass(frozen=True)
class TreeCombination:
    graph: Graph
    members: tuple[tuple[frozenset[int], Fraction], ...]
    packing_value: Fraction | None = None

    @property
    def trees(self) -> list[frozenset[int]]:
        return [f for f, _ in self.members]

    def load(self) -> tuple[Fraction, ...]:
        """``sum(lam_F * chi_F)`` per edge."""
        out = [Fraction(0)] * self.graph.m
        for f, lam in self.members:
            for e in f:
                out[e] += lam
        return tuple(out)

    def lines(self) -> list[str]:
        return [f"lambda {lam} : " + " ".join(f"e{e}" for e in sorted(f))
                for f, lam in self.members]


def _master(trees: Sequence[frozenset[int]], support: Sequence[int],
            x: Sequence[Fraction]):
    A = [[1 if e in f else 0 for f in trees] for e in support]
    b = [x[e] for e in support]
    return maximize([1] * len(trees), A, b)


def decompose(g: Graph, x: Sequence[Fraction], caps: Caps = DEFAULT_CAPS) -> TreeCombination:
    x = tuple(Fraction(v) for v in x)
    if len(x) != g.m or any(v < 0 or v > 2 for v in x):
        raise ValueError("x must satisfy 0 <= x <= 2 on every edge")
    if g.n == 1:
        return TreeCombination(g, ((frozenset(), Fraction(1)),))
    support = [e for e in range(g.m) if x[e] > 0]
    unit = [Fraction(1)] * g.m
    try:
        first = min_spanning_tree(g, unit, support)
    except ValueError:
        # disconnected support: packing value is 0
        raise DecompositionError(Fraction(0), tuple(Fraction(0) for _ in x),
                                 _violated_partition(g, x, caps)) from None
    trees = [first]
    while True:
        res = _master(trees, support, x)
        price = [Fraction(0)] * g.m
        for row, e in enumerate(support):
            price[e] = res.duals[row]
        cand = min_spanning_tree(g, price, support)
        if sum((price[e] for e in cand), Fraction(0)) >= 1:
            break
        trees.append(cand)
    nu = res.value
    if nu < 1:
        raise DecompositionError(nu, tuple(price), _violated_partition(g, x, caps))
    members = tuple((f, lam / nu) for f, lam in zip(trees, res.x) if lam > 0)
    return TreeCombination(g, members, nu)


def _violated_partition(g: Graph, x: Sequence[Fraction], caps: Caps) -> Partition | None:
    if g.n > caps.partition_enum:
        return None
    dummy = Instance(g, frozenset(), tuple(Fraction(0) for _ in range(g.m)))
    return separate_partition(dummy, x, caps)


def packing_value_oracle(g: Graph, x: Sequence[Fraction], caps: Caps = DEFAULT_CAPS) -> Fraction:
    """Packing LP over every spanning tree of ``g`` at once."""
    if g.m > caps.tree_enum:
        raise CapacityError(f"tree enumeration capped at m <= {caps.tree_enum}, got m = {g.m}")
    trees = enumerate_spanning_trees(g, caps)
    return _master(trees, range(g.m), x).value


def verify_domination(combo: TreeCombination, x: Sequence[Fraction]) -> bool:
    g = combo.graph
    if not combo.members or len(combo.members) > max(g.m, 1):
        return False
    if sum((lam for _, lam in combo.members), Fraction(0)) != 1:
        return False
    if any(lam <= 0 or not is_spanning_tree(g, f) for f, lam in combo.members):
        return False
    return all(a <= b for a, b in zip(combo.load(), x))
